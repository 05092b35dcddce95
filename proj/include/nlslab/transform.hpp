#pragma once

#include <complex>
#include <memory>

namespace nlslab {

using cplx = std::complex<double>;

// Unnormalized FFTW real-to-real transforms of length n on the half-integer grid.
//   dst2: Y_k = 2 sum_j x_j sin(pi (j+1/2)(k+1)/n)             (RODFT10)
//   dst3: x_j = (-1)^j Y_{n-1} + 2 sum_{k<n-1} Y_k sin(...)       (RODFT01)
//   dct3: x_j = Z_0 + 2 sum_{m>=1} Z_m cos(pi m (j+1/2)/n)         (REDFT01)
// dst3(dst2(x)) = 2n x. Complex data is transformed component-wise.
// Plans use FFTW_ESTIMATE so results are bitwise reproducible run to run.
// An instance owns scratch buffers and is not safe to use from two threads at once.
class SineTransform {
public:
    explicit SineTransform(int n);
    ~SineTransform();
    SineTransform(const SineTransform&) = delete;
    SineTransform& operator=(const SineTransform&) = delete;

    int size() const { return n_; }

    void dst2(cplx* data);
    void dst3(cplx* data);
    void dct3(cplx* data);
    void dst2(double* data);
    void dst3(double* data);
    void dct3(double* data);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    int n_;
};

} // namespace nlslab
