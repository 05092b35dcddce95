#pragma once

#include "nlslab/grid.hpp"

#include <map>
#include <vector>

namespace nlslab {

// exp(-i tau H) for the discrete L_a, by a Chebyshev expansion on the spectral interval of H.
// With a_eff = 0 and no origin term the operator is diagonal in the sine basis and the
// flow is applied exactly through the transform instead.
class LinearPropagator {
public:
    explicit LinearPropagator(RadialOperator& op, double tol = 1e-16);

    void apply(cplx* v, double tau);
    int terms(double tau);
    bool diagonal() const { return diagonal_; }

private:
    const std::vector<cplx>& coefficients(double tau);

    RadialOperator& op_;
    double tol_;
    bool diagonal_;
    double center_, half_width_;
    std::map<double, std::vector<cplx>> cache_;
    std::vector<cplx> t0_, t1_, t2_, acc_;
};

} // namespace nlslab
