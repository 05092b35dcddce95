#include "nlslab/transform.hpp"
#include "nlslab/error.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

namespace nlslab {

namespace {
// The FFTW planner is not thread safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

struct SineTransform::Impl {
    int n;
    double* cbuf = nullptr;  // 2n doubles, interleaved re/im
    double* rbuf = nullptr;  // n doubles
    fftw_plan c_dst2{}, c_dst3{}, c_dct3{};
    fftw_plan r_dst2{}, r_dst3{}, r_dct3{};

    explicit Impl(int n_) : n(n_) {
        cbuf = static_cast<double*>(fftw_malloc(sizeof(double) * 2 * n));
        rbuf = static_cast<double*>(fftw_malloc(sizeof(double) * n));
        if (!cbuf || !rbuf) throw NumericalError("fftw_malloc failed");
        std::lock_guard<std::mutex> lock(planner_mutex());
        int nn[1] = {n};
        auto many = [&](fftw_r2r_kind kind) {
            return fftw_plan_many_r2r(1, nn, 2, cbuf, nullptr, 2, 1, cbuf, nullptr, 2, 1, &kind,
                                      FFTW_ESTIMATE);
        };
        c_dst2 = many(FFTW_RODFT10);
        c_dst3 = many(FFTW_RODFT01);
        c_dct3 = many(FFTW_REDFT01);
        r_dst2 = fftw_plan_r2r_1d(n, rbuf, rbuf, FFTW_RODFT10, FFTW_ESTIMATE);
        r_dst3 = fftw_plan_r2r_1d(n, rbuf, rbuf, FFTW_RODFT01, FFTW_ESTIMATE);
        r_dct3 = fftw_plan_r2r_1d(n, rbuf, rbuf, FFTW_REDFT01, FFTW_ESTIMATE);
        if (!c_dst2 || !c_dst3 || !c_dct3 || !r_dst2 || !r_dst3 || !r_dct3)
            throw NumericalError("FFTW plan creation failed");
    }
    ~Impl() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        for (fftw_plan p : {c_dst2, c_dst3, c_dct3, r_dst2, r_dst3, r_dct3})
            if (p) fftw_destroy_plan(p);
        fftw_free(cbuf);
        fftw_free(rbuf);
    }

    void run(fftw_plan p, cplx* data) {
        std::memcpy(cbuf, data, sizeof(double) * 2 * n);
        fftw_execute(p);
        std::memcpy(static_cast<void*>(data), cbuf, sizeof(double) * 2 * n);
    }
    void run(fftw_plan p, double* data) {
        std::memcpy(rbuf, data, sizeof(double) * n);
        fftw_execute(p);
        std::memcpy(data, rbuf, sizeof(double) * n);
    }
};

SineTransform::SineTransform(int n) : impl_(std::make_unique<Impl>(n)), n_(n) {}
SineTransform::~SineTransform() = default;

void SineTransform::dst2(cplx* d) { impl_->run(impl_->c_dst2, d); }
void SineTransform::dst3(cplx* d) { impl_->run(impl_->c_dst3, d); }
void SineTransform::dct3(cplx* d) { impl_->run(impl_->c_dct3, d); }
void SineTransform::dst2(double* d) { impl_->run(impl_->r_dst2, d); }
void SineTransform::dst3(double* d) { impl_->run(impl_->r_dst3, d); }
void SineTransform::dct3(double* d) { impl_->run(impl_->r_dct3, d); }

} // namespace nlslab
