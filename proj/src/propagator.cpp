#include "nlslab/propagator.hpp"
#include "nlslab/error.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>

namespace nlslab {

LinearPropagator::LinearPropagator(RadialOperator& op, double tol)
    : op_(op), tol_(tol), diagonal_(op.a_eff() == 0.0 && op.kappa() == 0.0) {
    const double lo = op.spectrum_lower_bound();
    const double hi = op.spectrum_upper_bound();
    center_ = 0.5 * (hi + lo);
    half_width_ = 0.5 * (hi - lo) * 1.01;  // margin keeps the scaled operator inside [-1, 1]
    const int n = op.grid().n;
    t0_.resize(n);
    t1_.resize(n);
    t2_.resize(n);
    acc_.resize(n);
}

const std::vector<cplx>& LinearPropagator::coefficients(double tau) {
    auto it = cache_.find(tau);
    if (it != cache_.end()) return it->second;
    if (cache_.size() > 64) cache_.clear();
    const double x = std::abs(tau) * half_width_;
    std::vector<cplx> c;
    const cplx mi = tau >= 0 ? cplx(0, -1) : cplx(0, 1);
    cplx ipow = 1.0;
    for (int k = 0;; ++k) {
        const double jk = boost::math::cyl_bessel_j(k, x);
        c.push_back((k == 0 ? 1.0 : 2.0) * ipow * jk);
        ipow *= mi;
        if (k > x && std::abs(jk) < tol_) break;
        if (k > 100000) throw NumericalError("propagator: Chebyshev series does not terminate");
    }
    return cache_.emplace(tau, std::move(c)).first->second;
}

int LinearPropagator::terms(double tau) {
    if (diagonal_) return 0;
    return static_cast<int>(coefficients(tau).size());
}

void LinearPropagator::apply(cplx* v, double tau) {
    if (tau == 0.0) return;
    if (diagonal_) {
        op_.free_flow(v, tau);
        return;
    }
    const auto& c = coefficients(tau);
    const int n = op_.grid().n;
    const double s = 1.0 / half_width_;
    // X = (H - center) / half_width
    auto applyX = [&](const std::vector<cplx>& in, std::vector<cplx>& out) {
        op_.apply(in.data(), out.data());
        for (int j = 0; j < n; ++j) out[j] = (out[j] - center_ * in[j]) * s;
    };
    for (int j = 0; j < n; ++j) {
        t0_[j] = v[j];
        acc_[j] = c[0] * v[j];
    }
    if (c.size() > 1) {
        applyX(t0_, t1_);
        for (int j = 0; j < n; ++j) acc_[j] += c[1] * t1_[j];
        for (size_t k = 2; k < c.size(); ++k) {
            applyX(t1_, t2_);
            for (int j = 0; j < n; ++j) {
                t2_[j] = 2.0 * t2_[j] - t0_[j];
                acc_[j] += c[k] * t2_[j];
            }
            std::swap(t0_, t1_);
            std::swap(t1_, t2_);
        }
    }
    const cplx phase = std::polar(1.0, -tau * center_);
    for (int j = 0; j < n; ++j) v[j] = phase * acc_[j];
}

} // namespace nlslab
