#include "nlslab/origin.hpp"
#include "nlslab/error.hpp"

#include <Eigen/Dense>
#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace nlslab {

namespace {

Eigen::MatrixXd reduced_operator(double a_eff, int n) {
    const double h = 1.0 / n;
    Eigen::MatrixXd S(n, n);
    for (int k = 0; k < n; ++k) {
        const double c = (k == n - 1 ? std::sqrt(0.5) : 1.0) * std::sqrt(2.0 / n);
        for (int j = 0; j < n; ++j)
            S(k, j) = c * std::sin(std::numbers::pi * (j + 0.5) * (k + 1) / n);
    }
    Eigen::VectorXd k2(n);
    for (int k = 0; k < n; ++k) k2(k) = std::pow((k + 1) * std::numbers::pi, 2);
    Eigen::MatrixXd H = S.transpose() * k2.asDiagonal() * S;
    for (int j = 0; j < n; ++j) {
        const double r = (j + 0.5) * h;
        H(j, j) += a_eff / (r * r);
    }
    return H;
}

} // namespace

double bessel_target(double a_eff) {
    if (!(a_eff > -0.25)) throw RegimeError("origin correction: a_eff must exceed -1/4");
    const double nu = std::sqrt(a_eff + 0.25);
    const double j = boost::math::cyl_bessel_j_zero(nu, 1);
    return j * j;
}

double origin_kappa_uncached(double a_eff, int n_cal) {
    if (a_eff == 0.0) return 0.0;
    const double target = bessel_target(a_eff);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(reduced_operator(a_eff, n_cal));
    if (es.info() != Eigen::Success) throw NumericalError("origin calibration: eigensolver failed");
    const auto& mu = es.eigenvalues();
    const auto& Qv = es.eigenvectors();
    if (!(target < mu(1))) throw NumericalError("origin calibration: target above second eigenvalue");
    // Rank-one update of the (0,0) entry: the updated eigenvalue lam solves
    // 1 + c * sum_i q_i(0)^2 / (mu_i - lam) = 0.
    double f = 0.0;
    for (int i = 0; i < n_cal; ++i) f += Qv(0, i) * Qv(0, i) / (mu(i) - target);
    const double c = -1.0 / f;
    const double h = 1.0 / n_cal;
    return c * h * h;
}

double origin_kappa(double a_eff) {
    static std::mutex m;
    static std::map<double, double> cache;
    {
        std::lock_guard<std::mutex> lock(m);
        auto it = cache.find(a_eff);
        if (it != cache.end()) return it->second;
    }
    const double k = origin_kappa_uncached(a_eff, kOriginCalibrationNodes);
    std::lock_guard<std::mutex> lock(m);
    cache[a_eff] = k;
    return k;
}

double lowest_dirichlet_eigenvalue(double a_eff, int n, double kappa) {
    Eigen::MatrixXd H = reduced_operator(a_eff, n);
    H(0, 0) += kappa * n * n;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

} // namespace nlslab
