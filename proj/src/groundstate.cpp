#include "nlslab/groundstate.hpp"
#include "nlslab/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nlslab {

namespace {

double dot(const std::vector<double>& x, const std::vector<double>& y) {
    return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

// (H + 1) x = b by conjugate gradients, preconditioned with (1 + k^2)^{-1} in sine space.
class ShiftedSolver {
public:
    explicit ShiftedSolver(RadialOperator& op) : op_(op), n_(op.grid().n) {}

    void apply(const std::vector<double>& x, std::vector<double>& y) {
        op_.apply(x.data(), y.data());
        for (int j = 0; j < n_; ++j) y[j] += x[j];
    }

    void precondition(const std::vector<double>& r, std::vector<double>& z) {
        z = r;
        op_.transform().dst2(z.data());
        const auto& k2 = op_.grid().k2;
        const double s = 1.0 / (2.0 * n_);
        for (int k = 0; k < n_; ++k) z[k] *= s / (1.0 + k2[k]);
        op_.transform().dst3(z.data());
    }

    int solve(const std::vector<double>& b, std::vector<double>& x, double tol, int max_iter) {
        std::vector<double> r(n_), z(n_), p(n_), Ap(n_);
        apply(x, Ap);
        for (int j = 0; j < n_; ++j) r[j] = b[j] - Ap[j];
        const double bn = std::sqrt(dot(b, b));
        if (bn == 0.0) {
            std::fill(x.begin(), x.end(), 0.0);
            return 0;
        }
        precondition(r, z);
        p = z;
        double rz = dot(r, z);
        for (int it = 0; it < max_iter; ++it) {
            if (std::sqrt(dot(r, r)) <= tol * bn) return it;
            apply(p, Ap);
            const double alpha = rz / dot(p, Ap);
            for (int j = 0; j < n_; ++j) {
                x[j] += alpha * p[j];
                r[j] -= alpha * Ap[j];
            }
            precondition(r, z);
            const double rz_new = dot(r, z);
            const double beta = rz_new / rz;
            rz = rz_new;
            for (int j = 0; j < n_; ++j) p[j] = z[j] + beta * p[j];
        }
        return max_iter;
    }

private:
    RadialOperator& op_;
    int n_;
};

// f(v) = |u|^alpha v with u = v / r^{(d-1)/2}.
void nonlinearity(const RadialGrid& G, double alpha, const std::vector<double>& v, std::vector<double>& f) {
    for (int j = 0; j < G.n; ++j) f[j] = std::pow(std::abs(v[j]) / G.rpow[j], alpha) * v[j];
}

} // namespace

double weinstein_functional(double m, double k, double p, const ProblemSpec& spec) {
    const double d = spec.d, al = spec.alpha;
    if (!(m > 1e-300) || !(k > 1e-300))
        throw NumericalError("weinstein_functional: mass or kinetic numerically zero");
    return p / (std::pow(m, (4.0 - (d - 2.0) * al) / 4.0) * std::pow(k, d * al / 4.0));
}

double weinstein_functional(const RadialField& u, const ProblemSpec& spec, bool origin_correction) {
    Observables o = energy(u, spec, origin_correction);
    return weinstein_functional(o.mass, o.kinetic_a, o.lp, spec);
}

std::pair<double, double> pohozaev_residuals(double m, double k, double p, const ProblemSpec& spec) {
    const double d = spec.d, al = spec.alpha;
    const double c1 = (4.0 - al * (d - 2.0)) / (al * d);
    const double c2 = (4.0 - al * (d - 2.0)) / (2.0 * (al + 2.0));
    return {std::abs(m - c1 * k) / m, std::abs(m - c2 * p) / m};
}

std::pair<double, double> pohozaev_check(const GroundState& gs) {
    return pohozaev_residuals(gs.mass, gs.kinetic_a, gs.lp, gs.spec);
}

double elliptic_residual(const RadialField& Q, const ProblemSpec& spec, bool origin_correction) {
    const auto& G = *Q.grid;
    RadialOperator op(Q.grid, spec.a, origin_correction);
    std::vector<double> v(G.n), Lv(G.n), f(G.n);
    for (int j = 0; j < G.n; ++j) v[j] = G.rpow[j] * Q.u[j].real();
    op.apply(v.data(), Lv.data());
    nonlinearity(G, spec.alpha, v, f);
    double num = 0, den = 0;
    for (int j = 0; j < G.n; ++j) {
        num += std::pow(Lv[j] + v[j] - f[j], 2);
        den += f[j] * f[j];
    }
    return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

GroundState solve_ground_state(const ProblemSpec& spec, const GridPtr& grid, const GroundStateOptions& opts) {
    RegimeReport rep = validate_regime(spec);
    if (!rep.hardy_ok || !rep.intercritical_ok)
        throw RegimeError("ground state: spec outside the Hardy/intercritical range");
    if (grid->d != spec.d) throw ConfigError("ground state: grid dimension differs from spec");

    ProblemSpec work = spec;
    const bool attained = spec.a <= 0.0;
    if (!attained) work.a = 0.0;  // the supremum is not attained; use the free optimizer

    const auto& G = *grid;
    const int n = G.n;
    const double al = work.alpha;
    RadialOperator op(grid, work.a, opts.origin_correction);
    ShiftedSolver solver(op);

    // Gaussian seed of unit mass, with the r^{-rho} envelope when a < 0.
    const double rho = work.a < 0.0 ? rho_heat(work.d, work.a) : 0.0;
    std::vector<double> v(n), w(n), f(n), Lv(n);
    double m0 = 0.0;
    for (int j = 0; j < n; ++j) {
        const double r = G.r[j];
        const double u = std::pow(r, -rho) * std::exp(-r * r);
        v[j] = G.rpow[j] * u;
        m0 += G.weight[j] * u * u;
    }
    for (auto& x : v) x /= std::sqrt(m0);

    const double gamma = (al + 1.0) / al;
    double res = 1.0;
    int it = 0;
    for (; it < opts.max_iters; ++it) {
        op.apply(v.data(), Lv.data());
        for (int j = 0; j < n; ++j) Lv[j] += v[j];
        nonlinearity(G, al, v, f);
        double num = 0.0, fn = 0.0;
        for (int j = 0; j < n; ++j) {
            num += std::pow(Lv[j] - f[j], 2);
            fn += f[j] * f[j];
        }
        res = std::sqrt(num / fn);
        if (!std::isfinite(res)) throw NumericalError("ground state: iteration produced non-finite values");
        if (res < opts.elliptic_tol) break;
        const double S = dot(Lv, v) / dot(f, v);
        w = v;  // warm start
        for (int j = 0; j < n; ++j) w[j] /= S;
        solver.solve(f, w, opts.linear_tol, 10 * n);
        const double scale = std::pow(S, gamma);
        for (int j = 0; j < n; ++j) v[j] = scale * w[j];
    }
    if (res >= opts.elliptic_tol)
        throw NumericalError("ground state: no convergence after " + std::to_string(opts.max_iters) +
                             " iterations (residual " + std::to_string(res) + ")");

    RadialField Q(grid);
    for (int j = 0; j < n; ++j) Q.u[j] = v[j] / G.rpow[j];
    GroundState gs = assess_ground_state(Q, spec, opts);
    gs.iterations = it;
    return gs;
}

GroundState assess_ground_state(const RadialField& Q, const ProblemSpec& spec, const GroundStateOptions& opts) {
    if (!Q.valid()) throw ConfigError("ground state: invalid field");
    ProblemSpec work = spec;
    if (work.a > 0.0) work.a = 0.0;
    const GridPtr& grid = Q.grid;
    const auto& G = *grid;
    const int n = G.n;
    const double al = work.alpha;
    RadialOperator op(grid, work.a, opts.origin_correction);

    GroundState gs;
    gs.spec = spec;
    gs.attained = spec.a <= 0.0;
    gs.origin_correction = opts.origin_correction;
    gs.Q = Q;
    std::vector<double> v(n), Lv(n);
    double qmax = 0.0;
    for (int j = 0; j < n; ++j) {
        v[j] = Q.u[j].real() * G.rpow[j];
        qmax = std::max(qmax, Q.u[j].real());
    }
    // far-tail values sit at the linear-solve noise level; a genuine sign change is O(qmax)
    for (int j = 0; j < n; ++j)
        if (gs.Q.u[j].real() < -1e-8 * qmax) throw NumericalError("ground state: iterate changed sign");
    const double leak = boundary_mass_fraction(gs.Q);
    if (leak > opts.mass_leak_cap)
        throw NumericalError("ground state: mass leak at R_max (fraction " + std::to_string(leak) + ")");
    gs.elliptic_residual = elliptic_residual(Q, work, opts.origin_correction);
    if (!(gs.elliptic_residual < opts.elliptic_tol))
        throw NumericalError("ground state: elliptic residual " + std::to_string(gs.elliptic_residual) +
                             " above tolerance");

    int jmax = 0;
    for (int j = 0; j < n; ++j)
        if (gs.Q.u[j].real() > gs.Q.u[jmax].real()) jmax = j;
    for (int j = jmax + 1; j < n; ++j) {
        const double q = gs.Q.u[j].real();
        if (q < 1e-8 * qmax) break;  // noise floor, as in the sign check
        if (q > gs.Q.u[j - 1].real() + 1e-12 * qmax) {
            gs.monotone_tail = false;
            break;
        }
    }

    Observables o = energy(gs.Q, work, op);
    gs.mass = o.mass;
    gs.kinetic_a = o.kinetic_a;
    gs.lp = o.lp;
    gs.C_a = weinstein_functional(o.mass, o.kinetic_a, o.lp, work);

    // Gradient of log J; it is orthogonal to both scaling directions.
    const double d = work.d;
    const double th = (4.0 - (d - 2.0) * al) / 4.0, be = d * al / 4.0;
    op.apply(v.data(), Lv.data());
    double gnum = 0.0, gden = 0.0;
    for (int j = 0; j < n; ++j) {
        const double up = std::pow(std::abs(v[j]) / G.rpow[j], al);
        const double dP = (al + 2.0) * up * v[j] / o.lp;
        const double dM = 2.0 * v[j] / o.mass;
        const double dK = 2.0 * Lv[j] / o.kinetic_a;
        const double g = dP - th * dM - be * dK;
        gnum += g * g;
        gden += be * be * dK * dK;
    }
    gs.stationarity = std::sqrt(gnum / gden);
    if (gs.stationarity > opts.tol)
        throw NumericalError("ground state: stationarity " + std::to_string(gs.stationarity) + " above tolerance");
    return gs;
}

SharpConstant sharp_constant(const GroundState& gs, const ProblemSpec& spec, double tol) {
    const double d = spec.d, al = spec.alpha;
    SharpConstant s;
    s.direct = gs.C_a;
    s.formula = 2.0 * (al + 2.0) * std::pow(4.0 - al * (d - 2.0), d * al / 4.0 - 1.0) /
                std::pow(al * d, d * al / 4.0) * std::pow(gs.mass, -al / 2.0);
    s.rel_diff = std::abs(s.direct - s.formula) / s.direct;
    s.ok = s.rel_diff < tol;
    return s;
}

Thresholds thresholds(double C, const ProblemSpec& spec) {
    if (!(C > 0)) throw NumericalError("thresholds: sharp constant must be positive");
    const double d = spec.d, al = spec.alpha;
    Thresholds t;
    const double s_c = 0.5 * d - 2.0 / al;
    t.sigma = 1.0 / s_c - 1.0;
    const double da = d * al;
    t.E_thresh = (da - 4.0) * std::pow(da, da / (4.0 - da)) /
                 (2.0 * std::pow(2.0 * (al + 2.0), 4.0 / (4.0 - da))) * std::pow(C, 4.0 / (4.0 - da));
    t.K_thresh = std::pow(2.0 * (al + 2.0) / da, 2.0 / (da - 4.0)) * std::pow(C, 2.0 / (4.0 - da));
    return t;
}

Thresholds thresholds(const GroundState& gs, double tol, bool strict) {
    Thresholds t = thresholds(gs.C_a, gs.spec);
    auto [r1, r2] = pohozaev_check(gs);
    t.pohozaev_res1 = r1;
    t.pohozaev_res2 = r2;
    const double EQ = 0.5 * gs.kinetic_a - gs.lp / (gs.spec.alpha + 2.0);
    t.E_from_Q = std::pow(gs.mass, t.sigma) * EQ;
    t.K_from_Q = std::pow(gs.mass, 0.5 * t.sigma) * std::sqrt(gs.kinetic_a);
    t.E_route_diff = std::abs(t.E_thresh - t.E_from_Q) / t.E_thresh;
    t.K_route_diff = std::abs(t.K_thresh - t.K_from_Q) / t.K_thresh;
    t.cross_checked = t.E_route_diff < tol && t.K_route_diff < tol;
    if (strict && !t.cross_checked)
        throw NumericalError("thresholds: routes disagree (E " + std::to_string(t.E_route_diff) + ", K " +
                             std::to_string(t.K_route_diff) + ")");
    return t;
}

} // namespace nlslab
