#include "nlslab/grid.hpp"
#include "nlslab/error.hpp"
#include "nlslab/origin.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>
#include <numbers>

namespace nlslab {

namespace {
std::mutex warn_mutex;
std::function<void(const std::string&)> warn_handler = [](const std::string& m) {
    std::cerr << "nlslab: warning: " << m << "\n";
};
} // namespace

void set_warning_handler(std::function<void(const std::string&)> h) {
    std::lock_guard<std::mutex> lock(warn_mutex);
    warn_handler = std::move(h);
}

void warn(const std::string& msg) {
    std::lock_guard<std::mutex> lock(warn_mutex);
    if (warn_handler) warn_handler(msg);
}

RadialGrid::RadialGrid(int d_, int n_, double rmax_) : d(d_), n(n_), rmax(rmax_) {
    if (d < 1) throw ConfigError("grid: dimension must be positive");
    if (n < 8) throw ConfigError("grid: need at least 8 nodes");
    if (!(rmax > 0)) throw ConfigError("grid: R_max must be positive");
    h = rmax / n;
    omega = 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
    r.resize(n);
    weight.resize(n);
    rpow.resize(n);
    k2.resize(n);
    for (int j = 0; j < n; ++j) {
        r[j] = (j + 0.5) * h;
        weight[j] = omega * std::pow(r[j], d - 1) * h;
        rpow[j] = std::pow(r[j], 0.5 * (d - 1));
        const double k = (j + 1) * std::numbers::pi / rmax;
        k2[j] = k * k;
    }
}

GridPtr make_grid(int d, int n, double rmax) { return std::make_shared<const RadialGrid>(d, n, rmax); }

RadialField::RadialField(GridPtr g, std::vector<cplx> values) : grid(std::move(g)), u(std::move(values)) {
    if (!grid || static_cast<int>(u.size()) != grid->n) throw ConfigError("field size does not match grid");
}

bool RadialField::valid() const {
    if (!grid || static_cast<int>(u.size()) != grid->n) return false;
    return std::all_of(u.begin(), u.end(), [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

RadialOperator::RadialOperator(GridPtr g, double a, bool origin_correction)
    : grid_(std::move(g)), a_(a), a_eff_(nlslab::a_eff(grid_->d, a)), kappa_(0.0),
      corrected_(origin_correction), tr_(grid_->n), work_(grid_->n), rwork_(grid_->n) {
    const auto& G = *grid_;
    if (!(a_eff_ > -0.25)) throw RegimeError("operator: a below the Hardy bound");
    V_.resize(G.n);
    for (int j = 0; j < G.n; ++j) V_[j] = a_eff_ / (G.r[j] * G.r[j]);
    if (corrected_) {
        kappa_ = origin_kappa(a_eff_);
        V_[0] += kappa_ / (G.h * G.h);
    }
}

void RadialOperator::laplacian(const cplx* v, cplx* out) {
    const auto& G = *grid_;
    const double s = 1.0 / (2.0 * G.n);
    std::copy(v, v + G.n, work_.begin());
    tr_.dst2(work_.data());
    for (int k = 0; k < G.n; ++k) work_[k] *= G.k2[k] * s;
    tr_.dst3(work_.data());
    std::copy(work_.begin(), work_.end(), out);
}

void RadialOperator::apply(const cplx* v, cplx* out) {
    const auto& G = *grid_;
    const double s = 1.0 / (2.0 * G.n);
    std::copy(v, v + G.n, work_.begin());
    tr_.dst2(work_.data());
    for (int k = 0; k < G.n; ++k) work_[k] *= G.k2[k] * s;
    tr_.dst3(work_.data());
    for (int j = 0; j < G.n; ++j) out[j] = work_[j] + V_[j] * v[j];
}

void RadialOperator::apply(const double* v, double* out) {
    const auto& G = *grid_;
    const double s = 1.0 / (2.0 * G.n);
    std::copy(v, v + G.n, rwork_.begin());
    tr_.dst2(rwork_.data());
    for (int k = 0; k < G.n; ++k) rwork_[k] *= G.k2[k] * s;
    tr_.dst3(rwork_.data());
    for (int j = 0; j < G.n; ++j) out[j] = rwork_[j] + V_[j] * v[j];
}

void RadialOperator::derivative(const cplx* v, cplx* out) {
    const auto& G = *grid_;
    std::copy(v, v + G.n, work_.begin());
    tr_.dst2(work_.data());
    // Mode m+1 differentiates into cos((m+1) pi r / R); the last mode vanishes on the nodes.
    const double s = 1.0 / (2.0 * G.n);
    for (int m = G.n - 1; m >= 1; --m) work_[m] = work_[m - 1] * (std::sqrt(G.k2[m - 1]) * s);
    work_[0] = 0.0;
    tr_.dct3(work_.data());
    std::copy(work_.begin(), work_.end(), out);
}

void RadialOperator::free_flow(cplx* v, double tau) {
    const auto& G = *grid_;
    const double s = 1.0 / (2.0 * G.n);
    std::copy(v, v + G.n, work_.begin());
    tr_.dst2(work_.data());
    for (int k = 0; k < G.n; ++k) work_[k] *= std::polar(s, -tau * G.k2[k]);
    tr_.dst3(work_.data());
    std::copy(work_.begin(), work_.end(), v);
}

HardyForm RadialOperator::form(const cplx* v) {
    const auto& G = *grid_;
    std::vector<cplx> Hv(G.n);
    apply(v, Hv.data());
    HardyForm f;
    double first = 0.0;
    for (int j = 0; j < G.n; ++j) {
        const double t = (std::conj(v[j]) * Hv[j]).real();
        if (j == 0) first = t;
        f.value += t;
    }
    f.value *= G.omega * G.h;
    first *= G.omega * G.h;
    f.origin_fraction = f.value != 0.0 ? std::abs(first) / std::abs(f.value) : 0.0;
    f.ill_conditioned = f.origin_fraction > kOriginFractionLimit;
    return f;
}

double RadialOperator::spectrum_lower_bound() const {
    return std::min(0.0, *std::min_element(V_.begin(), V_.end()));
}

double RadialOperator::spectrum_upper_bound() const {
    return grid_->k2.back() + std::max(0.0, *std::max_element(V_.begin(), V_.end()));
}

double mass(const RadialField& u) {
    const auto& G = *u.grid;
    double m = 0.0;
    for (int j = 0; j < G.n; ++j) m += G.weight[j] * std::norm(u.u[j]);
    return m;
}

HardyForm hardy_form(const RadialField& u, RadialOperator& op) {
    if (op.grid_ptr().get() != u.grid.get() &&
        (op.grid().n != u.grid->n || op.grid().rmax != u.grid->rmax || op.grid().d != u.grid->d))
        throw ConfigError("hardy_form: operator and field grids differ");
    const auto& G = *u.grid;
    std::vector<cplx> v(G.n);
    for (int j = 0; j < G.n; ++j) v[j] = G.rpow[j] * u.u[j];
    return op.form(v.data());
}

HardyForm hardy_form(const RadialField& u, double a, bool origin_correction) {
    RadialOperator op(u.grid, a, origin_correction);
    return hardy_form(u, op);
}

double lp_power(const RadialField& u, double p) {
    if (!(p >= 1.0)) throw ConfigError("lp_norm: need p >= 1");
    const auto& G = *u.grid;
    double s = 0.0;
    for (int j = 0; j < G.n; ++j) s += G.weight[j] * std::pow(std::abs(u.u[j]), p);
    return s;
}

double lp_norm(const RadialField& u, double p) { return std::pow(lp_power(u, p), 1.0 / p); }

Observables energy(const RadialField& u, const ProblemSpec& spec, RadialOperator& op) {
    Observables o;
    o.mass = mass(u);
    HardyForm f = hardy_form(u, op);
    o.kinetic_a = f.value;
    o.origin_fraction = f.origin_fraction;
    o.lp = lp_power(u, spec.alpha + 2.0);
    o.energy = 0.5 * o.kinetic_a + spec.mu / (spec.alpha + 2.0) * o.lp;
    return o;
}

Observables energy(const RadialField& u, const ProblemSpec& spec, bool origin_correction) {
    RadialOperator op(u.grid, spec.a, origin_correction);
    return energy(u, spec, op);
}

ReducedField to_reduced(const RadialField& u, double a) {
    ReducedField v;
    v.grid = u.grid;
    v.a_eff = a_eff(u.grid->d, a);
    v.v.resize(u.u.size());
    for (size_t j = 0; j < u.u.size(); ++j) v.v[j] = u.grid->rpow[j] * u.u[j];
    return v;
}

RadialField from_reduced(const ReducedField& v) {
    RadialField u(v.grid);
    for (size_t j = 0; j < v.v.size(); ++j) u.u[j] = v.v[j] / v.grid->rpow[j];
    return u;
}

ReducedField laplacian_halfstep(const ReducedField& v, double tau) {
    ReducedField out = v;
    if (tau == 0.0) return out;
    const auto& G = *v.grid;
    SineTransform tr(G.n);
    tr.dst2(out.v.data());
    const double s = 1.0 / (2.0 * G.n);
    for (int k = 0; k < G.n; ++k) out.v[k] *= std::polar(s, -tau * G.k2[k]);
    tr.dst3(out.v.data());
    return out;
}

double boundary_mass_fraction(const RadialField& u, double layer) {
    const auto& G = *u.grid;
    const double edge = (1.0 - layer) * G.rmax;
    double total = 0.0, outer = 0.0;
    for (int j = 0; j < G.n; ++j) {
        const double m = G.weight[j] * std::norm(u.u[j]);
        total += m;
        if (G.r[j] > edge) outer += m;
    }
    return total > 0.0 ? outer / total : 0.0;
}

namespace {

// Sine series of the reduced field summed at arbitrary radii; zero at and beyond R.
std::vector<cplx> eval_reduced(const RadialField& u, const std::vector<double>& at) {
    const auto& G = *u.grid;
    const int n = G.n;
    std::vector<cplx> c(n);
    for (int j = 0; j < n; ++j) c[j] = G.rpow[j] * u.u[j];
    SineTransform tr(n);
    tr.dst2(c.data());
    const double base = 1.0 / std::sqrt(2.0 * n);
    for (int k = 0; k < n; ++k) c[k] *= base * (k == n - 1 ? std::sqrt(0.5) : 1.0) * std::sqrt(2.0 / n);

    std::vector<cplx> out(at.size(), cplx(0.0));
    for (size_t j = 0; j < at.size(); ++j) {
        const double rho = at[j];
        if (!(rho > 0.0) || rho >= G.rmax) continue;
        const double th = std::numbers::pi * rho / G.rmax;
        const double c2 = 2.0 * std::cos(th);
        double sm1 = 0.0, s0 = std::sin(th);
        cplx acc = 0.0;
        for (int k = 0; k < n; ++k) {
            acc += c[k] * s0;
            const double s1 = c2 * s0 - sm1;
            sm1 = s0;
            s0 = s1;
        }
        out[j] = acc;
    }
    return out;
}

} // namespace

RadialField apply_scaling(const RadialField& u, double lambda, const ProblemSpec& spec, double* lost_fraction) {
    if (!(lambda > 0)) throw ConfigError("apply_scaling: lambda must be positive");
    const auto& G = *u.grid;
    const int n = G.n;
    double lost = 0.0;
    if (lambda < 1.0) {
        const double total = mass(u);
        double outer = 0.0;
        for (int j = 0; j < n; ++j)
            if (G.r[j] > lambda * G.rmax) outer += G.weight[j] * std::norm(u.u[j]);
        lost = total > 0.0 ? outer / total : 0.0;
    }
    if (lost_fraction) *lost_fraction = lost;
    if (lost > 1e-6) warn("apply_scaling: rescaling pushes a mass fraction " + std::to_string(lost) + " beyond R_max");
    if (lambda == 1.0) return u;

    RadialField out(u.grid);
    const double amp = std::pow(lambda, 2.0 / spec.alpha);
    std::vector<double> rho(n);
    for (int j = 0; j < n; ++j) rho[j] = lambda * G.r[j];
    auto vals = eval_reduced(u, rho);
    for (int j = 0; j < n; ++j)
        if (rho[j] < G.rmax) out.u[j] = amp * vals[j] / std::pow(rho[j], 0.5 * (G.d - 1));
    return out;
}

RadialField resample(const RadialField& u, const GridPtr& to) {
    if (!u.valid() || !to) throw ConfigError("resample: invalid field or grid");
    if (to->d != u.grid->d) throw ConfigError("resample: dimension mismatch");
    if (to.get() == u.grid.get()) return u;
    const auto& T = *to;
    const double total = mass(u);
    double outer = 0.0;
    for (int j = 0; j < u.grid->n; ++j)
        if (u.grid->r[j] > T.rmax) outer += u.grid->weight[j] * std::norm(u.u[j]);
    if (total > 0.0 && outer / total > 1e-6)
        warn("resample: mass fraction " + std::to_string(outer / total) + " lies beyond the target R_max");
    auto vals = eval_reduced(u, T.r);
    RadialField out(to);
    for (int j = 0; j < T.n; ++j) out.u[j] = vals[j] / T.rpow[j];
    return out;
}

} // namespace nlslab
