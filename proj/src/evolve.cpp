#include "nlslab/evolve.hpp"
#include "nlslab/diagnostics.hpp"
#include "nlslab/error.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace nlslab {

std::string to_string(Termination t) {
    switch (t) {
    case Termination::Completed: return "Completed";
    case Termination::BlowupAbort: return "BlowupAbort";
    case Termination::BoundaryAbort: return "BoundaryAbort";
    }
    return "?";
}

Stepper::Stepper(const GridPtr& grid, const ProblemSpec& spec, const IntegratorConfig& cfg)
    : grid_(grid), spec_(spec), split_(cfg.split), op_(grid, spec.a, cfg.origin_correction), prop_(op_) {
    if (split_ == SplitMode::PointwisePotential) pot_ = op_.potential();
}

void Stepper::phase(std::vector<cplx>& v, double tau) {
    const auto& G = *grid_;
    const double mu = spec_.mu, al = spec_.alpha;
    const bool pot = !pot_.empty();
    for (int j = 0; j < G.n; ++j) {
        double th = mu * std::pow(std::abs(v[j]) / G.rpow[j], al);
        if (pot) th += pot_[j];
        v[j] *= std::polar(1.0, -tau * th);
    }
}

void Stepper::linear(std::vector<cplx>& v, double tau) {
    if (split_ == SplitMode::ExactLinear)
        prop_.apply(v.data(), tau);
    else
        op_.free_flow(v.data(), tau);
}

void Stepper::strang(std::vector<cplx>& v, double dt) {
    phase(v, 0.5 * dt);
    linear(v, dt);
    phase(v, 0.5 * dt);
}

double Stepper::kinetic(const std::vector<cplx>& v) { return op_.form(v.data()).value; }

RadialField phase_halfstep(const RadialField& u, double tau, const ProblemSpec& spec, SplitMode split) {
    const auto& G = *u.grid;
    RadialField out = u;
    const double ae = a_eff(G.d, spec.a);
    for (int j = 0; j < G.n; ++j) {
        double th = spec.mu * std::pow(std::abs(u.u[j]), spec.alpha);
        if (split == SplitMode::PointwisePotential) th += ae / (G.r[j] * G.r[j]);
        out.u[j] *= std::polar(1.0, -tau * th);
    }
    return out;
}

SimState strang_step(const SimState& s, double dt, const ProblemSpec& spec, const IntegratorConfig& cfg) {
    Stepper st(s.u.grid, spec, cfg);
    auto v = to_reduced(s.u, spec.a).v;
    st.strang(v, dt);
    SimState out;
    out.u = RadialField(s.u.grid);
    for (int j = 0; j < s.u.grid->n; ++j) out.u.u[j] = v[j] / s.u.grid->rpow[j];
    out.t = s.t + dt;
    out.steps_taken = s.steps_taken + 1;
    out.last_dt = dt;
    return out;
}

DtDecision adapt_dt(double dt, double err, double growth, const IntegratorConfig& cfg) {
    DtDecision d{dt, false};
    if (err > cfg.tol || growth > cfg.growth_limit) {
        d.dt = 0.5 * dt;
        d.reject = true;
    } else if (err < cfg.tol / 16.0) {
        d.dt = std::min(2.0 * dt, cfg.dt);
    }
    return d;
}

namespace {

double l2(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

class Recorder {
public:
    Recorder(const GridPtr& grid, const ProblemSpec& spec, Stepper& st, const Monitors& mon, TimeSeries& ts)
        : G_(*grid), grid_(grid), spec_(spec), st_(st), mon_(mon), ts_(ts), full_(VirialWeight::full(grid)),
          q0_(spec.alpha * (spec.d + 2) / 2.0) {
        if (mon.virial_truncated_R > 0) trunc_ = VirialWeight::truncated(grid, mon.virial_truncated_R);
    }

    RadialField field(const std::vector<cplx>& v) const {
        RadialField u(grid_);
        for (int j = 0; j < G_.n; ++j) u.u[j] = v[j] / G_.rpow[j];
        return u;
    }

    void record(double t, double dt, const std::vector<cplx>& v, double layer) {
        RadialField u = field(v);
        Sample s;
        s.t = t;
        s.dt = dt;
        s.obs = energy(u, spec_, st_.op());
        s.lp_norm = std::pow(s.obs.lp, 1.0 / (spec_.alpha + 2.0));
        s.virial.V = variance(u, full_);
        s.virial.V1 = virial_first_derivative(u, full_, st_.op());
        s.virial.rhs_full = virial_rhs_full(s.obs, spec_);
        if (trunc_) s.virial.rhs_truncated = virial_rhs_truncated(u, *trunc_, spec_, st_.op(), s.obs);
        s.boundary_fraction = boundary_mass_fraction(u, layer);
        const double sq = lp_power(u, q0_);
        if (!ts_.samples.empty()) ts_.scattering_norm += 0.5 * (sq + last_q_) * (t - ts_.samples.back().t);
        last_q_ = sq;
        if (mon_.snapshot_every > 0 && ts_.samples.size() % mon_.snapshot_every == 0)
            ts_.snapshots.emplace_back(t, u);
        ts_.samples.push_back(s);
        if (mon_.on_sample) mon_.on_sample(s);
    }

private:
    const RadialGrid& G_;
    GridPtr grid_;
    ProblemSpec spec_;
    Stepper& st_;
    const Monitors& mon_;
    TimeSeries& ts_;
    VirialWeight full_;
    std::optional<VirialWeight> trunc_;
    double q0_;
    double last_q_ = 0;
};

} // namespace

TimeSeries evolve(const RadialField& u0, const ProblemSpec& spec, const IntegratorConfig& cfg, const Monitors& mon) {
    if (!u0.valid()) throw ConfigError("evolve: initial field is not valid");
    if (u0.grid->d != spec.d) throw ConfigError("evolve: grid dimension differs from spec");
    if (!(cfg.dt > cfg.dt_min && cfg.dt_min > 0)) throw ConfigError("evolve: need dt > dt_min > 0");
    if (!(cfg.t_end >= 0)) throw ConfigError("evolve: t_end must be non-negative");
    RegimeReport rep = validate_regime(spec);
    if (!rep.hardy_ok || !rep.intercritical_ok) throw RegimeError("evolve: spec outside the Hardy/intercritical range");

    Stepper st(u0.grid, spec, cfg);
    TimeSeries ts;
    Recorder rec(u0.grid, spec, st, mon, ts);

    std::vector<cplx> v = to_reduced(u0, spec.a).v;
    rec.record(0.0, 0.0, v, cfg.boundary_layer);
    const double K0 = ts.samples.front().obs.kinetic_a;
    double Kcur = K0;

    double t = 0.0, dt = cfg.dt;
    long k = 1;
    const double every = cfg.sample_every > 0 ? cfg.sample_every : cfg.t_end;
    std::vector<cplx> v1, v2;
    bool moved = false;

    auto finish = [&](Termination term, const std::string& why) {
        ts.termination = term;
        ts.reason = why;
    };

    while (t < cfg.t_end * (1 - 1e-14)) {
        const double target = std::min(cfg.t_end, k * every);
        double h = std::min(dt, target - t);
        double err = 0.0;
        double Knew;
        if (cfg.adaptive) {
            v1 = v;
            st.strang(v1, h);
            v2 = v;
            st.strang(v2, 0.5 * h);
            st.strang(v2, 0.5 * h);
            for (size_t j = 0; j < v.size(); ++j) v1[j] -= v2[j];
            const double nv = l2(v2);
            err = nv > 0 ? l2(v1) / nv : 0.0;
            Knew = st.kinetic(v2);
            const double growth = Kcur > 0 ? Knew / Kcur - 1.0 : 0.0;
            if (!std::isfinite(err) || !std::isfinite(Knew)) throw NumericalError("evolve: non-finite field");
            DtDecision dec = adapt_dt(h, err, growth, cfg);
            if (dec.reject) {
                ++ts.rejected;
                dt = dec.dt;
                if (dt < cfg.dt_min) {
                    finish(Termination::BlowupAbort, "step size fell below dt_min");
                    break;
                }
                continue;
            }
            if (dec.dt > h) dt = std::max(dt, dec.dt);
            v.swap(v2);
        } else {
            st.strang(v, h);
            Knew = st.kinetic(v);
            if (!std::isfinite(Knew)) throw NumericalError("evolve: non-finite field");
        }
        moved = true;
        ++ts.steps;
        t += h;
        Kcur = Knew;
        if (std::abs(t - target) <= 1e-12 * std::max(1.0, target)) {
            t = target;
            rec.record(t, h, v, cfg.boundary_layer);
            ++k;
            const auto& s = ts.samples.back();
            if (s.boundary_fraction > cfg.boundary_mass_cap) {
                finish(Termination::BoundaryAbort, "boundary mass fraction above cap");
                break;
            }
        } else {
            RadialField u = rec.field(v);
            if (boundary_mass_fraction(u, cfg.boundary_layer) > cfg.boundary_mass_cap) {
                rec.record(t, h, v, cfg.boundary_layer);
                finish(Termination::BoundaryAbort, "boundary mass fraction above cap");
                break;
            }
        }
        if (K0 > 0 && Kcur > cfg.kinetic_cap * K0) {
            if (ts.samples.back().t != t) rec.record(t, h, v, cfg.boundary_layer);
            finish(Termination::BlowupAbort, "kinetic energy above cap");
            break;
        }
    }
    if (ts.termination == Termination::BlowupAbort && ts.samples.back().t != t)
        rec.record(t, dt, v, cfg.boundary_layer);
    ts.final_field = moved ? rec.field(v) : u0;
    return ts;
}

} // namespace nlslab
