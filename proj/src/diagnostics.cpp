#include "nlslab/diagnostics.hpp"
#include "nlslab/error.hpp"

#include <algorithm>
#include <cmath>

namespace nlslab {

PhiValues phi_profile(double x) {
    x = std::abs(x);
    if (x <= 1.0) return {x * x, 2.0 * x, 2.0, 0.0, 0.0};
    if (x >= 3.0) return {9.0, 0.0, 0.0, 0.0, 0.0};
    const double s = x * x;
    const double c = 1.0 / 4096.0;
    const double P = c * ((((3 * s - 71) * s + 510) * s - 1134) * s * s + 5103 * s - 315);
    const double P1 = c * ((((15 * s - 284) * s + 1530) * s - 2268) * s + 5103);
    const double P2 = c * (((60 * s - 852) * s + 3060) * s - 2268);
    const double P3 = c * ((180 * s - 1704) * s + 3060);
    const double P4 = c * (360 * s - 1704);
    PhiValues p;
    p.v = P;
    p.d1 = 2 * x * P1;
    p.d2 = 2 * P1 + 4 * s * P2;
    p.d3 = 12 * x * P2 + 8 * x * s * P3;
    p.d4 = 12 * P2 + 48 * s * P3 + 16 * s * s * P4;
    return p;
}

VirialWeight VirialWeight::full(const GridPtr& g) {
    VirialWeight w;
    w.kind = WeightKind::Full;
    w.grid = g;
    const int n = g->n;
    w.w.resize(n);
    w.w1.resize(n);
    w.w2.assign(n, 2.0);
    w.lap.assign(n, 2.0 * g->d);
    w.bilap.assign(n, 0.0);
    w.dlap.assign(n, 0.0);
    for (int j = 0; j < n; ++j) {
        w.w[j] = g->r[j] * g->r[j];
        w.w1[j] = 2.0 * g->r[j];
    }
    w.max_phi1_ratio = 1.0;
    w.max_phi2 = 2.0;
    return w;
}

VirialWeight VirialWeight::truncated(const GridPtr& g, double R) {
    if (!(R > 0)) throw ConfigError("truncated virial weight: R must be positive");
    VirialWeight w;
    w.kind = WeightKind::Truncated;
    w.R = R;
    w.grid = g;
    const int n = g->n;
    const double dm1 = g->d - 1.0;
    w.w.resize(n);
    w.w1.resize(n);
    w.w2.resize(n);
    w.lap.resize(n);
    w.bilap.resize(n);
    w.dlap.resize(n);
    double m1 = 0.0, m2 = 0.0;
    auto track = [&](double x, const PhiValues& p) {
        if (x > 0) m1 = std::max(m1, std::abs(p.d1) / (2.0 * x));
        m2 = std::max(m2, std::abs(p.d2));
    };
    for (int j = 0; j < n; ++j) {
        const double r = g->r[j];
        const double x = r / R;
        PhiValues p = phi_profile(x);
        track(x, p);
        const double w0 = R * R * p.v, w1 = R * p.d1, w2 = p.d2, w3 = p.d3 / R, w4 = p.d4 / (R * R);
        w.w[j] = w0;
        w.w1[j] = w1;
        w.w2[j] = w2;
        w.lap[j] = w2 + dm1 * w1 / r;
        w.dlap[j] = w3 + dm1 * (w2 / r - w1 / (r * r));
        const double lap2 = w4 + dm1 * (w3 / r - 2.0 * w2 / (r * r) + 2.0 * w1 / (r * r * r));
        w.bilap[j] = lap2 + dm1 * w.dlap[j] / r;
    }
    for (int i = 0; i <= 4000; ++i) {
        const double x = 1.0 + 2.0 * i / 4000.0;
        track(x, phi_profile(x));
    }
    w.max_phi1_ratio = m1;
    w.max_phi2 = m2;
    w.bounds_ok = m1 <= 1.0 + 1e-12 && m2 <= 2.0 + 1e-12;
    return w;
}

double variance(const RadialField& u, const VirialWeight& w) {
    const auto& G = *u.grid;
    double s = 0.0;
    for (int j = 0; j < G.n; ++j) s += G.weight[j] * w.w[j] * std::norm(u.u[j]);
    return s;
}

double virial_first_derivative(const RadialField& u, const VirialWeight& w, RadialOperator& op) {
    const auto& G = *u.grid;
    std::vector<cplx> v(G.n), dv(G.n);
    for (int j = 0; j < G.n; ++j) v[j] = G.rpow[j] * u.u[j];
    op.derivative(v.data(), dv.data());
    double s = 0.0;
    for (int j = 0; j < G.n; ++j) s += (std::conj(v[j]) * dv[j]).imag() * w.w1[j];
    return 2.0 * G.omega * G.h * s;
}

double virial_first_derivative(const RadialField& u, const VirialWeight& w) {
    RadialOperator op(u.grid, 0.0, false);
    return virial_first_derivative(u, w, op);
}

double virial_rhs_full(const Observables& o, const ProblemSpec& spec) {
    return 8.0 * o.kinetic_a + 4.0 * spec.mu * spec.alpha * spec.d / (spec.alpha + 2.0) * o.lp;
}

double virial_rhs_full(const RadialField& u, const ProblemSpec& spec, bool origin_correction) {
    return virial_rhs_full(energy(u, spec, origin_correction), spec);
}

double virial_rhs_truncated(const RadialField& u, const VirialWeight& w, const ProblemSpec& spec,
                            RadialOperator& op, const Observables& o) {
    const double full = virial_rhs_full(o, spec);
    if (w.kind == WeightKind::Full) return full;
    // The weight equals |x|^2 on r <= R, so only the deviation from the full-weight
    // integrand is integrated; Lap^2 w enters after one integration by parts.
    const auto& G = *u.grid;
    const double p = 0.5 * (G.d - 1);
    std::vector<cplx> v(G.n), dv(G.n);
    for (int j = 0; j < G.n; ++j) v[j] = G.rpow[j] * u.u[j];
    op.derivative(v.data(), dv.data());
    const double cnl = 2.0 * spec.mu * spec.alpha / (spec.alpha + 2.0);
    double corr = 0.0;
    for (int j = 0; j < G.n; ++j) {
        const double r = G.r[j];
        if (r <= w.R) continue;
        const cplx ur = dv[j] / G.rpow[j] - p * v[j] / (G.rpow[j] * r);
        const double dens = std::norm(u.u[j]);
        const double ddens = 2.0 * (std::conj(u.u[j]) * ur).real();
        double t = w.dlap[j] * ddens;
        t += 4.0 * (w.w2[j] - 2.0) * std::norm(ur);
        t += 4.0 * spec.a * (w.w1[j] / r - 2.0) * dens / (r * r);
        t += cnl * (w.lap[j] - 2.0 * G.d) * std::pow(dens, 0.5 * (spec.alpha + 2.0));
        corr += G.weight[j] * t;
    }
    return full + corr;
}

double virial_rhs_truncated(const RadialField& u, const VirialWeight& w, const ProblemSpec& spec,
                            bool origin_correction) {
    RadialOperator op(u.grid, spec.a, origin_correction);
    Observables o = energy(u, spec, op);
    return virial_rhs_truncated(u, w, spec, op, o);
}

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::Scatter: return "Scatter";
    case Verdict::Blowup: return "Blowup";
    case Verdict::AboveThreshold: return "AboveThreshold";
    case Verdict::Boundary: return "Boundary";
    }
    return "?";
}

std::string to_string(Fate f) {
    switch (f) {
    case Fate::ScatterConsistent: return "Scatter-consistent";
    case Fate::BlowupConsistent: return "Blowup-consistent";
    case Fate::Inconclusive: return "Inconclusive";
    }
    return "?";
}

Classification classify(const Observables& o, const ProblemSpec& spec, const Thresholds& th, double tol) {
    if (!(th.E_thresh > 0 && th.K_thresh > 0)) throw ConfigError("classify: thresholds missing");
    Classification c;
    c.mu = spec.mu;
    c.tol = tol;
    c.E_thresh = th.E_thresh;
    c.K_thresh = th.K_thresh;
    const double sigma = th.sigma;
    c.energy_product = std::pow(o.mass, sigma) * o.energy;
    c.kinetic_product = std::pow(o.mass, 0.5 * sigma) * std::sqrt(std::max(0.0, o.kinetic_a));
    if (spec.mu == 1) {
        c.verdict = Verdict::Scatter;
        return c;
    }
    if (spec.mu != -1) throw ConfigError("classify: mu must be +1 or -1");
    const double er = c.energy_product / th.E_thresh;
    const double kr = c.kinetic_product / th.K_thresh;
    if (er > 1.0 + tol)
        c.verdict = Verdict::AboveThreshold;
    else if (er >= 1.0 - tol)
        c.verdict = Verdict::Boundary;
    else if (kr < 1.0 - tol)
        c.verdict = Verdict::Scatter;
    else if (kr > 1.0 + tol)
        c.verdict = Verdict::Blowup;
    else
        c.verdict = Verdict::Boundary;
    return c;
}

Classification classify(const RadialField& u0, const ProblemSpec& spec, const Thresholds& th, double tol,
                        bool origin_correction) {
    return classify(energy(u0, spec, origin_correction), spec, th, tol);
}

// out of line: gcc 11 reports a bogus overflow when the assignment is inlined
[[gnu::noinline]] static void set_note(CoercivityReport& c, const char* s) { c.note = s; }

CoercivityReport coercivity_report(const Observables& o, const ProblemSpec& spec, const Thresholds& th,
                                   double delta, double eps) {
    CoercivityReport c;
    c.eps = eps;
    const double sigma = th.sigma;
    const double ep = std::pow(o.mass, sigma) * o.energy;
    const double kp = std::pow(o.mass, 0.5 * sigma) * std::sqrt(std::max(0.0, o.kinetic_a));
    c.energy_ratio = ep / th.E_thresh;
    c.kinetic_ratio = kp / th.K_thresh;
    const double da = spec.d * spec.alpha;
    const double coef = da / (2.0 * (spec.alpha + 2.0));
    c.lhs_a_ii = o.kinetic_a - coef * o.lp;
    c.lhs_b_ii = (1.0 + eps) * o.kinetic_a - coef * o.lp;
    c.delta = delta < 0 ? 1.0 - c.energy_ratio : delta;
    if (spec.mu != -1) {
        set_note(c, "not applicable: focusing-only statement; energy bounds only");
        return c;
    }
    c.applicable = true;
    c.hypothesis_ok = c.delta > 0 && c.energy_ratio <= 1.0 - c.delta + 1e-15;
    if (c.kinetic_ratio < 1.0) {
        c.regime = 'a';
        c.delta_prime = 1.0 - c.kinetic_ratio;
        // Sharp GN: P <= C M^{..} K^{d alpha/4} gives lhs_a_ii >= (1 - kinetic_ratio^{(d alpha - 4)/2}) K.
        c.c_bound = 1.0 - std::pow(c.kinetic_ratio, 0.5 * (da - 4.0));
        c.assertion_ok = c.lhs_a_ii >= c.c_bound * o.kinetic_a - 1e-6 * o.kinetic_a && c.lhs_a_ii >= 0.0;
    } else if (c.kinetic_ratio > 1.0) {
        c.regime = 'b';
        c.c_bound = -c.lhs_b_ii;
        c.assertion_ok = c.lhs_b_ii < 0.0;
    } else {
        set_note(c, "kinetic product exactly at threshold");
    }
    if (!c.hypothesis_ok) {
        c.assertion_ok = false;
        set_note(c, "hypothesis fails: M^sigma E above (1 - delta) E_thresh");
    }
    return c;
}

CoercivityReport coercivity_report(const RadialField& u, const ProblemSpec& spec, const Thresholds& th,
                                   double delta, double eps, bool origin_correction) {
    return coercivity_report(energy(u, spec, origin_correction), spec, th, delta, eps);
}

FateReport detect_fate(const TimeSeries& ts, const ProblemSpec& spec, const FateOptions& opts) {
    (void)spec;
    FateReport f;
    const auto& S = ts.samples;
    if (S.empty()) {
        f.reason = "empty series";
        return f;
    }
    const double K0 = S.front().obs.kinetic_a;
    double Kmax = 0.0, lpmax = 0.0;
    for (const auto& s : S) {
        Kmax = std::max(Kmax, s.obs.kinetic_a);
        lpmax = std::max(lpmax, s.lp_norm);
    }
    f.kinetic_growth = K0 > 0 ? Kmax / K0 : 0.0;
    f.lp_decay = S.back().lp_norm > 0 ? lpmax / S.back().lp_norm : 0.0;
    const double t_end = S.back().t;
    double Kearly = 0.0;
    for (const auto& s : S)
        if (s.t <= opts.early_fraction * t_end) Kearly = std::max(Kearly, s.obs.kinetic_a);
    f.kinetic_excess = Kearly > 0 ? Kmax / Kearly - 1.0 : 0.0;

    // Concavity of V over the final window by second divided differences.
    const int m = std::min<int>(opts.final_window, static_cast<int>(S.size()));
    if (m >= 3) {
        f.variance_concave = true;
        for (size_t i = S.size() - m + 1; i + 1 < S.size(); ++i) {
            const double t0 = S[i - 1].t, t1 = S[i].t, t2 = S[i + 1].t;
            const double d1 = (S[i].virial.V - S[i - 1].virial.V) / (t1 - t0);
            const double d2 = (S[i + 1].virial.V - S[i].virial.V) / (t2 - t1);
            if (!(2.0 * (d2 - d1) / (t2 - t0) < 0.0)) f.variance_concave = false;
        }
    }

    if (ts.termination == Termination::BlowupAbort) {
        if (f.kinetic_growth >= opts.kinetic_growth && f.variance_concave) {
            f.fate = Fate::BlowupConsistent;
            f.reason = "aborted with kinetic growth and concave variance";
        } else {
            f.reason = f.kinetic_growth < opts.kinetic_growth ? "aborted before the kinetic growth factor"
                                                               : "variance not concave over the final window";
        }
        return f;
    }
    if (ts.termination == Termination::Completed) {
        const bool bounded = f.kinetic_excess <= opts.kinetic_tol;
        const bool decayed = f.lp_decay >= opts.decay_factor;
        if (bounded && decayed) {
            f.fate = Fate::ScatterConsistent;
            f.reason = "completed with bounded kinetic energy and decaying potential energy";
        } else {
            f.reason = !decayed ? "potential energy did not decay by the configured factor"
                                : "kinetic energy left the early-time band";
        }
        return f;
    }
    f.reason = "boundary reached";
    return f;
}

std::string concordance(Verdict v, Fate f) {
    if (v == Verdict::Scatter) return f == Fate::ScatterConsistent ? "true" : "false";
    if (v == Verdict::Blowup) return f == Fate::BlowupConsistent ? "true" : "false";
    return "n/a";
}

} // namespace nlslab
