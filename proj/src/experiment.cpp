#include "nlslab/experiment.hpp"
#include "nlslab/checksum.hpp"
#include "nlslab/error.hpp"
#include "nlslab/field_io.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;

namespace nlslab {

using nlohmann::json;

std::string version_string() {
#ifdef NLSLAB_VERSION_STRING
    return NLSLAB_VERSION_STRING;
#else
    return "unknown";
#endif
}

namespace {

json to_json(const Thresholds& t) {
    return json{{"E_thresh", t.E_thresh},         {"K_thresh", t.K_thresh},
                {"sigma", t.sigma},               {"pohozaev_res1", t.pohozaev_res1},
                {"pohozaev_res2", t.pohozaev_res2}, {"E_from_Q", t.E_from_Q},
                {"K_from_Q", t.K_from_Q},         {"E_route_diff", t.E_route_diff},
                {"K_route_diff", t.K_route_diff}, {"cross_checked", t.cross_checked}};
}

json to_json(const Classification& c) {
    return json{{"verdict", to_string(c.verdict)},
                {"energy_product", c.energy_product},
                {"kinetic_product", c.kinetic_product},
                {"E_thresh", c.E_thresh},
                {"K_thresh", c.K_thresh},
                {"tol", c.tol},
                {"mu", c.mu}};
}

json to_json(const CoercivityReport& c) {
    return json{{"applicable", c.applicable},
                {"hypothesis_ok", c.hypothesis_ok},
                {"regime", std::string(1, c.regime)},
                {"delta", c.delta},
                {"delta_prime", c.delta_prime},
                {"energy_ratio", c.energy_ratio},
                {"kinetic_ratio", c.kinetic_ratio},
                {"lhs_a_ii", c.lhs_a_ii},
                {"eps", c.eps},
                {"lhs_b_ii", c.lhs_b_ii},
                {"c_bound", c.c_bound},
                {"assertion_ok", c.assertion_ok},
                {"note", c.note}};
}

json to_json(const FateReport& f) {
    return json{{"fate", to_string(f.fate)},
                {"kinetic_growth", f.kinetic_growth},
                {"lp_decay", f.lp_decay},
                {"kinetic_excess", f.kinetic_excess},
                {"variance_concave", f.variance_concave},
                {"reason", f.reason}};
}

json to_json(const Observables& o) {
    return json{{"mass", o.mass},
                {"energy", o.energy},
                {"kinetic_a", o.kinetic_a},
                {"lp", o.lp},
                {"origin_fraction", o.origin_fraction}};
}

json to_json(const RegimeReport& r) {
    return json{{"hardy_ok", r.hardy_ok},
                {"intercritical_ok", r.intercritical_ok},
                {"main_theorem_ok", r.main_theorem_ok},
                {"critical_lwp_ok", r.critical_lwp_ok},
                {"exact", r.exact},
                {"messages", r.messages}};
}

void write_text(const fs::path& p, const std::string& body) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot write " + p.string());
    out << body;
    if (!out) throw IoError("write failed: " + p.string());
}

std::string timeseries_csv(const TimeSeries& ts) {
    std::ostringstream os;
    os << "t,dt,mass,energy,kinetic_a,lp_power,lp_norm,origin_fraction,V,V1,virial_rhs_full,"
          "virial_rhs_truncated,boundary_fraction\n";
    for (const auto& s : ts.samples) {
        const double vals[] = {s.t,
                               s.dt,
                               s.obs.mass,
                               s.obs.energy,
                               s.obs.kinetic_a,
                               s.obs.lp,
                               s.lp_norm,
                               s.obs.origin_fraction,
                               s.virial.V,
                               s.virial.V1,
                               s.virial.rhs_full,
                               s.virial.rhs_truncated,
                               s.boundary_fraction};
        for (size_t i = 0; i < std::size(vals); ++i) os << (i ? "," : "") << format_double(vals[i]);
        os << '\n';
    }
    return os.str();
}

const char* kRunPlot = R"(# Plots the time series of this run directory.
import sys
import pandas as pd
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

d = sys.argv[1] if len(sys.argv) > 1 else "."
ts = pd.read_csv(f"{d}/timeseries.csv")
fig, ax = plt.subplots(2, 2, figsize=(10, 7), sharex=True)
for a, col, label in [
    (ax[0, 0], "energy", "E_a"),
    (ax[0, 1], "kinetic_a", "kinetic_a"),
    (ax[1, 0], "lp_norm", "||u||_{alpha+2}"),
    (ax[1, 1], "V", "V = int |x|^2 |u|^2"),
]:
    a.plot(ts["t"], ts[col])
    a.set_ylabel(label)
for a in ax[1]:
    a.set_xlabel("t")
fig.tight_layout()
fig.savefig(f"{d}/timeseries.png", dpi=120)
)";

const char* kReportPlot = R"(# Plots the virial and coercivity columns of report.csv.
import sys
import pandas as pd
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

d = sys.argv[1] if len(sys.argv) > 1 else "."
r = pd.read_csv(f"{d}/report.csv")
fig, ax = plt.subplots(1, 2, figsize=(11, 4))
ax[0].plot(r["t"], r["virial_rhs_full"], label="identity")
ax[0].plot(r["t"], r["V2_fd"], ".", ms=3, label="second difference of V")
if (r["virial_rhs_truncated"] != 0).any():
    ax[0].plot(r["t"], r["virial_rhs_truncated"], label="truncated weight")
ax[0].set_xlabel("t")
ax[0].legend()
ax[1].plot(r["t"], r["kinetic_ratio"], label="kinetic ratio")
ax[1].plot(r["t"], r["energy_ratio"], label="energy ratio")
ax[1].plot(r["t"], r["c_bound"], label="c bound")
ax[1].axhline(1.0, color="k", lw=0.5)
ax[1].set_xlabel("t")
ax[1].legend()
fig.tight_layout()
fig.savefig(f"{d}/report.png", dpi=120)
)";

RadialField gaussian(const RunConfig& cfg) {
    auto g = make_grid(cfg.spec.d, cfg.grid.n, cfg.grid.rmax);
    RadialField u(g);
    const double w = cfg.initial.width;
    const double rho = cfg.initial.origin_envelope ? rho_heat(cfg.spec.d, cfg.spec.a) : 0.0;
    for (int j = 0; j < g->n; ++j) {
        const double r = g->r[j];
        double val = cfg.initial.amplitude * std::exp(-(r / w) * (r / w));
        if (rho != 0.0) val *= std::pow(r / std::sqrt(r * r + w * w), -rho);
        u.u[j] = val;
    }
    return u;
}

} // namespace

std::string RunManifest::to_json(int indent) const {
    json j;
    j["version"] = version;
    j["dir"] = dir;
    j["ok"] = ok;
    if (!ok) {
        j["error"] = error;
        j["exit_code"] = exit_code;
    }
    j["config"] = config_json.empty() ? json() : json::parse(config_json);
    j["thresholds"] = thresholds ? nlslab::to_json(*thresholds) : json();
    j["classification"] = classification ? nlslab::to_json(*classification) : json();
    j["coercivity_t0"] = coercivity ? nlslab::to_json(*coercivity) : json();
    j["termination"] = to_string(termination);
    j["termination_reason"] = termination_reason;
    j["fate"] = nlslab::to_json(fate);
    j["concordance"] = concordance;
    j["t_final"] = t_final;
    j["steps"] = steps;
    j["rejected"] = rejected;
    j["scattering_norm"] = scattering_norm;
    j["checksums"] = checksums;
    return j.dump(indent);
}

Thresholds resolve_thresholds(const RunConfig& cfg, GroundStateCache& cache, GroundState* out) {
    auto g = make_grid(cfg.spec.d, cfg.gs_grid.n, cfg.gs_grid.rmax);
    GroundState gs = cache.get(cfg.spec, g, cfg.gs);
    Thresholds th = thresholds(gs);
    if (out) *out = std::move(gs);
    return th;
}

RadialField resolve_initial_data(const RunConfig& cfg, GroundStateCache& cache) {
    switch (cfg.initial.kind) {
    case InitialKind::Gaussian:
        return gaussian(cfg);
    case InitialKind::GroundStateMultiple: {
        auto g = make_grid(cfg.spec.d, cfg.grid.n, cfg.grid.rmax);
        GroundStateOptions o = cfg.gs;
        // Only the profile is needed here; thresholds come from the ground-state grid.
        if (cfg.grid.n != cfg.gs_grid.n || cfg.grid.rmax != cfg.gs_grid.rmax) o.tol = std::max(o.tol, 1e-2);
        if (cfg.integrator.origin_correction != o.origin_correction)
            warn("initial data: ground state and integrator disagree on the origin correction");
        GroundState gs = cache.get(cfg.spec, g, o);
        RadialField u = gs.Q;
        for (auto& z : u.u) z *= cfg.initial.c;
        return u;
    }
    case InitialKind::FromFile: {
        FieldHeader h;
        RadialField u = read_field(cfg.initial.path, &h);
        if (h.spec.d != cfg.spec.d)
            throw ConfigError("initial data: file dimension " + std::to_string(h.spec.d) + " differs from spec.d");
        return u;
    }
    }
    throw ConfigError("initial data: unknown kind");
}

RunManifest run_experiment(const RunConfig& cfg, GroundStateCache& cache) {
    check_config(cfg);
    RunManifest m;
    m.version = version_string();
    m.config_json = config_to_json(cfg, -1);
    m.dir = cfg.output_dir;
    const fs::path dir(cfg.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
    fs::remove(dir / "ERROR", ec);
    fs::remove(dir / "manifest.json", ec);

    try {
        RegimeReport rep = validate_regime(cfg.spec);
        if (!rep.hardy_ok || !rep.intercritical_ok) {
            std::string msg = "regime: spec outside the Hardy/intercritical range";
            for (const auto& s : rep.messages) msg += "; " + s;
            throw RegimeError(msg);
        }
        write_text(dir / "config.json", config_to_json(cfg) + "\n");

        if (cfg.spec.mu != 0) m.thresholds = resolve_thresholds(cfg, cache);
        RadialField u0 = resolve_initial_data(cfg, cache);
        const Observables o0 = energy(u0, cfg.spec, cfg.integrator.origin_correction);
        if (m.thresholds) {
            m.classification = classify(o0, cfg.spec, *m.thresholds, cfg.classify_tol);
            m.coercivity = coercivity_report(o0, cfg.spec, *m.thresholds);
        }

        Monitors mon;
        mon.snapshot_every = cfg.monitors.snapshot_every;
        mon.virial_truncated_R = cfg.monitors.virial_R;
        TimeSeries ts = evolve(u0, cfg.spec, cfg.integrator, mon);
        m.termination = ts.termination;
        m.termination_reason = ts.reason;
        m.fate = detect_fate(ts, cfg.spec, cfg.fate);
        if (m.classification) m.concordance = concordance(m.classification->verdict, m.fate.fate);
        m.t_final = ts.samples.empty() ? 0.0 : ts.samples.back().t;
        m.steps = ts.steps;
        m.rejected = ts.rejected;
        m.scattering_norm = ts.scattering_norm;

        std::vector<std::string> files;
        write_text(dir / "timeseries.csv", timeseries_csv(ts));
        files.push_back("timeseries.csv");
        if (!ts.snapshots.empty()) {
            fs::create_directories(dir / "snapshots");
            for (size_t i = 0; i < ts.snapshots.size(); ++i) {
                char name[64];
                std::snprintf(name, sizeof(name), "snapshots/snap_%05zu.csv", i);
                write_field((dir / name).string(), ts.snapshots[i].second, cfg.spec, ts.snapshots[i].first);
                files.push_back(name);
                files.push_back(fs::path(header_path_for(name)).generic_string());
            }
        }
        write_field((dir / "final_field.csv").string(), ts.final_field, cfg.spec, m.t_final);
        files.push_back("final_field.csv");
        files.push_back("final_field.json");
        write_text(dir / "plot.py", kRunPlot);
        files.push_back("plot.py");
        files.push_back("config.json");
        for (const auto& f : files) m.checksums[f] = sha256_file((dir / f).string());
        m.ok = true;
        write_text(dir / "manifest.json", m.to_json() + "\n");
    } catch (const Error& e) {
        write_text(dir / "ERROR", std::string(e.kind() == ErrorKind::Numerical ? "numerical" : "config") + ": " +
                                      e.what() + "\n");
        throw;
    } catch (const std::exception& e) {
        write_text(dir / "ERROR", std::string("error: ") + e.what() + "\n");
        throw;
    }
    return m;
}

std::vector<RunManifest> sweep(const RunConfig& base, const SweepAxis& axis, GroundStateCache& cache, int jobs) {
    if (axis.parameter.empty() && !axis.values.empty()) throw ConfigError("sweep: parameter missing");
    std::vector<RunConfig> cfgs;
    for (const auto& v : axis.values) {
        RunConfig c = base;
        set_config_value(c, axis.parameter, v);
        c.output_dir = (fs::path(base.output_dir) / (axis.parameter + "=" + v)).string();
        c.sweep = {};
        check_config(c);
        cfgs.push_back(c);
    }
    fs::create_directories(base.output_dir);

    std::vector<RunManifest> out(cfgs.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next++; i < cfgs.size(); i = next++) {
            try {
                out[i] = run_experiment(cfgs[i], cache);
            } catch (const Error& e) {
                out[i].dir = cfgs[i].output_dir;
                out[i].version = version_string();
                out[i].config_json = config_to_json(cfgs[i], -1);
                out[i].error = e.what();
                out[i].exit_code = exit_code(e.kind());
            } catch (const std::exception& e) {
                out[i].dir = cfgs[i].output_dir;
                out[i].error = e.what();
                out[i].exit_code = 2;
            }
        }
    };
    int n = jobs > 0 ? jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    n = std::min<int>(n, static_cast<int>(cfgs.size()));
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::ostringstream os;
    os << "parameter,value,status,classify,fate,concordance,termination,energy_product,kinetic_product,"
          "E_thresh,K_thresh,kinetic_growth,lp_decay,t_final,error\n";
    for (size_t i = 0; i < out.size(); ++i) {
        const auto& r = out[i];
        std::string err = r.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        os << axis.parameter << ',' << axis.values[i] << ',' << (r.ok ? "ok" : "failed") << ','
           << (r.classification ? to_string(r.classification->verdict) : "n/a") << ','
           << (r.ok ? to_string(r.fate.fate) : "n/a") << ',' << r.concordance << ','
           << (r.ok ? to_string(r.termination) : "n/a") << ','
           << format_double(r.classification ? r.classification->energy_product : 0.0) << ','
           << format_double(r.classification ? r.classification->kinetic_product : 0.0) << ','
           << format_double(r.thresholds ? r.thresholds->E_thresh : 0.0) << ','
           << format_double(r.thresholds ? r.thresholds->K_thresh : 0.0) << ','
           << format_double(r.fate.kinetic_growth) << ',' << format_double(r.fate.lp_decay) << ','
           << format_double(r.t_final) << ',' << err << '\n';
    }
    write_text(fs::path(base.output_dir) / "summary.csv", os.str());
    return out;
}

std::string write_report(const std::string& run_dir) {
    const fs::path dir(run_dir);
    std::ifstream min(dir / "manifest.json");
    if (!min) throw IoError("report: no manifest.json in " + run_dir);
    json man;
    try {
        min >> man;
    } catch (const json::exception& e) {
        throw IoError(std::string("report: bad manifest: ") + e.what());
    }
    const RunConfig cfg = parse_config(man.at("config").dump());
    std::optional<Thresholds> th;
    if (!man["thresholds"].is_null()) {
        Thresholds t;
        t.E_thresh = man["thresholds"].at("E_thresh").get<double>();
        t.K_thresh = man["thresholds"].at("K_thresh").get<double>();
        t.sigma = man["thresholds"].at("sigma").get<double>();
        th = t;
    }

    std::ifstream in(dir / "timeseries.csv");
    if (!in) throw IoError("report: no timeseries.csv in " + run_dir);
    std::string line;
    std::getline(in, line);
    std::vector<std::string> cols;
    {
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) cols.push_back(c);
    }
    auto col = [&](const std::string& name) {
        auto it = std::find(cols.begin(), cols.end(), name);
        if (it == cols.end()) throw IoError("report: column " + name + " missing");
        return static_cast<size_t>(it - cols.begin());
    };
    const size_t it_ = col("t"), im = col("mass"), ie = col("energy"), ik = col("kinetic_a"), ip = col("lp_power"),
                 iV = col("V"), iV1 = col("V1"), ir = col("virial_rhs_full"), irt = col("virial_rhs_truncated");
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> r;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) r.push_back(std::stod(c));
        if (r.size() != cols.size()) throw IoError("report: ragged timeseries.csv");
        rows.push_back(std::move(r));
    }

    std::ostringstream os;
    os << "t,V,V1,V2_fd,virial_rhs_full,virial_rhs_truncated,virial_rel_diff,energy_ratio,kinetic_ratio,"
          "regime,lhs_a_ii,lhs_b_ii,c_bound,hypothesis_ok,assertion_ok\n";
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        double v2 = std::nan("");
        if (i > 0 && i + 1 < rows.size()) {
            const double t0 = rows[i - 1][it_], t1 = r[it_], t2 = rows[i + 1][it_];
            const double d1 = (r[iV] - rows[i - 1][iV]) / (t1 - t0);
            const double d2 = (rows[i + 1][iV] - r[iV]) / (t2 - t1);
            v2 = 2.0 * (d2 - d1) / (t2 - t0);
        }
        const double rel = std::isnan(v2) ? std::nan("") : std::abs(v2 - r[ir]) / std::max(std::abs(r[ir]), 1e-300);
        os << format_double(r[it_]) << ',' << format_double(r[iV]) << ',' << format_double(r[iV1]) << ','
           << format_double(v2) << ',' << format_double(r[ir]) << ',' << format_double(r[irt]) << ','
           << format_double(rel) << ',';
        if (th) {
            Observables o;
            o.mass = r[im];
            o.energy = r[ie];
            o.kinetic_a = r[ik];
            o.lp = r[ip];
            CoercivityReport c = coercivity_report(o, cfg.spec, *th);
            os << format_double(c.energy_ratio) << ',' << format_double(c.kinetic_ratio) << ',' << c.regime << ','
               << format_double(c.lhs_a_ii) << ',' << format_double(c.lhs_b_ii) << ',' << format_double(c.c_bound)
               << ',' << (c.hypothesis_ok ? 1 : 0) << ',' << (c.assertion_ok ? 1 : 0) << '\n';
        } else {
            os << "nan,nan,-,nan,nan,nan,0,0\n";
        }
    }
    write_text(dir / "report.csv", os.str());
    write_text(dir / "plot_report.py", kReportPlot);
    return (dir / "report.csv").string();
}

std::string regime_json(const ProblemSpec& spec) {
    RegimeReport r = validate_regime(spec);
    json j = to_json(r);
    j["spec"] = json{{"d", spec.d}, {"a", spec.a}, {"alpha", spec.alpha}, {"mu", spec.mu}};
    j["hardy_constant"] = hardy_constant(spec.d);
    j["a_eff"] = a_eff(spec.d, spec.a);
    if (r.hardy_ok && r.intercritical_ok) {
        Exponents e = exponents(spec);
        json ex{{"s_c", e.s_c},       {"sigma", e.sigma}, {"rho_heat", e.rho_heat}, {"q0", e.q0},
                {"r0", e.r0},         {"rho_dual", e.rho_dual}, {"gamma", e.gamma}, {"aux_case", e.aux_case},
                {"q1", e.q1},         {"r1", e.r1},       {"r2", e.r2},
                {"q", std::isinf(e.q) ? json("inf") : json(e.q)}, {"r", e.r}};
        if (auto p = q0_r0_exact(spec.d, spec.alpha)) {
            ex["q0_exact"] = to_string(p->q);
            ex["r0_exact"] = to_string(p->r);
        }
        j["exponents"] = ex;
    }
    return j.dump(2);
}

std::string groundstate_json(const RunConfig& cfg, GroundStateCache& cache, const std::string& out_dir) {
    RegimeReport rep = validate_regime(cfg.spec);
    if (!rep.hardy_ok || !rep.intercritical_ok) throw RegimeError("groundstate: spec outside the Hardy/intercritical range");
    auto g = make_grid(cfg.spec.d, cfg.gs_grid.n, cfg.gs_grid.rmax);
    bool hit = false;
    GroundState gs = cache.get(cfg.spec, g, cfg.gs, &hit);
    Thresholds th = thresholds(gs, 1e-4, false);
    SharpConstant sc = sharp_constant(gs, cfg.spec);
    json j;
    j["spec"] = json{{"d", cfg.spec.d}, {"a", cfg.spec.a}, {"alpha", cfg.spec.alpha}};
    j["grid"] = json{{"N", g->n}, {"R_max", g->rmax}};
    j["attained"] = gs.attained;
    j["C_a"] = gs.C_a;
    j["sharp_constant"] = json{{"direct", sc.direct}, {"formula", sc.formula}, {"rel_diff", sc.rel_diff}, {"ok", sc.ok}};
    j["mass"] = gs.mass;
    j["kinetic_a"] = gs.kinetic_a;
    j["lp"] = gs.lp;
    j["Q0"] = gs.Q.u[0].real();
    j["stationarity"] = gs.stationarity;
    j["elliptic_residual"] = gs.elliptic_residual;
    j["iterations"] = gs.iterations;
    j["monotone_tail"] = gs.monotone_tail;
    j["thresholds"] = to_json(th);
    j["cache_hit"] = hit;
    j["cache_dir"] = cache.dir();
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        const std::string p = (fs::path(out_dir) / "Q.csv").string();
        write_field(p, gs.Q, cfg.spec, 0.0);
        j["field"] = p;
    }
    return j.dump(2);
}

std::string classify_json(const RunConfig& cfg, GroundStateCache& cache) {
    check_config(cfg);
    RegimeReport rep = validate_regime(cfg.spec);
    if (!rep.hardy_ok || !rep.intercritical_ok) throw RegimeError("classify: spec outside the Hardy/intercritical range");
    if (cfg.spec.mu == 0) throw ConfigError("classify: needs mu = +1 or -1");
    Thresholds th = resolve_thresholds(cfg, cache);
    RadialField u0 = resolve_initial_data(cfg, cache);
    const Observables o = energy(u0, cfg.spec, cfg.integrator.origin_correction);
    json j = to_json(classify(o, cfg.spec, th, cfg.classify_tol));
    j["observables"] = to_json(o);
    j["coercivity"] = to_json(coercivity_report(o, cfg.spec, th));
    j["thresholds"] = to_json(th);
    return j.dump(2);
}

} // namespace nlslab
