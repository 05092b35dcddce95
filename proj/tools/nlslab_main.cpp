// Command-line front end. Talks to the library through the C interface only.
#include "nlslab/nlslab.h"

#include "CLI11.hpp"

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace {

struct Owned {
    char* p = nullptr;
    ~Owned() { nlslab_string_free(p); }
};

int report_failure(nlslab_status s) {
    std::fprintf(stderr, "nlslab: %s: %s\n", nlslab_status_name(s), nlslab_last_error());
    return nlslab_exit_code(s);
}

void quiet_handler(const char*, void*) {}

struct Common {
    std::string config;
    std::vector<std::string> sets;
    std::string cache_dir;
};

int with_config(const Common& c, nlslab_config** cfg) {
    nlslab_status s = c.config.empty() ? nlslab_config_default(cfg) : nlslab_config_load(c.config.c_str(), cfg);
    if (s != NLSLAB_OK) return report_failure(s);
    for (const auto& kv : c.sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "nlslab: --set expects key=value, got '%s'\n", kv.c_str());
            return 1;
        }
        s = nlslab_config_set(*cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
        if (s != NLSLAB_OK) return report_failure(s);
    }
    s = nlslab_config_check(*cfg);
    if (s != NLSLAB_OK) return report_failure(s);
    return 0;
}

int open_cache(const Common& c, nlslab_cache** cache) {
    nlslab_status s = nlslab_cache_open(c.cache_dir.empty() ? nullptr : c.cache_dir.c_str(), cache);
    return s == NLSLAB_OK ? 0 : report_failure(s);
}

void add_common(CLI::App* sub, Common& c, bool config_required) {
    auto* opt = sub->add_option("-c,--config", c.config, "run configuration (key/value text or JSON)");
    if (config_required) opt->required()->check(CLI::ExistingFile);
    sub->add_option("-s,--set", c.sets, "override a config key, e.g. --set initial.c=1.1");
    sub->add_option("--cache", c.cache_dir, "ground-state cache directory (default: $NLSLAB_CACHE)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radial spectral simulator for NLS with an inverse-square potential"};
    app.set_version_flag("--version", std::string(nlslab_version()));
    app.require_subcommand(1);
    bool quiet = false;
    app.add_flag("-q,--quiet", quiet, "suppress numerical warnings");

    int d = 3, mu = -1;
    double a = 0.0, alpha = 2.0;
    auto* regime = app.add_subcommand("regime", "check the parameter ranges and print the exponents");
    regime->add_option("-d,--d,--dim", d, "dimension (3..6)");
    regime->add_option("-a,--a", a, "coupling a");
    regime->add_option("--alpha", alpha, "nonlinearity power");
    regime->add_option("--mu", mu, "+1 defocusing, -1 focusing, 0 linear");

    Common gs_opts, ev_opts, cl_opts, sw_opts;
    std::string gs_out = ".";
    auto* groundstate = app.add_subcommand("groundstate", "solve for the optimizer; writes Q.csv and prints C_a and the thresholds");
    add_common(groundstate, gs_opts, false);
    groundstate->add_option("-o,--out", gs_out, "directory for Q.csv/Q.json (default: current directory)");
    std::optional<int> gs_d, gs_n;
    std::optional<double> gs_a, gs_alpha, gs_rmax;
    groundstate->add_option("--d", gs_d, "dimension");
    groundstate->add_option("--a", gs_a, "coupling a");
    groundstate->add_option("--alpha", gs_alpha, "nonlinearity power");
    groundstate->add_option("--n", gs_n, "grid nodes of the solve");
    groundstate->add_option("--rmax", gs_rmax, "domain radius of the solve");

    std::string ev_out;
    auto* evolve = app.add_subcommand("evolve", "run one experiment and print its manifest");
    add_common(evolve, ev_opts, true);
    evolve->add_option("-o,--out", ev_out, "output directory (overrides output.dir)");

    auto* classify = app.add_subcommand("classify", "classify the initial data against the thresholds");
    add_common(classify, cl_opts, false);

    std::string run_dir;
    auto* report = app.add_subcommand("report", "write report.csv and a plot script for a run directory");
    report->add_option("-r,--run", run_dir, "run directory")->required()->check(CLI::ExistingDirectory);

    std::string sw_param, sw_out;
    std::vector<std::string> sw_values;
    bool sw_values_given = false;
    int jobs = 0;
    auto* sweep = app.add_subcommand("sweep", "run one experiment per value and write summary.csv");
    add_common(sweep, sw_opts, true);
    sweep->add_option("-p,--param", sw_param, "config key to vary (default: [sweep] parameter)");
    auto* vals = sweep->add_option("--values", sw_values, "comma-separated values")->delimiter(',');
    vals->expected(0, -1);
    sweep->add_option("-j,--jobs", jobs, "parallel runs (0 = hardware threads)");
    sweep->add_option("-o,--out", sw_out, "output directory (overrides output.dir)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    sw_values_given = vals->count() > 0;
    if (quiet) nlslab_set_warning_handler(quiet_handler, nullptr);

    if (*regime) {
        Owned out;
        int main_ok = 0;
        nlslab_status s = nlslab_regime(d, a, alpha, mu, &out.p, &main_ok);
        if (s != NLSLAB_OK) return report_failure(s);
        std::printf("%s\n", out.p);
        return main_ok ? 0 : 1;
    }

    if (*report) {
        Owned out;
        nlslab_status s = nlslab_report(run_dir.c_str(), &out.p);
        if (s != NLSLAB_OK) return report_failure(s);
        std::printf("%s\n", out.p);
        return 0;
    }

    Common& c = *groundstate ? gs_opts : *evolve ? ev_opts : *classify ? cl_opts : sw_opts;
    if (*groundstate) {
        auto num = [](double x) {
            char b[40];
            std::snprintf(b, sizeof(b), "%.17g", x);
            return std::string(b);
        };
        if (gs_d) c.sets.push_back("spec.d=" + std::to_string(*gs_d));
        if (gs_a) c.sets.push_back("spec.a=" + num(*gs_a));
        if (gs_alpha) c.sets.push_back("spec.alpha=" + num(*gs_alpha));
        if (gs_n) c.sets.push_back("groundstate.N=" + std::to_string(*gs_n));
        if (gs_rmax) c.sets.push_back("groundstate.R_max=" + num(*gs_rmax));
    }
    nlslab_config* cfg = nullptr;
    nlslab_cache* cache = nullptr;
    int rc = with_config(c, &cfg);
    if (rc == 0) rc = open_cache(c, &cache);
    if (rc == 0) {
        Owned out;
        nlslab_status s = NLSLAB_OK;
        if (*groundstate) {
            s = nlslab_groundstate(cfg, cache, gs_out.empty() ? nullptr : gs_out.c_str(), &out.p);
        } else if (*classify) {
            s = nlslab_classify(cfg, cache, &out.p);
        } else if (*evolve) {
            if (!ev_out.empty()) s = nlslab_config_set(cfg, "output.dir", ev_out.c_str());
            if (s == NLSLAB_OK) s = nlslab_run(cfg, cache, &out.p);
        } else {
            if (!sw_out.empty()) s = nlslab_config_set(cfg, "output.dir", sw_out.c_str());
            std::vector<const char*> v;
            for (const auto& x : sw_values) v.push_back(x.c_str());
            const bool custom = !sw_param.empty() || sw_values_given;
            if (custom && sw_param.empty()) {
                std::fprintf(stderr, "nlslab: --values needs --param\n");
                s = NLSLAB_ERR_ARGUMENT;
                rc = 1;
            }
            if (s == NLSLAB_OK)
                s = nlslab_sweep(cfg, cache, custom ? sw_param.c_str() : nullptr, v.data(), v.size(), jobs, &out.p);
        }
        if (rc == 0 && s != NLSLAB_OK) rc = report_failure(s);
        if (rc == 0 && out.p) std::printf("%s\n", out.p);
    }
    nlslab_cache_free(cache);
    nlslab_config_free(cfg);
    return rc;
}
