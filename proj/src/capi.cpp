#include "nlslab/nlslab.h"

#include "nlslab/cache.hpp"
#include "nlslab/config.hpp"
#include "nlslab/error.hpp"
#include "nlslab/experiment.hpp"
#include "nlslab/field_io.hpp"
#include "nlslab/params.hpp"

#include "json.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

struct nlslab_config {
    nlslab::RunConfig cfg;
};
struct nlslab_cache {
    std::unique_ptr<nlslab::GroundStateCache> cache;
};
struct nlslab_field {
    nlslab::RadialField u;
    nlslab::FieldHeader header;
};

namespace {

thread_local std::string g_last_error;

nlslab_status fail(nlslab_status s, const std::string& msg) {
    g_last_error = msg;
    return s;
}

nlslab_status status_of(nlslab::ErrorKind k) {
    using nlslab::ErrorKind;
    switch (k) {
    case ErrorKind::Config: return NLSLAB_ERR_CONFIG;
    case ErrorKind::Regime: return NLSLAB_ERR_REGIME;
    case ErrorKind::UnsupportedDimension: return NLSLAB_ERR_DIMENSION;
    case ErrorKind::Numerical: return NLSLAB_ERR_NUMERICAL;
    case ErrorKind::Io: return NLSLAB_ERR_IO;
    case ErrorKind::Argument: return NLSLAB_ERR_ARGUMENT;
    }
    return NLSLAB_ERR_INTERNAL;
}

template <class F>
nlslab_status guard(F&& f) {
    try {
        g_last_error.clear();
        f();
        return NLSLAB_OK;
    } catch (const nlslab::Error& e) {
        return fail(status_of(e.kind()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(NLSLAB_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(NLSLAB_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(NLSLAB_ERR_INTERNAL, "unknown error");
    }
}

char* dup(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

#define REQUIRE(cond, what) \
    if (!(cond)) return fail(NLSLAB_ERR_ARGUMENT, what)

nlslab_warning_fn g_warn_fn = nullptr;
void* g_warn_user = nullptr;

} // namespace

extern "C" {

const char* nlslab_version(void) {
    static const std::string v = nlslab::version_string();
    return v.c_str();
}

const char* nlslab_last_error(void) { return g_last_error.c_str(); }

const char* nlslab_status_name(nlslab_status s) {
    switch (s) {
    case NLSLAB_OK: return "ok";
    case NLSLAB_ERR_CONFIG: return "config error";
    case NLSLAB_ERR_REGIME: return "regime error";
    case NLSLAB_ERR_DIMENSION: return "unsupported dimension";
    case NLSLAB_ERR_NUMERICAL: return "numerical failure";
    case NLSLAB_ERR_IO: return "i/o error";
    case NLSLAB_ERR_ARGUMENT: return "bad argument";
    case NLSLAB_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

int nlslab_exit_code(nlslab_status s) {
    switch (s) {
    case NLSLAB_OK: return 0;
    case NLSLAB_ERR_NUMERICAL:
    case NLSLAB_ERR_INTERNAL: return 2;
    default: return 1;
    }
}

void nlslab_string_free(char* s) { std::free(s); }

void nlslab_set_warning_handler(nlslab_warning_fn fn, void* user) {
    g_warn_fn = fn;
    g_warn_user = user;
    if (fn)
        nlslab::set_warning_handler([](const std::string& m) { g_warn_fn(m.c_str(), g_warn_user); });
    else
        nlslab::set_warning_handler([](const std::string& m) { std::fprintf(stderr, "nlslab: warning: %s\n", m.c_str()); });
}

nlslab_status nlslab_config_default(nlslab_config** out) {
    REQUIRE(out, "out is NULL");
    return guard([&] { *out = new nlslab_config{}; });
}

nlslab_status nlslab_config_load(const char* path, nlslab_config** out) {
    REQUIRE(path && out, "NULL argument");
    return guard([&] { *out = new nlslab_config{nlslab::load_config(path)}; });
}

nlslab_status nlslab_config_parse(const char* text, nlslab_config** out) {
    REQUIRE(text && out, "NULL argument");
    return guard([&] { *out = new nlslab_config{nlslab::parse_config(text)}; });
}

nlslab_status nlslab_config_set(nlslab_config* cfg, const char* key, const char* value) {
    REQUIRE(cfg && key && value, "NULL argument");
    return guard([&] { nlslab::set_config_value(cfg->cfg, key, value); });
}

nlslab_status nlslab_config_check(const nlslab_config* cfg) {
    REQUIRE(cfg, "cfg is NULL");
    return guard([&] { nlslab::check_config(cfg->cfg); });
}

nlslab_status nlslab_config_to_json(const nlslab_config* cfg, char** json_out) {
    REQUIRE(cfg && json_out, "NULL argument");
    return guard([&] { *json_out = dup(nlslab::config_to_json(cfg->cfg)); });
}

void nlslab_config_free(nlslab_config* cfg) { delete cfg; }

nlslab_status nlslab_cache_open(const char* dir, nlslab_cache** out) {
    REQUIRE(out, "out is NULL");
    return guard([&] {
        auto c = std::make_unique<nlslab_cache>();
        c->cache = std::make_unique<nlslab::GroundStateCache>(dir ? std::string(dir) : nlslab::cache_directory());
        *out = c.release();
    });
}

const char* nlslab_cache_dir(const nlslab_cache* cache) { return cache ? cache->cache->dir().c_str() : ""; }

void nlslab_cache_free(nlslab_cache* cache) { delete cache; }

nlslab_status nlslab_regime(int d, double a, double alpha, int mu, char** json_out, int* main_theorem_ok) {
    return guard([&] {
        const nlslab::ProblemSpec spec{d, a, alpha, mu};
        const bool ok = nlslab::validate_regime(spec).main_theorem_ok;
        if (main_theorem_ok) *main_theorem_ok = ok ? 1 : 0;
        if (json_out) *json_out = dup(nlslab::regime_json(spec));
    });
}

nlslab_status nlslab_groundstate(const nlslab_config* cfg, nlslab_cache* cache, const char* out_dir, char** json_out) {
    REQUIRE(cfg && cache && json_out, "NULL argument");
    return guard([&] {
        *json_out = dup(nlslab::groundstate_json(cfg->cfg, *cache->cache, out_dir ? out_dir : ""));
    });
}

nlslab_status nlslab_classify(const nlslab_config* cfg, nlslab_cache* cache, char** json_out) {
    REQUIRE(cfg && cache && json_out, "NULL argument");
    return guard([&] { *json_out = dup(nlslab::classify_json(cfg->cfg, *cache->cache)); });
}

nlslab_status nlslab_run(const nlslab_config* cfg, nlslab_cache* cache, char** manifest_out) {
    REQUIRE(cfg && cache, "NULL argument");
    return guard([&] {
        nlslab::RunManifest m = nlslab::run_experiment(cfg->cfg, *cache->cache);
        if (manifest_out) *manifest_out = dup(m.to_json());
    });
}

nlslab_status nlslab_sweep(const nlslab_config* cfg, nlslab_cache* cache, const char* parameter,
                           const char* const* values, size_t n_values, int jobs, char** json_out) {
    REQUIRE(cfg && cache, "NULL argument");
    REQUIRE(!parameter || n_values == 0 || values, "values is NULL");
    return guard([&] {
        nlslab::SweepAxis axis = cfg->cfg.sweep;
        if (parameter) {
            axis.parameter = parameter;
            axis.values.clear();
            for (size_t i = 0; i < n_values; ++i) axis.values.emplace_back(values[i]);
        }
        auto runs = nlslab::sweep(cfg->cfg, axis, *cache->cache, jobs);
        if (json_out) {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& m : runs) arr.push_back(nlohmann::json::parse(m.to_json(-1)));
            *json_out = dup(arr.dump(2));
        }
    });
}

nlslab_status nlslab_report(const char* run_dir, char** path_out) {
    REQUIRE(run_dir, "run_dir is NULL");
    return guard([&] {
        std::string p = nlslab::write_report(run_dir);
        if (path_out) *path_out = dup(p);
    });
}

nlslab_status nlslab_field_read(const char* csv_path, nlslab_field** out) {
    REQUIRE(csv_path && out, "NULL argument");
    return guard([&] {
        auto f = std::make_unique<nlslab_field>();
        f->u = nlslab::read_field(csv_path, &f->header);
        *out = f.release();
    });
}

nlslab_status nlslab_field_write(const nlslab_field* f, const char* csv_path) {
    REQUIRE(f && csv_path, "NULL argument");
    return guard([&] { nlslab::write_field(csv_path, f->u, f->header.spec, f->header.t); });
}

size_t nlslab_field_size(const nlslab_field* f) { return f ? f->u.u.size() : 0; }

int nlslab_field_dimension(const nlslab_field* f) { return f ? f->header.spec.d : 0; }

nlslab_status nlslab_field_values(const nlslab_field* f, double* r, double* re, double* im) {
    REQUIRE(f, "field is NULL");
    for (size_t j = 0; j < f->u.u.size(); ++j) {
        if (r) r[j] = f->u.grid->r[j];
        if (re) re[j] = f->u.u[j].real();
        if (im) im[j] = f->u.u[j].imag();
    }
    return NLSLAB_OK;
}

void nlslab_field_free(nlslab_field* f) { delete f; }

} // extern "C"
