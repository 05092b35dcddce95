#include "nlslab/config.hpp"
#include "nlslab/error.hpp"

#include "json.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace nlslab {

using nlohmann::json;

std::string to_string(InitialKind k) {
    switch (k) {
    case InitialKind::Gaussian: return "gaussian";
    case InitialKind::GroundStateMultiple: return "groundstate";
    case InitialKind::FromFile: return "file";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& s) {
    const std::string t = trim(s);
    double x = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
    if (ec != std::errc() || p != t.data() + t.size() || t.empty())
        throw ConfigError("config: " + key + " expects a number, got '" + s + "'");
    return x;
}

int to_int(const std::string& key, const std::string& s) {
    const std::string t = trim(s);
    int x = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
    if (ec != std::errc() || p != t.data() + t.size() || t.empty())
        throw ConfigError("config: " + key + " expects an integer, got '" + s + "'");
    return x;
}

bool to_bool(const std::string& key, const std::string& s) {
    const std::string t = trim(s);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw ConfigError("config: " + key + " expects true/false, got '" + s + "'");
}

std::vector<std::string> split_list(const std::string& s) {
    std::string t = trim(s);
    if (!t.empty() && t.front() == '[') t.erase(0, 1);
    if (!t.empty() && t.back() == ']') t.pop_back();
    std::vector<std::string> out;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.size() >= 2 && item.front() == '"' && item.back() == '"') item = item.substr(1, item.size() - 2);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;
using Getter = std::function<json(const RunConfig&)>;

struct Field {
    Setter set;
    Getter get;
};

#define NUM(path, member) \
    {path, {[](RunConfig& c, const std::string& k, const std::string& v) { c.member = to_double(k, v); }, \
            [](const RunConfig& c) { return json(c.member); }}}
#define INT(path, member) \
    {path, {[](RunConfig& c, const std::string& k, const std::string& v) { c.member = to_int(k, v); }, \
            [](const RunConfig& c) { return json(c.member); }}}
#define BOOL(path, member) \
    {path, {[](RunConfig& c, const std::string& k, const std::string& v) { c.member = to_bool(k, v); }, \
            [](const RunConfig& c) { return json(c.member); }}}
#define STR(path, member) \
    {path, {[](RunConfig& c, const std::string&, const std::string& v) { c.member = trim(v); }, \
            [](const RunConfig& c) { return json(c.member); }}}

const std::map<std::string, Field>& fields() {
    static const std::map<std::string, Field> f = {
        INT("schema_version", schema_version),
        STR("name", name),
        INT("spec.d", spec.d),
        NUM("spec.a", spec.a),
        NUM("spec.alpha", spec.alpha),
        {"spec.mu", {[](RunConfig& c, const std::string& k, const std::string& v) {
                         const double m = to_double(k, v);
                         if (m != -1 && m != 0 && m != 1) throw ConfigError("config: spec.mu must be -1, 0 or 1");
                         c.spec.mu = static_cast<int>(m);
                     },
                     [](const RunConfig& c) { return json(c.spec.mu); }}},
        INT("grid.N", grid.n),
        NUM("grid.R_max", grid.rmax),
        INT("groundstate.N", gs_grid.n),
        NUM("groundstate.R_max", gs_grid.rmax),
        NUM("groundstate.tol", gs.tol),
        NUM("groundstate.elliptic_tol", gs.elliptic_tol),
        INT("groundstate.max_iters", gs.max_iters),
        NUM("groundstate.linear_tol", gs.linear_tol),
        NUM("groundstate.mass_leak_cap", gs.mass_leak_cap),
        BOOL("groundstate.origin_correction", gs.origin_correction),
        NUM("integrator.dt", integrator.dt),
        NUM("integrator.t_end", integrator.t_end),
        NUM("integrator.dt_min", integrator.dt_min),
        NUM("integrator.kinetic_cap", integrator.kinetic_cap),
        NUM("integrator.sample_every", integrator.sample_every),
        NUM("integrator.boundary_mass_cap", integrator.boundary_mass_cap),
        NUM("integrator.boundary_layer", integrator.boundary_layer),
        NUM("integrator.tol", integrator.tol),
        NUM("integrator.growth_limit", integrator.growth_limit),
        BOOL("integrator.adaptive", integrator.adaptive),
        BOOL("integrator.origin_correction", integrator.origin_correction),
        {"integrator.split", {[](RunConfig& c, const std::string&, const std::string& v) {
                                  const std::string t = trim(v);
                                  if (t == "exact") c.integrator.split = SplitMode::ExactLinear;
                                  else if (t == "pointwise") c.integrator.split = SplitMode::PointwisePotential;
                                  else throw ConfigError("config: integrator.split must be exact or pointwise");
                              },
                              [](const RunConfig& c) {
                                  return json(c.integrator.split == SplitMode::ExactLinear ? "exact" : "pointwise");
                              }}},
        {"initial.kind", {[](RunConfig& c, const std::string&, const std::string& v) {
                              const std::string t = trim(v);
                              if (t == "gaussian") c.initial.kind = InitialKind::Gaussian;
                              else if (t == "groundstate") c.initial.kind = InitialKind::GroundStateMultiple;
                              else if (t == "file") c.initial.kind = InitialKind::FromFile;
                              else throw ConfigError("config: initial.kind must be gaussian, groundstate or file");
                          },
                          [](const RunConfig& c) { return json(to_string(c.initial.kind)); }}},
        NUM("initial.amplitude", initial.amplitude),
        NUM("initial.width", initial.width),
        BOOL("initial.envelope", initial.origin_envelope),
        NUM("initial.c", initial.c),
        STR("initial.path", initial.path),
        INT("monitors.snapshot_every", monitors.snapshot_every),
        NUM("monitors.virial_R", monitors.virial_R),
        NUM("fate.kinetic_growth", fate.kinetic_growth),
        NUM("fate.decay_factor", fate.decay_factor),
        NUM("fate.kinetic_tol", fate.kinetic_tol),
        NUM("fate.early_fraction", fate.early_fraction),
        INT("fate.final_window", fate.final_window),
        NUM("classify.tol", classify_tol),
        STR("output.dir", output_dir),
        STR("sweep.parameter", sweep.parameter),
        {"sweep.values", {[](RunConfig& c, const std::string&, const std::string& v) { c.sweep.values = split_list(v); },
                          [](const RunConfig& c) { return json(c.sweep.values); }}},
    };
    return f;
}

#undef NUM
#undef INT
#undef BOOL
#undef STR

std::string resolve_alias(const std::string& key) {
    static const std::map<std::string, std::string> alias = {
        {"c", "initial.c"}, {"a", "spec.a"}, {"alpha", "spec.alpha"}, {"mu", "spec.mu"}, {"d", "spec.d"},
        {"N", "grid.N"}, {"R_max", "grid.R_max"}, {"amplitude", "initial.amplitude"}, {"t_end", "integrator.t_end"},
    };
    auto it = alias.find(key);
    return it == alias.end() ? key : it->second;
}

// Drops comments outside quotes and the quotes around a whole value.
std::string preprocess(const std::string& text) {
    std::stringstream in(text), out;
    std::string line;
    while (std::getline(in, line)) {
        bool quoted = false;
        std::string kept;
        for (char ch : line) {
            if (ch == '"') quoted = !quoted;
            if ((ch == '#' || ch == ';') && !quoted) break;
            kept.push_back(ch);
        }
        auto eq = kept.find('=');
        if (eq != std::string::npos) {
            std::string key = trim(kept.substr(0, eq));
            std::string val = trim(kept.substr(eq + 1));
            if (val.size() >= 2 && val.front() == '"' && val.back() == '"') val = val.substr(1, val.size() - 2);
            kept = key + " = " + val;
        }
        out << kept << '\n';
    }
    return out.str();
}

void apply_json(RunConfig& cfg, const json& j, const std::string& prefix) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
        const json& v = it.value();
        if (v.is_object()) {
            apply_json(cfg, v, key);
        } else if (v.is_array()) {
            std::string joined;
            for (const auto& e : v) {
                if (!joined.empty()) joined += ",";
                joined += e.is_string() ? e.get<std::string>() : e.dump();
            }
            set_config_value(cfg, key, joined);
        } else if (v.is_string()) {
            set_config_value(cfg, key, v.get<std::string>());
        } else {
            set_config_value(cfg, key, v.dump());
        }
    }
}

} // namespace

void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
    const std::string k = resolve_alias(key);
    auto it = fields().find(k);
    if (it == fields().end()) throw ConfigError("config: unknown key '" + key + "'");
    it->second.set(cfg, k, value);
}

std::vector<std::string> config_keys() {
    std::vector<std::string> out;
    for (const auto& [k, f] : fields()) out.push_back(k);
    return out;
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    bool versioned = false;
    const std::string t = trim(text);
    if (!t.empty() && t.front() == '{') {
        json j;
        try {
            j = json::parse(t);
        } catch (const json::exception& e) {
            throw ConfigError(std::string("config: JSON parse error: ") + e.what());
        }
        versioned = j.contains("schema_version");
        apply_json(cfg, j, "");
    } else {
        boost::property_tree::ptree pt;
        std::stringstream ss(preprocess(text));
        try {
            boost::property_tree::ini_parser::read_ini(ss, pt);
        } catch (const boost::property_tree::ini_parser_error& e) {
            throw ConfigError(std::string("config: parse error: ") + e.message() + " (line " +
                              std::to_string(e.line()) + ")");
        }
        for (const auto& [sec, node] : pt) {
            if (node.empty()) {
                if (sec == "schema_version") versioned = true;
                set_config_value(cfg, sec, node.data());
                continue;
            }
            for (const auto& [key, leaf] : node) set_config_value(cfg, sec + "." + key, leaf.data());
        }
    }
    if (!versioned) throw ConfigError("config: schema_version missing");
    if (cfg.schema_version != kSchemaVersion)
        throw ConfigError("config: unsupported schema_version " + std::to_string(cfg.schema_version));
    check_config(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_json(const RunConfig& cfg, int indent) {
    json j = json::object();
    for (const auto& [k, f] : fields()) {
        auto dot = k.find('.');
        if (dot == std::string::npos)
            j[k] = f.get(cfg);
        else
            j[k.substr(0, dot)][k.substr(dot + 1)] = f.get(cfg);
    }
    return j.dump(indent);
}

void check_config(const RunConfig& cfg) {
    if (cfg.grid.n < 16 || cfg.gs_grid.n < 16) throw ConfigError("config: grid.N must be at least 16");
    if (!(cfg.grid.rmax > 0) || !(cfg.gs_grid.rmax > 0)) throw ConfigError("config: R_max must be positive");
    const auto& ic = cfg.integrator;
    if (!(ic.dt > 0) || !(ic.dt_min > 0) || !(ic.dt > ic.dt_min)) throw ConfigError("config: need dt > dt_min > 0");
    if (!(ic.t_end >= 0)) throw ConfigError("config: t_end must be non-negative");
    if (!(ic.sample_every >= 0)) throw ConfigError("config: sample_every must be non-negative");
    if (!(ic.boundary_layer > 0 && ic.boundary_layer < 1)) throw ConfigError("config: boundary_layer must lie in (0,1)");
    if (cfg.initial.kind == InitialKind::Gaussian && !(cfg.initial.width > 0))
        throw ConfigError("config: initial.width must be positive");
    if (cfg.initial.kind == InitialKind::FromFile && cfg.initial.path.empty())
        throw ConfigError("config: initial.path required for file data");
    if (cfg.monitors.snapshot_every < 0) throw ConfigError("config: snapshot_every must be non-negative");
    if (cfg.output_dir.empty()) throw ConfigError("config: output.dir must not be empty");
    if (!(cfg.classify_tol >= 0 && cfg.classify_tol < 1)) throw ConfigError("config: classify.tol must lie in [0,1)");
}

} // namespace nlslab
