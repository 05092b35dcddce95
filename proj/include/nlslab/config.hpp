#pragma once

#include "nlslab/diagnostics.hpp"
#include "nlslab/evolve.hpp"
#include "nlslab/groundstate.hpp"
#include "nlslab/params.hpp"

#include <string>
#include <vector>

namespace nlslab {

inline constexpr int kSchemaVersion = 1;

enum class InitialKind { Gaussian, GroundStateMultiple, FromFile };
std::string to_string(InitialKind k);

struct InitialData {
    InitialKind kind = InitialKind::Gaussian;
    double amplitude = 1.0;
    double width = 1.0;            // amplitude * exp(-(r/width)^2)
    bool origin_envelope = false;  // times (r / sqrt(r^2 + width^2))^{-rho_heat}
    double c = 1.0;                // multiple of Q_a
    std::string path;              // field CSV (with its .json header)
};

struct GridParams {
    int n = 4096;
    double rmax = 40.0;
};

struct MonitorConfig {
    int snapshot_every = 0;
    double virial_R = 0.0;
};

struct SweepAxis {
    std::string parameter;
    std::vector<std::string> values;
};

struct RunConfig {
    int schema_version = kSchemaVersion;
    std::string name = "run";
    ProblemSpec spec;
    GridParams grid;
    GridParams gs_grid{4096, 20.0};  // grid of the threshold solve
    GroundStateOptions gs;
    IntegratorConfig integrator;
    InitialData initial;
    MonitorConfig monitors;
    FateOptions fate;
    double classify_tol = kClassifyTolerance;
    std::string output_dir = "run";
    SweepAxis sweep;
};

// Key/value text with [sections] ('#' comments, optional quotes), or JSON when the text starts
// with '{'. Keys are "section.key"; schema_version sits at top level.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Dotted-key override, also the sweep mechanism. Short aliases: c, a, alpha, mu, d.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);
std::vector<std::string> config_keys();

// Canonical JSON echo (every key, nested by section).
std::string config_to_json(const RunConfig& cfg, int indent = 2);

// Checks that do not need the filesystem.
void check_config(const RunConfig& cfg);

} // namespace nlslab
