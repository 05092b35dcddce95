#pragma once

#include "nlslab/cache.hpp"
#include "nlslab/config.hpp"
#include "nlslab/diagnostics.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nlslab {

std::string version_string();

struct RunManifest {
    std::string dir;
    std::string config_json;
    std::string version;
    bool ok = false;
    std::string error;
    int exit_code = 0;

    std::optional<Thresholds> thresholds;
    std::optional<Classification> classification;
    std::optional<CoercivityReport> coercivity;  // at t = 0
    Termination termination = Termination::Completed;
    std::string termination_reason;
    FateReport fate;
    std::string concordance = "n/a";
    double t_final = 0, scattering_norm = 0;
    long steps = 0, rejected = 0;
    std::map<std::string, std::string> checksums;  // file name -> sha256

    std::string to_json(int indent = 2) const;
};

// Thresholds from the optimizer on the config's ground-state grid (through the cache).
Thresholds resolve_thresholds(const RunConfig& cfg, GroundStateCache& cache, GroundState* gs = nullptr);

// Initial field on the evolution grid. FromFile uses the grid stored with the field.
RadialField resolve_initial_data(const RunConfig& cfg, GroundStateCache& cache);

// Runs one experiment into cfg.output_dir. Errors leave the partial directory plus an ERROR
// file and are rethrown.
RunManifest run_experiment(const RunConfig& cfg, GroundStateCache& cache);

// One run per value under <output_dir>/<parameter>=<value>; failures are recorded and the
// sweep goes on. Writes summary.csv. jobs <= 0 picks the hardware concurrency.
std::vector<RunManifest> sweep(const RunConfig& base, const SweepAxis& axis, GroundStateCache& cache, int jobs = 0);

// Reads a run directory and writes report.csv (virial and coercivity per sample) and
// plot_report.py. Returns the report path.
std::string write_report(const std::string& run_dir);

// JSON documents for the regime, groundstate and classify subcommands.
std::string regime_json(const ProblemSpec& spec);
std::string groundstate_json(const RunConfig& cfg, GroundStateCache& cache, const std::string& out_dir = "");
std::string classify_json(const RunConfig& cfg, GroundStateCache& cache);

} // namespace nlslab
