#pragma once

#include "nlslab/groundstate.hpp"

#include <mutex>
#include <string>

namespace nlslab {

// NLSLAB_CACHE, else $XDG_CACHE_HOME/nlslab, else $HOME/.cache/nlslab, else ./.nlslab-cache.
std::string cache_directory();

// On-disk ground states keyed by (d, a, alpha, N, R_max, tolerances, origin correction).
// Loads are revalidated: diagnostics are recomputed and the Pohozaev residuals must pass;
// a stale or damaged entry is solved again and overwritten.
class GroundStateCache {
public:
    explicit GroundStateCache(std::string dir = cache_directory(), double pohozaev_tol = 1e-3);

    GroundState get(const ProblemSpec& spec, const GridPtr& grid, const GroundStateOptions& opts,
                    bool* hit = nullptr);
    std::string key(const ProblemSpec& spec, const RadialGrid& grid, const GroundStateOptions& opts) const;
    const std::string& dir() const { return dir_; }

private:
    std::string dir_;
    double poho_tol_;
    std::mutex mu_;
};

} // namespace nlslab
