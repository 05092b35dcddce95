#include "nlslab/cache.hpp"
#include "nlslab/checksum.hpp"
#include "nlslab/error.hpp"
#include "nlslab/field_io.hpp"

#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace nlslab {

using nlohmann::json;

std::string cache_directory() {
    if (const char* p = std::getenv("NLSLAB_CACHE"); p && *p) return p;
    if (const char* p = std::getenv("XDG_CACHE_HOME"); p && *p) return (fs::path(p) / "nlslab").string();
    if (const char* p = std::getenv("HOME"); p && *p) return (fs::path(p) / ".cache" / "nlslab").string();
    return ".nlslab-cache";
}

GroundStateCache::GroundStateCache(std::string dir, double pohozaev_tol)
    : dir_(std::move(dir)), poho_tol_(pohozaev_tol) {}

namespace {

json key_fields(const ProblemSpec& spec, const RadialGrid& g, const GroundStateOptions& o) {
    // Q only depends on min(a, 0); mu plays no part.
    return json{{"d", spec.d},
                {"a", format_double(std::min(spec.a, 0.0))},
                {"alpha", format_double(spec.alpha)},
                {"N", g.n},
                {"R_max", format_double(g.rmax)},
                {"tol", format_double(o.tol)},
                {"elliptic_tol", format_double(o.elliptic_tol)},
                {"linear_tol", format_double(o.linear_tol)},
                {"mass_leak_cap", format_double(o.mass_leak_cap)},
                {"origin_correction", o.origin_correction},
                {"schema", 1}};
}

void write_atomic(const fs::path& path, const std::string& body) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw IoError("cache: cannot write " + tmp.string());
        out << body;
        if (!out) throw IoError("cache: write failed " + tmp.string());
    }
    fs::rename(tmp, path);
}

} // namespace

std::string GroundStateCache::key(const ProblemSpec& spec, const RadialGrid& grid,
                                  const GroundStateOptions& opts) const {
    return "gs-" + sha256_hex(key_fields(spec, grid, opts).dump()).substr(0, 24);
}

GroundState GroundStateCache::get(const ProblemSpec& spec, const GridPtr& grid, const GroundStateOptions& opts,
                                  bool* hit) {
    std::lock_guard<std::mutex> lock(mu_);
    if (hit) *hit = false;
    const json kf = key_fields(spec, *grid, opts);
    const std::string k = key(spec, *grid, opts);
    const fs::path csv = fs::path(dir_) / (k + ".csv");
    const fs::path meta = fs::path(dir_) / (k + ".json");

    std::error_code ec;
    if (fs::exists(csv, ec) && fs::exists(meta, ec)) {
        try {
            std::ifstream in(meta);
            json m;
            in >> m;
            if (m.at("key") != kf) throw IoError("key mismatch");
            if (sha256_file(csv.string()) != m.at("sha256").get<std::string>()) throw IoError("checksum mismatch");
            RadialField Q = read_field_csv(csv.string(), grid);
            GroundState gs = assess_ground_state(Q, spec, opts);
            gs.iterations = m.value("iterations", 0);
            auto [r1, r2] = pohozaev_check(gs);
            if (r1 < poho_tol_ && r2 < poho_tol_) {
                if (hit) *hit = true;
                return gs;
            }
            warn("ground-state cache: entry " + k + " failed the Pohozaev check, solving again");
        } catch (const std::exception& e) {
            warn("ground-state cache: entry " + k + " rejected (" + e.what() + "), solving again");
        }
    }

    GroundState gs = solve_ground_state(spec, grid, opts);
    try {
        fs::create_directories(dir_);
        std::ostringstream body;
        body << "r,re,im\n";
        for (int j = 0; j < grid->n; ++j)
            body << format_double(grid->r[j]) << ',' << format_double(gs.Q.u[j].real()) << ','
                 << format_double(gs.Q.u[j].imag()) << '\n';
        const std::string text = body.str();
        write_atomic(csv, text);
        json m{{"key", kf},
               {"sha256", sha256_hex(text)},
               {"iterations", gs.iterations},
               {"mass", gs.mass},
               {"kinetic_a", gs.kinetic_a},
               {"lp", gs.lp},
               {"C_a", gs.C_a}};
        write_atomic(meta, m.dump(2) + "\n");
    } catch (const std::exception& e) {
        warn(std::string("ground-state cache: could not store entry: ") + e.what());
    }
    return gs;
}

} // namespace nlslab
