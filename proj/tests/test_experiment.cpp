#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "json.hpp"

#include "nlslab/checksum.hpp"
#include "nlslab/error.hpp"
#include "nlslab/experiment.hpp"
#include "nlslab/field_io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using namespace nlslab;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& tag) {
    auto p = fs::temp_directory_path() / ("nlslab-exp-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// small a = -0.1 setup, fast enough for unit tests
RunConfig small(const fs::path& out) {
    RunConfig c = parse_config(R"(schema_version = 1
[spec]
d = 3
a = -0.1
alpha = 2
mu = -1
[grid]
N = 512
R_max = 20
[groundstate]
N = 512
R_max = 20
tol = 5e-3
[integrator]
dt = 1e-2
t_end = 0.2
sample_every = 0.05
[initial]
kind = "groundstate"
c = 0.8
[monitors]
virial_R = 5
snapshot_every = 2
)");
    c.output_dir = out.string();
    return c;
}

} // namespace

TEST_CASE("cache directory follows NLSLAB_CACHE") {
    ::setenv("NLSLAB_CACHE", "/tmp/some-cache", 1);
    CHECK(cache_directory() == "/tmp/some-cache");
    ::unsetenv("NLSLAB_CACHE");
    CHECK(cache_directory() != "/tmp/some-cache");
}

TEST_CASE("ground-state cache: miss, hit, damaged entry") {
    auto dir = scratch("cache");
    GroundStateCache cache(dir.string());
    ProblemSpec spec{3, -0.1, 2, -1};
    auto g = make_grid(3, 512, 20.0);
    GroundStateOptions o;
    o.tol = 5e-3;
    bool hit = true;
    auto a = cache.get(spec, g, o, &hit);
    CHECK_FALSE(hit);
    auto b = cache.get(spec, g, o, &hit);
    CHECK(hit);
    for (int j = 0; j < g->n; ++j) CHECK(a.Q.u[j] == b.Q.u[j]);
    CHECK(b.C_a == a.C_a);

    // mu does not enter the key, a > 0 shares the a = 0 entry
    CHECK(cache.key({3, -0.1, 2, 1}, *g, o) == cache.key(spec, *g, o));
    CHECK(cache.key({3, 0.4, 2, -1}, *g, o) == cache.key({3, 0.0, 2, -1}, *g, o));
    CHECK(cache.key({3, -0.05, 2, -1}, *g, o) != cache.key(spec, *g, o));

    // corrupt the stored profile: the checksum rejects it and the entry is rebuilt
    const fs::path csv = dir / (cache.key(spec, *g, o) + ".csv");
    {
        std::string body = slurp(csv);
        body[body.size() / 2] = body[body.size() / 2] == '1' ? '2' : '1';
        std::ofstream(csv) << body;
    }
    int warnings = 0;
    set_warning_handler([&](const std::string&) { ++warnings; });
    auto c = cache.get(spec, g, o, &hit);
    set_warning_handler(nullptr);
    CHECK_FALSE(hit);
    CHECK(warnings > 0);
    CHECK(c.C_a == doctest::Approx(a.C_a).epsilon(1e-12));
    cache.get(spec, g, o, &hit);
    CHECK(hit);
    fs::remove_all(dir);
}

TEST_CASE("run_experiment writes a consistent directory") {
    auto root = scratch("run");
    GroundStateCache cache((root / "cache").string());
    auto cfg = small(root / "r1");
    auto m = run_experiment(cfg, cache);
    CHECK(m.ok);
    REQUIRE(m.classification);
    CHECK(m.classification->verdict == Verdict::Scatter);
    REQUIRE(m.coercivity);
    CHECK(m.coercivity->regime == 'a');
    CHECK(m.termination == Termination::Completed);
    CHECK(m.t_final == doctest::Approx(0.2));
    for (const char* f : {"config.json", "timeseries.csv", "final_field.csv", "final_field.json", "manifest.json"})
        CHECK(fs::exists(root / "r1" / f));
    CHECK_FALSE(fs::exists(root / "r1" / "ERROR"));
    CHECK(fs::exists(root / "r1" / "snapshots"));

    auto man = json::parse(slurp(root / "r1" / "manifest.json"));
    CHECK(man["ok"] == true);
    CHECK(man["config"]["spec"]["a"] == -0.1);
    REQUIRE(man["checksums"].size() >= 4);
    for (auto it = man["checksums"].begin(); it != man["checksums"].end(); ++it)
        CHECK(sha256_file((root / "r1" / it.key()).string()) == it.value().get<std::string>());

    // same config, same bytes
    cfg.output_dir = (root / "r2").string();
    auto m2 = run_experiment(cfg, cache);
    for (const auto& [f, sum] : m.checksums)
        if (f != "config.json") CHECK(m2.checksums.at(f) == sum);

    // report
    auto rep = write_report((root / "r1").string());
    CHECK(fs::exists(rep));
    CHECK(fs::exists(root / "r1" / "plot_report.py"));
    std::ifstream in(rep);
    std::string header;
    std::getline(in, header);
    CHECK(header.find("virial_rhs_truncated") != std::string::npos);
    CHECK_THROWS_AS(write_report((root / "nowhere").string()), IoError);
    fs::remove_all(root);
}

TEST_CASE("file initial data with t_end = 0 reproduces the file") {
    auto root = scratch("file");
    GroundStateCache cache((root / "cache").string());
    auto cfg = small(root / "src");
    run_experiment(cfg, cache);
    auto cfg2 = cfg;
    cfg2.initial.kind = InitialKind::FromFile;
    cfg2.initial.path = (root / "src" / "final_field.csv").string();
    cfg2.integrator.t_end = 0;
    cfg2.output_dir = (root / "copy").string();
    auto m = run_experiment(cfg2, cache);
    CHECK(m.ok);
    CHECK(sha256_file((root / "copy" / "final_field.csv").string()) ==
          sha256_file((root / "src" / "final_field.csv").string()));
    cfg2.spec.d = 4;
    cfg2.spec.alpha = 1.5;
    CHECK_THROWS_AS(run_experiment(cfg2, cache), ConfigError);
    fs::remove_all(root);
}

TEST_CASE("failures leave an ERROR marker") {
    auto root = scratch("err");
    GroundStateCache cache((root / "cache").string());
    auto cfg = small(root / "bad");
    cfg.spec.a = -0.3;
    CHECK_THROWS_AS(run_experiment(cfg, cache), RegimeError);
    CHECK(fs::exists(root / "bad" / "ERROR"));
    CHECK_FALSE(fs::exists(root / "bad" / "manifest.json"));

    // ground state cannot fit in the box
    cfg = small(root / "leak");
    cfg.gs_grid = {256, 3.0};
    cfg.grid = {256, 3.0};
    CHECK_THROWS_AS(run_experiment(cfg, cache), NumericalError);
    CHECK(slurp(root / "leak" / "ERROR").rfind("numerical", 0) == 0);
    fs::remove_all(root);
}

TEST_CASE("sweep") {
    auto root = scratch("sweep");
    GroundStateCache cache((root / "cache").string());
    auto base = small(root / "sw");

    auto none = sweep(base, {"initial.c", {}}, cache);
    CHECK(none.empty());
    auto lines = slurp(root / "sw" / "summary.csv");
    CHECK(std::count(lines.begin(), lines.end(), '\n') == 1);

    auto out = sweep(base, {"c", {"0.5", "0.8"}}, cache, 2);
    REQUIRE(out.size() == 2);
    CHECK(out[0].ok);
    CHECK(out[1].ok);
    CHECK(fs::exists(root / "sw" / "c=0.5" / "manifest.json"));
    lines = slurp(root / "sw" / "summary.csv");
    CHECK(std::count(lines.begin(), lines.end(), '\n') == 3);

    // one failing value does not stop the rest
    out = sweep(base, {"a", {"-0.3", "-0.1"}}, cache, 1);
    CHECK_FALSE(out[0].ok);
    CHECK(out[0].exit_code == 1);
    CHECK(out[1].ok);
    CHECK_THROWS_AS(sweep(base, {"", {"1"}}, cache), ConfigError);
    fs::remove_all(root);
}

TEST_CASE("subcommand documents") {
    auto r = json::parse(regime_json({3, -0.2, 2, -1}));
    CHECK(r["main_theorem_ok"] == true);
    auto root = scratch("docs");
    GroundStateCache cache((root / "cache").string());
    auto cfg = small(root / "x");
    auto cl = json::parse(classify_json(cfg, cache));
    CHECK(cl["verdict"] == "Scatter");
    CHECK(cl.contains("coercivity"));
    auto gsj = json::parse(groundstate_json(cfg, cache, (root / "gs").string()));
    CHECK(gsj.contains("C_a"));
    CHECK(fs::exists(root / "gs" / "Q.csv"));
    cfg.spec.mu = 0;
    CHECK_THROWS_AS(classify_json(cfg, cache), ConfigError);
    fs::remove_all(root);
}
