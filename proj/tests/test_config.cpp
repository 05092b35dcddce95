#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "json.hpp"

#include "nlslab/checksum.hpp"
#include "nlslab/config.hpp"
#include "nlslab/error.hpp"
#include "nlslab/field_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <unistd.h>

using namespace nlslab;
namespace fs = std::filesystem;

namespace {

const char* kBasic = R"(# comment line
schema_version = 1
name = "demo"   # trailing comment

[spec]
d = 3
a = -0.2
alpha = 2
mu = -1

[grid]
N = 512
R_max = 25

[integrator]
dt = 5e-3
t_end = 0.5
adaptive = false
split = "pointwise"

[initial]
kind = "groundstate"
c = 0.9

[sweep]
parameter = "initial.c"
values = [0.8, 0.9, "1.1"]
)";

fs::path scratch(const std::string& tag) {
    auto p = fs::temp_directory_path() / ("nlslab-test-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

} // namespace

TEST_CASE("parse the sectioned format") {
    auto c = parse_config(kBasic);
    CHECK(c.name == "demo");
    CHECK(c.spec.d == 3);
    CHECK(c.spec.a == -0.2);
    CHECK(c.spec.mu == -1);
    CHECK(c.grid.n == 512);
    CHECK(c.grid.rmax == 25.0);
    CHECK(c.integrator.dt == 5e-3);
    CHECK_FALSE(c.integrator.adaptive);
    CHECK(c.integrator.split == SplitMode::PointwisePotential);
    CHECK(c.initial.kind == InitialKind::GroundStateMultiple);
    CHECK(c.initial.c == 0.9);
    CHECK(c.sweep.parameter == "initial.c");
    REQUIRE(c.sweep.values.size() == 3);
    CHECK(c.sweep.values[2] == "1.1");
    // untouched keys keep their defaults
    CHECK(c.gs_grid.n == 4096);
    CHECK(c.gs_grid.rmax == 20.0);
}

TEST_CASE("JSON echo parses back to the same config") {
    auto c = parse_config(kBasic);
    const std::string j = config_to_json(c);
    auto back = parse_config(j);
    CHECK(config_to_json(back) == j);
    auto doc = nlohmann::json::parse(j);
    CHECK(doc["spec"]["a"] == -0.2);
    CHECK(doc["schema_version"] == 1);
    CHECK(doc["integrator"]["split"] == "pointwise");
}

TEST_CASE("aliases and overrides") {
    auto c = parse_config("schema_version = 1\n");
    set_config_value(c, "c", "1.1");
    set_config_value(c, "a", "-0.1");
    set_config_value(c, "mu", "1");
    set_config_value(c, "d", "4");
    set_config_value(c, "alpha", "1.5");
    set_config_value(c, "integrator.tol", "1e-5");
    CHECK(c.initial.c == 1.1);
    CHECK(c.spec.a == -0.1);
    CHECK(c.spec.mu == 1);
    CHECK(c.spec.d == 4);
    CHECK(c.spec.alpha == 1.5);
    CHECK(c.integrator.tol == 1e-5);
    CHECK_THROWS_AS(set_config_value(c, "nonsense", "1"), ConfigError);
    CHECK_THROWS_AS(set_config_value(c, "a", "abc"), ConfigError);
    CHECK_THROWS_AS(set_config_value(c, "grid.N", "2.5"), ConfigError);
    CHECK_THROWS_AS(set_config_value(c, "mu", "2"), ConfigError);
    CHECK_THROWS_AS(set_config_value(c, "integrator.adaptive", "maybe"), ConfigError);
    auto keys = config_keys();
    CHECK(std::find(keys.begin(), keys.end(), "spec.a") != keys.end());
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse_config("[spec]\nd = 3\n"), ConfigError);             // no version
    CHECK_THROWS_AS(parse_config("schema_version = 2\n"), ConfigError);        // future version
    CHECK_THROWS_AS(parse_config("schema_version = 1\n[spec]\nb = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("{\"schema_version\": 1, \"spec\": "), ConfigError);
    CHECK_THROWS_AS(parse_config("schema_version = 1\n[grid]\nN = 4\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("schema_version = 1\n[integrator]\nt_end = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("schema_version = 1\n[initial]\nkind = file\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("schema_version = 1\n[initial]\nkind = soliton\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/cfg.toml"), ConfigError);
    auto c = parse_config("{\"schema_version\": 1, \"spec\": {\"a\": -0.1}, \"sweep\": {\"values\": [1, 2]}}");
    CHECK(c.spec.a == -0.1);
    CHECK(c.sweep.values.size() == 2);
}

TEST_CASE("presets load") {
    for (const auto& e : fs::directory_iterator(NLSLAB_PRESET_DIR)) {
        CAPTURE(e.path().string());
        auto c = load_config(e.path().string());
        CHECK(c.schema_version == 1);
    }
}

TEST_CASE("field files round trip bit for bit") {
    auto dir = scratch("field");
    auto g = make_grid(4, 300, 7.5);
    std::mt19937 rng(5);
    std::normal_distribution<double> N01;
    RadialField u(g);
    for (auto& z : u.u) z = cplx(N01(rng), N01(rng)) * 1e-7;
    const std::string p = (dir / "u.csv").string();
    write_field(p, u, {4, -0.5, 1.5, 1}, 0.125);
    FieldHeader h;
    auto w = read_field(p, &h);
    CHECK(h.spec.d == 4);
    CHECK(h.spec.a == -0.5);
    CHECK(h.n == 300);
    CHECK(h.rmax == 7.5);
    CHECK(h.t == 0.125);
    for (int j = 0; j < g->n; ++j) CHECK(w.u[j] == u.u[j]);
    CHECK_THROWS_AS(read_field_csv(p, make_grid(4, 301, 7.5)), ConfigError);
    CHECK_THROWS_AS(read_field((dir / "missing.csv").string()), IoError);
    fs::remove_all(dir);
}

TEST_CASE("sha256") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
