#include <doctest.h>

#include <filesystem>

#include "core/campaign.hpp"
#include "core/config.hpp"
#include "core/errors.hpp"
#include "core/io.hpp"

using namespace rgkit;

namespace {

const char* kConfig = R"({
  "seed": 99,
  "epsilon_grid": [0.1, 0.05],
  "horizon": 0.5,
  "potential": {"kind": "power_law", "s": 4.0},
  "background": {"kind": "maxwellian", "temperature": 0.7},
  "initial": {"velocity": {"kind": "uniform_ball", "radius": 1.5}},
  "tolerances": {"integrator_rtol": 1e-9, "quadrature": 1e-9},
  "overrides": {"cb": 2.5, "r_exponent": 0.2},
  "mc": {"walkers": 100, "trajectories": 10, "seeds": 2, "sample_time": 0.25},
  "bins": {"nx": 1, "nv": 5, "vmax": 2.5},
  "output_dir": "/tmp/rgkit_cfg_test"
})";

}  // namespace

TEST_SUITE_BEGIN("config_io");

TEST_CASE("config parses and exposes derived quantities") {
    const RunConfig rc = RunConfig::from_json_text(kConfig);
    CHECK(rc.seed == 99);
    CHECK(rc.epsilon_grid.size() == 2);
    CHECK(rc.pot_s == 4.0);
    CHECK(rc.background.kind == VelocityDensity::Kind::maxwellian);
    CHECK(rc.initial.velocity.kind == VelocityDensity::Kind::uniform_ball);
    CHECK(rc.cb == 2.5);
    CHECK(rc.r_exponent == 0.2);
    const SimConfig s = rc.sim(0.1);
    CHECK(s.R() == doctest::Approx(std::pow(0.1, -0.2)));
    CHECK(s.cb == 2.5);
    auto p = rc.potential();
    CHECK(p->psi(1.0) == doctest::Approx(1.0));
    auto pR = rc.potential_truncated(0.1);
    CHECK(*pR->cutoff == doctest::Approx(std::pow(0.1, -0.2)));
}

TEST_CASE("config rejects malformed input with a config error") {
    CHECK_THROWS_AS(RunConfig::from_json_text("{nope"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json_text(R"({"potential":{"kind":"bogus"}})"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json_text(R"({"potential":{"kind":"power_law","s":1.5}})"),
                    ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json_text(R"({"background":{"kind":"maxwellian",
        "temperature":-1.0}})"),
                    ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json_text(R"({"epsilon_grid":[0.5],
        "overrides":{"r_exponent":0.95}})"),
                    ConfigError);
}

TEST_CASE("canonical json is stable and fingerprinted") {
    const RunConfig a = RunConfig::from_json_text(kConfig);
    const RunConfig b = RunConfig::from_json_text(a.canonical_json());
    CHECK(a.canonical_json() == b.canonical_json());
    CHECK(fingerprint(a.canonical_json()) == fingerprint(b.canonical_json()));
    CHECK(fingerprint("x") != fingerprint("y"));
}

TEST_CASE("csv output renders with full precision") {
    namespace fs = std::filesystem;
    const fs::path p = fs::temp_directory_path() / "rgkit_csv_test" / "t.csv";
    {
        CsvWriter csv(p, {"a", "b"});
        csv.row({1.0 / 3.0, 2.0});
    }
    const std::string text = read_text(p);
    CHECK(text.find("a,b\n") == 0);
    CHECK(text.find("0.33333333333333331") != std::string::npos);
}

TEST_CASE("substream derivation separates purposes, replicas and items") {
    CHECK(substream(rng_domain::kWalker, 0, 1) != substream(rng_domain::kWalker, 0, 2));
    CHECK(substream(rng_domain::kWalker, 0, 1) != substream(rng_domain::kWalker, 1, 1));
    CHECK(substream(rng_domain::kWalker, 0, 1) != substream(rng_domain::kBackground, 0, 1));
}

TEST_SUITE_END();
