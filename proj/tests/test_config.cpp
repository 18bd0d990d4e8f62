#include <doctest.h>

#include <cmath>

#include "critwave/artifacts.hpp"
#include "critwave/config.hpp"

using namespace critwave;

namespace {

const char* kMinimal =
    "[damping]\n"
    "a0 = 1\n"
    "alpha = -1\n"
    "beta = 0\n"
    "[problem]\n"
    "dim = 1\n"
    "p = 1.5\n"
    "epsilon = 0.1\n";

}  // namespace

TEST_CASE("minimal config fills every default and the manifest echoes them") {
    const RunConfig cfg = parse_config(kMinimal);
    CHECK(cfg.problem.u0.radius == cfg.problem.support_radius);
    CHECK(cfg.cfl == 0.5);
    CHECK(cfg.blowup_threshold == 1e6);
    const std::string manifest = emit_manifest(cfg);
    for (const char* key : {"a0", "alpha", "beta", "dim", "p", "epsilon", "support_radius",
                            "u0_shape", "u0_amplitude", "u0_radius", "u1_shape", "dr", "pad",
                            "t_max", "cfl", "blowup_threshold", "record_dt", "snapshot_dt",
                            "delta0", "seed", "threads", "sweep_eps0", "sweep_count",
                            "sweep_ratio", "m_convention", "dir"}) {
        CAPTURE(key);
        CHECK(manifest.find(std::string(key) + " = ") != std::string::npos);
    }
}

TEST_CASE("manifest round-trips byte for byte") {
    const RunConfig cfg = parse_config(kMinimal);
    const std::string once = emit_manifest(cfg);
    const std::string twice = emit_manifest(parse_config(once));
    CHECK(once == twice);

    // a config with awkward floating-point values
    const RunConfig cfg2 = parse_config(
        "[damping]\nalpha = -0.33333333333333331\n[problem]\np = 1.0000000000000002\n"
        "[controls]\nrecord_dt = 1e-300\n");
    const std::string m2 = emit_manifest(cfg2);
    CHECK(emit_manifest(parse_config(m2)) == m2);
}

TEST_CASE("unknown keys are rejected with their path") {
    try {
        parse_config("[damping]\na0 = 1\nтурбо = 3\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.kind() == ConfigErrorKind::UnknownKey);
    }
    try {
        parse_config("[grid]\ndr = 0.01\nspacing = 0.01\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.kind() == ConfigErrorKind::UnknownKey);
        CHECK(e.key() == "grid.spacing");
    }
}

TEST_CASE("type mismatches name the offending key") {
    try {
        parse_config("[problem]\np = fast\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.kind() == ConfigErrorKind::TypeMismatch);
        CHECK(e.key() == "problem.p");
    }
    try {
        parse_config("[problem]\ndim = 2.5\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.kind() == ConfigErrorKind::TypeMismatch);
    }
}

TEST_CASE("constraint violations name the key and bound") {
    for (const char* bad : {"[damping]\na0 = 0\n", "[problem]\np = 1\n", "[controls]\ncfl = 0.95\n",
                            "[controls]\nsweep_ratio = 1.5\n", "[grid]\ndr = 0\n"}) {
        CAPTURE(bad);
        try {
            parse_config(bad);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.kind() == ConfigErrorKind::ConstraintViolation);
        }
    }
}

TEST_CASE("a blow-up sweep request rejects damping outside its regime") {
    RunConfig cfg = parse_config(
        "[damping]\na0 = 1\nalpha = 0.5\nbeta = 0\n[problem]\ndim = 1\np = 1.5\n");
    try {
        validate_sweep_request(cfg);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.kind() == ConfigErrorKind::ConstraintViolation);
        CHECK(e.key() == "damping.alpha");
    }
    cfg = parse_config("[damping]\nalpha = -1\nbeta = 0.5\n[problem]\np = 1.5\n");
    CHECK_THROWS_AS(validate_sweep_request(cfg), ConfigError);
    cfg = parse_config("[damping]\nalpha = -1\nbeta = 0\n[problem]\np = 2.5\n");
    CHECK_THROWS_AS(validate_sweep_request(cfg), ConfigError);
    cfg = parse_config("[damping]\nalpha = -1\nbeta = 1\n[problem]\np = 2\n");
    CHECK_NOTHROW(validate_sweep_request(cfg));
}

TEST_CASE("double formatting round-trips") {
    for (double v : {1.0 / 3.0, 1e-300, 6.62607015e-34, -0.0, 123456789.123456789}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("content hash matches the blob convention") {
    CHECK(content_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
    CHECK(content_hash("hello world\n") == "3b18e512dba79e4c8300dd08aeb37f8e728b8dad");
}

TEST_CASE("csv writer enforces its column count") {
    CsvWriter csv({"a", "b"});
    csv.add_row({1.0, 2.0});
    CHECK_THROWS_AS(csv.add_row({1.0}), std::invalid_argument);
    CHECK(csv.str() == "a,b\n1,2\n");
}
