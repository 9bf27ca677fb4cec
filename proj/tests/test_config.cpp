// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The raq-doa Authors

#include "raqdoa/config.hpp"
#include "raqdoa/constants.hpp"
#include "raqdoa/report.hpp"

#include <doctest.h>

using namespace raqdoa;

TEST_CASE("defaults resolve to SI units")
{
    const auto cfg = config::resolve(config::default_tree());
    CHECK(cfg.atom.gamma2 == doctest::Approx(constants::two_pi * 5.2e6));
    CHECK(cfg.atom.n0 == doctest::Approx(4.89e16));
    CHECK(cfg.atom.cell_length == doctest::Approx(0.1));
    CHECK(cfg.atom.upsilon == doctest::Approx(0.01));
    CHECK(cfg.lo.f_l == doctest::Approx(6.9458e9));
    CHECK(cfg.scene.bandwidth == doctest::Approx(100e3));
    CHECK(cfg.lo.vartheta == doctest::Approx(30.0 * constants::deg));
    CHECK(cfg.m_sensors == 10);
    CHECK(cfg.trials == 500);
    CHECK_FALSE(cfg.rational.has_value());
}

TEST_CASE("overlay replaces only the given keys")
{
    const auto t = config::load_tree_string("array:\n  sensors: 12\nscene:\n  reflected_power_dbm: 10.5\n");
    CHECK(t["array"]["sensors"].get<int>() == 12);
    CHECK(t["scene"]["reflected_power_dbm"].get<double>() == 10.5);
    CHECK(t["atom"]["gamma2_mhz"].get<double>() == 5.2);
    const auto cfg = config::resolve(t);
    CHECK(cfg.m_sensors == 12);
}

TEST_CASE("unknown keys and type errors carry the line")
{
    try
    {
        config::load_tree_string("array:\n  sensors: 8\n  bogus: 1\n", "f.yaml");
        FAIL("expected ConfigError");
    }
    catch (const config::ConfigError &e)
    {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("f.yaml:3") != std::string::npos);
        CHECK(std::string(e.what()).find("array.bogus") != std::string::npos);
    }
    try
    {
        config::load_tree_string("scene:\n  targets: many\n", "g.yaml");
        FAIL("expected ConfigError");
    }
    catch (const config::ConfigError &e)
    {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(config::load_tree_string("scene: [1, 2\n"), config::ConfigError);
    CHECK_THROWS_AS(config::load_tree_string("bogus_section: 1\n"), config::ConfigError);
}

TEST_CASE("manifest documents are accepted through their resolved member")
{
    config::Json m;
    m["command"] = "sweep power";
    m["resolved"] = config::default_tree();
    m["resolved"]["array"]["sensors"] = 7;
    const auto t = config::load_tree_string(m.dump());
    CHECK(config::resolve(t).m_sensors == 7);
}

TEST_CASE("selecting a sweep writes the grid into the tree")
{
    auto t = config::default_tree();
    config::select_sweep(t, harness::SweepVariable::n_samples);
    const auto cfg = config::resolve(t);
    CHECK(cfg.sweep.variable == harness::SweepVariable::n_samples);
    CHECK(cfg.sweep.grid == std::vector<double>{10, 20, 40, 80, 160, 320});
    CHECK(t["sweep"]["variable"] == "n_samples");
}

TEST_CASE("invalid values are rejected")
{
    CHECK_THROWS_AS(config::resolve(config::load_tree_string("experiment:\n  trials: 0\n")), InvalidInput);
    CHECK_THROWS_AS(config::resolve(config::load_tree_string("atom:\n  excitation_fraction: 1.5\n")), InvalidInput);
    CHECK_THROWS_AS(config::resolve(config::load_tree_string("sweep:\n  grid: [3, 1, 2]\n")), InvalidInput);
}

TEST_CASE("number formatting round-trips")
{
    CHECK(report::format_double(0.1) == "0.1");
    CHECK(report::format_double(HUGE_VAL) == "inf");
    CHECK(report::format_double(-HUGE_VAL) == "-inf");
    CHECK(report::format_double(std::nan("")) == "nan");
    const double x = 1.0 / 3.0;
    CHECK(std::stod(report::format_double(x)) == x);
}
