// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The raq-doa Authors

#include "cli_util.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <complex>

using cli::fs::path;

namespace
{
    const std::string header = "sweep_var,value,estimator,regime,mse,trials,excluded,seed";

    std::string q(const path &p) { return "'" + p.string() + "'"; }
}

TEST_CASE("sweep power writes the fixed CSV schema and a manifest")
{
    const path w = cli::work_dir("power");
    const auto r = cli::run("sweep power --config " + q(cli::config_path("default.yaml")) + " --trials 4 --out " +
                                q(w / "out") + " --plot",
                            w);
    REQUIRE(r.status == 0);
    const std::string csv = cli::slurp(w / "out" / "power.csv");
    CHECK(csv.substr(0, csv.find('\n')) == header);
    CHECK(csv.find('\r') == std::string::npos);
    const auto rows = cli::parse_csv(csv);
    REQUIRE(rows.size() > 1);
    for (std::size_t i = 1; i < rows.size(); ++i)
    {
        REQUIRE(rows[i].size() == 8);
        CHECK(rows[i][0] == "reflected_power");
        const bool nominal = rows[i][2].find("_nominal") != std::string::npos;
        CHECK(rows[i][5] == (nominal ? "1" : "4"));
    }
    CHECK(cli::fs::exists(w / "out" / "power.svg"));
    const auto m = nlohmann::json::parse(cli::slurp(w / "out" / "manifest.json"));
    for (const char *key : {"command", "config_path", "artifact_version", "master_seed", "output_dir", "resolved"})
        CHECK(m.contains(key));
    CHECK(m["resolved"]["experiment"]["trials"] == 4);
}

TEST_CASE("sweep phase marks the PSL divergence with inf")
{
    const path w = cli::work_dir("phase");
    const auto r = cli::run("sweep phase --config " + q(cli::config_path("default.yaml")) + " --trials 3 --out " +
                                q(w / "out"),
                            w);
    REQUIRE(r.status == 0);
    const auto rows = cli::parse_csv(cli::slurp(w / "out" / "phase.csv"));
    bool saw = false;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i][3] == "psl" && (rows[i][1] == "90" || rows[i][1] == "-90"))
        {
            CHECK(rows[i][4] == "inf");
            saw = true;
        }
        else
            CHECK(rows[i][4] != "inf");
    CHECK(saw);
}

TEST_CASE("replaying a manifest reproduces the CSV byte for byte")
{
    const path w = cli::work_dir("replay");
    auto r = cli::run("sweep samples --config " + q(cli::config_path("default.yaml")) + " --trials 5 --seed 99 --out " +
                          q(w / "a"),
                      w);
    REQUIRE(r.status == 0);
    r = cli::run("sweep samples --config " + q(w / "a" / "manifest.json") + " --out " + q(w / "b") + " --threads 3", w);
    REQUIRE(r.status == 0);
    const std::string a = cli::slurp(w / "a" / "samples.csv");
    CHECK(!a.empty());
    CHECK(a == cli::slurp(w / "b" / "samples.csv"));
    CHECK(a.find(",99\n") != std::string::npos);
}

TEST_CASE("output directory defaults to the environment variable")
{
    const path w = cli::work_dir("env");
    const auto r = cli::run("sweep targets --config " + q(cli::config_path("default.yaml")) + " --trials 2", w,
                            "RAQ_DOA_OUT=" + q(w / "envout"));
    REQUIRE(r.status == 0);
    CHECK(cli::fs::exists(w / "envout" / "targets.csv"));
}

TEST_CASE("configuration errors exit with status 2 and name the line")
{
    const path w = cli::work_dir("errors");
    cli::spit(w / "bad.yaml", "array:\n  sensors: 10\n  bogus: 3\n");
    auto r = cli::run("sweep power --config " + q(w / "bad.yaml") + " --out " + q(w / "o"), w);
    CHECK(r.status == 2);
    CHECK(r.err.find("bad.yaml:3") != std::string::npos);

    cli::spit(w / "syntax.yaml", "scene:\n  targets: [1,\n");
    r = cli::run("sweep power --config " + q(w / "syntax.yaml") + " --out " + q(w / "o"), w);
    CHECK(r.status == 2);
    CHECK(r.err.find("syntax.yaml:") != std::string::npos);

    r = cli::run("sweep nonsense --config " + q(cli::config_path("default.yaml")), w);
    CHECK(r.status == 2);
    r = cli::run("sweep power --config " + q(w / "missing.yaml"), w);
    CHECK(r.status == 2);

    // K >= M at one grid point
    cli::spit(w / "grid.yaml", "array:\n  sensors: 4\ngrids:\n  targets: [1, 4]\nexperiment:\n  trials: 2\n");
    r = cli::run("sweep targets --config " + q(w / "grid.yaml") + " --out " + q(w / "o"), w);
    CHECK(r.status == 2);
    CHECK(r.err.find("k_targets = 4") != std::string::npos);
}

TEST_CASE("numerical failures exit with status 3 and name the grid point")
{
    const path w = cli::work_dir("numerical");
    cli::spit(w / "rational.yaml", "optics:\n  rational_a: [0, 0, 1]\n  rational_b: [0, 0, 1]\n"
                                   "  rational_c: [0, 0, 0]\nexperiment:\n  trials: 2\ngrids:\n  power_dbm: [5]\n");
    const auto r = cli::run("sweep power --config " + q(w / "rational.yaml") + " --out " + q(w / "o"), w);
    CHECK(r.status == 3);
    CHECK(r.err.find("reflected_power = 5") != std::string::npos);
}

TEST_CASE("unwritable output exits with status 4")
{
    const path w = cli::work_dir("output");
    cli::spit(w / "file", "x");
    const auto r = cli::run("sweep power --config " + q(cli::config_path("default.yaml")) + " --trials 1 --out " +
                                q(w / "file" / "sub"),
                            w);
    CHECK(r.status == 4);
}

TEST_CASE("physics table")
{
    const path w = cli::work_dir("physics");
    const auto r = cli::run("physics --config " + q(cli::config_path("default.yaml")) + " --out " + q(w / "o"), w);
    REQUIRE(r.status == 0);
    const auto rows = cli::parse_csv(cli::slurp(w / "o" / "physics.csv"));
    REQUIRE(rows.size() > 2);
    const auto &h = rows[0];
    auto col = [&](const std::string &name) {
        const auto it = std::find(h.begin(), h.end(), name);
        REQUIRE(it != h.end());
        return static_cast<std::size_t>(it - h.begin());
    };
    const std::size_t im = col("chi_im"), dre = col("dchi_re"), dim = col("dchi_im"), a2 = col("alpha2"),
                      kap = col("kappa"), dp = col("delta_p_mhz"), dc = col("delta_c_mhz"), dl = col("delta_l_mhz");
    bool operating = false;
    for (std::size_t i = 1; i < rows.size(); ++i)
    {
        const auto &row = rows[i];
        CHECK(std::stod(row[im]) >= 0.0);
        const double kappa = std::stod(row[kap]);
        const double expect = std::stod(row[a2]) * std::abs(std::complex<double>(std::stod(row[dre]), std::stod(row[dim])));
        CHECK(std::abs(kappa - expect) <= 1e-12 * std::abs(expect));
        if (std::stod(row[dp]) == -0.9133 && std::stod(row[dc]) == 1.809 && std::stod(row[dl]) == -0.0075)
            operating = true;
    }
    CHECK(operating);
}
