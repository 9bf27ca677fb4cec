// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The raq-doa Authors
//
// raq-doa: run the DOA sweeps or inspect the receiver physics.
//
//   raq-doa sweep <power|sensors|targets|samples|doa|phase> --config <file>
//           [--out <dir>] [--seed <u64>] [--trials <n>] [--threads <n>] [--plot]
//   raq-doa physics --config <file> [--out <dir>]
//
// Exit status: 0 success, 2 configuration or usage error, 3 numerical failure,
// 4 output error. RAQ_DOA_OUT sets the default output directory.

#include "raqdoa/config.hpp"
#include "raqdoa/errors.hpp"
#include "raqdoa/harness.hpp"
#include "raqdoa/report.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using raqdoa::config::Json;

namespace
{
    constexpr int exit_config = 2;
    constexpr int exit_numerical = 3;
    constexpr int exit_output = 4;

    struct OutputError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    void write_file(const fs::path &path, const std::string &text)
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out || !(out << text) || !out.flush())
            throw OutputError("cannot write " + path.string());
    }

    fs::path prepare_out(const std::string &dir)
    {
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec)
            throw OutputError("cannot create output directory " + dir + ": " + ec.message());
        return fs::path(dir);
    }

    Json manifest(const std::string &command, const std::string &config_path, const std::string &out_dir,
                  const Json &tree, const std::vector<std::string> &warnings)
    {
        Json m;
        m["command"] = command;
        m["config_path"] = config_path;
        m["artifact_version"] = RAQDOA_VERSION;
        m["master_seed"] = tree["experiment"]["master_seed"];
        m["output_dir"] = out_dir;
        m["warnings"] = warnings;
        m["resolved"] = tree;
        return m;
    }

    int run_sweep(const std::string &name, const std::string &config_path, const std::string &out_dir,
                  std::optional<std::uint64_t> seed, std::optional<std::size_t> trials,
                  std::optional<std::size_t> threads, bool plot)
    {
        const auto variable = raqdoa::harness::variable_from_command(name);
        Json tree = raqdoa::config::load_tree(config_path);
        raqdoa::config::select_sweep(tree, variable);
        if (seed)
            tree["experiment"]["master_seed"] = *seed;
        if (trials)
            tree["experiment"]["trials"] = *trials;
        const raqdoa::harness::ExperimentConfig cfg = raqdoa::config::resolve(tree);
        Json snapshot = tree;
        raqdoa::harness::ExperimentConfig run_cfg = cfg;
        if (threads)
            run_cfg.threads = *threads; // affects scheduling only, not results

        const raqdoa::harness::SweepTable table = raqdoa::harness::run_sweep(run_cfg);
        for (const auto &w : table.warnings)
            std::cerr << "raq-doa: warning: " << w << '\n';

        const fs::path out = prepare_out(out_dir);
        write_file(out / (name + ".csv"), raqdoa::report::sweep_csv(table));
        if (plot)
            write_file(out / (name + ".svg"), raqdoa::report::sweep_svg(table));
        write_file(out / "manifest.json",
                   manifest("sweep " + name, config_path, out_dir, snapshot, table.warnings).dump(2) + "\n");
        std::cout << (out / (name + ".csv")).string() << '\n';
        return 0;
    }

    int run_physics(const std::string &config_path, const std::string &out_dir)
    {
        const Json tree = raqdoa::config::load_tree(config_path);
        const auto cfg = raqdoa::config::resolve(tree);
        const auto grid = raqdoa::config::resolve_physics(tree);
        const std::string csv = raqdoa::report::physics_csv(cfg, grid);
        const fs::path out = prepare_out(out_dir);
        write_file(out / "physics.csv", csv);
        write_file(out / "manifest.json", manifest("physics", config_path, out_dir, tree, {}).dump(2) + "\n");
        std::cout << (out / "physics.csv").string() << '\n';
        return 0;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Rydberg atomic ULA direction-of-arrival simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", RAQDOA_VERSION);

    const char *env_out = std::getenv("RAQ_DOA_OUT");
    const std::string default_out = env_out && *env_out ? env_out : "out";

    std::string sweep_name, config_path, out_dir = default_out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials, threads;
    bool plot = false;

    auto *sweep = app.add_subcommand("sweep", "Monte Carlo MSE sweep");
    sweep->add_option("name", sweep_name, "power, sensors, targets, samples, doa or phase")
        ->required()
        ->check(CLI::IsMember({"power", "sensors", "targets", "samples", "doa", "phase"}));
    sweep->add_option("--config", config_path, "configuration file (YAML or a run manifest)")->required();
    sweep->add_option("--out", out_dir, "output directory");
    sweep->add_option("--seed", seed, "master seed");
    sweep->add_option("--trials", trials, "trials per grid point")->check(CLI::PositiveNumber);
    sweep->add_option("--threads", threads, "worker threads, 0 for all cores");
    sweep->add_flag("--plot", plot, "also write an SVG plot");

    std::string physics_config, physics_out = default_out;
    auto *physics = app.add_subcommand("physics", "susceptibility and front-end inspection table");
    physics->add_option("--config", physics_config, "configuration file")->required();
    physics->add_option("--out", physics_out, "output directory");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForVersion &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return exit_config;
    }

    try
    {
        if (*sweep)
            return run_sweep(sweep_name, config_path, out_dir, seed, trials, threads, plot);
        return run_physics(physics_config, physics_out);
    }
    catch (const raqdoa::harness::GridPointError &e)
    {
        std::cerr << "raq-doa: " << (e.input_error() ? "invalid configuration at " : "numerical failure at ")
                  << e.what() << '\n';
        return e.input_error() ? exit_config : exit_numerical;
    }
    catch (const raqdoa::InvalidInput &e)
    {
        std::cerr << "raq-doa: " << e.what() << '\n';
        return exit_config;
    }
    catch (const OutputError &e)
    {
        std::cerr << "raq-doa: " << e.what() << '\n';
        return exit_output;
    }
    catch (const std::exception &e)
    {
        std::cerr << "raq-doa: numerical failure: " << e.what() << '\n';
        return exit_numerical;
    }
}
