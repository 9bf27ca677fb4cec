// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The raq-doa Authors
//
// Experiment configuration: a YAML document overlaid on built-in defaults.
// Every physical key carries its unit in the name. Unknown keys and type
// mismatches are rejected with the offending line.

#ifndef RAQDOA_CONFIG_HPP
#define RAQDOA_CONFIG_HPP

#include "raqdoa/errors.hpp"
#include "raqdoa/harness.hpp"

#include <json.hpp>

#include <array>

#include <string>
#include <vector>

namespace raqdoa::config
{
    using Json = nlohmann::ordered_json;

    class ConfigError : public InvalidInput
    {
      public:
        ConfigError(const std::string &source, int line, const std::string &msg);
        int line() const { return line_; }

      private:
        int line_;
    };

    // Defaults for every recognised key, in user units.
    Json default_tree();

    // Parses YAML (JSON included) and overlays it on the defaults. A run manifest is
    // accepted as well: its "resolved" member is used as the document.
    Json load_tree(const std::string &path);
    Json load_tree_string(const std::string &text, const std::string &source = "<string>");

    // Selects the sweep and writes the chosen variable and grid back into the tree,
    // so that the tree alone reproduces the run.
    void select_sweep(Json &tree, harness::SweepVariable variable);

    // User units to the SI experiment description.
    harness::ExperimentConfig resolve(const Json &tree);

    struct PhysicsGrid
    {
        std::vector<double> rf_rabi_mhz;                   // Omega_RF / 2 pi
        std::vector<std::array<double, 3>> detunings_mhz; // probe, coupling, RF; Delta / 2 pi
    };
    PhysicsGrid resolve_physics(const Json &tree);
}

#endif
