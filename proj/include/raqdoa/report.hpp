// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The raq-doa Authors

#ifndef RAQDOA_REPORT_HPP
#define RAQDOA_REPORT_HPP

#include "raqdoa/config.hpp"
#include "raqdoa/harness.hpp"

#include <string>

namespace raqdoa::report
{
    inline constexpr const char *sweep_header = "sweep_var,value,estimator,regime,mse,trials,excluded,seed";

    // Shortest representation that parses back to the same double; "inf", "-inf", "nan".
    std::string format_double(double v);

    std::string sweep_csv(const harness::SweepTable &table);

    // Log-scale line plot of every estimator/regime series.
    std::string sweep_svg(const harness::SweepTable &table);

    // chi, chi', kappa, varphi, rho, Phi and both noise coefficients over the physics grid.
    std::string physics_csv(const harness::ExperimentConfig &cfg, const config::PhysicsGrid &grid);
}

#endif
