// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The raq-doa Authors

#ifndef RAQDOA_CONSTANTS_HPP
#define RAQDOA_CONSTANTS_HPP

#include <cmath>
#include <numbers>

// CODATA 2018 values, SI units.
namespace raqdoa::constants
{
    inline constexpr double pi = std::numbers::pi;
    inline constexpr double two_pi = 2.0 * std::numbers::pi;

    inline constexpr double hbar = 1.054571817e-34;         // J s
    inline constexpr double speed_of_light = 299792458.0;   // m/s
    inline constexpr double epsilon0 = 8.8541878128e-12;    // F/m
    inline constexpr double z0 = 376.730313668;             // Ohm, free-space impedance
    inline constexpr double elementary_charge = 1.602176634e-19; // C
    inline constexpr double boltzmann = 1.380649e-23;       // J/K
    inline constexpr double bohr_radius = 5.29177210903e-11; // m
    inline constexpr double ea0 = elementary_charge * bohr_radius; // C m

    inline constexpr double deg = pi / 180.0;

    inline double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

    // Wrap to (-pi, pi].
    inline double wrap_angle(double a)
    {
        double r = std::remainder(a, two_pi); // [-pi, pi]
        if (r <= -pi)
            r += two_pi;
        return r;
    }
}

#endif
