// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The raq-doa Authors

#ifndef RAQDOA_GEOMETRY_HPP
#define RAQDOA_GEOMETRY_HPP

#include <cstddef>

namespace raqdoa
{
    // Uniform linear array of M sensors along one axis.
    struct ArrayGeometry
    {
        std::size_t m_sensors = 0;
        double spacing = 0.0;            // m
        double carrier_wavelength = 0.0; // m
        double carrier_freq = 0.0;       // Hz

        // d = lambda / 2 at the given carrier.
        static ArrayGeometry half_wavelength(std::size_t m, double carrier_freq_hz);
        static ArrayGeometry with_spacing(std::size_t m, double carrier_freq_hz, double spacing_wavelengths);

        // 2 pi d / lambda
        double phase_per_sensor() const;
        void validate() const;
    };
}

#endif
