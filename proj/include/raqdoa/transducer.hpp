// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The raq-doa Authors
//
// Balanced coherent optical detection front end: per-sensor gain, LO-induced
// phase factors and the PSL/SQL noise coefficient.

#ifndef RAQDOA_TRANSDUCER_HPP
#define RAQDOA_TRANSDUCER_HPP

#include "raqdoa/atomphys.hpp"
#include "raqdoa/geometry.hpp"

#include <optional>

namespace raqdoa::transducer
{
    using num::Complex;

    struct PhotodetectorConfig
    {
        double eta = 0.0;               // quantum efficiency
        double q_charge = 0.0;          // C
        double lna_gain = 0.0;          // linear
        double local_beam_power = 0.0;  // W
        double local_beam_phase = 0.0;  // rad
        double omega_p_angular = 0.0;   // rad/s, probe optical angular frequency

        void validate() const;
    };

    struct LoConfig
    {
        double omega_l = 0.0;  // rad/s
        double f_l = 0.0;      // Hz
        double theta_l1 = 0.0; // rad, LO phase at the reference sensor
        double vartheta = 0.0; // rad, LO direction of arrival
        double delta_l = 0.0;  // rad/s

        void validate() const;
    };

    struct SensorResponse
    {
        double rho = 0.0;     // composite gain
        Complex phi_ref;      // reference-sensor phase factor
        double kappa = 0.0;   // atomic responsivity, rad per V/m
        double varphi = 0.0;  // superimposed phase, rad
    };

    enum class Regime
    {
        psl,
        sql,
        classical
    };
    const char *regime_name(Regime r);

    // alpha1 = eta q / (hbar omega_p)
    double alpha1(const PhotodetectorConfig &pd);

    // rho = 4 alpha1^2 Z0 G P_l P kappa^2
    double sensor_gain(const PhotodetectorConfig &pd, double probe_power_out, double kappa);

    // Phi = (exp(-j(theta_l1 - varphi)) + exp(-j(theta_l1 + varphi))) / 2 = cos(varphi) exp(-j theta_l1).
    Complex reference_phase(const LoConfig &lo, double varphi);

    // Phi_m for sensor m (1-based) with the LO plane-wave gradient factored out of Phi.
    Complex sensor_phase(std::size_t m, const LoConfig &lo, double varphi, const ArrayGeometry &geom);

    // Same quantity from the per-sensor LO phase theta_{l,m} directly.
    Complex sensor_phase_direct(std::size_t m, const LoConfig &lo, double varphi, const ArrayGeometry &geom);

    double sensor_volume(const atom::AtomicSystem &sys, const atom::OpticalRfConfig &cfg);

    struct NoiseInputs
    {
        std::size_t n_samples = 0;
        double bandwidth = 0.0;        // Hz
        double probe_power_out = 0.0;  // W
        double kappa = 0.0;
        double varphi = 0.0;
        double sensor_volume = 0.0;    // m^3
        double gamma2_total = 0.0;     // rad/s, total dephasing for the SQL form
        double photon_energy = 0.0;    // J, hbar omega_p; multiplies the PSL form when enabled
    };

    struct NoiseOptions
    {
        // Include the photon energy in the shot-noise limited form (dimensionally consistent).
        bool psl_photon_energy = true;
        // Return +inf instead of throwing UnboundedNoise for cos(varphi) = 0.
        bool unbounded_as_infinity = false;
        // |cos(varphi)| at or below this counts as zero.
        double cos_floor = 1e-12;
    };

    double noise_coefficient(Regime regime, const NoiseInputs &in, const atom::AtomicSystem &sys,
                             const NoiseOptions &opts = {});

    // sigma^2 = 2 N rho |Phi|^2 varpi
    double noise_power(double varpi, std::size_t n_samples, double rho, Complex phi_ref);

    // Everything the array model needs from one operating point of the receiver.
    struct FrontEnd
    {
        Complex chi;
        Complex chi_deriv;
        atom::ProbeOutput probe;
        double kappa = 0.0;
        double psi = 0.0;
        double local_phase = 0.0;
        SensorResponse response;
    };

    // Evaluates chi, chi', the probe output and the BCOD response at Omega_l. When
    // target_varphi is given the local optical phase is chosen to realise it, otherwise
    // pd.local_beam_phase is used as is.
    FrontEnd evaluate_front_end(const atom::AtomicSystem &sys, const atom::OpticalRfConfig &cfg,
                                const PhotodetectorConfig &pd, const LoConfig &lo,
                                std::optional<double> target_varphi = std::nullopt,
                                const std::optional<atom::RationalCoefficients> &rational = std::nullopt);
}

#endif
