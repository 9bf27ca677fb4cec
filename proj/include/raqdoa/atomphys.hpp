// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The raq-doa Authors
//
// Four-level ladder |1> -> |2> -> |3> -> |4> driven by probe, coupling and RF fields.
// The susceptibility seen by the probe is obtained by a numerical Lindblad
// steady-state solve, or from a caller-supplied rational form in Omega_RF^2.

#ifndef RAQDOA_ATOMPHYS_HPP
#define RAQDOA_ATOMPHYS_HPP

#include "raqdoa/numkernel.hpp"

#include <array>
#include <optional>

namespace raqdoa::atom
{
    using num::Complex;
    using num::ComplexMatrix;

    // Atom and vapour-cell constants, SI units (rates in rad/s).
    struct AtomicSystem
    {
        double gamma2 = 0.0;      // decay |2> -> |1>
        double gamma3 = 0.0;      // decay |3> -> |2>
        double gamma4 = 0.0;      // decay |4> -> |3>
        double gamma = 0.0;       // transit relaxation of |2>,|3>,|4> back to |1>
        double gamma_c = 0.0;     // collisional dephasing of the Rydberg levels
        double mu12 = 0.0;        // C m
        double mu34 = 0.0;        // C m
        double n0 = 0.0;          // atoms / m^3
        double upsilon = 0.0;     // excitation fraction
        double cell_length = 0.0; // m

        void validate() const;
    };

    // Drive parameters. Rabi frequencies and detunings in rad/s.
    struct OpticalRfConfig
    {
        double omega_p = 0.0;
        double omega_c = 0.0;
        double omega_l = 0.0;
        double delta_p = 0.0;
        double delta_c = 0.0;
        double delta_l = 0.0;
        double lambda_p = 0.0;       // m
        double f_p = 0.0;            // Hz
        double probe_amp_in = 0.0;   // V/m
        double probe_phase_in = 0.0; // rad
        double fwhm_p = 0.0;         // m
        double beam_radius = 0.0;    // m

        void validate() const;
    };

    // chi = varsigma * [(A1 x^2 + A2 x + A3) - j (B1 x^2 + B2 x + B3)] / (C1 x^2 + C2 x + C3),
    // x = Omega_RF^2.
    struct RationalCoefficients
    {
        std::array<double, 3> a{};
        std::array<double, 3> b{};
        std::array<double, 3> c{};
        double varsigma = 0.0;
    };

    // varsigma = -2 N0 mu12^2 / (eps0 hbar), units 1/s.
    double varsigma(const AtomicSystem &sys);

    // Probe input amplitude from input power and FWHM (inverse of the output-power relation).
    double probe_amplitude_from_power(double power_w, double fwhm_m);

    // Column-stacked Lindbladian of the full four-level ladder (16 x 16).
    ComplexMatrix lindbladian(const AtomicSystem &sys, const OpticalRfConfig &cfg, double omega_rf);

    // 4 x 4 steady-state density matrix, trace 1, Hermitian, PSD.
    ComplexMatrix lindblad_steady_state(const AtomicSystem &sys, const OpticalRfConfig &cfg, double omega_rf);

    Complex susceptibility(const AtomicSystem &sys, const OpticalRfConfig &cfg, double omega_rf,
                           const std::optional<RationalCoefficients> &rational = std::nullopt);

    // d chi / d Omega_RF at Omega_RF = omega_l. Richardson-refined central differences,
    // halving the step until two estimates agree to `tolerance`. When rounding stops the
    // estimates from settling, the best pair is accepted if it agrees to `accept_tolerance`.
    struct DerivativeOptions
    {
        double relative_step = 1e-4;
        double tolerance = 1e-8;
        double accept_tolerance = 1e-5;
        int max_halvings = 12;
    };
    Complex susceptibility_derivative(const AtomicSystem &sys, const OpticalRfConfig &cfg, double omega_l,
                                      const std::optional<RationalCoefficients> &rational = std::nullopt,
                                      const DerivativeOptions &opts = {});

    // Closed-form derivative of the rational form.
    Complex rational_derivative(const RationalCoefficients &rc, double omega_l);
    Complex rational_susceptibility(const RationalCoefficients &rc, double omega_rf);

    struct ProbeOutput
    {
        double amp = 0.0;   // V/m
        double phase = 0.0; // rad, not wrapped
        double power = 0.0; // W
    };
    ProbeOutput probe_output(const AtomicSystem &sys, const OpticalRfConfig &cfg, Complex chi);

    // Power of a Gaussian probe beam from its field amplitude.
    double beam_power(double amp, double fwhm_m);

    // alpha2 = pi l mu34 / (hbar lambda_p)
    double alpha2(const AtomicSystem &sys, const OpticalRfConfig &cfg);

    // kappa = alpha2 |chi'|
    double responsivity(const AtomicSystem &sys, const OpticalRfConfig &cfg, Complex chi_deriv);

    struct DetectionPhase
    {
        double varphi = 0.0; // superimposed phase, wrapped to (-pi, pi]
        double psi = 0.0;    // arccos(Im chi' / |chi'|)
    };
    DetectionPhase detection_phase(double local_phase, Complex chi_deriv, double probe_phase_out);

    // Local optical beam phase that produces the requested superimposed phase.
    double local_phase_for(double target_varphi, Complex chi_deriv, double probe_phase_out);
}

#endif
