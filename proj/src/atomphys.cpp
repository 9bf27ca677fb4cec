// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The raq-doa Authors

#include "raqdoa/atomphys.hpp"
#include "raqdoa/constants.hpp"
#include "raqdoa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace raqdoa::atom
{
    namespace c = raqdoa::constants;
    using num::ComplexVector;

    void AtomicSystem::validate() const
    {
        if (!(gamma2 > 0.0))
            throw InvalidInput("AtomicSystem: gamma2 must be positive");
        if (gamma3 < 0.0 || gamma4 < 0.0 || gamma < 0.0 || gamma_c < 0.0)
            throw InvalidInput("AtomicSystem: decay rates must be non-negative");
        if (!(mu12 > 0.0) || !(mu34 > 0.0))
            throw InvalidInput("AtomicSystem: dipole moments must be positive");
        if (!(n0 > 0.0))
            throw InvalidInput("AtomicSystem: atomic density must be positive");
        if (!(upsilon > 0.0 && upsilon <= 1.0))
            throw InvalidInput("AtomicSystem: excitation fraction must lie in (0, 1]");
        if (!(cell_length > 0.0))
            throw InvalidInput("AtomicSystem: cell length must be positive");
    }

    void OpticalRfConfig::validate() const
    {
        if (omega_p < 0.0 || omega_c < 0.0 || omega_l < 0.0)
            throw InvalidInput("OpticalRfConfig: Rabi frequencies must be non-negative");
        if (!(lambda_p > 0.0))
            throw InvalidInput("OpticalRfConfig: probe wavelength must be positive");
        if (!(fwhm_p > 0.0))
            throw InvalidInput("OpticalRfConfig: probe FWHM must be positive");
        if (!(beam_radius > 0.0))
            throw InvalidInput("OpticalRfConfig: beam radius must be positive");
    }

    double varsigma(const AtomicSystem &sys)
    {
        return -2.0 * sys.n0 * sys.mu12 * sys.mu12 / (c::epsilon0 * c::hbar);
    }

    namespace
    {
        constexpr double power_prefactor = c::pi * c::speed_of_light * c::epsilon0 / (8.0 * std::numbers::ln2);

        ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b)
        {
            ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
            for (Eigen::Index i = 0; i < a.rows(); ++i)
                for (Eigen::Index j = 0; j < a.cols(); ++j)
                    out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
            return out;
        }

        // Ladder truncated to the first n levels.
        ComplexMatrix ladder_lindbladian(const AtomicSystem &sys, const OpticalRfConfig &cfg, double omega_rf,
                                         Eigen::Index n)
        {
            const std::array<double, 3> rabi{cfg.omega_p, cfg.omega_c, omega_rf};
            const std::array<double, 3> detuning{cfg.delta_p, cfg.delta_c, cfg.delta_l};

            ComplexMatrix h = ComplexMatrix::Zero(n, n);
            double cumulative = 0.0;
            for (Eigen::Index i = 1; i < n; ++i)
            {
                cumulative += detuning[static_cast<std::size_t>(i - 1)];
                h(i, i) = -cumulative;
                h(i - 1, i) = h(i, i - 1) = -0.5 * rabi[static_cast<std::size_t>(i - 1)];
            }

            std::vector<ComplexMatrix> jumps;
            auto add_jump = [&](Eigen::Index to, Eigen::Index from, double rate)
            {
                if (rate <= 0.0 || from >= n || to >= n)
                    return;
                ComplexMatrix l = ComplexMatrix::Zero(n, n);
                l(to, from) = std::sqrt(rate);
                jumps.push_back(std::move(l));
            };
            add_jump(0, 1, sys.gamma2);
            add_jump(1, 2, sys.gamma3);
            add_jump(2, 3, sys.gamma4);
            for (Eigen::Index i = 1; i < n; ++i)
                add_jump(0, i, sys.gamma);
            if (sys.gamma_c > 0.0 && n > 2)
            {
                ComplexMatrix l = ComplexMatrix::Zero(n, n);
                for (Eigen::Index i = 2; i < n; ++i)
                    l(i, i) = std::sqrt(sys.gamma_c);
                jumps.push_back(std::move(l));
            }

            const ComplexMatrix id = ComplexMatrix::Identity(n, n);
            const Complex minus_i(0.0, -1.0);
            ComplexMatrix sup = minus_i * (kron(id, h) - kron(h.transpose(), id));
            for (const auto &l : jumps)
            {
                const ComplexMatrix ldl = l.adjoint() * l;
                sup += kron(l.conjugate(), l) - 0.5 * kron(id, ldl) - 0.5 * kron(ldl.transpose(), id);
            }
            return sup;
        }

        // Levels reachable from |1> through nonzero drives.
        Eigen::Index active_levels(const OpticalRfConfig &cfg, double omega_rf)
        {
            Eigen::Index n = 1;
            for (double rabi : {cfg.omega_p, cfg.omega_c, omega_rf})
            {
                if (rabi > 0.0)
                    ++n;
                else
                    break;
            }
            return n;
        }
    }

    double probe_amplitude_from_power(double power_w, double fwhm_m)
    {
        if (power_w < 0.0 || !(fwhm_m > 0.0))
            throw InvalidInput("probe_amplitude_from_power: invalid power or FWHM");
        return std::sqrt(power_w / (power_prefactor * fwhm_m * fwhm_m));
    }

    double beam_power(double amp, double fwhm_m)
    {
        return power_prefactor * fwhm_m * fwhm_m * amp * amp;
    }

    ComplexMatrix lindbladian(const AtomicSystem &sys, const OpticalRfConfig &cfg, double omega_rf)
    {
        return ladder_lindbladian(sys, cfg, omega_rf, 4);
    }

    ComplexMatrix lindblad_steady_state(const AtomicSystem &sys, const OpticalRfConfig &cfg, double omega_rf)
    {
        sys.validate();
        cfg.validate();
        if (!(omega_rf >= 0.0))
            throw InvalidInput("lindblad_steady_state: omega_rf must be non-negative");

        ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
        const Eigen::Index n = active_levels(cfg, omega_rf);
        if (n == 1)
        {
            rho(0, 0) = 1.0;
            return rho;
        }
        const ComplexVector x = num::solve_steady_null(ladder_lindbladian(sys, cfg, omega_rf, n));
        rho.topLeftCorner(n, n) = num::unvec(x, n);
        return rho;
    }

    Complex rational_susceptibility(const RationalCoefficients &rc, double omega_rf)
    {
        const double x = omega_rf * omega_rf;
        const double num_a = (rc.a[0] * x + rc.a[1]) * x + rc.a[2];
        const double num_b = (rc.b[0] * x + rc.b[1]) * x + rc.b[2];
        const double den = (rc.c[0] * x + rc.c[1]) * x + rc.c[2];
        if (den == 0.0)
            throw NumericalFailure("rational_susceptibility: vanishing denominator");
        return rc.varsigma * Complex(num_a / den, -num_b / den);
    }

    Complex rational_derivative(const RationalCoefficients &rc, double omega_l)
    {
        const double x = omega_l * omega_l;
        const double den = (rc.c[0] * x + rc.c[1]) * x + rc.c[2];
        if (den == 0.0)
            throw NumericalFailure("rational_derivative: vanishing denominator");
        const double dden = 2.0 * rc.c[0] * x + rc.c[1];
        const double num_a = (rc.a[0] * x + rc.a[1]) * x + rc.a[2];
        const double num_b = (rc.b[0] * x + rc.b[1]) * x + rc.b[2];
        const double re = 2.0 * rc.varsigma * omega_l *
                          ((2.0 * rc.a[0] * x + rc.a[1]) / den - num_a * dden / (den * den));
        const double im = -2.0 * rc.varsigma * omega_l *
                          ((2.0 * rc.b[0] * x + rc.b[1]) / den - num_b * dden / (den * den));
        return {re, im};
    }

    Complex susceptibility(const AtomicSystem &sys, const OpticalRfConfig &cfg, double omega_rf,
                           const std::optional<RationalCoefficients> &rational)
    {
        if (rational)
            return rational_susceptibility(*rational, omega_rf);
        if (!(cfg.omega_p > 0.0))
            throw InvalidInput("susceptibility: probe Rabi frequency must be positive");
        const ComplexMatrix rho = lindblad_steady_state(sys, cfg, omega_rf);
        return varsigma(sys) * rho(0, 1) / cfg.omega_p;
    }

    Complex susceptibility_derivative(const AtomicSystem &sys, const OpticalRfConfig &cfg, double omega_l,
                                      const std::optional<RationalCoefficients> &rational,
                                      const DerivativeOptions &opts)
    {
        if (!(omega_l > 0.0))
            throw InvalidInput("susceptibility_derivative: omega_l must be positive");
        if (rational)
            return rational_derivative(*rational, omega_l);

        auto central = [&](double h)
        {
            return (susceptibility(sys, cfg, omega_l + h) - susceptibility(sys, cfg, omega_l - h)) / (2.0 * h);
        };

        double h = opts.relative_step * omega_l;
        Complex d_h = central(h);
        Complex d_h2 = central(0.5 * h);
        Complex prev = (4.0 * d_h2 - d_h) / 3.0;
        Complex best = prev;
        double best_change = HUGE_VAL;
        for (int it = 0; it < opts.max_halvings; ++it)
        {
            h *= 0.5;
            if (h < 1e-12 * omega_l)
                break;
            d_h = d_h2;
            d_h2 = central(0.5 * h);
            const Complex next = (4.0 * d_h2 - d_h) / 3.0;
            const double scale = std::max(std::abs(next), std::abs(prev));
            const double change = scale > 0.0 ? std::abs(next - prev) / scale : 0.0;
            if (change <= opts.tolerance)
                return next;
            if (change < best_change)
            {
                best_change = change;
                best = prev;
            }
            else if (change > 4.0 * best_change)
                break; // past the rounding floor
            prev = next;
        }
        if (best_change <= opts.accept_tolerance && std::isfinite(std::abs(best)))
            return best;
        throw NumericalFailure("susceptibility_derivative: finite differences did not settle before step underflow");
    }

    ProbeOutput probe_output(const AtomicSystem &sys, const OpticalRfConfig &cfg, Complex chi)
    {
        if (!(sys.cell_length > 0.0) || !(cfg.lambda_p > 0.0))
            throw InvalidInput("probe_output: cell length and probe wavelength must be positive");
        const double k = c::pi * sys.cell_length / cfg.lambda_p;
        ProbeOutput out;
        out.amp = cfg.probe_amp_in * std::exp(-k * chi.imag());
        out.phase = cfg.probe_phase_in + k * chi.real();
        out.power = beam_power(out.amp, cfg.fwhm_p);
        return out;
    }

    double alpha2(const AtomicSystem &sys, const OpticalRfConfig &cfg)
    {
        return c::pi * sys.cell_length * sys.mu34 / (c::hbar * cfg.lambda_p);
    }

    double responsivity(const AtomicSystem &sys, const OpticalRfConfig &cfg, Complex chi_deriv)
    {
        return alpha2(sys, cfg) * std::abs(chi_deriv);
    }

    namespace
    {
        double psi_of(Complex chi_deriv)
        {
            const double mag = std::abs(chi_deriv);
            if (!(mag > 0.0))
                throw UndefinedPhase("detection_phase: chi' vanishes, psi_p undefined");
            return std::acos(std::clamp(chi_deriv.imag() / mag, -1.0, 1.0));
        }
    }

    DetectionPhase detection_phase(double local_phase, Complex chi_deriv, double probe_phase_out)
    {
        const double psi = psi_of(chi_deriv);
        return {c::wrap_angle(local_phase - probe_phase_out + psi), psi};
    }

    double local_phase_for(double target_varphi, Complex chi_deriv, double probe_phase_out)
    {
        return c::wrap_angle(target_varphi + probe_phase_out - psi_of(chi_deriv));
    }
}
