// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The raq-doa Authors

#include "raqdoa/transducer.hpp"
#include "raqdoa/constants.hpp"
#include "raqdoa/errors.hpp"

#include <cmath>
#include <limits>

namespace raqdoa::transducer
{
    namespace c = raqdoa::constants;

    void PhotodetectorConfig::validate() const
    {
        if (!(eta > 0.0 && eta <= 1.0))
            throw InvalidInput("PhotodetectorConfig: quantum efficiency must lie in (0, 1]");
        if (!(lna_gain > 0.0))
            throw InvalidInput("PhotodetectorConfig: LNA gain must be positive");
        if (!(local_beam_power > 0.0))
            throw InvalidInput("PhotodetectorConfig: local beam power must be positive");
        if (!(omega_p_angular > 0.0))
            throw InvalidInput("PhotodetectorConfig: probe angular frequency must be positive");
    }

    void LoConfig::validate() const
    {
        if (!(omega_l > 0.0))
            throw InvalidInput("LoConfig: omega_l must be positive");
        if (!(std::abs(vartheta) < c::pi / 2))
            throw InvalidInput("LoConfig: LO direction must lie in (-pi/2, pi/2)");
    }

    const char *regime_name(Regime r)
    {
        switch (r)
        {
        case Regime::psl:
            return "psl";
        case Regime::sql:
            return "sql";
        case Regime::classical:
            return "classical";
        }
        return "?";
    }

    double alpha1(const PhotodetectorConfig &pd)
    {
        return pd.eta * pd.q_charge / (c::hbar * pd.omega_p_angular);
    }

    double sensor_gain(const PhotodetectorConfig &pd, double probe_power_out, double kappa)
    {
        if (probe_power_out < 0.0 || kappa < 0.0)
            throw InvalidInput("sensor_gain: inputs must be non-negative");
        const double a1 = alpha1(pd);
        return 4.0 * a1 * a1 * c::z0 * pd.lna_gain * pd.local_beam_power * probe_power_out * kappa * kappa;
    }

    // The two branches sum to cos(varphi) exp(-j theta_l1); the product form keeps the phase
    // exact where the branches cancel.
    Complex reference_phase(const LoConfig &lo, double varphi)
    {
        return std::cos(varphi) * std::polar(1.0, -lo.theta_l1);
    }

    namespace
    {
        void check_index(std::size_t m, const ArrayGeometry &geom)
        {
            if (m < 1 || m > geom.m_sensors)
                throw InvalidInput("sensor index out of range");
        }
    }

    Complex sensor_phase(std::size_t m, const LoConfig &lo, double varphi, const ArrayGeometry &geom)
    {
        check_index(m, geom);
        const double shift = geom.phase_per_sensor() * static_cast<double>(m - 1) * std::sin(lo.vartheta);
        return reference_phase(lo, varphi) * std::polar(1.0, -shift);
    }

    Complex sensor_phase_direct(std::size_t m, const LoConfig &lo, double varphi, const ArrayGeometry &geom)
    {
        check_index(m, geom);
        const double theta_lm =
            lo.theta_l1 + geom.phase_per_sensor() * static_cast<double>(m - 1) * std::sin(lo.vartheta);
        const Complex j(0.0, 1.0);
        return 0.5 * std::exp(-j * (theta_lm - varphi)) + 0.5 * std::exp(-j * (theta_lm + varphi));
    }

    double sensor_volume(const atom::AtomicSystem &sys, const atom::OpticalRfConfig &cfg)
    {
        return c::pi * cfg.beam_radius * cfg.beam_radius * sys.cell_length;
    }

    double noise_coefficient(Regime regime, const NoiseInputs &in, const atom::AtomicSystem &sys,
                             const NoiseOptions &opts)
    {
        if (in.n_samples < 1)
            throw InvalidInput("noise_coefficient: at least one sample required");
        if (!(in.bandwidth > 0.0))
            throw InvalidInput("noise_coefficient: bandwidth must be positive");
        const double n = static_cast<double>(in.n_samples);

        switch (regime)
        {
        case Regime::psl:
        {
            const double cphi = std::cos(in.varphi);
            const double denom = 2.0 * n * in.probe_power_out * in.kappa * in.kappa * cphi * cphi;
            if (std::abs(cphi) <= opts.cos_floor || !(denom > 0.0))
            {
                if (opts.unbounded_as_infinity)
                    return std::numeric_limits<double>::infinity();
                throw UnboundedNoise("noise_coefficient: PSL noise is unbounded at cos(varphi) = 0");
            }
            const double energy = opts.psl_photon_energy ? in.photon_energy : 1.0;
            return energy * in.bandwidth / denom;
        }
        case Regime::sql:
        {
            if (!(in.sensor_volume > 0.0) || !(in.gamma2_total > 0.0))
                throw InvalidInput("noise_coefficient: SQL needs positive sensor volume and dephasing");
            const double ratio = c::hbar / sys.mu34;
            const double n_eff = sys.upsilon * sys.n0;
            return (1.0 / (4.0 * c::z0 * n)) * ratio * ratio * (in.gamma2_total / (n_eff * in.sensor_volume)) *
                   in.bandwidth;
        }
        case Regime::classical:
            break;
        }
        throw InvalidInput("noise_coefficient: regime has no atomic noise coefficient");
    }

    double noise_power(double varpi, std::size_t n_samples, double rho, Complex phi_ref)
    {
        if (varpi < 0.0 || rho < 0.0)
            throw InvalidInput("noise_power: inputs must be non-negative");
        return 2.0 * static_cast<double>(n_samples) * rho * std::norm(phi_ref) * varpi;
    }

    FrontEnd evaluate_front_end(const atom::AtomicSystem &sys, const atom::OpticalRfConfig &cfg,
                                const PhotodetectorConfig &pd, const LoConfig &lo,
                                std::optional<double> target_varphi,
                                const std::optional<atom::RationalCoefficients> &rational)
    {
        pd.validate();
        lo.validate();
        FrontEnd fe;
        fe.chi = atom::susceptibility(sys, cfg, lo.omega_l, rational);
        fe.chi_deriv = atom::susceptibility_derivative(sys, cfg, lo.omega_l, rational);
        fe.probe = atom::probe_output(sys, cfg, fe.chi);
        fe.kappa = atom::responsivity(sys, cfg, fe.chi_deriv);

        if (target_varphi)
        {
            fe.local_phase = atom::local_phase_for(*target_varphi, fe.chi_deriv, fe.probe.phase);
            fe.psi = atom::detection_phase(fe.local_phase, fe.chi_deriv, fe.probe.phase).psi;
            fe.response.varphi = c::wrap_angle(*target_varphi);
        }
        else
        {
            fe.local_phase = pd.local_beam_phase;
            const auto dp = atom::detection_phase(fe.local_phase, fe.chi_deriv, fe.probe.phase);
            fe.psi = dp.psi;
            fe.response.varphi = dp.varphi;
        }
        fe.response.kappa = fe.kappa;
        fe.response.rho = sensor_gain(pd, fe.probe.power, fe.kappa);
        fe.response.phi_ref = reference_phase(lo, fe.response.varphi);
        return fe;
    }
}
