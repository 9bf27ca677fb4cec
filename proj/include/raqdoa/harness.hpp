// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The raq-doa Authors
//
// Monte Carlo runner for the six DOA sweeps: random scenes, snapshot synthesis
// for each noise regime, estimation, assignment-matched scoring and reduction.

#ifndef RAQDOA_HARNESS_HPP
#define RAQDOA_HARNESS_HPP

#include "raqdoa/arraymodel.hpp"
#include "raqdoa/atomphys.hpp"
#include "raqdoa/constants.hpp"
#include "raqdoa/estimators.hpp"
#include "raqdoa/transducer.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace raqdoa::harness
{
    using transducer::Regime;

    // Sum over targets of squared errors under the best target-to-estimate matching.
    double mse(const est::DoaEstimate &estimated, const std::vector<double> &truth);
    double mse(const std::vector<double> &estimated, const std::vector<double> &truth);

    enum class SweepVariable
    {
        reflected_power, // dBm
        m_sensors,
        k_targets,
        n_samples,
        doa_range, // half-width of the DOA interval, degrees
        varphi     // superimposed phase, degrees
    };
    const char *variable_name(SweepVariable v);    // column value, e.g. "reflected_power"
    const char *command_name(SweepVariable v);     // CLI name, e.g. "power"
    SweepVariable variable_from_command(const std::string &name);
    SweepVariable variable_from_name(const std::string &name);

    struct SceneTemplate
    {
        std::size_t k_targets = 5;
        double reflected_power_dbm = 23.0;
        double doa_min = -constants::pi / 2; // rad
        double doa_max = constants::pi / 2;  // rad
        double separation_guard = constants::deg;
        double endfire_guard = 5.0 * constants::deg;
        // Minimum wrapped inter-sensor phase difference between any two targets, rad.
        // Zero falls back to (2 pi d / lambda) sin(separation_guard).
        double electrical_guard = 0.3;
        double area_center = 1500.0; // m
        double area_radius = 500.0;  // m
        array::PathLoss pathloss;
        double bandwidth = 100e3; // Hz
        array::Waveform waveform = array::Waveform::random_gaussian;
        double effective_aperture = 0.0; // m^2, 0 for lambda^2 / (4 pi)
    };

    struct Sweep
    {
        SweepVariable variable = SweepVariable::reflected_power;
        std::vector<double> grid;
    };

    struct ExperimentConfig
    {
        atom::AtomicSystem atom;
        atom::OpticalRfConfig optics;
        std::optional<atom::RationalCoefficients> rational;
        double gamma2_total = 0.0; // rad/s, dephasing entering the SQL coefficient
        transducer::PhotodetectorConfig pd;
        transducer::LoConfig lo;
        double varphi = 0.0; // target superimposed phase, rad
        transducer::NoiseOptions noise;

        std::size_t m_sensors = 10;
        double spacing_wavelengths = 0.5;
        SceneTemplate scene;
        array::ClassicalReceiverConfig classical;
        std::size_t n_samples = 50;

        std::vector<Regime> regimes{Regime::psl, Regime::sql, Regime::classical};
        std::vector<std::string> estimators{"raq_esprit", "esprit", "ml_asymptotic", "crlb"};
        est::MlSearchOptions ml;
        std::size_t trials = 500;
        std::uint64_t master_seed = 1;
        std::size_t threads = 0; // 0 selects the hardware concurrency
        Sweep sweep;

        void validate() const;
    };

    // Copy of cfg with the sweep variable set to value (grid units).
    ExperimentConfig at_sweep_value(const ExperimentConfig &cfg, double value);

    // Receiver quantities that do not depend on the random scene.
    struct OperatingPoint
    {
        ArrayGeometry geom;
        transducer::FrontEnd front_end;
        double varpi_psl = 0.0; // +inf when unbounded
        double varpi_sql = 0.0;
    };
    OperatingPoint prepare(const ExperimentConfig &cfg);

    // Random targets: uniform DOAs in the guarded range, positions uniform in the disk.
    array::TargetScene draw_scene(const ExperimentConfig &cfg, std::uint64_t trial_seed);
    std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial_index);

    // Evenly spaced DOAs at the disk centre distance.
    array::TargetScene nominal_scene(const ExperimentConfig &cfg);

    struct TrialResult
    {
        double sweep_value = 0.0;
        std::string estimator;
        Regime regime = Regime::psl;
        double squared_error = 0.0; // rad^2
        bool converged = true;
        bool unbounded = false;
        std::uint64_t seed = 0;
    };

    std::vector<TrialResult> run_trial(const ExperimentConfig &cfg, double sweep_value, std::size_t trial_index);
    std::vector<TrialResult> run_trial(const ExperimentConfig &cfg, const OperatingPoint &op, double sweep_value,
                                       std::size_t trial_index);

    struct SweepRow
    {
        double value = 0.0;
        std::string estimator;
        Regime regime = Regime::psl;
        double mse = 0.0; // +inf for unbounded noise
        std::size_t trials = 0;
        std::size_t excluded = 0;
    };

    struct SweepTable
    {
        SweepVariable variable = SweepVariable::reflected_power;
        std::uint64_t master_seed = 0;
        std::vector<SweepRow> rows;         // sorted by (value, estimator, regime)
        std::vector<std::string> warnings;  // excluded fraction >= 1% and similar

        // MSE column for one estimator/regime in grid order.
        std::vector<double> series(const std::string &estimator, Regime regime) const;
    };

    // Raised by run_sweep with the offending grid value attached.
    class GridPointError : public std::runtime_error
    {
      public:
        GridPointError(const std::string &msg, double value, bool input_error)
            : std::runtime_error(msg), value_(value), input_error_(input_error) {}
        double value() const { return value_; }
        bool input_error() const { return input_error_; }

      private:
        double value_;
        bool input_error_;
    };

    SweepTable run_sweep(const ExperimentConfig &cfg);
}

#endif
