// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The raq-doa Authors

#include "raqdoa/harness.hpp"
#include "raqdoa/assignment.hpp"
#include "raqdoa/errors.hpp"
#include "raqdoa/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace raqdoa::harness
{
    namespace c = raqdoa::constants;

    double mse(const std::vector<double> &estimated, const std::vector<double> &truth)
    {
        if (estimated.size() != truth.size())
            throw InvalidInput("mse: estimate and truth have different lengths");
        const auto k = static_cast<Eigen::Index>(truth.size());
        if (k == 0)
            return 0.0;
        Eigen::MatrixXd cost(k, k);
        for (Eigen::Index i = 0; i < k; ++i)
            for (Eigen::Index j = 0; j < k; ++j)
            {
                const double e = truth[static_cast<std::size_t>(i)] - estimated[static_cast<std::size_t>(j)];
                cost(i, j) = e * e;
            }
        const std::vector<int> col = solve_assignment(cost);
        double sum = 0.0;
        for (Eigen::Index i = 0; i < k; ++i)
            sum += cost(i, col[static_cast<std::size_t>(i)]);
        return sum;
    }

    double mse(const est::DoaEstimate &estimated, const std::vector<double> &truth)
    {
        return mse(estimated.doas, truth);
    }

    namespace
    {
        struct VariableNames
        {
            SweepVariable v;
            const char *name;
            const char *command;
        };
        constexpr VariableNames variable_table[] = {
            {SweepVariable::reflected_power, "reflected_power", "power"},
            {SweepVariable::m_sensors, "m_sensors", "sensors"},
            {SweepVariable::k_targets, "k_targets", "targets"},
            {SweepVariable::n_samples, "n_samples", "samples"},
            {SweepVariable::doa_range, "doa_range", "doa"},
            {SweepVariable::varphi, "varphi", "phase"},
        };

        const char *const known_estimators[] = {"raq_esprit", "esprit", "raq_ml", "ml_asymptotic", "crlb"};

        bool is_integer_variable(SweepVariable v)
        {
            return v == SweepVariable::m_sensors || v == SweepVariable::k_targets || v == SweepVariable::n_samples;
        }

        bool wants(const ExperimentConfig &cfg, const char *estimator)
        {
            return std::find(cfg.estimators.begin(), cfg.estimators.end(), estimator) != cfg.estimators.end();
        }

        std::string format_value(double v)
        {
            std::ostringstream os;
            os << v;
            return os.str();
        }
    }

    const char *variable_name(SweepVariable v)
    {
        for (const auto &e : variable_table)
            if (e.v == v)
                return e.name;
        return "?";
    }

    const char *command_name(SweepVariable v)
    {
        for (const auto &e : variable_table)
            if (e.v == v)
                return e.command;
        return "?";
    }

    SweepVariable variable_from_command(const std::string &name)
    {
        for (const auto &e : variable_table)
            if (name == e.command)
                return e.v;
        throw InvalidInput("unknown sweep '" + name + "' (power, sensors, targets, samples, doa, phase)");
    }

    SweepVariable variable_from_name(const std::string &name)
    {
        for (const auto &e : variable_table)
            if (name == e.name || name == e.command)
                return e.v;
        throw InvalidInput("unknown sweep variable '" + name + "'");
    }

    void ExperimentConfig::validate() const
    {
        if (trials < 1)
            throw InvalidInput("experiment: trials must be at least 1");
        if (n_samples < 1)
            throw InvalidInput("experiment: samples must be at least 1");
        if (regimes.empty())
            throw InvalidInput("experiment: at least one regime required");
        if (estimators.empty())
            throw InvalidInput("experiment: at least one estimator required");
        for (const auto &e : estimators)
            if (std::find(std::begin(known_estimators), std::end(known_estimators), e) == std::end(known_estimators))
                throw InvalidInput("experiment: unknown estimator '" + e + "'");
        if (sweep.grid.empty())
            throw InvalidInput("sweep: grid must not be empty");
        const bool up = sweep.grid.size() < 2 || sweep.grid[1] > sweep.grid[0];
        for (std::size_t i = 1; i < sweep.grid.size(); ++i)
            if (up ? !(sweep.grid[i] > sweep.grid[i - 1]) : !(sweep.grid[i] < sweep.grid[i - 1]))
                throw InvalidInput("sweep: grid must be strictly monotone");
        for (double v : sweep.grid)
        {
            if (!std::isfinite(v))
                throw InvalidInput("sweep: grid values must be finite");
            if (is_integer_variable(sweep.variable) && (v != std::round(v) || v < 1.0))
                throw InvalidInput("sweep: grid values for " + std::string(variable_name(sweep.variable)) +
                                   " must be positive integers");
            if (sweep.variable == SweepVariable::doa_range && !(v > 0.0 && v <= 90.0))
                throw InvalidInput("sweep: DOA half-range must lie in (0, 90] degrees");
        }
        if (!(scene.separation_guard >= 0.0) || !(scene.endfire_guard >= 0.0))
            throw InvalidInput("scene: guards must be non-negative");
        if (!(scene.doa_min < scene.doa_max))
            throw InvalidInput("scene: DOA range is empty");
        if (!(scene.area_radius >= 0.0) || !(scene.area_center - scene.area_radius >= scene.pathloss.u0))
            throw InvalidInput("scene: target area must stay beyond the path-loss reference distance");
        if (!(scene.bandwidth > 0.0))
            throw InvalidInput("scene: bandwidth must be positive");
    }

    ExperimentConfig at_sweep_value(const ExperimentConfig &cfg, double value)
    {
        ExperimentConfig out = cfg;
        switch (cfg.sweep.variable)
        {
        case SweepVariable::reflected_power:
            out.scene.reflected_power_dbm = value;
            break;
        case SweepVariable::m_sensors:
            out.m_sensors = static_cast<std::size_t>(std::llround(value));
            break;
        case SweepVariable::k_targets:
            out.scene.k_targets = static_cast<std::size_t>(std::llround(value));
            break;
        case SweepVariable::n_samples:
            out.n_samples = static_cast<std::size_t>(std::llround(value));
            break;
        case SweepVariable::doa_range:
            out.scene.doa_min = -value * c::deg;
            out.scene.doa_max = value * c::deg;
            break;
        case SweepVariable::varphi:
            out.varphi = value * c::deg;
            break;
        }
        return out;
    }

    OperatingPoint prepare(const ExperimentConfig &cfg)
    {
        if (cfg.scene.k_targets < 1 || cfg.scene.k_targets >= cfg.m_sensors)
            throw InvalidScene("experiment: number of targets must lie in [1, M)");
        if (cfg.n_samples < cfg.scene.k_targets)
            throw InvalidInput("experiment: need at least K snapshots");

        OperatingPoint op;
        op.geom = ArrayGeometry::with_spacing(cfg.m_sensors, cfg.lo.f_l, cfg.spacing_wavelengths);
        op.front_end = transducer::evaluate_front_end(cfg.atom, cfg.optics, cfg.pd, cfg.lo, cfg.varphi, cfg.rational);

        transducer::NoiseInputs in;
        in.n_samples = cfg.n_samples;
        in.bandwidth = cfg.scene.bandwidth;
        in.probe_power_out = op.front_end.probe.power;
        in.kappa = op.front_end.kappa;
        in.varphi = op.front_end.response.varphi;
        in.sensor_volume = transducer::sensor_volume(cfg.atom, cfg.optics);
        in.gamma2_total = cfg.gamma2_total;
        in.photon_energy = c::hbar * cfg.pd.omega_p_angular;
        transducer::NoiseOptions opts = cfg.noise;
        opts.unbounded_as_infinity = true;
        op.varpi_psl = transducer::noise_coefficient(Regime::psl, in, cfg.atom, opts);
        op.varpi_sql = transducer::noise_coefficient(Regime::sql, in, cfg.atom, opts);
        return op;
    }

    std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial_index)
    {
        return rng::derive(master_seed, 0x7472u, static_cast<std::uint64_t>(trial_index));
    }

    namespace
    {
        struct DoaBounds
        {
            double lo, hi;
        };

        DoaBounds guarded_range(const SceneTemplate &s)
        {
            const DoaBounds b{std::max(s.doa_min, -c::pi / 2 + s.endfire_guard),
                              std::min(s.doa_max, c::pi / 2 - s.endfire_guard)};
            if (!(b.lo < b.hi))
                throw InvalidScene("scene: DOA range is empty after the endfire guard");
            return b;
        }

        // Separated in angle and in the wrapped inter-sensor phase, so no pair aliases.
        bool separated(double a, double b, const SceneTemplate &s, double kd)
        {
            if (std::abs(a - b) < s.separation_guard)
                return false;
            const double du = c::wrap_angle(kd * (std::sin(a) - std::sin(b)));
            const double guard = s.electrical_guard > 0.0 ? s.electrical_guard : kd * std::sin(s.separation_guard);
            return std::abs(du) >= guard;
        }
    }

    array::TargetScene draw_scene(const ExperimentConfig &cfg, std::uint64_t seed)
    {
        const SceneTemplate &s = cfg.scene;
        const DoaBounds b = guarded_range(s);
        const double kd = c::two_pi * cfg.spacing_wavelengths;
        constexpr int max_attempts = 2000;
        constexpr int max_restarts = 200;

        // Sequential placement; a jammed draw restarts on fresh streams. Restart 0 uses
        // the per-target streams alone, so scenes for smaller K are prefixes of larger ones.
        for (int restart = 0; restart < max_restarts; ++restart)
        {
            array::TargetScene scene;
            scene.pathloss = s.pathloss;
            scene.bandwidth = s.bandwidth;
            scene.waveform = s.waveform;
            bool placed_all = true;
            for (std::size_t k = 0; k < s.k_targets && placed_all; ++k)
            {
                auto eng = rng::stream(seed, rng::Stream::scene, k + (static_cast<std::uint64_t>(restart) << 32));
                std::uniform_real_distribution<double> ud(0.0, 1.0);
                double theta = 0.0;
                bool ok = false;
                for (int attempt = 0; attempt < max_attempts && !ok; ++attempt)
                {
                    theta = b.lo + (b.hi - b.lo) * ud(eng);
                    ok = theta > b.lo;
                    for (double prev : scene.doas)
                        ok = ok && separated(theta, prev, s, kd);
                }
                if (!ok)
                {
                    placed_all = false;
                    break;
                }
                const double r = s.area_radius * std::sqrt(ud(eng));
                const double alpha = c::two_pi * ud(eng);
                scene.doas.push_back(theta);
                scene.distances.push_back(std::hypot(s.area_center + r * std::cos(alpha), r * std::sin(alpha)));
                scene.reflected_power_dbm.push_back(s.reflected_power_dbm);
            }
            if (placed_all)
                return scene;
        }
        throw InvalidScene("scene: cannot place targets with the requested separation guards");
    }

    array::TargetScene nominal_scene(const ExperimentConfig &cfg)
    {
        const SceneTemplate &s = cfg.scene;
        const DoaBounds b = guarded_range(s);
        array::TargetScene scene;
        scene.pathloss = s.pathloss;
        scene.bandwidth = s.bandwidth;
        scene.waveform = s.waveform;
        const double width = (b.hi - b.lo) / static_cast<double>(s.k_targets);
        for (std::size_t k = 0; k < s.k_targets; ++k)
        {
            scene.doas.push_back(b.lo + (static_cast<double>(k) + 0.5) * width);
            scene.distances.push_back(s.area_center);
            scene.reflected_power_dbm.push_back(s.reflected_power_dbm);
        }
        return scene;
    }

    namespace
    {
        array::EchoConvention echo_convention(const ExperimentConfig &cfg)
        {
            return array::EchoConvention{cfg.scene.effective_aperture};
        }

        // Returns the squared error, or NaN when the estimator failed numerically.
        template <class F> TrialResult score(const char *name, Regime regime, double value, std::uint64_t seed, F &&f)
        {
            TrialResult r;
            r.sweep_value = value;
            r.estimator = name;
            r.regime = regime;
            r.seed = seed;
            try
            {
                r.squared_error = f();
                r.converged = std::isfinite(r.squared_error);
            }
            catch (const NumericalFailure &)
            {
                r.squared_error = std::numeric_limits<double>::quiet_NaN();
                r.converged = false;
            }
            return r;
        }

        TrialResult unbounded_result(const char *name, Regime regime, double value, std::uint64_t seed)
        {
            TrialResult r;
            r.sweep_value = value;
            r.estimator = name;
            r.regime = regime;
            r.seed = seed;
            r.squared_error = std::numeric_limits<double>::infinity();
            r.unbounded = true;
            return r;
        }

        num::ComplexMatrix sample_covariance(const num::ComplexMatrix &s)
        {
            return s * s.adjoint() / static_cast<double>(s.cols());
        }
    }

    std::vector<TrialResult> run_trial(const ExperimentConfig &cfg, const OperatingPoint &op, double value,
                                       std::size_t trial_index)
    {
        const std::uint64_t seed = trial_seed(cfg.master_seed, trial_index);
        const array::TargetScene scene = draw_scene(cfg, seed);
        const std::size_t k = scene.k_targets();
        const std::size_t n = cfg.n_samples;
        std::vector<double> truth = scene.doas;
        std::sort(truth.begin(), truth.end());
        const ArrayGeometry &geom = op.geom;
        const double vartheta = cfg.lo.vartheta;
        const bool with_ml = wants(cfg, "raq_ml") && k <= cfg.ml.max_targets;

        std::vector<TrialResult> out;
        for (Regime regime : cfg.regimes)
        {
            if (regime == Regime::classical)
            {
                const array::SnapshotMatrix snap =
                    array::synthesize_classical_snapshots(scene, geom, cfg.classical, n, seed);
                const double varpi = snap.sigma2 / (2.0 * static_cast<double>(n));
                if (wants(cfg, "esprit"))
                    out.push_back(score("esprit", regime, value, seed, [&] {
                        return mse(est::classical_esprit(snap.y, k, geom), truth);
                    }));
                if (wants(cfg, "ml_asymptotic"))
                    out.push_back(score("ml_asymptotic", regime, value, seed, [&] {
                        return est::ml_asymptotic_error(scene.doas, sample_covariance(snap.echoes), geom, 0.0, varpi, n);
                    }));
                if (wants(cfg, "crlb"))
                    out.push_back(score("crlb", regime, value, seed, [&] {
                        return est::crlb(scene.doas, sample_covariance(snap.echoes), geom, 0.0, varpi);
                    }));
                continue;
            }

            const double varpi = regime == Regime::psl ? op.varpi_psl : op.varpi_sql;
            std::vector<const char *> names;
            for (const char *e : {"raq_esprit", "esprit", "raq_ml", "ml_asymptotic", "crlb"})
                if (wants(cfg, e) && (std::string(e) != "raq_ml" || with_ml))
                    names.push_back(e);
            if (!std::isfinite(varpi))
            {
                for (const char *e : names)
                    out.push_back(unbounded_result(e, regime, value, seed));
                continue;
            }

            const transducer::SensorResponse &resp = op.front_end.response;
            const double sigma2 = transducer::noise_power(varpi, n, resp.rho, resp.phi_ref);
            const array::SnapshotMatrix snap =
                array::synthesize_snapshots(scene, geom, resp, cfg.lo, n, sigma2, seed, echo_convention(cfg));
            for (const char *e : names)
            {
                const std::string name = e;
                out.push_back(score(e, regime, value, seed, [&] {
                    if (name == "raq_esprit")
                        return mse(est::raq_esprit(snap.y, k, geom, vartheta), truth);
                    if (name == "esprit")
                        return mse(est::classical_esprit(snap.y, k, geom), truth);
                    if (name == "raq_ml")
                    {
                        const est::DoaEstimate d = est::raq_ml(snap.y, k, geom, vartheta, cfg.ml);
                        return d.converged ? mse(d, truth) : std::numeric_limits<double>::quiet_NaN();
                    }
                    const num::ComplexMatrix rs = sample_covariance(snap.echoes);
                    if (name == "ml_asymptotic")
                        return est::ml_asymptotic_error(scene.doas, rs, geom, vartheta, varpi, n);
                    return est::crlb(scene.doas, rs, geom, vartheta, varpi);
                }));
            }
        }
        return out;
    }

    std::vector<TrialResult> run_trial(const ExperimentConfig &cfg, double sweep_value, std::size_t trial_index)
    {
        const ExperimentConfig point = at_sweep_value(cfg, sweep_value);
        return run_trial(point, prepare(point), sweep_value, trial_index);
    }

    std::vector<double> SweepTable::series(const std::string &estimator, Regime regime) const
    {
        std::vector<double> out;
        for (const auto &r : rows)
            if (r.estimator == estimator && r.regime == regime)
                out.push_back(r.mse);
        return out;
    }

    namespace
    {
        // Trials in parallel; results kept by trial index so the reduction order is fixed.
        std::vector<std::vector<TrialResult>> run_trials(const ExperimentConfig &cfg, const OperatingPoint &op,
                                                         double value)
        {
            std::vector<std::vector<TrialResult>> results(cfg.trials);
            std::size_t workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
            workers = std::min(workers, cfg.trials);

            std::atomic<std::size_t> next{0};
            std::mutex err_mutex;
            std::size_t err_index = cfg.trials;
            std::exception_ptr err;
            auto work = [&] {
                for (std::size_t t = next++; t < cfg.trials; t = next++)
                {
                    try
                    {
                        results[t] = run_trial(cfg, op, value, t);
                    }
                    catch (...)
                    {
                        std::lock_guard<std::mutex> lock(err_mutex);
                        if (t < err_index)
                        {
                            err_index = t;
                            err = std::current_exception();
                        }
                    }
                }
            };
            if (workers <= 1)
                work();
            else
            {
                std::vector<std::thread> pool;
                for (std::size_t i = 0; i < workers; ++i)
                    pool.emplace_back(work);
                for (auto &th : pool)
                    th.join();
            }
            if (err)
                std::rethrow_exception(err);
            return results;
        }

        void add_nominal_rows(const ExperimentConfig &cfg, const OperatingPoint &op, double value,
                              std::vector<SweepRow> &rows)
        {
            const bool want_crlb = wants(cfg, "crlb"), want_ml = wants(cfg, "ml_asymptotic");
            if (!want_crlb && !want_ml)
                return;
            const array::TargetScene scene = nominal_scene(cfg);
            const auto k = static_cast<Eigen::Index>(scene.k_targets());
            const std::size_t n = cfg.n_samples;
            for (Regime regime : cfg.regimes)
            {
                double varpi = 0.0, vartheta = cfg.lo.vartheta;
                num::ComplexMatrix rs = num::ComplexMatrix::Zero(k, k);
                if (regime == Regime::classical)
                {
                    const double gain = c::db_to_linear(cfg.classical.rx_gain_db);
                    for (Eigen::Index i = 0; i < k; ++i)
                        rs(i, i) = array::received_power_w(scene, static_cast<std::size_t>(i)) * gain;
                    varpi = array::classical_noise_power(cfg.classical, scene.bandwidth) / (2.0 * static_cast<double>(n));
                    vartheta = 0.0;
                }
                else
                {
                    for (Eigen::Index i = 0; i < k; ++i)
                    {
                        const double e = array::echo_field_amplitude(
                            array::received_power_w(scene, static_cast<std::size_t>(i)), op.geom, echo_convention(cfg));
                        rs(i, i) = e * e;
                    }
                    varpi = regime == Regime::psl ? op.varpi_psl : op.varpi_sql;
                }
                auto emit = [&](const char *name, auto f) {
                    SweepRow r;
                    r.value = value;
                    r.estimator = name;
                    r.regime = regime;
                    r.trials = 1;
                    r.mse = std::isfinite(varpi) ? f() : std::numeric_limits<double>::infinity();
                    rows.push_back(r);
                };
                if (want_crlb)
                    emit("crlb_nominal", [&] { return est::crlb(scene.doas, rs, op.geom, vartheta, varpi); });
                if (want_ml)
                    emit("ml_asymptotic_nominal",
                         [&] { return est::ml_asymptotic_error(scene.doas, rs, op.geom, vartheta, varpi, n); });
            }
        }
    }

    SweepTable run_sweep(const ExperimentConfig &cfg)
    {
        cfg.validate();
        SweepTable table;
        table.variable = cfg.sweep.variable;
        table.master_seed = cfg.master_seed;

        for (double value : cfg.sweep.grid)
        {
            const std::string where = std::string(variable_name(cfg.sweep.variable)) + " = " + format_value(value);
            try
            {
                const ExperimentConfig point = at_sweep_value(cfg, value);
                const OperatingPoint op = prepare(point);
                const auto results = run_trials(point, op, value);

                // (estimator, regime) -> accumulator, first-seen order kept by the final sort.
                struct Acc
                {
                    double sum = 0.0;
                    std::size_t used = 0, excluded = 0;
                    bool unbounded = false;
                };
                std::map<std::pair<std::string, int>, Acc> acc;
                for (const auto &trial : results)
                    for (const auto &r : trial)
                    {
                        Acc &a = acc[{r.estimator, static_cast<int>(r.regime)}];
                        if (r.unbounded)
                            a.unbounded = true;
                        else if (!r.converged)
                            ++a.excluded;
                        else
                        {
                            a.sum += r.squared_error;
                            ++a.used;
                        }
                    }
                for (const auto &[key, a] : acc)
                {
                    SweepRow row;
                    row.value = value;
                    row.estimator = key.first;
                    row.regime = static_cast<Regime>(key.second);
                    row.trials = point.trials;
                    row.excluded = a.excluded;
                    if (a.unbounded)
                        row.mse = std::numeric_limits<double>::infinity();
                    else if (a.used == 0)
                        row.mse = std::numeric_limits<double>::quiet_NaN();
                    else
                        row.mse = a.sum / static_cast<double>(a.used);
                    if (static_cast<double>(a.excluded) >= 0.01 * static_cast<double>(point.trials))
                        table.warnings.push_back(where + ": " + row.estimator + "/" +
                                                 transducer::regime_name(row.regime) + " excluded " +
                                                 std::to_string(a.excluded) + " of " + std::to_string(point.trials) +
                                                 " trials");
                    table.rows.push_back(row);
                }
                add_nominal_rows(point, op, value, table.rows);
            }
            catch (const InvalidInput &e)
            {
                throw GridPointError(where + ": " + e.what(), value, true);
            }
            catch (const std::exception &e)
            {
                throw GridPointError(where + ": " + e.what(), value, false);
            }
        }

        std::stable_sort(table.rows.begin(), table.rows.end(), [](const SweepRow &a, const SweepRow &b) {
            if (a.value != b.value)
                return a.value < b.value;
            if (a.estimator != b.estimator)
                return a.estimator < b.estimator;
            return std::string(transducer::regime_name(a.regime)) < transducer::regime_name(b.regime);
        });
        return table;
    }
}
