// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The raq-doa Authors

#include "raqdoa/config.hpp"
#include "raqdoa/constants.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <sstream>

namespace raqdoa::config
{
    namespace c = raqdoa::constants;

    ConfigError::ConfigError(const std::string &source, int line, const std::string &msg)
        : InvalidInput(line > 0 ? source + ":" + std::to_string(line) + ": " + msg : source + ": " + msg), line_(line)
    {
    }

    Json default_tree()
    {
        Json t;
        t["atom"] = {
            {"gamma2_mhz", 5.2},
            {"gamma3_mhz", 0.0},
            {"gamma4_mhz", 0.0},
            {"transit_mhz", 0.0},
            {"dephasing_mhz", 0.0},
            {"total_dephasing_mhz", 5.2},
            {"mu12_coulomb_m", 2.5878e-29},
            {"mu34_coulomb_m", 1.2238e-26},
            {"density_per_cm3", 4.89e10},
            {"excitation_fraction", 0.01},
            {"cell_length_cm", 10.0},
        };
        t["optics"] = {
            {"probe_rabi_mhz", 1.0},
            {"coupling_rabi_mhz", 15.0},
            {"probe_detuning_mhz", -0.9133},
            {"coupling_detuning_mhz", 1.8090},
            {"probe_wavelength_nm", 852.35},
            {"probe_power_uw", 29.8},
            {"probe_phase_rad", 0.0},
            {"probe_fwhm_mm", 1.0},
            {"beam_radius_mm", 0.5},
            {"rational_a", Json::array()},
            {"rational_b", Json::array()},
            {"rational_c", Json::array()},
        };
        t["lo"] = {
            {"rabi_mhz", 2.0},
            {"detuning_mhz", -0.0075},
            {"phase_rad", c::pi / 3.0},
            {"doa_deg", 30.0},
        };
        t["photodetector"] = {
            {"quantum_efficiency", 0.8},
            {"lna_gain_db", 20.0},
            {"local_beam_power_mw", 1.0},
            {"superimposed_phase_deg", 0.0},
            {"psl_photon_energy", true},
        };
        t["array"] = {
            {"sensors", 10u},
            {"carrier_ghz", 6.9458},
            {"spacing_wavelengths", 0.5},
        };
        t["scene"] = {
            {"targets", 5u},
            {"reflected_power_dbm", 23.0},
            {"doa_min_deg", -90.0},
            {"doa_max_deg", 90.0},
            {"separation_guard_deg", 1.0},
            {"endfire_guard_deg", 5.0},
            {"electrical_guard_rad", 0.3},
            {"area_center_m", 1500.0},
            {"area_radius_m", 500.0},
            {"pathloss_k0_db", -30.0},
            {"pathloss_exponent", 2.0},
            {"pathloss_u0_m", 1.0},
            {"bandwidth_khz", 100.0},
            {"waveform", "random_gaussian"},
            {"effective_aperture_m2", 0.0},
        };
        t["classical"] = {
            {"noise_figure_db", 5.0},
            {"temperature_k", 290.0},
            {"rx_gain_db", 0.0},
        };
        t["experiment"] = {
            {"samples", 50u},
            {"trials", 500u},
            {"master_seed", 20240601u},
            {"regimes", {"psl", "sql", "classical"}},
            {"estimators", {"raq_esprit", "esprit", "ml_asymptotic", "crlb"}},
            {"threads", 0u},
            {"ml_grid_deg", 0.5},
            {"ml_tolerance_rad", 1e-4},
            {"ml_max_passes", 50u},
        };
        t["sweep"] = {
            {"variable", "reflected_power"},
            {"grid", Json::array()},
        };
        t["grids"] = {
            {"power_dbm", {-2.0, 3.0, 8.0, 13.0, 18.0, 23.0}},
            {"sensors", {6.0, 8.0, 10.0, 12.0, 14.0, 16.0}},
            {"targets", {1.0, 2.0, 3.0, 4.0, 5.0, 6.0}},
            {"samples", {10.0, 20.0, 40.0, 80.0, 160.0, 320.0}},
            {"doa_half_range_deg", {15.0, 30.0, 45.0, 60.0, 75.0, 90.0}},
            {"phase_deg", Json::array()},
        };
        for (int d = -180; d <= 180; d += 30)
            t["grids"]["phase_deg"].push_back(static_cast<double>(d));
        Json rf = Json::array();
        for (int i = 1; i <= 24; ++i)
            rf.push_back(0.25 * i);
        t["physics"] = {
            {"rf_rabi_mhz", rf},
            {"detunings_mhz", {{-0.9133, 1.8090, -0.0075}, {0.0, 0.0, 0.0}}},
        };
        return t;
    }

    namespace
    {
        const char *const manifest_keys[] = {"config_path", "artifact_version", "master_seed",
                                             "output_dir",  "command",          "warnings",
                                             "resolved"};

        int line_of(const YAML::Node &n)
        {
            return n.Mark().is_null() ? 0 : n.Mark().line + 1;
        }

        struct Overlay
        {
            std::string source;

            [[noreturn]] void fail(const YAML::Node &n, const std::string &msg) const
            {
                throw ConfigError(source, line_of(n), msg);
            }

            double number(const YAML::Node &n, const std::string &key) const
            {
                if (!n.IsScalar())
                    fail(n, "'" + key + "' must be a number");
                try
                {
                    return n.as<double>();
                }
                catch (const YAML::Exception &)
                {
                    fail(n, "'" + key + "' must be a number, got '" + n.Scalar() + "'");
                }
            }

            Json apply(const Json &def, const YAML::Node &n, const std::string &key) const
            {
                switch (def.type())
                {
                case Json::value_t::object:
                {
                    if (!n.IsMap())
                        fail(n, "'" + key + "' must be a mapping");
                    Json out = def;
                    for (const auto &kv : n)
                    {
                        const std::string k = kv.first.as<std::string>();
                        const std::string path = key.empty() ? k : key + "." + k;
                        if (!def.contains(k))
                            fail(kv.first, "unknown key '" + path + "'");
                        out[k] = apply(def[k], kv.second, path);
                    }
                    return out;
                }
                case Json::value_t::number_float:
                    return number(n, key);
                case Json::value_t::number_unsigned:
                case Json::value_t::number_integer:
                {
                    if (!n.IsScalar())
                        fail(n, "'" + key + "' must be a non-negative integer");
                    try
                    {
                        if (!n.Scalar().empty() && n.Scalar()[0] == '-')
                            throw YAML::Exception(n.Mark(), "negative");
                        return n.as<std::uint64_t>();
                    }
                    catch (const YAML::Exception &)
                    {
                        fail(n, "'" + key + "' must be a non-negative integer, got '" + n.Scalar() + "'");
                    }
                }
                case Json::value_t::boolean:
                    if (!n.IsScalar())
                        fail(n, "'" + key + "' must be true or false");
                    try
                    {
                        return n.as<bool>();
                    }
                    catch (const YAML::Exception &)
                    {
                        fail(n, "'" + key + "' must be true or false, got '" + n.Scalar() + "'");
                    }
                case Json::value_t::string:
                    if (!n.IsScalar())
                        fail(n, "'" + key + "' must be a string");
                    return n.Scalar();
                case Json::value_t::array:
                    return sequence(def, n, key);
                default:
                    fail(n, "'" + key + "' has no schema");
                }
            }

            // Element type follows the default's first element; empty defaults hold numbers.
            Json sequence(const Json &def, const YAML::Node &n, const std::string &key) const
            {
                if (!n.IsSequence())
                    fail(n, "'" + key + "' must be a sequence");
                Json out = Json::array();
                const bool strings = !def.empty() && def[0].is_string();
                const bool nested = !def.empty() && def[0].is_array();
                for (std::size_t i = 0; i < n.size(); ++i)
                {
                    const YAML::Node e = n[i];
                    const std::string at = key + "[" + std::to_string(i) + "]";
                    if (strings)
                    {
                        if (!e.IsScalar())
                            fail(e, "'" + at + "' must be a string");
                        out.push_back(e.Scalar());
                    }
                    else if (nested)
                    {
                        if (!e.IsSequence())
                            fail(e, "'" + at + "' must be a sequence");
                        Json row = Json::array();
                        for (std::size_t j = 0; j < e.size(); ++j)
                            row.push_back(number(e[j], at));
                        out.push_back(row);
                    }
                    else
                        out.push_back(number(e, at));
                }
                return out;
            }
        };

        // Manifest documents carry the resolved tree under "resolved".
        YAML::Node document_root(const YAML::Node &doc, const std::string &source)
        {
            if (!doc.IsMap() || !doc["resolved"])
                return doc;
            for (const auto &kv : doc)
            {
                const std::string k = kv.first.as<std::string>();
                if (std::find(std::begin(manifest_keys), std::end(manifest_keys), k) == std::end(manifest_keys))
                    throw ConfigError(source, line_of(kv.first), "unknown manifest key '" + k + "'");
            }
            return doc["resolved"];
        }
    }

    Json load_tree_string(const std::string &text, const std::string &source)
    {
        YAML::Node doc;
        try
        {
            doc = YAML::Load(text);
        }
        catch (const YAML::ParserException &e)
        {
            throw ConfigError(source, e.mark.line + 1, e.msg);
        }
        const Json def = default_tree();
        if (doc.IsNull())
            return def;
        if (!doc.IsMap())
            throw ConfigError(source, line_of(doc), "top level must be a mapping");
        return Overlay{source}.apply(def, document_root(doc, source), "");
    }

    Json load_tree(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw ConfigError(path, 0, "cannot open file");
        std::ostringstream ss;
        ss << in.rdbuf();
        return load_tree_string(ss.str(), path);
    }

    namespace
    {
        const char *grid_key(harness::SweepVariable v)
        {
            using harness::SweepVariable;
            switch (v)
            {
            case SweepVariable::reflected_power:
                return "power_dbm";
            case SweepVariable::m_sensors:
                return "sensors";
            case SweepVariable::k_targets:
                return "targets";
            case SweepVariable::n_samples:
                return "samples";
            case SweepVariable::doa_range:
                return "doa_half_range_deg";
            case SweepVariable::varphi:
                return "phase_deg";
            }
            return "";
        }

        double mhz(const Json &v) { return c::two_pi * 1e6 * v.get<double>(); }

        std::vector<double> numbers(const Json &v)
        {
            std::vector<double> out;
            for (const auto &e : v)
                out.push_back(e.get<double>());
            return out;
        }

        std::array<double, 3> triple(const Json &v, const char *what)
        {
            if (v.size() != 3)
                throw ConfigError("config", 0, std::string(what) + " must hold three values");
            return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
        }

        transducer::Regime regime_from(const std::string &s)
        {
            if (s == "psl")
                return transducer::Regime::psl;
            if (s == "sql")
                return transducer::Regime::sql;
            if (s == "classical")
                return transducer::Regime::classical;
            throw ConfigError("config", 0, "experiment.regimes: unknown regime '" + s + "'");
        }
    }

    void select_sweep(Json &tree, harness::SweepVariable variable)
    {
        const std::string current = tree["sweep"]["variable"].get<std::string>();
        const bool same = harness::variable_from_name(current) == variable;
        if (!same || tree["sweep"]["grid"].empty())
            tree["sweep"]["grid"] = tree["grids"][grid_key(variable)];
        tree["sweep"]["variable"] = harness::variable_name(variable);
    }

    harness::ExperimentConfig resolve(const Json &t)
    {
        harness::ExperimentConfig cfg;
        const Json &a = t["atom"], &o = t["optics"], &l = t["lo"], &p = t["photodetector"], &ar = t["array"],
                   &s = t["scene"], &cl = t["classical"], &e = t["experiment"];

        cfg.atom.gamma2 = mhz(a["gamma2_mhz"]);
        cfg.atom.gamma3 = mhz(a["gamma3_mhz"]);
        cfg.atom.gamma4 = mhz(a["gamma4_mhz"]);
        cfg.atom.gamma = mhz(a["transit_mhz"]);
        cfg.atom.gamma_c = mhz(a["dephasing_mhz"]);
        cfg.gamma2_total = mhz(a["total_dephasing_mhz"]);
        cfg.atom.mu12 = a["mu12_coulomb_m"].get<double>();
        cfg.atom.mu34 = a["mu34_coulomb_m"].get<double>();
        cfg.atom.n0 = a["density_per_cm3"].get<double>() * 1e6;
        cfg.atom.upsilon = a["excitation_fraction"].get<double>();
        cfg.atom.cell_length = a["cell_length_cm"].get<double>() * 1e-2;

        cfg.optics.omega_p = mhz(o["probe_rabi_mhz"]);
        cfg.optics.omega_c = mhz(o["coupling_rabi_mhz"]);
        cfg.optics.omega_l = mhz(l["rabi_mhz"]);
        cfg.optics.delta_p = mhz(o["probe_detuning_mhz"]);
        cfg.optics.delta_c = mhz(o["coupling_detuning_mhz"]);
        cfg.optics.delta_l = mhz(l["detuning_mhz"]);
        cfg.optics.lambda_p = o["probe_wavelength_nm"].get<double>() * 1e-9;
        cfg.optics.f_p = c::speed_of_light / cfg.optics.lambda_p;
        cfg.optics.fwhm_p = o["probe_fwhm_mm"].get<double>() * 1e-3;
        cfg.optics.beam_radius = o["beam_radius_mm"].get<double>() * 1e-3;
        cfg.optics.probe_phase_in = o["probe_phase_rad"].get<double>();
        cfg.optics.probe_amp_in =
            atom::probe_amplitude_from_power(o["probe_power_uw"].get<double>() * 1e-6, cfg.optics.fwhm_p);
        if (!o["rational_a"].empty() || !o["rational_b"].empty() || !o["rational_c"].empty())
        {
            atom::RationalCoefficients rc;
            const auto ra = triple(o["rational_a"], "optics.rational_a");
            const auto rb = triple(o["rational_b"], "optics.rational_b");
            const auto rcc = triple(o["rational_c"], "optics.rational_c");
            rc.a = ra;
            rc.b = rb;
            rc.c = rcc;
            rc.varsigma = atom::varsigma(cfg.atom);
            cfg.rational = rc;
        }

        cfg.lo.omega_l = cfg.optics.omega_l;
        cfg.lo.delta_l = cfg.optics.delta_l;
        cfg.lo.f_l = ar["carrier_ghz"].get<double>() * 1e9;
        cfg.lo.theta_l1 = l["phase_rad"].get<double>();
        cfg.lo.vartheta = l["doa_deg"].get<double>() * c::deg;

        cfg.pd.eta = p["quantum_efficiency"].get<double>();
        cfg.pd.q_charge = c::elementary_charge;
        cfg.pd.lna_gain = c::db_to_linear(p["lna_gain_db"].get<double>());
        cfg.pd.local_beam_power = p["local_beam_power_mw"].get<double>() * 1e-3;
        cfg.pd.omega_p_angular = c::two_pi * cfg.optics.f_p;
        cfg.varphi = p["superimposed_phase_deg"].get<double>() * c::deg;
        cfg.noise.psl_photon_energy = p["psl_photon_energy"].get<bool>();

        cfg.m_sensors = ar["sensors"].get<std::size_t>();
        cfg.spacing_wavelengths = ar["spacing_wavelengths"].get<double>();

        cfg.scene.k_targets = s["targets"].get<std::size_t>();
        cfg.scene.reflected_power_dbm = s["reflected_power_dbm"].get<double>();
        cfg.scene.doa_min = s["doa_min_deg"].get<double>() * c::deg;
        cfg.scene.doa_max = s["doa_max_deg"].get<double>() * c::deg;
        cfg.scene.separation_guard = s["separation_guard_deg"].get<double>() * c::deg;
        cfg.scene.endfire_guard = s["endfire_guard_deg"].get<double>() * c::deg;
        cfg.scene.electrical_guard = s["electrical_guard_rad"].get<double>();
        cfg.scene.area_center = s["area_center_m"].get<double>();
        cfg.scene.area_radius = s["area_radius_m"].get<double>();
        cfg.scene.pathloss.k0_db = s["pathloss_k0_db"].get<double>();
        cfg.scene.pathloss.exponent = s["pathloss_exponent"].get<double>();
        cfg.scene.pathloss.u0 = s["pathloss_u0_m"].get<double>();
        cfg.scene.bandwidth = s["bandwidth_khz"].get<double>() * 1e3;
        const std::string wf = s["waveform"].get<std::string>();
        if (wf == "random_gaussian")
            cfg.scene.waveform = array::Waveform::random_gaussian;
        else if (wf == "constant_modulus")
            cfg.scene.waveform = array::Waveform::constant_modulus;
        else
            throw ConfigError("config", 0, "scene.waveform: expected random_gaussian or constant_modulus");
        cfg.scene.effective_aperture = s["effective_aperture_m2"].get<double>();

        cfg.classical.noise_figure_db = cl["noise_figure_db"].get<double>();
        cfg.classical.temperature_k = cl["temperature_k"].get<double>();
        cfg.classical.rx_gain_db = cl["rx_gain_db"].get<double>();

        cfg.n_samples = e["samples"].get<std::size_t>();
        cfg.trials = e["trials"].get<std::size_t>();
        cfg.master_seed = e["master_seed"].get<std::uint64_t>();
        cfg.threads = e["threads"].get<std::size_t>();
        cfg.regimes.clear();
        for (const auto &r : e["regimes"])
            cfg.regimes.push_back(regime_from(r.get<std::string>()));
        cfg.estimators.clear();
        for (const auto &x : e["estimators"])
            cfg.estimators.push_back(x.get<std::string>());
        cfg.ml.grid_step = e["ml_grid_deg"].get<double>() * c::deg;
        cfg.ml.refine_tolerance = e["ml_tolerance_rad"].get<double>();
        cfg.ml.max_passes = static_cast<int>(e["ml_max_passes"].get<std::size_t>());

        cfg.sweep.variable = harness::variable_from_name(t["sweep"]["variable"].get<std::string>());
        cfg.sweep.grid = numbers(t["sweep"]["grid"]);
        if (cfg.sweep.grid.empty())
            cfg.sweep.grid = numbers(t["grids"][grid_key(cfg.sweep.variable)]);

        cfg.atom.validate();
        cfg.optics.validate();
        cfg.pd.validate();
        cfg.lo.validate();
        cfg.validate();
        return cfg;
    }

    PhysicsGrid resolve_physics(const Json &t)
    {
        PhysicsGrid g;
        for (double v : numbers(t["physics"]["rf_rabi_mhz"]))
        {
            if (!(v > 0.0))
                throw ConfigError("config", 0, "physics.rf_rabi_mhz: values must be positive");
            g.rf_rabi_mhz.push_back(v);
        }
        for (const auto &row : t["physics"]["detunings_mhz"])
            g.detunings_mhz.push_back(triple(row, "physics.detunings_mhz entries"));
        if (g.rf_rabi_mhz.empty() || g.detunings_mhz.empty())
            throw ConfigError("config", 0, "physics: grid must not be empty");
        return g;
    }
}
