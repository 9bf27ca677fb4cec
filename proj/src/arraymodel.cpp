// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The raq-doa Authors

#include "raqdoa/arraymodel.hpp"
#include "raqdoa/constants.hpp"
#include "raqdoa/errors.hpp"
#include "raqdoa/rng.hpp"

#include <algorithm>
#include <cmath>

namespace raqdoa
{
    namespace c = raqdoa::constants;

    ArrayGeometry ArrayGeometry::half_wavelength(std::size_t m, double carrier_freq_hz)
    {
        return with_spacing(m, carrier_freq_hz, 0.5);
    }

    ArrayGeometry ArrayGeometry::with_spacing(std::size_t m, double carrier_freq_hz, double spacing_wavelengths)
    {
        ArrayGeometry g;
        g.m_sensors = m;
        g.carrier_freq = carrier_freq_hz;
        g.carrier_wavelength = c::speed_of_light / carrier_freq_hz;
        g.spacing = spacing_wavelengths * g.carrier_wavelength;
        g.validate();
        return g;
    }

    double ArrayGeometry::phase_per_sensor() const
    {
        return c::two_pi * spacing / carrier_wavelength;
    }

    void ArrayGeometry::validate() const
    {
        if (m_sensors < 2)
            throw InvalidInput("ArrayGeometry: at least two sensors required");
        if (!(spacing > 0.0) || !(carrier_wavelength > 0.0))
            throw InvalidInput("ArrayGeometry: spacing and wavelength must be positive");
    }
}

namespace raqdoa::array
{
    namespace c = raqdoa::constants;

    void TargetScene::validate(const ArrayGeometry &geom) const
    {
        const std::size_t k = doas.size();
        if (k < 1)
            throw InvalidScene("TargetScene: at least one target required");
        if (k >= geom.m_sensors)
            throw InvalidScene("TargetScene: number of targets must be below the number of sensors");
        if (reflected_power_dbm.size() != k || distances.size() != k)
            throw InvalidScene("TargetScene: per-target vectors have inconsistent lengths");
        for (std::size_t i = 0; i < k; ++i)
        {
            if (!(std::abs(doas[i]) < c::pi / 2))
                throw InvalidScene("TargetScene: DOA outside (-pi/2, pi/2)");
            for (std::size_t j = 0; j < i; ++j)
                if (doas[i] == doas[j])
                    throw InvalidScene("TargetScene: coincident DOAs");
        }
    }

    ComplexVector steering_vector(double theta, const ArrayGeometry &geom)
    {
        const double step = geom.phase_per_sensor() * std::sin(theta);
        ComplexVector a(static_cast<Eigen::Index>(geom.m_sensors));
        for (Eigen::Index m = 0; m < a.size(); ++m)
            a(m) = std::polar(1.0, step * static_cast<double>(m));
        return a;
    }

    ComplexMatrix steering_matrix(const std::vector<double> &doas, const ArrayGeometry &geom)
    {
        ComplexMatrix a(static_cast<Eigen::Index>(geom.m_sensors), static_cast<Eigen::Index>(doas.size()));
        for (std::size_t k = 0; k < doas.size(); ++k)
            a.col(static_cast<Eigen::Index>(k)) = steering_vector(doas[k], geom);
        return a;
    }

    ComplexMatrix steering_derivative(const std::vector<double> &doas, const ArrayGeometry &geom)
    {
        ComplexMatrix a = steering_matrix(doas, geom);
        const double kd = geom.phase_per_sensor();
        for (std::size_t k = 0; k < doas.size(); ++k)
        {
            const Complex scale(0.0, kd * std::cos(doas[k]));
            for (Eigen::Index m = 0; m < a.rows(); ++m)
                a(m, static_cast<Eigen::Index>(k)) *= scale * static_cast<double>(m);
        }
        return a;
    }

    ComplexMatrix lo_mismatch_matrix(double vartheta, const ArrayGeometry &geom)
    {
        const auto m = static_cast<Eigen::Index>(geom.m_sensors);
        ComplexMatrix d = ComplexMatrix::Zero(m, m);
        const double step = geom.phase_per_sensor() * std::sin(vartheta);
        for (Eigen::Index i = 0; i < m; ++i)
            d(i, i) = std::polar(1.0, -step * static_cast<double>(i));
        return d;
    }

    double path_loss_db(double u, const PathLoss &pl)
    {
        if (!(pl.u0 > 0.0) || !(u >= pl.u0))
            throw InvalidInput("path_loss_db: distance must be at least u0 > 0");
        return pl.k0_db - 10.0 * pl.exponent * std::log10(u / pl.u0);
    }

    double received_power_w(const TargetScene &scene, std::size_t k)
    {
        return c::dbm_to_watt(scene.reflected_power_dbm.at(k) + path_loss_db(scene.distances.at(k), scene.pathloss));
    }

    double echo_field_amplitude(double received_power_w, const ArrayGeometry &geom, const EchoConvention &conv)
    {
        const double lambda = geom.carrier_wavelength;
        const double aperture = conv.effective_aperture > 0.0 ? conv.effective_aperture : lambda * lambda / (4.0 * c::pi);
        return std::sqrt(2.0 * c::z0 * received_power_w / aperture);
    }

    ComplexMatrix echo_waveforms(const TargetScene &scene, const std::vector<double> &amplitude, std::size_t n_samples,
                                 std::uint64_t seed)
    {
        const auto k = static_cast<Eigen::Index>(scene.k_targets());
        const auto n = static_cast<Eigen::Index>(n_samples);
        ComplexMatrix s(k, n);
        for (Eigen::Index i = 0; i < k; ++i)
        {
            auto eng = rng::stream(seed, rng::Stream::waveform, static_cast<std::uint64_t>(i));
            const double amp = amplitude.at(static_cast<std::size_t>(i));
            if (scene.waveform == Waveform::random_gaussian)
            {
                std::normal_distribution<double> nd;
                for (Eigen::Index t = 0; t < n; ++t)
                    s(i, t) = amp * rng::complex_normal(eng, nd);
            }
            else
            {
                std::uniform_real_distribution<double> ud(0.0, c::two_pi);
                for (Eigen::Index t = 0; t < n; ++t)
                    s(i, t) = std::polar(amp, ud(eng));
            }
        }
        return s;
    }

    namespace
    {
        void check_request(const TargetScene &scene, const ArrayGeometry &geom, std::size_t n_samples)
        {
            geom.validate();
            scene.validate(geom);
            if (n_samples < 1)
                throw InvalidInput("synthesize: at least one snapshot required");
        }

        // Adds CN(0, sigma2) noise, one stream per sensor row.
        void add_noise(ComplexMatrix &y, double sigma2, std::uint64_t seed, rng::Stream purpose)
        {
            if (sigma2 <= 0.0)
                return;
            const double scale = std::sqrt(sigma2);
            for (Eigen::Index m = 0; m < y.rows(); ++m)
            {
                auto eng = rng::stream(seed, purpose, static_cast<std::uint64_t>(m));
                std::normal_distribution<double> nd;
                for (Eigen::Index t = 0; t < y.cols(); ++t)
                    y(m, t) += scale * rng::complex_normal(eng, nd);
            }
        }
    }

    SnapshotMatrix synthesize_snapshots(const TargetScene &scene, const ArrayGeometry &geom,
                                        const transducer::SensorResponse &resp, const transducer::LoConfig &lo,
                                        std::size_t n_samples, double sigma2, std::uint64_t seed,
                                        const EchoConvention &conv)
    {
        check_request(scene, geom, n_samples);
        if (!(sigma2 >= 0.0) || !std::isfinite(sigma2))
            throw InvalidInput("synthesize_snapshots: noise power must be finite and non-negative");

        std::vector<double> amp(scene.k_targets());
        for (std::size_t k = 0; k < amp.size(); ++k)
            amp[k] = echo_field_amplitude(received_power_w(scene, k), geom, conv);

        SnapshotMatrix out;
        out.echoes = echo_waveforms(scene, amp, n_samples, seed);
        const ComplexMatrix a = steering_matrix(scene.doas, geom);
        const ComplexVector dgl = lo_mismatch_matrix(lo.vartheta, geom).diagonal();
        out.y = (std::sqrt(resp.rho) * resp.phi_ref) * (dgl.asDiagonal() * (a * out.echoes));
        add_noise(out.y, sigma2, seed, rng::Stream::raq_noise);
        out.sigma2 = sigma2;
        out.seed = seed;
        return out;
    }

    double classical_noise_power(const ClassicalReceiverConfig &rx, double bandwidth)
    {
        return c::boltzmann * rx.temperature_k * bandwidth * c::db_to_linear(rx.noise_figure_db);
    }

    SnapshotMatrix synthesize_classical_snapshots(const TargetScene &scene, const ArrayGeometry &geom,
                                                  const ClassicalReceiverConfig &rx, std::size_t n_samples,
                                                  std::uint64_t seed)
    {
        check_request(scene, geom, n_samples);
        const double gain = c::db_to_linear(rx.rx_gain_db);
        std::vector<double> amp(scene.k_targets());
        for (std::size_t k = 0; k < amp.size(); ++k)
            amp[k] = std::sqrt(received_power_w(scene, k) * gain);

        SnapshotMatrix out;
        out.regime = Regime::classical;
        out.echoes = echo_waveforms(scene, amp, n_samples, seed);
        out.y = steering_matrix(scene.doas, geom) * out.echoes;
        out.sigma2 = classical_noise_power(rx, scene.bandwidth);
        add_noise(out.y, out.sigma2, seed, rng::Stream::classical_noise);
        out.seed = seed;
        return out;
    }
}
