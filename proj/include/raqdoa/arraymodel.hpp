// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The raq-doa Authors
//
// Rydberg ULA geometry, steering and LO mismatch matrices, path loss and
// snapshot synthesis for the atomic array and the classical antenna baseline.

#ifndef RAQDOA_ARRAYMODEL_HPP
#define RAQDOA_ARRAYMODEL_HPP

#include "raqdoa/geometry.hpp"
#include "raqdoa/numkernel.hpp"
#include "raqdoa/transducer.hpp"

#include <cstdint>
#include <vector>

namespace raqdoa::array
{
    using num::Complex;
    using num::ComplexMatrix;
    using num::ComplexVector;
    using transducer::Regime;

    struct PathLoss
    {
        double k0_db = -30.0;
        double exponent = 2.0;
        double u0 = 1.0; // m
    };

    enum class Waveform
    {
        random_gaussian, // unit-power circular Gaussian per snapshot
        constant_modulus // unit modulus, seeded random phase
    };

    struct TargetScene
    {
        std::vector<double> doas;                // rad
        std::vector<double> reflected_power_dbm; // per target
        std::vector<double> distances;           // m
        PathLoss pathloss;
        double bandwidth = 0.0; // Hz
        Waveform waveform = Waveform::random_gaussian;

        std::size_t k_targets() const { return doas.size(); }
        // Throws InvalidScene unless 1 <= K < M, DOAs distinct and inside (-pi/2, pi/2).
        void validate(const ArrayGeometry &geom) const;
    };

    struct SnapshotMatrix
    {
        ComplexMatrix y;      // M x N
        ComplexMatrix echoes; // K x N, the s_t columns used to build y
        Regime regime = Regime::psl;
        double sigma2 = 0.0;
        std::uint64_t seed = 0;
    };

    // Field-amplitude convention for echoes at the atomic array.
    struct EchoConvention
    {
        double effective_aperture = 0.0; // m^2; 0 selects the isotropic lambda^2 / (4 pi)
    };

    // a(theta)_m = exp(j (2 pi / lambda) (m - 1) d sin theta)
    ComplexVector steering_vector(double theta, const ArrayGeometry &geom);
    ComplexMatrix steering_matrix(const std::vector<double> &doas, const ArrayGeometry &geom);
    // Columns d a(theta_k) / d theta_k.
    ComplexMatrix steering_derivative(const std::vector<double> &doas, const ArrayGeometry &geom);

    // D = diag{exp(-j (2 pi / lambda) d (m - 1) sin vartheta)}
    ComplexMatrix lo_mismatch_matrix(double vartheta, const ArrayGeometry &geom);

    // Path gain in dB: K0 at u0, falling by 10 v log10(u / u0). Add to the reflected power.
    double path_loss_db(double u, const PathLoss &pl);

    double received_power_w(const TargetScene &scene, std::size_t k);

    // E = sqrt(2 Z0 P / A_eff)
    double echo_field_amplitude(double received_power_w, const ArrayGeometry &geom, const EchoConvention &conv = {});

    // K x N echo matrix with row k scaled to amplitude[k]; rows use independent streams.
    ComplexMatrix echo_waveforms(const TargetScene &scene, const std::vector<double> &amplitude, std::size_t n_samples,
                                 std::uint64_t seed);

    // y_t = sqrt(rho) Phi D A(theta) s_t + w_t, w_t ~ CN(0, sigma2 I).
    SnapshotMatrix synthesize_snapshots(const TargetScene &scene, const ArrayGeometry &geom,
                                        const transducer::SensorResponse &resp, const transducer::LoConfig &lo,
                                        std::size_t n_samples, double sigma2, std::uint64_t seed,
                                        const EchoConvention &conv = {});

    struct ClassicalReceiverConfig
    {
        double noise_figure_db = 5.0;
        double temperature_k = 290.0;
        double rx_gain_db = 0.0;
    };

    // k_B T B F
    double classical_noise_power(const ClassicalReceiverConfig &rx, double bandwidth);

    // y_t = A(theta) s_t + w_t with |s_k|^2 = received power times receiver gain.
    SnapshotMatrix synthesize_classical_snapshots(const TargetScene &scene, const ArrayGeometry &geom,
                                                  const ClassicalReceiverConfig &rx, std::size_t n_samples,
                                                  std::uint64_t seed);
}

#endif
