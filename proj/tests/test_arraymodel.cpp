// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The raq-doa Authors

#include "oracles.hpp"

#include "raqdoa/arraymodel.hpp"
#include "raqdoa/config.hpp"
#include "raqdoa/constants.hpp"
#include "raqdoa/errors.hpp"
#include "raqdoa/harness.hpp"

#include <doctest.h>

using namespace raqdoa;
using namespace raqdoa::array;

namespace
{
    const double carrier = 6.9458e9;

    TargetScene scene_of(std::vector<double> doas, double dbm = 23.0, double dist = 1500.0)
    {
        TargetScene s;
        s.reflected_power_dbm.assign(doas.size(), dbm);
        s.distances.assign(doas.size(), dist);
        s.doas = std::move(doas);
        s.bandwidth = 100e3;
        return s;
    }

    transducer::SensorResponse response(double rho, Complex phi)
    {
        transducer::SensorResponse r;
        r.rho = rho;
        r.phi_ref = phi;
        return r;
    }
}

TEST_CASE("steering vector")
{
    const auto g = ArrayGeometry::half_wavelength(7, carrier);
    CHECK((steering_vector(0.0, g) - ComplexVector::Ones(7)).norm() == 0.0);
    for (double t : {-1.2, -0.3, 0.5, 1.4})
    {
        const ComplexVector a = steering_vector(t, g);
        CHECK(a(0) == Complex(1.0, 0.0));
        CHECK((a - oracle::steering(t, 7, oracle::pi)).norm() < 1e-13);
    }
    const auto g2 = ArrayGeometry::half_wavelength(2, carrier);
    CHECK(std::abs(steering_vector(30.0 * constants::deg, g2)(1) - Complex(0.0, 1.0)) < 1e-15);
}

TEST_CASE("steering derivative matches finite differences")
{
    const auto g = ArrayGeometry::half_wavelength(9, carrier);
    const std::vector<double> doas{-0.7, 0.1, 0.9};
    const ComplexMatrix d = steering_derivative(doas, g);
    const double h = 1e-6;
    for (std::size_t k = 0; k < doas.size(); ++k)
    {
        const ComplexVector fd = (steering_vector(doas[k] + h, g) - steering_vector(doas[k] - h, g)) / (2.0 * h);
        CHECK((d.col(static_cast<Eigen::Index>(k)) - fd).norm() <= 1e-7 * fd.norm());
    }
}

TEST_CASE("LO mismatch matrix")
{
    const auto g = ArrayGeometry::half_wavelength(6, carrier);
    CHECK((lo_mismatch_matrix(0.0, g) - ComplexMatrix::Identity(6, 6)).norm() == 0.0);
    const double v = 0.52;
    const ComplexMatrix d = lo_mismatch_matrix(v, g);
    const ComplexVector a = steering_vector(v, g);
    for (Eigen::Index m = 0; m < 6; ++m)
    {
        CHECK(std::abs(std::abs(d(m, m)) - 1.0) < 1e-15);
        CHECK(std::abs(d(m, m) - std::conj(a(m))) < 1e-15);
    }
    CHECK((d.adjoint() * d - ComplexMatrix::Identity(6, 6)).norm() < 1e-14);
    CHECK((d - ComplexMatrix(d.diagonal().asDiagonal())).norm() == 0.0);
}

TEST_CASE("path loss")
{
    PathLoss pl;
    CHECK(path_loss_db(1.0, pl) == doctest::Approx(-30.0));
    CHECK(path_loss_db(200.0, pl) - path_loss_db(400.0, pl) == doctest::Approx(20.0 * std::log10(2.0)));
    CHECK(20.0 * std::log10(2.0) == doctest::Approx(6.0206).epsilon(1e-5));
    CHECK(path_loss_db(1500.0, pl) == doctest::Approx(-30.0 - 20.0 * std::log10(1500.0)));
    CHECK(path_loss_db(1500.0, pl) == doctest::Approx(-93.52).epsilon(1e-4));
    CHECK_THROWS_AS(path_loss_db(0.5, pl), InvalidInput);
}

TEST_CASE("echo amplitude convention")
{
    const auto g = ArrayGeometry::half_wavelength(4, carrier);
    const double p = 1e-9;
    const double aeff = g.carrier_wavelength * g.carrier_wavelength / (4.0 * constants::pi);
    CHECK(echo_field_amplitude(p, g) == doctest::Approx(std::sqrt(2.0 * constants::z0 * p / aeff)));
    EchoConvention conv;
    conv.effective_aperture = 0.01;
    CHECK(echo_field_amplitude(p, g, conv) == doctest::Approx(std::sqrt(2.0 * constants::z0 * p / 0.01)));
    const auto s = scene_of({0.1}, 23.0, 1500.0);
    CHECK(received_power_w(s, 0) == doctest::Approx(std::pow(10.0, (23.0 - 93.5218 - 30.0) / 10.0)).epsilon(1e-4));
}

TEST_CASE("noiseless broadside snapshots have identical rows")
{
    const auto g = ArrayGeometry::half_wavelength(5, carrier);
    transducer::LoConfig lo;
    lo.vartheta = 0.0;
    const auto resp = response(4.0, Complex(0.6, 0.8));
    const auto y = synthesize_snapshots(scene_of({0.0}), g, resp, lo, 20, 0.0, 99);
    for (Eigen::Index t = 0; t < 20; ++t)
    {
        const Complex expected = 2.0 * resp.phi_ref * y.echoes(0, t);
        for (Eigen::Index m = 0; m < 5; ++m)
            CHECK(std::abs(y.y(m, t) - expected) < 1e-15 * std::abs(expected) + 1e-300);
    }
}

TEST_CASE("noiseless snapshots have rank K and follow the model")
{
    const auto g = ArrayGeometry::half_wavelength(8, carrier);
    transducer::LoConfig lo;
    lo.vartheta = 0.4;
    const auto resp = response(2.5, Complex(0.2, -0.9));
    const auto sc = scene_of({-0.6, 0.1, 0.8});
    const auto y = synthesize_snapshots(sc, g, resp, lo, 40, 0.0, 5);
    CHECK(num::numerical_rank(num::svd(y.y).s) == 3);
    const ComplexMatrix model =
        std::sqrt(resp.rho) * resp.phi_ref * lo_mismatch_matrix(0.4, g) * steering_matrix(sc.doas, g) * y.echoes;
    CHECK((y.y - model).norm() <= 1e-13 * model.norm());
}

TEST_CASE("sample covariance converges to the model covariance")
{
    const auto g = ArrayGeometry::half_wavelength(6, carrier);
    transducer::LoConfig lo;
    lo.vartheta = 0.3;
    const auto resp = response(1.0, Complex(0.0, 1.0));
    const auto sc = scene_of({-0.5, 0.35});
    std::vector<double> amp;
    for (std::size_t k = 0; k < 2; ++k)
        amp.push_back(echo_field_amplitude(received_power_w(sc, k), g));
    const double sigma2 = amp[0] * amp[0];
    const std::size_t n = 100000;
    const auto y = synthesize_snapshots(sc, g, resp, lo, n, sigma2, 17);
    const ComplexMatrix r = y.y * y.y.adjoint() / static_cast<double>(n);

    const ComplexMatrix da = lo_mismatch_matrix(0.3, g) * steering_matrix(sc.doas, g);
    ComplexMatrix rs = ComplexMatrix::Zero(2, 2);
    rs(0, 0) = amp[0] * amp[0];
    rs(1, 1) = amp[1] * amp[1];
    const ComplexMatrix expected = resp.rho * std::norm(resp.phi_ref) * da * rs * da.adjoint() +
                                   sigma2 * ComplexMatrix::Identity(6, 6);
    CHECK((r - expected).norm() <= 0.05 * expected.norm());
}

TEST_CASE("synthesis is deterministic in the seed")
{
    const auto g = ArrayGeometry::half_wavelength(6, carrier);
    transducer::LoConfig lo;
    const auto resp = response(1.0, Complex(1.0, 0.0));
    const auto sc = scene_of({-0.5, 0.35});
    const auto a = synthesize_snapshots(sc, g, resp, lo, 30, 1e-12, 42);
    const auto b = synthesize_snapshots(sc, g, resp, lo, 30, 1e-12, 42);
    const auto c = synthesize_snapshots(sc, g, resp, lo, 30, 1e-12, 43);
    CHECK((a.y - b.y).norm() == 0.0);
    CHECK((a.y - c.y).norm() > 0.0);
    const auto ca = synthesize_classical_snapshots(sc, g, ClassicalReceiverConfig{}, 30, 42);
    const auto cb = synthesize_classical_snapshots(sc, g, ClassicalReceiverConfig{}, 30, 42);
    CHECK((ca.y - cb.y).norm() == 0.0);
}

TEST_CASE("invalid scenes are rejected")
{
    const auto g = ArrayGeometry::half_wavelength(3, carrier);
    transducer::LoConfig lo;
    const auto resp = response(1.0, Complex(1.0, 0.0));
    CHECK_THROWS_AS(synthesize_snapshots(scene_of({-0.5, 0.1, 0.6}), g, resp, lo, 10, 0.0, 1), InvalidScene);
    CHECK_THROWS_AS(synthesize_snapshots(scene_of({0.2, 0.2}), g, resp, lo, 10, 0.0, 1), InvalidScene);
    CHECK_THROWS_AS(synthesize_snapshots(scene_of({constants::pi / 2}), g, resp, lo, 10, 0.0, 1), InvalidScene);
    CHECK_THROWS_AS(synthesize_classical_snapshots(scene_of({-0.5, 0.1, 0.6}), g, ClassicalReceiverConfig{}, 10, 1),
                    InvalidScene);
}

TEST_CASE("classical receiver")
{
    const auto g = ArrayGeometry::half_wavelength(6, carrier);
    ClassicalReceiverConfig rx;
    const double kt = constants::boltzmann * 290.0 * 100e3;
    CHECK(classical_noise_power(rx, 100e3) == doctest::Approx(kt * std::pow(10.0, 0.5)).epsilon(1e-14));

    auto sc = scene_of({0.25});
    rx.noise_figure_db = 0.0;
    auto noiseless = synthesize_classical_snapshots(sc, g, rx, 16, 3);
    const ComplexMatrix clean = steering_matrix(sc.doas, g) * noiseless.echoes;
    CHECK(num::numerical_rank(num::svd(clean).s) == 1);

    // NF +3 dB gives the same SNR as reflected power -3 dB
    ClassicalReceiverConfig hi = rx;
    hi.noise_figure_db = 3.0;
    auto quiet = sc;
    quiet.reflected_power_dbm[0] -= 3.0;
    const double snr_nf = received_power_w(sc, 0) / classical_noise_power(hi, sc.bandwidth);
    const double snr_p = received_power_w(quiet, 0) / classical_noise_power(rx, sc.bandwidth);
    CHECK(snr_nf == doctest::Approx(snr_p).epsilon(1e-14));

    // echo mean-square amplitude equals received power times gain
    rx.rx_gain_db = 10.0;
    const auto big = synthesize_classical_snapshots(sc, g, rx, 20000, 8);
    const double ms = big.echoes.squaredNorm() / 20000.0;
    CHECK(ms == doctest::Approx(10.0 * received_power_w(sc, 0)).epsilon(0.03));
}

TEST_CASE("classical ESPRIT error falls by half per +3 dB at high SNR")
{
    // slope over a power sweep through the harness: MSE ratio per 3 dB step near 1/2
    auto cfg = config::resolve(config::default_tree());
    cfg.regimes = {transducer::Regime::classical};
    cfg.estimators = {"esprit"};
    cfg.scene.k_targets = 1;
    cfg.trials = 400;
    cfg.threads = 2;
    cfg.sweep.variable = harness::SweepVariable::reflected_power;
    cfg.sweep.grid = {10.0, 13.0, 16.0, 19.0};
    const auto t = harness::run_sweep(cfg);
    const auto s = t.series("esprit", transducer::Regime::classical);
    REQUIRE(s.size() == 4);
    const double slope = std::log(s.back() / s.front()) / std::log(std::pow(10.0, 0.9));
    CHECK(slope == doctest::Approx(-1.0).epsilon(0.15));
}
