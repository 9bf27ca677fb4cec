// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The raq-doa Authors
//
// Reference computations used as test oracles. Each one is written from the
// defining formula and shares no code with the library under test.

#ifndef RAQDOA_TEST_ORACLES_HPP
#define RAQDOA_TEST_ORACLES_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace oracle
{
    using cd = std::complex<double>;
    inline constexpr double pi = 3.14159265358979323846;

    // Weak-probe two-level coherence rho_21 = (i Op / 2) / (g2 / 2 - i Dp).
    inline cd two_level_rho21(double omega_p, double gamma2, double delta_p)
    {
        return cd(0.0, omega_p / 2.0) / cd(gamma2 / 2.0, -delta_p);
    }

    // Exact steady state of a driven two-level atom (optical Bloch equations), rho_21.
    inline cd two_level_exact_rho21(double omega_p, double gamma2, double delta_p)
    {
        const double s = omega_p * omega_p / 2.0 / (delta_p * delta_p + gamma2 * gamma2 / 4.0);
        return two_level_rho21(omega_p, gamma2, delta_p) / (1.0 + s);
    }

    inline Eigen::VectorXcd steering(double theta, std::size_t m, double kd)
    {
        Eigen::VectorXcd a(static_cast<Eigen::Index>(m));
        for (std::size_t i = 0; i < m; ++i)
            a(static_cast<Eigen::Index>(i)) = std::exp(cd(0.0, kd * static_cast<double>(i) * std::sin(theta)));
        return a;
    }

    // Deterministic single-source ULA CRB with |s|^2 signal power and noise variance sigma2, N snapshots.
    inline double ula_single_crb(double sigma2, double signal_power, std::size_t n, double kd, double theta,
                                 std::size_t m)
    {
        const double md = static_cast<double>(m);
        const double g = kd * std::cos(theta);
        return sigma2 / (2.0 * static_cast<double>(n)) * 12.0 / (signal_power * g * g * md * (md * md - 1.0));
    }

    // Minimum over all permutations of the summed squared error.
    inline double brute_force_mse(const std::vector<double> &est, const std::vector<double> &truth)
    {
        std::vector<std::size_t> perm(est.size());
        std::iota(perm.begin(), perm.end(), 0);
        double best = HUGE_VAL;
        do
        {
            double s = 0.0;
            for (std::size_t i = 0; i < perm.size(); ++i)
                s += (truth[i] - est[perm[i]]) * (truth[i] - est[perm[i]]);
            best = std::min(best, s);
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best;
    }

    // Largest principal angle between the column spaces of a and b.
    inline double max_principal_angle(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b)
    {
        const Eigen::MatrixXcd qa = Eigen::HouseholderQR<Eigen::MatrixXcd>(a).householderQ() *
                                    Eigen::MatrixXcd::Identity(a.rows(), a.cols());
        const Eigen::MatrixXcd qb = Eigen::HouseholderQR<Eigen::MatrixXcd>(b).householderQ() *
                                    Eigen::MatrixXcd::Identity(b.rows(), b.cols());
        const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXcd>(qa.adjoint() * qb).singularValues();
        return std::acos(std::clamp(s.minCoeff(), -1.0, 1.0));
    }

    inline double spearman(const std::vector<double> &x, const std::vector<double> &y)
    {
        auto ranks = [](const std::vector<double> &v) {
            std::vector<std::size_t> idx(v.size());
            std::iota(idx.begin(), idx.end(), 0);
            std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
            std::vector<double> r(v.size());
            for (std::size_t i = 0; i < idx.size(); ++i)
                r[idx[i]] = static_cast<double>(i);
            return r;
        };
        const auto rx = ranks(x), ry = ranks(y);
        const double n = static_cast<double>(x.size());
        double d2 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
        return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
    }

    inline Eigen::MatrixXcd random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64 &eng)
    {
        std::normal_distribution<double> nd;
        Eigen::MatrixXcd m(r, c);
        for (Eigen::Index i = 0; i < r; ++i)
            for (Eigen::Index j = 0; j < c; ++j)
                m(i, j) = cd(nd(eng), nd(eng));
        return m;
    }

    // K distinct DOAs in (-lim, lim) separated by at least sep (rad).
    inline std::vector<double> random_doas(std::size_t k, double lim, double sep, std::mt19937_64 &eng)
    {
        std::uniform_real_distribution<double> ud(-lim, lim);
        std::vector<double> d;
        while (d.size() < k)
        {
            const double t = ud(eng);
            bool ok = true;
            for (double x : d)
                ok = ok && std::abs(x - t) >= sep;
            if (ok)
                d.push_back(t);
        }
        return d;
    }
}

#endif
