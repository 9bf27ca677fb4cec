// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The raq-doa Authors

#include "oracles.hpp"

#include "raqdoa/errors.hpp"
#include "raqdoa/numkernel.hpp"

#include <doctest.h>

#include <limits>

using namespace raqdoa;
using num::Complex;
using num::ComplexMatrix;

namespace
{
    double rel_recon(const ComplexMatrix &m)
    {
        const auto d = num::svd(m);
        const ComplexMatrix r = d.u * d.s.cast<Complex>().asDiagonal() * d.v.adjoint();
        return (r - m).norm() / m.norm();
    }

    // Two-level atom, decay gamma from |2> to |1>, no drive: column-stacked Lindbladian.
    ComplexMatrix two_level_decay(double gamma)
    {
        ComplexMatrix l = ComplexMatrix::Zero(4, 4);
        // vec index = row + 2 * col
        l(0, 3) = gamma;          // d rho11 / dt += gamma rho22
        l(3, 3) = -gamma;         // d rho22 / dt
        l(1, 1) = -gamma / 2.0;   // rho21
        l(2, 2) = -gamma / 2.0;   // rho12
        return l;
    }
}

TEST_CASE("svd of the identity has unit singular values")
{
    const auto d = num::svd(ComplexMatrix::Identity(4, 4));
    for (Eigen::Index i = 0; i < 4; ++i)
        CHECK(d.s(i) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("svd of a rank-1 outer product")
{
    std::mt19937_64 eng(3);
    Eigen::VectorXcd u = oracle::random_matrix(5, 1, eng).col(0).normalized();
    Eigen::VectorXcd v = oracle::random_matrix(4, 1, eng).col(0).normalized();
    const auto d = num::svd(u * v.adjoint());
    CHECK(d.s(0) == doctest::Approx(1.0).epsilon(1e-12));
    for (Eigen::Index i = 1; i < d.s.size(); ++i)
        CHECK(d.s(i) < 1e-12);
    CHECK(num::numerical_rank(d.s) == 1);
}

TEST_CASE("svd reconstructs random matrices up to 64x64")
{
    std::mt19937_64 eng(11);
    CHECK(rel_recon(oracle::random_matrix(6, 4, eng)) <= 1e-10);
    for (int n : {2, 9, 17, 33, 64})
    {
        const ComplexMatrix m = oracle::random_matrix(n, std::max(1, n / 2 + 1), eng);
        CHECK(rel_recon(m) <= 1e-10);
        const auto d = num::svd(m);
        CHECK((d.u.adjoint() * d.u - ComplexMatrix::Identity(d.u.cols(), d.u.cols())).norm() < 1e-10);
        CHECK((d.v.adjoint() * d.v - ComplexMatrix::Identity(d.v.cols(), d.v.cols())).norm() < 1e-10);
        for (Eigen::Index i = 1; i < d.s.size(); ++i)
            CHECK(d.s(i) <= d.s(i - 1));
    }
}

TEST_CASE("svd rejects empty and non-finite input")
{
    CHECK_THROWS_AS(num::svd(ComplexMatrix(0, 3)), InvalidInput);
    ComplexMatrix m = ComplexMatrix::Identity(2, 2);
    m(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(num::svd(m), InvalidInput);
}

TEST_CASE("eig_general on small closed cases")
{
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = Complex(0.0, 3.0);
    auto e = num::eig_general(d);
    std::vector<Complex> v{e.values(0), e.values(1)};
    auto has = [&](Complex z) {
        return std::any_of(v.begin(), v.end(), [&](Complex w) { return std::abs(w - z) < 1e-12; });
    };
    CHECK(has(2.0));
    CHECK(has(Complex(0.0, 3.0)));

    ComplexMatrix s(2, 2);
    s << 0.0, 1.0, 1.0, 0.0;
    e = num::eig_general(s);
    v = {e.values(0), e.values(1)};
    CHECK(has(1.0));
    CHECK(has(-1.0));
}

TEST_CASE("eig_general residual on a random diagonalizable matrix")
{
    std::mt19937_64 eng(5);
    const ComplexMatrix m = oracle::random_matrix(5, 5, eng);
    const auto e = num::eig_general(m);
    for (Eigen::Index k = 0; k < 5; ++k)
    {
        const Eigen::VectorXcd vk = e.vectors.col(k);
        CHECK(std::abs(vk.norm() - 1.0) < 1e-12);
        CHECK((m * vk - e.values(k) * vk).norm() <= 1e-9 * m.norm());
    }
}

TEST_CASE("eig_general rejects a non-square matrix")
{
    CHECK_THROWS_AS(num::eig_general(ComplexMatrix::Ones(2, 3)), InvalidInput);
}

TEST_CASE("pinv trivial cases")
{
    CHECK((num::pinv(ComplexMatrix::Identity(3, 3)) - ComplexMatrix::Identity(3, 3)).norm() < 1e-14);
    const ComplexMatrix z = num::pinv(ComplexMatrix::Zero(2, 5));
    CHECK(z.rows() == 5);
    CHECK(z.cols() == 2);
    CHECK(z.norm() == 0.0);
}

TEST_CASE("pinv satisfies the Moore-Penrose identities")
{
    std::mt19937_64 eng(9);
    const ComplexMatrix tall = oracle::random_matrix(9, 3, eng);
    const ComplexMatrix p = num::pinv(tall);
    CHECK((p * tall - ComplexMatrix::Identity(3, 3)).norm() <= 1e-10);

    // rank-deficient 6x5 of rank 2
    const ComplexMatrix m = oracle::random_matrix(6, 2, eng) * oracle::random_matrix(2, 5, eng);
    const ComplexMatrix x = num::pinv(m);
    const double s = m.norm();
    CHECK((m * x * m - m).norm() <= 1e-9 * s);
    CHECK((x * m * x - x).norm() <= 1e-9 * x.norm());
    CHECK(((m * x).adjoint() - m * x).norm() <= 1e-9);
    CHECK(((x * m).adjoint() - x * m).norm() <= 1e-9);
}

TEST_CASE("steady state of an undriven decaying two-level atom is the ground state")
{
    const Eigen::VectorXcd v = num::solve_steady_null(two_level_decay(2.0 * oracle::pi * 5.2e6));
    const ComplexMatrix rho = num::unvec(v, 2);
    CHECK(std::abs(rho(0, 0) - 1.0) < 1e-12);
    CHECK(std::abs(rho(1, 1)) < 1e-12);
    CHECK(std::abs(rho.trace() - 1.0) < 1e-15);
}

TEST_CASE("steady-state solve rejects a degenerate null space")
{
    CHECK_THROWS_AS(num::solve_steady_null(ComplexMatrix::Zero(4, 4)), DegenerateSystem);
}

TEST_CASE("vec and unvec are inverse column-stacking maps")
{
    std::mt19937_64 eng(1);
    const ComplexMatrix m = oracle::random_matrix(3, 3, eng);
    const Eigen::VectorXcd v = num::vec(m);
    CHECK(v(1) == m(1, 0));
    CHECK(v(3) == m(0, 1));
    CHECK((num::unvec(v, 3) - m).norm() == 0.0);
}
