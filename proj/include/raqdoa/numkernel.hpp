// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The raq-doa Authors
//
// Dense complex linear algebra used by the steady-state solver and the subspace
// estimators. All functions are pure and thread-safe.

#ifndef RAQDOA_NUMKERNEL_HPP
#define RAQDOA_NUMKERNEL_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstddef>

namespace raqdoa::num
{
    using Complex = std::complex<double>;
    using ComplexMatrix = Eigen::MatrixXcd;
    using ComplexVector = Eigen::VectorXcd;
    using RealMatrix = Eigen::MatrixXd;
    using RealVector = Eigen::VectorXd;

    // Relative singular-value threshold for every rank decision in the library.
    inline constexpr double rank_tolerance = 1e-10;

    // Throws InvalidInput for empty or non-finite matrices.
    void require_valid(const ComplexMatrix &m, const char *what);

    // Economy SVD, m = u * diag(s) * v^H with s descending.
    struct Svd
    {
        ComplexMatrix u;
        RealVector s;
        ComplexMatrix v;
    };
    Svd svd(const ComplexMatrix &m);

    // Number of singular values above rel_tol * s_max.
    std::size_t numerical_rank(const RealVector &s, double rel_tol = rank_tolerance);

    // Eigenpairs of a general square matrix; eigenvectors are unit-norm columns.
    struct EigenDecomposition
    {
        ComplexVector values;
        ComplexMatrix vectors;
    };
    EigenDecomposition eig_general(const ComplexMatrix &m);

    // Moore-Penrose pseudoinverse with the library rank threshold.
    ComplexMatrix pinv(const ComplexMatrix &m);

    // Steady state of a vectorised (column-stacked) Lindbladian: solves l * vec(rho) = 0
    // subject to trace(rho) = 1. Throws DegenerateSystem when the null space of l is not
    // one-dimensional. The returned rho is Hermitian and has unit trace.
    ComplexVector solve_steady_null(const ComplexMatrix &l);

    // Reshape helpers for column-stacked density matrices.
    ComplexMatrix unvec(const ComplexVector &v, Eigen::Index n);
    ComplexVector vec(const ComplexMatrix &m);
}

#endif
