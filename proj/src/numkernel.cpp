// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The raq-doa Authors

#include "raqdoa/numkernel.hpp"
#include "raqdoa/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <string>

namespace raqdoa::num
{
    void require_valid(const ComplexMatrix &m, const char *what)
    {
        if (m.rows() < 1 || m.cols() < 1)
            throw InvalidInput(std::string(what) + ": empty matrix");
        if (!m.allFinite())
            throw InvalidInput(std::string(what) + ": non-finite entry");
    }

    Svd svd(const ComplexMatrix &m)
    {
        require_valid(m, "svd");
        Eigen::JacobiSVD<ComplexMatrix> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
    }

    std::size_t numerical_rank(const RealVector &s, double rel_tol)
    {
        if (s.size() == 0)
            return 0;
        const double cutoff = rel_tol * s.maxCoeff();
        std::size_t r = 0;
        for (Eigen::Index i = 0; i < s.size(); ++i)
            if (s(i) > cutoff)
                ++r;
        return r;
    }

    EigenDecomposition eig_general(const ComplexMatrix &m)
    {
        require_valid(m, "eig_general");
        if (m.rows() != m.cols())
            throw InvalidInput("eig_general: matrix is not square");

        Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, true);
        if (solver.info() != Eigen::Success)
            throw NumericalFailure("eig_general: QR iteration did not converge");

        EigenDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
        for (Eigen::Index k = 0; k < out.vectors.cols(); ++k)
        {
            const double n = out.vectors.col(k).norm();
            if (n > 0.0)
                out.vectors.col(k) /= n;
        }
        return out;
    }

    ComplexMatrix pinv(const ComplexMatrix &m)
    {
        require_valid(m, "pinv");
        const Svd d = svd(m);
        const std::size_t r = numerical_rank(d.s);
        ComplexMatrix out = ComplexMatrix::Zero(m.cols(), m.rows());
        for (std::size_t k = 0; k < r; ++k)
        {
            const auto i = static_cast<Eigen::Index>(k);
            out.noalias() += d.v.col(i) * (1.0 / d.s(i)) * d.u.col(i).adjoint();
        }
        return out;
    }

    ComplexMatrix unvec(const ComplexVector &v, Eigen::Index n)
    {
        if (v.size() != n * n)
            throw InvalidInput("unvec: length is not n^2");
        return Eigen::Map<const ComplexMatrix>(v.data(), n, n);
    }

    ComplexVector vec(const ComplexMatrix &m)
    {
        return Eigen::Map<const ComplexVector>(m.data(), m.size());
    }

    ComplexVector solve_steady_null(const ComplexMatrix &l)
    {
        require_valid(l, "solve_steady_null");
        if (l.rows() != l.cols())
            throw InvalidInput("solve_steady_null: superoperator is not square");
        const auto n2 = l.rows();
        const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n2))));
        if (n * n != n2)
            throw InvalidInput("solve_steady_null: dimension is not a perfect square");

        const Svd dl = svd(l);
        const std::size_t null_dim = static_cast<std::size_t>(n2) - numerical_rank(dl.s);
        if (null_dim != 1)
            throw DegenerateSystem("solve_steady_null: null space dimension " + std::to_string(null_dim));

        // Least squares on [l; trace row] x = [0; 1].
        ComplexMatrix aug(n2 + 1, n2);
        aug.topRows(n2) = l;
        aug.row(n2).setZero();
        for (Eigen::Index i = 0; i < n; ++i)
            aug(n2, i * n + i) = 1.0;
        ComplexVector rhs = ComplexVector::Zero(n2 + 1);
        rhs(n2) = 1.0;

        const Svd da = svd(aug);
        const std::size_t r = numerical_rank(da.s);
        ComplexVector x = ComplexVector::Zero(n2);
        const ComplexVector utb = da.u.adjoint() * rhs;
        for (std::size_t k = 0; k < r; ++k)
        {
            const auto i = static_cast<Eigen::Index>(k);
            x += da.v.col(i) * (utb(i) / da.s(i));
        }

        ComplexMatrix rho = unvec(x, n);
        rho = 0.5 * (rho + rho.adjoint()).eval();
        const Complex tr = rho.trace();
        if (std::abs(tr) == 0.0 || !std::isfinite(std::abs(tr)))
            throw NumericalFailure("solve_steady_null: vanishing trace");
        rho /= tr.real();
        // Diagonal of a Hermitian matrix is real; drop round-off in the imaginary part.
        for (Eigen::Index i = 0; i < n; ++i)
            rho(i, i) = rho(i, i).real();
        return vec(rho);
    }
}
