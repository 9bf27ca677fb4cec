// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The raq-doa Authors

#include "raqdoa/estimators.hpp"
#include "raqdoa/arraymodel.hpp"
#include "raqdoa/constants.hpp"
#include "raqdoa/errors.hpp"

#include <algorithm>
#include <cmath>

namespace raqdoa::est
{
    namespace c = raqdoa::constants;

    namespace
    {
        constexpr double manifold_slack = 1e-6;

        void check_order(std::size_t k, std::size_t m)
        {
            if (k < 1)
                throw InvalidInput("estimator: at least one target required");
            if (k >= m)
                throw InvalidInput("estimator: number of targets must be below the number of sensors");
        }

        // theta = arcsin(lambda / (2 pi d) * angle(z)), clamped.
        double angle_to_doa(Complex z, const ArrayGeometry &geom, bool &out_of_manifold)
        {
            const double arg = std::arg(z) / geom.phase_per_sensor();
            if (std::abs(arg) > 1.0 + manifold_slack)
                out_of_manifold = true;
            return std::asin(std::clamp(arg, -1.0, 1.0));
        }

        DoaEstimate esprit_core(const ComplexMatrix &y1, const ComplexMatrix &y2, std::size_t k,
                                const ArrayGeometry &geom, Complex correction, const char *method)
        {
            geom.validate();
            if (y1.rows() != y2.rows() || y1.cols() != y2.cols())
                throw InvalidInput("esprit: sensor groups must have equal shape");
            if (static_cast<std::size_t>(y1.rows()) + 1 != geom.m_sensors)
                throw InvalidInput("esprit: sensor groups must have M - 1 rows");
            check_order(k, geom.m_sensors);

            ComplexMatrix stacked(2 * y1.rows(), y1.cols());
            stacked << y1, y2;
            const SubspaceDecomposition sub = signal_subspace(stacked, k);
            const ComplexMatrix psi = num::pinv(sub.u1) * sub.u2;
            const num::EigenDecomposition ed = num::eig_general(psi);

            DoaEstimate out;
            out.method = method;
            for (Eigen::Index i = 0; i < ed.values.size(); ++i)
            {
                out.eigenvalues.push_back(ed.values(i));
                out.doas.push_back(angle_to_doa(correction * ed.values(i), geom, out.out_of_manifold));
            }
            std::sort(out.doas.begin(), out.doas.end());
            return out;
        }
    }

    ComplexMatrix stack_groups(const ComplexMatrix &y)
    {
        if (y.rows() < 2)
            throw InvalidInput("stack_groups: at least two sensors required");
        const Eigen::Index m1 = y.rows() - 1;
        ComplexMatrix s(2 * m1, y.cols());
        s << y.topRows(m1), y.bottomRows(m1);
        return s;
    }

    SubspaceDecomposition signal_subspace(const ComplexMatrix &y_stacked, std::size_t k)
    {
        num::require_valid(y_stacked, "signal_subspace");
        const auto rows = static_cast<std::size_t>(y_stacked.rows());
        const auto n = static_cast<std::size_t>(y_stacked.cols());
        if (rows % 2 != 0)
            throw InvalidInput("signal_subspace: stacked matrix must have an even row count");
        const std::size_t m1 = rows / 2;
        // K >= M is the same as K > M - 1.
        if (k < 1 || k > m1)
            throw InvalidInput("signal_subspace: number of targets must be below the number of sensors");
        if (n < k)
            throw InvalidInput("signal_subspace: need at least K snapshots");

        const num::Svd d = num::svd(y_stacked);
        const auto kk = static_cast<Eigen::Index>(k);
        const ComplexMatrix u = d.u.leftCols(kk);
        SubspaceDecomposition out;
        out.u1 = u.topRows(static_cast<Eigen::Index>(m1));
        out.u2 = u.bottomRows(static_cast<Eigen::Index>(m1));
        out.singulars = d.s;
        return out;
    }

    DoaEstimate raq_esprit(const ComplexMatrix &y1, const ComplexMatrix &y2, std::size_t k, const ArrayGeometry &geom,
                           double vartheta)
    {
        const Complex corr = std::polar(1.0, geom.phase_per_sensor() * std::sin(vartheta));
        return esprit_core(y1, y2, k, geom, corr, "raq_esprit");
    }

    DoaEstimate raq_esprit(const ComplexMatrix &y, std::size_t k, const ArrayGeometry &geom, double vartheta)
    {
        const Eigen::Index m1 = y.rows() - 1;
        if (m1 < 1)
            throw InvalidInput("raq_esprit: at least two sensors required");
        return raq_esprit(y.topRows(m1), y.bottomRows(m1), k, geom, vartheta);
    }

    DoaEstimate classical_esprit(const ComplexMatrix &y1, const ComplexMatrix &y2, std::size_t k,
                                 const ArrayGeometry &geom)
    {
        return esprit_core(y1, y2, k, geom, Complex(1.0, 0.0), "esprit");
    }

    DoaEstimate classical_esprit(const ComplexMatrix &y, std::size_t k, const ArrayGeometry &geom)
    {
        const Eigen::Index m1 = y.rows() - 1;
        if (m1 < 1)
            throw InvalidInput("classical_esprit: at least two sensors required");
        return classical_esprit(y.topRows(m1), y.bottomRows(m1), k, geom);
    }

    namespace
    {
        // Tr(Q^H R Q) for an orthonormal basis Q of range(A).
        double projected_power(const ComplexMatrix &a, const ComplexMatrix &r)
        {
            Eigen::ColPivHouseholderQR<ComplexMatrix> qr(a);
            qr.setThreshold(num::rank_tolerance);
            const Eigen::Index rank = qr.rank();
            const ComplexMatrix q =
                ComplexMatrix(qr.householderQ()).leftCols(rank);
            return (q.adjoint() * r * q).trace().real();
        }

        // D^H R D, so the objective can use the plain steering matrix.
        ComplexMatrix absorb_mismatch(const ComplexMatrix &ry, const ArrayGeometry &geom, double vartheta)
        {
            const ComplexVector d = array::lo_mismatch_matrix(vartheta, geom).diagonal();
            return d.conjugate().asDiagonal() * ry * d.asDiagonal();
        }
    }

    double ml_objective(const std::vector<double> &doas, const ComplexMatrix &ry, const ArrayGeometry &geom,
                        double vartheta)
    {
        geom.validate();
        const auto m = static_cast<Eigen::Index>(geom.m_sensors);
        if (ry.rows() != m || ry.cols() != m)
            throw InvalidInput("ml_objective: covariance must be M x M");
        if (doas.empty())
            return 0.0;
        return projected_power(array::steering_matrix(doas, geom), absorb_mismatch(ry, geom, vartheta));
    }

    DoaEstimate raq_ml(const ComplexMatrix &y, std::size_t k, const ArrayGeometry &geom, double vartheta,
                       const MlSearchOptions &opts)
    {
        geom.validate();
        num::require_valid(y, "raq_ml");
        if (static_cast<std::size_t>(y.rows()) != geom.m_sensors)
            throw InvalidInput("raq_ml: snapshot matrix must have M rows");
        check_order(k, geom.m_sensors);
        if (k > opts.max_targets)
            throw InvalidInput("raq_ml: search supports at most max_targets targets");
        if (!(opts.grid_step > 0.0) || !(opts.refine_tolerance > 0.0))
            throw InvalidInput("raq_ml: grid step and tolerance must be positive");

        const ComplexMatrix ry = y * y.adjoint() / static_cast<double>(y.cols());
        const ComplexMatrix r = absorb_mismatch(ry, geom, vartheta);
        const double lo = -c::pi / 2, hi = c::pi / 2;

        std::vector<double> grid;
        const auto steps = static_cast<int>(std::floor((hi - lo) / opts.grid_step + 1e-9));
        for (int i = 0; i <= steps; ++i)
            grid.push_back(lo + opts.grid_step * i);

        std::vector<double> theta;
        auto objective = [&](const std::vector<double> &t) {
            return projected_power(array::steering_matrix(t, geom), r);
        };

        // Maximise coordinate i with the others held fixed; returns the new objective.
        auto optimise_coordinate = [&](std::size_t i, double current) {
            std::vector<double> t = theta;
            double best = current, best_x = theta[i];
            for (double g : grid)
            {
                t[i] = g;
                const double f = objective(t);
                if (f > best)
                {
                    best = f;
                    best_x = g;
                }
            }
            constexpr double inv_phi = 0.61803398874989484820;
            double a = std::max(lo, best_x - opts.grid_step), b = std::min(hi, best_x + opts.grid_step);
            double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
            t[i] = x1;
            double f1 = objective(t);
            t[i] = x2;
            double f2 = objective(t);
            while (b - a > opts.refine_tolerance)
            {
                if (f1 > f2)
                {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - inv_phi * (b - a);
                    t[i] = x1;
                    f1 = objective(t);
                }
                else
                {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + inv_phi * (b - a);
                    t[i] = x2;
                    f2 = objective(t);
                }
            }
            const double xm = 0.5 * (a + b);
            t[i] = xm;
            const double fm = objective(t);
            if (fm > best)
            {
                best = fm;
                best_x = xm;
            }
            theta[i] = best_x;
            return best;
        };

        DoaEstimate out;
        out.method = "raq_ml";
        double value = 0.0;
        // Sequential initialisation: add one source at a time.
        for (std::size_t i = 0; i < k; ++i)
        {
            theta.push_back(0.0);
            value = optimise_coordinate(i, theta.size() > 1 ? objective(theta) : -1.0);
        }
        out.objective_trace.push_back(value);

        out.converged = false;
        for (int pass = 0; pass < opts.max_passes; ++pass)
        {
            const std::vector<double> before = theta;
            for (std::size_t i = 0; i < k; ++i)
                value = optimise_coordinate(i, value);
            out.objective_trace.push_back(value);
            double moved = 0.0;
            for (std::size_t i = 0; i < k; ++i)
                moved = std::max(moved, std::abs(theta[i] - before[i]));
            if (moved <= opts.refine_tolerance)
            {
                out.converged = true;
                break;
            }
        }
        out.doas = theta;
        std::sort(out.doas.begin(), out.doas.end());
        return out;
    }

    namespace
    {
        struct BoundTerms
        {
            Eigen::MatrixXd x;        // Re(H o Rs^T)
            ComplexMatrix h;
            ComplexMatrix gram_inv;   // (A^H A)^-1
        };

        BoundTerms bound_terms(const std::vector<double> &doas, const ComplexMatrix &rs, const ArrayGeometry &geom,
                               double vartheta)
        {
            geom.validate();
            const std::size_t k = doas.size();
            check_order(k, geom.m_sensors);
            const auto kk = static_cast<Eigen::Index>(k);
            if (rs.rows() != kk || rs.cols() != kk)
                throw InvalidInput("bound: echo covariance must be K x K");
            num::require_valid(rs, "bound");

            const ComplexMatrix a = array::steering_matrix(doas, geom);
            const ComplexMatrix ad = array::steering_derivative(doas, geom);
            const ComplexMatrix d = array::lo_mismatch_matrix(vartheta, geom);
            const ComplexMatrix gram = a.adjoint() * a;
            Eigen::FullPivLU<ComplexMatrix> glu(gram);
            glu.setThreshold(num::rank_tolerance);
            if (!glu.isInvertible())
                throw InvalidScene("bound: steering matrix is rank deficient");

            BoundTerms t;
            t.gram_inv = glu.inverse();
            const ComplexMatrix da = d * a;
            const ComplexMatrix p = da * t.gram_inv * da.adjoint();
            const auto m = static_cast<Eigen::Index>(geom.m_sensors);
            const ComplexMatrix pperp = ComplexMatrix::Identity(m, m) - p;
            t.h = ad.adjoint() * d.adjoint() * pperp * d * ad;
            t.x = t.h.cwiseProduct(rs.transpose()).real();
            return t;
        }

        Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd &x, const char *what)
        {
            Eigen::LLT<Eigen::MatrixXd> llt(x);
            if (llt.info() != Eigen::Success)
                throw InvalidScene(what);
            return llt.solve(Eigen::MatrixXd::Identity(x.rows(), x.cols()));
        }

        void check_varpi(double varpi)
        {
            if (!(varpi >= 0.0) || !std::isfinite(varpi))
                throw InvalidInput("bound: noise coefficient must be finite and non-negative");
        }
    }

    double crlb(const std::vector<double> &doas, const ComplexMatrix &rs, const ArrayGeometry &geom, double vartheta,
                double varpi)
    {
        check_varpi(varpi);
        const BoundTerms t = bound_terms(doas, rs, geom, vartheta);
        return varpi * spd_inverse(t.x, "crlb: Fisher matrix is singular").trace();
    }

    double ml_asymptotic_error(const std::vector<double> &doas, const ComplexMatrix &rs, const ArrayGeometry &geom,
                               double vartheta, double varpi, std::size_t n_samples)
    {
        check_varpi(varpi);
        if (n_samples < 1)
            throw InvalidInput("ml_asymptotic_error: at least one snapshot required");
        const BoundTerms t = bound_terms(doas, rs, geom, vartheta);
        Eigen::FullPivLU<ComplexMatrix> rlu(rs);
        rlu.setThreshold(num::rank_tolerance);
        if (!rlu.isInvertible())
            throw InvalidScene("ml_asymptotic_error: echo covariance is singular");
        const ComplexMatrix rs_inv = rlu.inverse();
        const double n2 = 2.0 * static_cast<double>(n_samples);
        const ComplexMatrix w = rs_inv + n2 * varpi * rs_inv * t.gram_inv * rs_inv;
        const Eigen::MatrixXd inner = t.h.cwiseProduct((rs * w * rs).transpose()).real();
        const Eigen::MatrixXd xi = spd_inverse(t.x, "ml_asymptotic_error: Fisher matrix is singular");
        return varpi * (xi * xi * inner).trace();
    }
}
