// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The raq-doa Authors
//
// Direction-of-arrival estimators for the atomic ULA and the bounds they are
// compared against.

#ifndef RAQDOA_ESTIMATORS_HPP
#define RAQDOA_ESTIMATORS_HPP

#include "raqdoa/geometry.hpp"
#include "raqdoa/numkernel.hpp"

#include <string>
#include <vector>

namespace raqdoa::est
{
    using num::Complex;
    using num::ComplexMatrix;
    using num::ComplexVector;
    using num::RealVector;

    struct DoaEstimate
    {
        std::vector<double> doas;          // rad, ascending
        std::vector<Complex> eigenvalues;  // rotation eigenvalues (ESPRIT only)
        std::string method;
        bool out_of_manifold = false;      // an arcsin argument exceeded 1 by more than 1e-6
        bool converged = true;
        std::vector<double> objective_trace; // ML only, one entry per refinement pass
    };

    struct SubspaceDecomposition
    {
        ComplexMatrix u1; // (M-1) x K
        ComplexMatrix u2; // (M-1) x K
        RealVector singulars;
    };

    // Rows 1..M-1 and 2..M of y stacked into a 2(M-1) x N matrix.
    ComplexMatrix stack_groups(const ComplexMatrix &y);

    SubspaceDecomposition signal_subspace(const ComplexMatrix &y_stacked, std::size_t k);

    // ESPRIT with the LO mismatch correction exp(+j (2 pi / lambda) d sin vartheta).
    DoaEstimate raq_esprit(const ComplexMatrix &y1, const ComplexMatrix &y2, std::size_t k, const ArrayGeometry &geom,
                           double vartheta);
    DoaEstimate raq_esprit(const ComplexMatrix &y, std::size_t k, const ArrayGeometry &geom, double vartheta);

    DoaEstimate classical_esprit(const ComplexMatrix &y1, const ComplexMatrix &y2, std::size_t k,
                                 const ArrayGeometry &geom);
    DoaEstimate classical_esprit(const ComplexMatrix &y, std::size_t k, const ArrayGeometry &geom);

    // Tr(P R), P = D A (A^H A)^-1 A^H D^H. Rank-deficient A uses the projector onto its range.
    double ml_objective(const std::vector<double> &doas, const ComplexMatrix &ry, const ArrayGeometry &geom,
                        double vartheta);

    struct MlSearchOptions
    {
        double grid_step = 0.5 * 3.14159265358979323846 / 180.0; // rad
        double refine_tolerance = 1e-4;                          // rad
        int max_passes = 50;
        std::size_t max_targets = 3;
    };

    // Maximises ml_objective over DOAs by coordinate grid search and golden-section refinement.
    DoaEstimate raq_ml(const ComplexMatrix &y, std::size_t k, const ArrayGeometry &geom, double vartheta,
                       const MlSearchOptions &opts = {});

    // Deterministic CRLB, summed over targets (rad^2). rs is the K x K echo covariance,
    // varpi the noise coefficient such that the per-snapshot noise variance after removing
    // the sensor gain is 2 N varpi.
    double crlb(const std::vector<double> &doas, const ComplexMatrix &rs, const ArrayGeometry &geom, double vartheta,
                double varpi);

    // Asymptotic ML error, summed over targets (rad^2).
    double ml_asymptotic_error(const std::vector<double> &doas, const ComplexMatrix &rs, const ArrayGeometry &geom,
                               double vartheta, double varpi, std::size_t n_samples);
}

#endif
