// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The raq-doa Authors

#ifndef RAQDOA_ASSIGNMENT_HPP
#define RAQDOA_ASSIGNMENT_HPP

#include <Eigen/Dense>
#include <vector>

namespace raqdoa
{
    // Minimum-cost perfect matching on a square cost matrix (Hungarian method).
    // Returns col[r], the column assigned to row r.
    std::vector<int> solve_assignment(const Eigen::MatrixXd &cost);
}

#endif
