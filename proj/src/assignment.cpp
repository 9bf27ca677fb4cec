// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The raq-doa Authors

#include "raqdoa/assignment.hpp"
#include "raqdoa/errors.hpp"

#include <cmath>
#include <limits>

namespace raqdoa
{
    // Shortest augmenting path with row/column potentials, O(n^3).
    std::vector<int> solve_assignment(const Eigen::MatrixXd &cost)
    {
        const int n = static_cast<int>(cost.rows());
        if (cost.cols() != n)
            throw InvalidInput("solve_assignment: cost matrix must be square");
        if (!cost.allFinite())
            throw InvalidInput("solve_assignment: cost matrix must be finite");

        const double inf = std::numeric_limits<double>::infinity();
        std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
        std::vector<int> p(n + 1, 0), way(n + 1, 0); // p[j]: row matched to column j (1-based)

        for (int i = 1; i <= n; ++i)
        {
            p[0] = i;
            int j0 = 0;
            std::vector<double> minv(n + 1, inf);
            std::vector<char> used(n + 1, 0);
            do
            {
                used[j0] = 1;
                const int i0 = p[j0];
                double delta = inf;
                int j1 = 0;
                for (int j = 1; j <= n; ++j)
                {
                    if (used[j])
                        continue;
                    const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if (cur < minv[j])
                    {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if (minv[j] < delta)
                    {
                        delta = minv[j];
                        j1 = j;
                    }
                }
                for (int j = 0; j <= n; ++j)
                {
                    if (used[j])
                    {
                        u[p[j]] += delta;
                        v[j] -= delta;
                    }
                    else
                        minv[j] -= delta;
                }
                j0 = j1;
            } while (p[j0] != 0);
            do
            {
                const int j1 = way[j0];
                p[j0] = p[j1];
                j0 = j1;
            } while (j0 != 0);
        }

        std::vector<int> col(n, -1);
        for (int j = 1; j <= n; ++j)
            col[p[j] - 1] = j - 1;
        return col;
    }
}
