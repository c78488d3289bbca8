#pragma once

#include <cstddef>
#include <vector>

namespace bell::detail {

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    bool optimal = false;
};

/// Maximizes c.x subject to A x <= b, x >= 0, with b >= 0 so the slack basis
/// is feasible. Dense tableau, Bland's rule (smallest eligible index enters;
/// the leaving row breaks ratio ties by smallest basic variable index), which
/// cannot cycle. Intended for the small, exactly-posed programs in this
/// library; no scaling or presolve.
inline SimplexResult simplex_max(const std::vector<std::vector<double>>& A,
                                 const std::vector<double>& b, const std::vector<double>& c,
                                 double tol = 1e-9, long max_pivots = 2000000) {
    const std::size_t m = A.size();
    const std::size_t n = c.size();
    const std::size_t cols = n + m + 1;  // structural + slack + rhs

    std::vector<std::vector<double>> t(m + 1, std::vector<double>(cols, 0.0));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) t[i][j] = A[i][j];
        t[i][n + i] = 1.0;
        t[i][cols - 1] = b[i];
        basis[i] = n + i;
    }
    for (std::size_t j = 0; j < n; ++j) t[m][j] = c[j];  // reduced costs

    SimplexResult res;
    for (long pivot = 0; pivot < max_pivots; ++pivot) {
        // entering: smallest index with positive reduced cost
        std::size_t enter = cols;
        for (std::size_t j = 0; j + 1 < cols; ++j) {
            if (t[m][j] > tol) {
                enter = j;
                break;
            }
        }
        if (enter == cols) {
            res.optimal = true;
            break;
        }
        // leaving: min ratio, ties by smallest basic variable index
        std::size_t leave = m;
        double best_ratio = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (t[i][enter] > tol) {
                double ratio = t[i][cols - 1] / t[i][enter];
                if (leave == m || ratio < best_ratio - tol ||
                    (ratio < best_ratio + tol && basis[i] < basis[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
        }
        if (leave == m) return res;  // unbounded: not expected here

        const double piv = t[leave][enter];
        for (std::size_t j = 0; j < cols; ++j) t[leave][j] /= piv;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == leave) continue;
            const double factor = t[i][enter];
            if (factor == 0.0) continue;
            for (std::size_t j = 0; j < cols; ++j) t[i][j] -= factor * t[leave][j];
        }
        basis[leave] = enter;
    }

    res.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) res.x[basis[i]] = t[i][cols - 1];
    res.value = 0.0;
    for (std::size_t j = 0; j < n; ++j) res.value += c[j] * res.x[j];
    return res;
}

}  // namespace bell::detail
