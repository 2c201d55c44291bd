#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace geeplan {

/// Dense primal simplex for: maximize c'x subject to A x <= b, x >= 0,
/// with b >= 0 so the slack basis is feasible. Dantzig pricing with a Bland
/// fallback for anti-cycling.
struct LpResult {
    std::vector<double> x;
    double objective = 0.0;
    bool bounded = true;
};

inline LpResult simplex_maximize(const std::vector<double>& c,
                                 const std::vector<std::vector<double>>& a,
                                 const std::vector<double>& b) {
    const size_t m = a.size(), n = c.size();
    for (double bi : b)
        if (bi < 0.0) throw std::invalid_argument("simplex_maximize: b must be >= 0");

    // tableau: m rows of [A | I | b], objective row [-c | 0 | 0]
    const size_t cols = n + m + 1;
    std::vector<std::vector<double>> t(m + 1, std::vector<double>(cols, 0.0));
    for (size_t i = 0; i < m; ++i) {
        if (a[i].size() != n) throw std::invalid_argument("simplex_maximize: ragged A");
        for (size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
        t[i][n + i] = 1.0;
        t[i][cols - 1] = b[i];
    }
    for (size_t j = 0; j < n; ++j) t[m][j] = -c[j];

    std::vector<size_t> basis(m);
    for (size_t i = 0; i < m; ++i) basis[i] = n + i;

    constexpr double eps = 1e-9;
    const size_t bland_after = 50 * (m + n);
    size_t iter = 0;
    while (true) {
        // entering column
        size_t enter = cols;
        if (iter < bland_after) {
            double best = -eps;
            for (size_t j = 0; j + 1 < cols; ++j)
                if (t[m][j] < best) {
                    best = t[m][j];
                    enter = j;
                }
        } else {
            for (size_t j = 0; j + 1 < cols; ++j)
                if (t[m][j] < -eps) {
                    enter = j;
                    break;
                }
        }
        if (enter == cols) break;  // optimal

        // ratio test
        size_t leave = m + 1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < m; ++i) {
            if (t[i][enter] > eps) {
                const double r = t[i][cols - 1] / t[i][enter];
                if (r < best_ratio - 1e-12 ||
                    (r < best_ratio + 1e-12 && leave <= m && basis[i] < basis[leave])) {
                    best_ratio = r;
                    leave = i;
                }
            }
        }
        if (leave > m) {
            LpResult res;
            res.bounded = false;
            return res;
        }
        // pivot
        const double piv = t[leave][enter];
        for (size_t j = 0; j < cols; ++j) t[leave][j] /= piv;
        for (size_t i = 0; i <= m; ++i) {
            if (i == leave) continue;
            const double f = t[i][enter];
            if (f == 0.0) continue;
            for (size_t j = 0; j < cols; ++j) t[i][j] -= f * t[leave][j];
        }
        basis[leave] = enter;
        if (++iter > 200000) throw std::runtime_error("simplex_maximize: iteration cap");
    }

    LpResult res;
    res.x.assign(n, 0.0);
    for (size_t i = 0; i < m; ++i)
        if (basis[i] < n) res.x[basis[i]] = t[i][cols - 1];
    res.objective = t[m][cols - 1];
    return res;
}

}  // namespace geeplan
