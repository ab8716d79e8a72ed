#pragma once

// Eigenvalues of a symmetric tridiagonal matrix by the implicit-shift QL
// algorithm with Wilkinson shifts, eigenvalues only. Follows the classic
// EISPACK organization; O(n) per sweep, a handful of sweeps per eigenvalue.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "bulkgap/errors.hpp"

namespace bulkgap {

// diag has n entries, offdiag n-1. Returns eigenvalues sorted ascending.
inline std::vector<double> eigvals_sym_tridiag(std::vector<double> diag,
                                               std::vector<double> offdiag) {
    const int n = (int)diag.size();
    if (n == 0) return {};
    if ((int)offdiag.size() != n - 1)
        throw std::invalid_argument("offdiag must have n-1 entries");
    std::vector<double>& d = diag;
    std::vector<double> e(std::move(offdiag));
    e.push_back(0.0);

    const double eps = std::numeric_limits<double>::epsilon();
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        for (;;) {
            int m = l;
            for (; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m == l) break;
            if (++iter > 30)
                throw numerical_error("tridiagonal QL did not converge within 30 sweeps per eigenvalue");
            // Wilkinson shift from the leading 2x2
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            int i = m - 1;
            for (; i >= l; --i) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {  // underflow: deflate and restart this l
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if (i >= l) continue;  // underflow path
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    std::sort(d.begin(), d.end());
    return d;
}

} // namespace bulkgap
