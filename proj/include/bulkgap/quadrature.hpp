#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "bulkgap/errors.hpp"

namespace bulkgap {

struct QuadRule {
    std::vector<double> x;  // nodes on [-1,1]
    std::vector<double> w;
};

// Gauss-Legendre rule of order m, nodes by Newton iteration on P_m.
inline QuadRule gauss_legendre(int m) {
    if (m < 1) throw std::invalid_argument("quadrature order must be >= 1");
    QuadRule r;
    r.x.resize(m);
    r.w.resize(m);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= m; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.x[i] = -x;          // ascending
        r.w[i] = w;
        r.x[m - 1 - i] = x;
        r.w[m - 1 - i] = w;
    }
    if (m % 2 == 1) r.x[m / 2] = 0.0;
    return r;
}

inline const QuadRule& gauss_legendre_cached(int m) {
    thread_local std::vector<QuadRule> cache;  // indexed by order
    if ((int)cache.size() <= m) cache.resize(m + 1);
    if (cache[m].x.empty()) cache[m] = gauss_legendre(m);
    return cache[m];
}

template <class F>
double gauss_panel(F&& f, double a, double b, int m = 15) {
    const QuadRule& r = gauss_legendre_cached(m);
    const double h = 0.5 * (b - a), c = 0.5 * (a + b);
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += r.w[i] * f(c + h * r.x[i]);
    return s * h;
}

namespace detail {
template <class F>
double adapt(F& f, double a, double b, double whole, double tol, int depth) {
    const double c = 0.5 * (a + b);
    const double left = gauss_panel(f, a, c);
    const double right = gauss_panel(f, c, b);
    const double err = std::abs(left + right - whole);
    if (err < tol || depth >= 48) {
        if (depth >= 48 && err > 1e3 * tol)
            throw numerical_error("adaptive quadrature failed to converge");
        return left + right;
    }
    return adapt(f, a, c, left, 0.5 * tol, depth + 1) +
           adapt(f, c, b, right, 0.5 * tol, depth + 1);
}
}  // namespace detail

// Adaptive Gauss quadrature with absolute tolerance. Panels split until the
// two-level estimate stabilizes; smooth integrands converge in a few levels.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-13) {
    if (a == b) return 0.0;
    return detail::adapt(f, a, b, gauss_panel(f, a, b), abs_tol, 0);
}

// Natural cubic spline through (x_i, y_i), x strictly increasing.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 3 || y_.size() != n) throw std::invalid_argument("spline needs >= 3 points");
        for (std::size_t i = 1; i < n; ++i)
            if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("spline abscissae must increase");
        m_.assign(n, 0.0);
        std::vector<double> diag(n, 0.0), rhs(n, 0.0), sub(n, 0.0);
        diag[0] = diag[n - 1] = 1.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double hl = x_[i] - x_[i - 1], hr = x_[i + 1] - x_[i];
            sub[i] = hl;
            diag[i] = 2.0 * (hl + hr);
            rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl);
        }
        // Thomas solve; upper diagonal is hr, lower is hl.
        std::vector<double> up(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) up[i] = x_[i + 1] - x_[i];
        for (std::size_t i = 1; i < n; ++i) {
            const double w = sub[i] / diag[i - 1];
            diag[i] -= w * up[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        m_[n - 1] = rhs[n - 1] / diag[n - 1];
        for (std::size_t i = n - 1; i-- > 0;)
            m_[i] = (rhs[i] - up[i] * m_[i + 1]) / diag[i];
    }

    double operator()(double x) const {
        if (x < x_.front() || x > x_.back())
            throw std::domain_error("spline evaluated outside its abscissa range");
        std::size_t lo = 0, hi = x_.size() - 1;
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            (x_[mid] <= x ? lo : hi) = mid;
        }
        const double h = x_[hi] - x_[lo];
        const double a = (x_[hi] - x) / h, b = (x - x_[lo]) / h;
        return a * y_[lo] + b * y_[hi] +
               ((a * a * a - a) * m_[lo] + (b * b * b - b) * m_[hi]) * h * h / 6.0;
    }

private:
    std::vector<double> x_, y_, m_;
};

} // namespace bulkgap
