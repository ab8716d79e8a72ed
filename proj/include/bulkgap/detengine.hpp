#pragma once
// Gap-probability determinants. CUE arc gaps as Toeplitz determinants, their
// large-n log law, sine-kernel and finite-n Fredholm determinants through
// Nystrom discretization, the interval-integrated gap determinant that feeds
// the exceedance intensity, and the negative-correlation comparison.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bulkgap/constants.hpp"
#include "bulkgap/equilibrium.hpp"
#include "bulkgap/errors.hpp"
#include "bulkgap/gapstats.hpp"
#include "bulkgap/intervals.hpp"
#include "bulkgap/opkernels.hpp"
#include "bulkgap/quadrature.hpp"
#include "bulkgap/rng.hpp"

namespace bulkgap {

// Gauss-Legendre nodes and weights mapped to [lo, hi]. Weights sum to the
// interval length; a zero-length interval keeps its nodes but carries zero
// weight.
struct NystromGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
    int order = 0;

    NystromGrid(double lo, double hi, int m) : order(m) {
        if (!(hi >= lo)) throw std::invalid_argument("NystromGrid wants hi >= lo");
        const QuadRule& r = gauss_legendre_cached(m);
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        nodes.resize(m);
        weights.resize(m);
        for (int i = 0; i < m; ++i) {
            nodes[i] = mid + half * r.x[i];
            weights[i] = half * r.w[i];
        }
    }
};

// log det of the n x n Toeplitz matrix with symbol indicator(|theta| > alpha),
// entries t_0 = 1 - alpha/pi, t_m = -sin(m alpha)/(pi m). This is the log
// probability that an n-point CUE spectrum avoids an arc of length 2 alpha.
// The matrix is symmetric positive semidefinite; it is factored in long
// double by a pivoted L D L^T and the log determinant is the pivot log sum.
// Returns -inf when a pivot is nonpositive (alpha = pi gives the zero
// matrix).
inline double log_toeplitz_gap_cue(int n, double alpha) {
    if (n < 1) throw std::invalid_argument("log_toeplitz_gap_cue wants n >= 1");
    if (!(alpha >= 0.0 && alpha <= std::numbers::pi))
        throw std::domain_error("arc half-length must lie in [0, pi]");
    if (alpha == 0.0) return 0.0;

    using Mat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    std::vector<long double> t(n);
    t[0] = 1.0L - (long double)alpha / std::numbers::pi_v<long double>;
    for (int m = 1; m < n; ++m)
        t[m] = -sinl(m * (long double)alpha) / (std::numbers::pi_v<long double> * m);
    Mat a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = t[i - j];

    Eigen::LDLT<Mat> f(a);
    long double s = 0.0L;
    for (int i = 0; i < n; ++i) {
        const long double d = f.vectorD()(i);
        if (!(d > 0.0L)) return -std::numeric_limits<double>::infinity();
        s += logl(d);
    }
    return (double)s;
}

inline double toeplitz_gap_cue(int n, double alpha) {
    return std::exp(log_toeplitz_gap_cue(n, alpha));
}

// Large-n log law for the CUE arc gap:
//   n^2 log cos(alpha/2) - (1/4) log(n sin(alpha/2)) + c0,
// accurate to O(1/(n sin(alpha/2))) uniformly for alpha away from 0 and pi.
inline double dikz_log_gap(int n, double alpha) {
    if (n < 1) throw std::invalid_argument("dikz_log_gap wants n >= 1");
    if (!(alpha > 0.0 && alpha < std::numbers::pi))
        throw std::domain_error("dikz_log_gap wants alpha in (0, pi)");
    return (double)n * n * std::log(std::cos(0.5 * alpha)) -
           0.25 * std::log(n * std::sin(0.5 * alpha)) + c0_constant();
}

namespace detail {

// log det(I - A) for a symmetric matrix through its spectrum. Returns -inf
// when an eigenvalue reaches 1, i.e. the discretized operator has a unit mode
// and the gap probability is numerically zero.
inline double logdet_one_minus(const Eigen::MatrixXd& a) {
    if (a.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const double f = 1.0 - es.eigenvalues()(i);
        if (!(f > 0.0)) return -std::numeric_limits<double>::infinity();
        s += std::log(f);
    }
    return s;
}

// Symmetrized Nystrom matrix sqrt(w_i w_j) K(z_i, z_j) over the concatenated
// grids; it shares the spectrum of the weighted kernel matrix.
template <class K>
Eigen::MatrixXd nystrom_matrix(const std::vector<const NystromGrid*>& grids, K&& kernel) {
    std::vector<double> z, sw;
    for (const NystromGrid* g : grids)
        for (std::size_t i = 0; i < g->nodes.size(); ++i) {
            z.push_back(g->nodes[i]);
            sw.push_back(std::sqrt(g->weights[i]));
        }
    const Eigen::Index N = (Eigen::Index)z.size();
    Eigen::MatrixXd a(N, N);
    for (Eigen::Index i = 0; i < N; ++i)
        for (Eigen::Index j = 0; j <= i; ++j)
            a(i, j) = a(j, i) = sw[i] * sw[j] * kernel(z[i], z[j]);
    return a;
}

inline double sine_kernel(double x, double y) {
    const double d = std::numbers::pi * (x - y);
    return std::abs(d) < 1e-8 ? 1.0 - d * d / 6.0 : std::sin(d) / d;
}

} // namespace detail

// det(I - K_sine) on [0, r] with K_sine(x, y) = sin(pi (x - y)) / (pi (x - y)),
// diagonal 1: the probability that the bulk-rescaled spectrum leaves a gap of
// r mean spacings. Gauss-Legendre Nystrom of order m; convergence in m is
// spectral.
inline double sine_gap_fredholm(double r, int m = 80) {
    if (!(r >= 0.0)) throw std::domain_error("sine_gap_fredholm wants r >= 0");
    if (m < 1) throw std::invalid_argument("sine_gap_fredholm wants m >= 1");
    if (r == 0.0) return 1.0;
    NystromGrid g(0.0, r, m);
    return std::exp(detail::logdet_one_minus(
        detail::nystrom_matrix({&g}, detail::sine_kernel)));
}

// Probability that the n-point ensemble has no eigenvalue in [x, x + delta],
// as det(I - K_n) with the weighted Christoffel-Darboux kernel on a
// Gauss-Legendre Nystrom grid. The interval must lie strictly inside the
// support; n is capped where the weighted recurrences stay well scaled.
inline double finite_n_gap(const EnsembleSpec& spec, int n, double x, double delta,
                           int m = 80) {
    if (spec.kind == Ensemble::custom)
        throw std::invalid_argument("finite_n_gap needs a builtin kernel");
    if (n < 1 || n > 400) throw std::invalid_argument("finite_n_gap wants 1 <= n <= 400");
    if (m < 1) throw std::invalid_argument("finite_n_gap wants m >= 1");
    if (!(delta >= 0.0)) throw std::domain_error("gap length must be >= 0");
    if (!(x > spec.support.lo && x + delta < spec.support.hi))
        throw std::domain_error("[x, x+delta] must lie strictly inside the support");
    if (delta == 0.0) return 1.0;

    WeightedOPBasis b(spec.kind, n);
    NystromGrid g(x, x + delta, m);
    auto kern = [&](double u, double v) { return cd_kernel(b, u, v); };
    return std::exp(detail::logdet_one_minus(detail::nystrom_matrix({&g}, kern)));
}

struct CorrelationCheck {
    double lhs = 0.0;  // P(no eigenvalue in I1 u I2)
    double rhs = 0.0;  // P(no eigenvalue in I1) * P(no eigenvalue in I2)
};

// Discretized negative-correlation comparison for two disjoint intervals.
// All three determinants share one node set, so lhs <= rhs is Fischer's
// inequality for the positive definite matrix I - A and holds up to
// eigensolver rounding. Zero-length intervals contribute no nodes, which
// makes lhs and rhs coincide exactly when one interval is degenerate.
inline CorrelationCheck negative_correlation_check(const EnsembleSpec& spec, int n,
                                                   Interval i1, Interval i2, int m = 60) {
    if (spec.kind == Ensemble::custom)
        throw std::invalid_argument("negative_correlation_check needs a builtin kernel");
    if (n < 1 || n > 400)
        throw std::invalid_argument("negative_correlation_check wants 1 <= n <= 400");
    if (m < 1) throw std::invalid_argument("negative_correlation_check wants m >= 1");
    if (!(i1.hi >= i1.lo) || !(i2.hi >= i2.lo))
        throw std::invalid_argument("intervals must be ordered");
    if (i1.lo > i2.lo) std::swap(i1, i2);
    if (i2.lo < i1.hi) throw std::invalid_argument("intervals must be disjoint");
    if (!(i1.lo > spec.support.lo && i2.hi < spec.support.hi))
        throw std::domain_error("intervals must lie strictly inside the support");

    WeightedOPBasis b(spec.kind, n);
    auto kern = [&](double u, double v) { return cd_kernel(b, u, v); };

    std::vector<NystromGrid> grids;
    for (const Interval& iv : {i1, i2})
        if (iv.length() > 0.0) grids.emplace_back(iv.lo, iv.hi, m);

    std::vector<const NystromGrid*> all;
    for (const NystromGrid& g : grids) all.push_back(&g);

    CorrelationCheck out;
    out.lhs = std::exp(detail::logdet_one_minus(detail::nystrom_matrix(all, kern)));
    double log_rhs = 0.0;
    for (const NystromGrid* g : all)
        log_rhs += detail::logdet_one_minus(detail::nystrom_matrix({g}, kern));
    out.rhs = std::exp(log_rhs);
    return out;
}

// Integral over the union I of D_n(rho(y)/rho_I * G_n(x)/2), the quantity
// whose large-n limit is M(I) e^(c0 - x) / (n sqrt(2 log n)). D_n is sampled
// on a 400-point alpha grid and interpolated through a cubic spline of
// log D_n (self-validated at 10 random alpha to 1e-6 relative); the y
// integration combines uniform panels with dyadic grading toward every
// density minimizer, where the integrand concentrates.
inline double integral_lemma_value(const EnsembleSpec& spec, const IntervalUnion& I,
                                   const MinimizerReport& rep, int n, double x) {
    if (n < 50) throw std::invalid_argument("integral_lemma_value wants n >= 50");
    if (rep.q < 1 || !(rep.rho_I > 0.0))
        throw std::invalid_argument("integral_lemma_value wants a populated report");

    const RescaleParams p(n, rep.q, 1.0);
    const double half_gap = 0.5 * gn(p, x);
    auto alpha_of = [&](double y) { return density(spec, y) / rep.rho_I * half_gap; };

    // Panel list. Each part splits at its minimizers; every resulting segment
    // is halved and each half graded dyadically toward its outer end, with the
    // wide panels near the midpoint re-split uniformly. Grading toward ends
    // that are not minimizers costs little and keeps the construction uniform.
    std::vector<std::pair<double, double>> panels;
    auto push_split = [&panels](double a, double b, double cap) {
        if (!(b > a)) return;
        const int k = std::min(64, std::max(1, (int)std::ceil((b - a) / cap)));
        for (int i = 0; i < k; ++i)
            panels.emplace_back(a + (b - a) * i / k, a + (b - a) * (i + 1) / k);
    };
    for (const Interval& part : I.parts()) {
        std::vector<double> splits{part.lo, part.hi};
        for (const Minimizer& mn : rep.all)
            if (mn.u > part.lo && mn.u < part.hi) splits.push_back(mn.u);
        std::sort(splits.begin(), splits.end());
        const double cap = part.length() / 16.0;
        for (std::size_t s = 0; s + 1 < splits.size(); ++s) {
            const double a = splits[s], b = splits[s + 1], c = 0.5 * (a + b);
            const int K = 40;
            // [a, c]: ladder toward a; [c, b]: ladder toward b.
            double prev = c;
            for (int k = 1; k <= K; ++k) {
                const double cut = a + (c - a) * std::ldexp(1.0, -k);
                push_split(cut, prev, cap);
                prev = cut;
            }
            panels.emplace_back(a, prev);
            prev = c;
            for (int k = 1; k <= K; ++k) {
                const double cut = b - (b - c) * std::ldexp(1.0, -k);
                push_split(prev, cut, cap);
                prev = cut;
            }
            panels.emplace_back(prev, b);
        }
    }

    // Realized alpha range over all quadrature nodes.
    const QuadRule& rule = gauss_legendre_cached(15);
    double a_max = half_gap;
    for (const auto& pan : panels) {
        const double mid = 0.5 * (pan.first + pan.second), half = 0.5 * (pan.second - pan.first);
        for (double t : rule.x) a_max = std::max(a_max, alpha_of(mid + half * t));
    }
    if (!(a_max <= std::numbers::pi))
        throw std::domain_error("rescaled gap exceeds pi; n is too small for this interval");

    const double a_lo = half_gap * (1.0 - 1e-9);
    const double a_hi = a_max * (1.0 + 1e-9) + 1e-300;
    const int grid_n = 400;
    std::vector<double> ax(grid_n), ay(grid_n);
    for (int i = 0; i < grid_n; ++i) {
        ax[i] = a_lo + (a_hi - a_lo) * i / (grid_n - 1);
        ay[i] = log_toeplitz_gap_cue(n, ax[i]);
    }
    const CubicSpline logd(ax, ay);

    Rng rng(7541, (std::uint64_t)n);
    for (int i = 0; i < 10; ++i) {
        const double a = a_lo + (a_hi - a_lo) * rng.uniform();
        const double err = std::abs(std::expm1(logd(a) - log_toeplitz_gap_cue(n, a)));
        if (!(err <= 1e-6))
            throw numerical_error("alpha-grid interpolation misses its 1e-6 budget");
    }

    double total = 0.0;
    auto f = [&](double y) {
        return std::exp(logd(std::clamp(alpha_of(y), a_lo, a_hi)));
    };
    for (const auto& pan : panels) total += gauss_panel(f, pan.first, pan.second);
    return total;
}

} // namespace bulkgap
