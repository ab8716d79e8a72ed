#pragma once

// Gap extraction on an interval union, the tau rescaling and its inverse,
// exceedance counts, and the two equivalent Sigma_k membership predicates.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bulkgap/ensembles.hpp"
#include "bulkgap/intervals.hpp"

namespace bulkgap {

struct GapEntry {
    int index = 0;       // left eigenvalue index i (0-based), gap = lambda[i+1]-lambda[i]
    double value = 0.0;
};

struct GapList {
    std::vector<GapEntry> gaps;     // descending by value; ties by ascending index
    std::vector<int> lambda_set;    // Lambda(I): i with lambda_i, lambda_{i+1} in I
    std::vector<int> lambda_tilde;  // same component of I only

    bool components_match() const { return lambda_set == lambda_tilde; }

    // k-th largest gap value, k starting at 1
    double kth(int k) const {
        if (k < 1 || (std::size_t)k > gaps.size())
            throw std::out_of_range("gap order exceeds the number of recorded gaps");
        return gaps[k - 1].value;
    }
};

inline GapList extract_gaps(const std::vector<double>& lambda, const IntervalUnion& I) {
    GapList out;
    for (int i = 0; i + 1 < (int)lambda.size(); ++i) {
        if (!I.contains(lambda[i]) || !I.contains(lambda[i + 1])) continue;
        out.lambda_set.push_back(i);
        out.gaps.push_back({i, lambda[i + 1] - lambda[i]});
        const int c1 = I.component_of(lambda[i]);
        if (c1 >= 0 && c1 == I.component_of(lambda[i + 1])) out.lambda_tilde.push_back(i);
    }
    std::sort(out.gaps.begin(), out.gaps.end(), [](const GapEntry& a, const GapEntry& b) {
        if (a.value != b.value) return a.value > b.value;
        return a.index < b.index;
    });
    return out;
}

inline GapList extract_gaps(const SpectrumSample& sample, const IntervalUnion& I) {
    return extract_gaps(sample.lambda, I);
}

// Parameters of the gap rescaling
//   G_n(x) = sqrt(32 log n)/n + coeff log(2 log n)/(n sqrt(2 log n)) + 4x/(n sqrt(2 log n))
// with coeff = (3q-8)/(2q). The circular-unitary variant is the formal q -> oo
// limit: coeff = 3/2 and S_I = 1 (flat density 1/(2pi)).
struct RescaleParams {
    int n = 0;
    int q = 1;
    double S_I = 1.0;
    double log_coeff = -2.5;

    RescaleParams(int n_, int q_, double S) : n(n_), q(q_), S_I(S) {
        if (n < 3) throw std::invalid_argument("rescaling needs n >= 3");
        if (q < 1) throw std::invalid_argument("rescaling needs q >= 1");
        if (!(S_I > 0)) throw std::invalid_argument("rescaling needs S_I > 0");
        log_coeff = (3.0 * q - 8.0) / (2.0 * q);
    }

    RescaleParams(int n_, const EquilibriumConstants& c) : RescaleParams(n_, c.q, c.S_I) {}

    static RescaleParams cue(int n_) {
        RescaleParams p(n_, 1, 1.0);
        p.q = std::numeric_limits<int>::max();  // formally q = +oo
        p.log_coeff = 1.5;
        return p;
    }
};

inline double gn(const RescaleParams& p, double x) {
    const double L = std::log((double)p.n);
    const double s = std::sqrt(2.0 * L);
    return std::sqrt(32.0 * L) / p.n + p.log_coeff * std::log(2.0 * L) / (p.n * s) +
           4.0 * x / (p.n * s);
}

// unique tau with G_n(tau) = S_I * m
inline double rescale_gap(const RescaleParams& p, double m) {
    if (!(m > 0)) throw std::invalid_argument("gap value must be positive");
    const double L = std::log((double)p.n);
    const double s = std::sqrt(2.0 * L);
    return (p.S_I * m * p.n * s - 8.0 * L - p.log_coeff * std::log(2.0 * L)) / 4.0;
}

// #{tau >= x}, closed at x
inline int exceedance_count(const std::vector<double>& taus, double x) {
    int c = 0;
    for (double t : taus) c += (t >= x);
    return c;
}

namespace detail {

inline void check_sigma_args(const std::vector<double>& lambda, const std::vector<double>& a,
                             const std::vector<double>& y) {
    if (a.size() != y.size()) throw std::invalid_argument("a and y must have equal length");
    for (double v : a)
        if (!(v > 0)) throw std::invalid_argument("shift lengths a_j must be positive");
    for (std::size_t i = 1; i < lambda.size(); ++i)
        if (!(lambda[i - 1] <= lambda[i])) throw std::invalid_argument("eigenvalues must be sorted");
}

} // namespace detail

// Membership of (y_1..y_k) in Sigma_k(a_1..a_k) by exhaustive search over
// distinct indices i_j in Lambda(I) with y_j in (lambda_{i_j}, lambda_{i_j+1}-a_j).
// Exponential oracle; capped at k <= 6 by design.
inline bool sigma_contains_direct(const std::vector<double>& lambda, const IntervalUnion& I,
                                  const std::vector<double>& a, const std::vector<double>& y) {
    detail::check_sigma_args(lambda, a, y);
    const int k = (int)a.size();
    if (k > 6) throw std::invalid_argument("direct Sigma_k oracle is capped at k <= 6");
    const GapList gl = extract_gaps(lambda, I);
    std::vector<char> used(gl.lambda_set.size(), 0);
    std::function<bool(int)> assign = [&](int j) -> bool {
        if (j == k) return true;
        for (std::size_t t = 0; t < gl.lambda_set.size(); ++t) {
            if (used[t]) continue;
            const int i = gl.lambda_set[t];
            if (y[j] > lambda[i] && y[j] < lambda[i + 1] - a[j]) {
                used[t] = 1;
                if (assign(j + 1)) return true;
                used[t] = 0;
            }
        }
        return false;
    };
    return assign(0);
}

// Same membership via the three-condition characterization, valid under the
// hypothesis Lambda(I) = Lambda~(I):
//   (i)   every y_j lies in the interior of I and the closed intervals
//         [y_j, y_j+a_j] are pairwise disjoint,
//   (ii)  no eigenvalue lies in any [y_j, y_j+a_j],
//   (iii) each segment between consecutive points of {y_j} u {component
//         endpoints}, except segments whose two endpoints are both component
//         endpoints, contains an eigenvalue.
inline bool sigma_contains_conditions(const std::vector<double>& lambda, const IntervalUnion& I,
                                      const std::vector<double>& a, const std::vector<double>& y) {
    detail::check_sigma_args(lambda, a, y);
    const GapList gl = extract_gaps(lambda, I);
    if (!gl.components_match())
        throw std::invalid_argument("Sigma_k characterization needs Lambda(I) = Lambda~(I)");
    const int k = (int)a.size();

    for (int j = 0; j < k; ++j)
        if (!I.contains_interior(y[j])) return false;
    for (int l = 0; l < k; ++l)
        for (int j = l + 1; j < k; ++j)
            if (std::max(y[l], y[j]) <= std::min(y[l] + a[l], y[j] + a[j])) return false;
    for (double lam : lambda)
        for (int j = 0; j < k; ++j)
            if (lam >= y[j] && lam <= y[j] + a[j]) return false;

    std::vector<double> ty(y);
    const std::vector<double> ends = I.endpoints();
    ty.insert(ty.end(), ends.begin(), ends.end());
    std::sort(ty.begin(), ty.end());
    auto is_end = [&](double v) {
        return std::find(ends.begin(), ends.end(), v) != ends.end();
    };
    for (std::size_t j = 0; j + 1 < ty.size(); ++j) {
        if (is_end(ty[j]) && is_end(ty[j + 1])) continue;
        const auto it = std::lower_bound(lambda.begin(), lambda.end(), ty[j]);
        if (it == lambda.end() || *it > ty[j + 1]) return false;
    }
    return true;
}

} // namespace bulkgap
