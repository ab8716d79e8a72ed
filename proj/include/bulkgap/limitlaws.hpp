#pragma once

// The limiting gamma-Gumbel law of the k-th largest rescaled gap, Poisson
// reference laws, and empirical-vs-theoretical KS distances. All probability
// evaluations go through log space so that |x - c| of order 100 stays finite.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace bulkgap {

struct GammaGumbel {
    int k = 1;     // order of the gap
    double c = 0;  // shift constant c_{V,I}

    GammaGumbel(int k_, double c_) : k(k_), c(c_) {
        if (k < 1) throw std::invalid_argument("gamma-Gumbel order k must be >= 1");
    }
};

inline double gamma_gumbel_log_pdf(const GammaGumbel& law, double x) {
    const double t = law.c - x;
    return law.k * t - std::lgamma((double)law.k) - std::exp(t);
}

inline double gamma_gumbel_pdf(const GammaGumbel& law, double x) {
    return std::exp(gamma_gumbel_log_pdf(law, x));
}

// P(Poisson(e^{c-x}) <= k-1), the distribution function of the limit law
inline double gamma_gumbel_cdf(const GammaGumbel& law, double x) {
    const double logmean = law.c - x;
    const double mean = std::exp(logmean);
    double s = 0.0;
    for (int j = 0; j < law.k; ++j) s += std::exp(-mean + j * logmean - std::lgamma(j + 1.0));
    return std::min(1.0, std::max(0.0, s));
}

inline double poisson_pmf(double mean, int j) {
    if (j < 0) throw std::invalid_argument("Poisson pmf wants j >= 0");
    if (!(mean >= 0)) throw std::invalid_argument("Poisson mean must be nonnegative");
    if (mean == 0.0) return j == 0 ? 1.0 : 0.0;
    return std::exp(-mean + j * std::log(mean) - std::lgamma(j + 1.0));
}

// sup-norm distance between the empirical CDF of the samples and cdf,
// evaluated two-sidedly at every sample point
inline double ks_distance(std::vector<double> samples,
                          const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("KS distance needs samples");
    std::sort(samples.begin(), samples.end());
    const double n = (double)samples.size();
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double F = cdf(samples[i]);
        d = std::max(d, std::max(F - i / n, (i + 1) / n - F));
    }
    return d;
}

// sup |F_a - F_b| over the merged sample points
inline double ks_distance_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("KS distance needs samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        // step past every copy of the smaller value in both samples before
        // comparing, so ties across samples do not produce a phantom gap
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        d = std::max(d, std::abs((double)i / a.size() - (double)j / b.size()));
    }
    return d;
}

} // namespace bulkgap
