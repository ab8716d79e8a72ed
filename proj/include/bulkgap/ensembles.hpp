#pragma once

// Spectrum samplers. The workhorses are the O(n^2) tridiagonal models
// (Hermite and Laguerre bidiagonal forms, Killip-Nenciu for Jacobi); the
// dense constructions are kept for small n as an independent cross-check.
//
// Scalings are chosen so the eigenvalue density is
//   prop. to  prod_{i<j} (l_j - l_i)^2 * prod_i exp(-n V(l_i))
// with V = x^2/2 (support [-2,2]), V = x (support [0,4]), V = 0 on [0,1].

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "bulkgap/equilibrium.hpp"
#include "bulkgap/rng.hpp"
#include "bulkgap/tridiag.hpp"

namespace bulkgap {

struct SpectrumSample {
    Ensemble kind = Ensemble::gue;
    int n = 0;
    std::uint64_t seed = 0;
    std::uint64_t replica = 0;
    std::vector<double> lambda;  // sorted ascending, strictly increasing
};

namespace detail {

// GUE: tridiagonal Hermite model. Diagonal standard normal, k-th offdiagonal
// chi with 2(n-k) dof over sqrt(2), i.e. sqrt(Gamma(n-k, 1)); eigenvalues
// divided by sqrt(n) to land on support [-2,2].
inline std::vector<double> gue_lambda(int n, Rng& rng) {
    std::vector<double> d(n), e(n - 1);
    for (int i = 0; i < n; ++i) d[i] = rng.normal();
    for (int k = 1; k < n; ++k) e[k - 1] = std::sqrt(rng.gamma((double)(n - k)));
    auto lam = eigvals_sym_tridiag(std::move(d), std::move(e));
    const double s = 1.0 / std::sqrt((double)n);
    for (double& x : lam) x *= s;
    return lam;
}

// LUE with flat Laguerre exponent: eigenvalues of B B^T for the bidiagonal
// B with diag sqrt(Gamma(n-i)) (i = 0..n-1) and subdiag sqrt(Gamma(n-1-i)),
// then divided by n. Weight prod exp(-n l_i), support [0,4].
inline std::vector<double> lue_lambda(int n, Rng& rng) {
    std::vector<double> bd(n), be(n > 1 ? n - 1 : 0);
    for (int i = 0; i < n; ++i) bd[i] = std::sqrt(rng.gamma((double)(n - i)));
    for (int i = 0; i + 1 < n; ++i) be[i] = std::sqrt(rng.gamma((double)(n - 1 - i)));
    std::vector<double> d(n), e(n > 1 ? n - 1 : 0);
    for (int i = 0; i < n; ++i)
        d[i] = bd[i] * bd[i] + (i > 0 ? be[i - 1] * be[i - 1] : 0.0);
    for (int i = 0; i + 1 < n; ++i) e[i] = bd[i] * be[i];
    auto lam = eigvals_sym_tridiag(std::move(d), std::move(e));
    for (double& x : lam) x /= (double)n;
    return lam;
}

// JUE with flat weight on [0,1] via the Killip-Nenciu tridiagonal model.
// Canonical coordinates alpha_k on (-1,1), k = 0..2n-2, with
//   k even: alpha_k = 1 - 2 Beta(s, s),        s = (2n-k-2)/2 + 1
//   k odd : alpha_k = 1 - 2 Beta((2n-k+1)/2, (2n-k-1)/2)
// and alpha_{-1} = -1. The Jacobi matrix with
//   diag_j = (1 - a_{2j-1}) a_{2j} - (1 + a_{2j-1}) a_{2j-2}
//   off_j  = sqrt((1 - a_{2j-1})(1 - a_{2j}^2)(1 + a_{2j+1}))
// has flat beta=2 Jacobi spectrum on [-2,2]; map x -> (x+2)/4.
inline std::vector<double> jue_lambda(int n, Rng& rng) {
    std::vector<double> a(2 * n + 1, 0.0);  // a[k+2] holds alpha_k, a[1] = alpha_{-1}
    a[1] = -1.0;                            // a[0] = alpha_{-2}, multiplied by zero weight
    for (int k = 0; k <= 2 * n - 2; ++k) {
        double s, t;
        if (k % 2 == 0) {
            s = 0.5 * (2 * n - k - 2) + 1.0;
            t = s;
        } else {
            s = 0.5 * (2 * n - k + 1);
            t = 0.5 * (2 * n - k - 1);
        }
        a[k + 2] = 1.0 - 2.0 * rng.beta(s, t);
    }
    std::vector<double> d(n), e(n > 1 ? n - 1 : 0);
    auto al = [&](int k) { return a[k + 2]; };
    for (int j = 0; j < n; ++j)
        d[j] = (1.0 - al(2 * j - 1)) * al(2 * j) - (1.0 + al(2 * j - 1)) * al(2 * j - 2);
    for (int j = 0; j + 1 < n; ++j) {
        const double v = (1.0 - al(2 * j - 1)) * (1.0 - al(2 * j) * al(2 * j)) *
                         (1.0 + al(2 * j + 1));
        e[j] = std::sqrt(std::max(0.0, v));
    }
    auto lam = eigvals_sym_tridiag(std::move(d), std::move(e));
    for (double& x : lam) x = (x + 2.0) / 4.0;
    return lam;
}

inline bool has_adjacent_tie(const std::vector<double>& lam) {
    for (std::size_t i = 1; i < lam.size(); ++i)
        if (!(lam[i - 1] < lam[i])) return true;
    return false;
}

// Ties between adjacent eigenvalues have probability zero; if floating point
// produces one anyway, redraw the replica once on a disjoint RNG stream, and
// give up (loudly) if even that collides.
template <class Gen>
SpectrumSample sample_with_retry(Ensemble kind, int n, std::uint64_t seed,
                                 std::uint64_t replica, Gen&& gen) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    for (int attempt = 0; attempt < 2; ++attempt) {
        Rng rng(seed, attempt == 0 ? replica : (replica ^ 0x8000000000000000ULL));
        std::vector<double> lam = gen(n, rng);
        if (n == 1 || !has_adjacent_tie(lam))
            return {kind, n, seed, replica, std::move(lam)};
    }
    throw numerical_error("adjacent eigenvalue tie persisted after a resample");
}

inline Eigen::MatrixXcd complex_gaussian(int n, Rng& rng) {
    // entries with independent N(0, 1/2) real and imaginary parts
    Eigen::MatrixXcd g(n, n);
    const double s = std::sqrt(0.5);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            g(i, j) = std::complex<double>(s * rng.normal(), s * rng.normal());
    return g;
}

inline std::vector<double> dense_lambda(Ensemble kind, int n, Rng& rng) {
    Eigen::VectorXd ev;
    switch (kind) {
        case Ensemble::gue: {
            Eigen::MatrixXcd h(n, n);
            const double sd = 1.0 / std::sqrt((double)n);
            const double so = 1.0 / std::sqrt(2.0 * n);
            for (int i = 0; i < n; ++i) {
                h(i, i) = sd * rng.normal();
                for (int j = i + 1; j < n; ++j) {
                    h(i, j) = std::complex<double>(so * rng.normal(), so * rng.normal());
                    h(j, i) = std::conj(h(i, j));
                }
            }
            ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h).eigenvalues();
            break;
        }
        case Ensemble::lue: {
            Eigen::MatrixXcd x = complex_gaussian(n, rng);
            Eigen::MatrixXcd w = x * x.adjoint() / (double)n;
            ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(w).eigenvalues();
            break;
        }
        case Ensemble::jue: {
            Eigen::MatrixXcd g1 = complex_gaussian(n, rng);
            Eigen::MatrixXcd g2 = complex_gaussian(n, rng);
            Eigen::MatrixXcd a = g1 * g1.adjoint();
            Eigen::MatrixXcd b = a + g2 * g2.adjoint();
            ev = Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd>(a, b).eigenvalues();
            break;
        }
        default:
            throw std::invalid_argument("dense sampler supports the builtin ensembles only");
    }
    std::vector<double> lam(ev.data(), ev.data() + n);
    std::sort(lam.begin(), lam.end());
    return lam;
}

} // namespace detail

inline SpectrumSample sample_gue(int n, std::uint64_t seed, std::uint64_t replica) {
    return detail::sample_with_retry(Ensemble::gue, n, seed, replica, detail::gue_lambda);
}

inline SpectrumSample sample_lue(int n, std::uint64_t seed, std::uint64_t replica) {
    return detail::sample_with_retry(Ensemble::lue, n, seed, replica, detail::lue_lambda);
}

inline SpectrumSample sample_jue(int n, std::uint64_t seed, std::uint64_t replica) {
    return detail::sample_with_retry(Ensemble::jue, n, seed, replica, detail::jue_lambda);
}

// Dense constructions, n <= 64: full Hermitian GUE matrix, complex Wishart,
// and the two-Wishart generalized eigenvalue form of the Jacobi ensemble.
// Same eigenvalue laws as the tridiagonal samplers.
inline SpectrumSample sample_dense(Ensemble kind, int n, std::uint64_t seed,
                                   std::uint64_t replica) {
    if (n > 64) throw std::invalid_argument("dense sampler wants 1 <= n <= 64");
    return detail::sample_with_retry(kind, n, seed, replica, [kind](int m, Rng& rng) {
        return detail::dense_lambda(kind, m, rng);
    });
}

// Tridiagonal sampler dispatch.
inline SpectrumSample sample(Ensemble kind, int n, std::uint64_t seed, std::uint64_t replica) {
    switch (kind) {
        case Ensemble::gue: return sample_gue(n, seed, replica);
        case Ensemble::lue: return sample_lue(n, seed, replica);
        case Ensemble::jue: return sample_jue(n, seed, replica);
        default: throw std::invalid_argument("sampling supports the builtin ensembles only");
    }
}

} // namespace bulkgap
