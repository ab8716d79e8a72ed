#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bulkgap/equilibrium.hpp"
#include "bulkgap/errors.hpp"

namespace bulkgap {

// Orthonormal-polynomial basis for the weight e^{-nV} of a builtin ensemble,
// carried directly on the weighted functions phi_j = p_{j,n} e^{-nV/2}:
//   GUE:  phi_{j+1} = x sqrt(n/(j+1)) phi_j - sqrt(j/(j+1)) phi_{j-1}
//   LUE:  phi_{j+1} = ((2j+1-nx) phi_j - j phi_{j-1}) / (j+1)
//   JUE:  phi_j = sqrt(2j+1) P_j(2x-1), Legendre three-term recurrence
// The x-independent step multipliers are precomputed here.
struct WeightedOPBasis {
    Ensemble kind;
    int n;
    std::vector<double> ca, cb, cc;

    WeightedOPBasis(Ensemble kind_, int n_) : kind(kind_), n(n_) {
        if (n < 1) throw std::invalid_argument("basis wants n >= 1");
        ca.resize(n + 1);
        cb.resize(n + 1);
        switch (kind) {
            case Ensemble::gue:
                for (int j = 0; j <= n; ++j) {
                    ca[j] = std::sqrt((double)n / (j + 1));
                    cb[j] = std::sqrt(j / (j + 1.0));
                }
                break;
            case Ensemble::lue:
                cc.resize(n + 1);
                for (int j = 0; j <= n; ++j) {
                    ca[j] = (2.0 * j + 1) / (j + 1);
                    cb[j] = (double)n / (j + 1);
                    cc[j] = (double)j / (j + 1);
                }
                break;
            case Ensemble::jue:
                for (int j = 0; j <= n; ++j) {
                    ca[j] = std::sqrt((2.0 * j + 1) * (2.0 * j + 3)) / (j + 1);
                    cb[j] = j ? j * std::sqrt((2.0 * j + 3) / (2.0 * j - 1)) / (j + 1) : 0.0;
                }
                break;
            default:
                throw std::invalid_argument("weighted OP basis wants a builtin ensemble");
        }
    }
};

namespace detail {

// (phi_{j-1}, phi_j) * exp(logscale), rebalanced so the pair stays
// representable through the deep exponential tails of the weight.
struct OPState {
    double fm = 0.0, f = 1.0;
    double logscale = 0.0;
    int j = 0;
};

inline OPState op_start(const WeightedOPBasis& b, double x) {
    OPState s;
    switch (b.kind) {
        case Ensemble::gue:
            s.logscale = 0.25 * std::log(b.n / (2.0 * std::numbers::pi)) - b.n * x * x / 4.0;
            break;
        case Ensemble::lue:
            s.logscale = 0.5 * std::log((double)b.n) - b.n * x / 2.0;
            break;
        default:
            s.logscale = 0.0;
            break;
    }
    return s;
}

inline void op_step(const WeightedOPBasis& b, double x, OPState& s) {
    const int j = s.j;
    double next = 0.0;
    switch (b.kind) {
        case Ensemble::gue: next = x * b.ca[j] * s.f - b.cb[j] * s.fm; break;
        case Ensemble::lue: next = (b.ca[j] - b.cb[j] * x) * s.f - b.cc[j] * s.fm; break;
        default: next = (2.0 * x - 1.0) * b.ca[j] * s.f - b.cb[j] * s.fm; break;
    }
    s.fm = s.f;
    s.f = next;
    ++s.j;
    const double m = std::max(std::abs(s.fm), std::abs(s.f));
    if (m > 1e150 || (m > 0.0 && m < 1e-150)) {
        s.fm /= m;
        s.f /= m;
        s.logscale += std::log(m);
    }
}

} // namespace detail

// phi_j(x) = p_{j,n}(x) e^{-nV(x)/2}, 0 <= j <= n.
inline double weighted_op(const WeightedOPBasis& b, int j, double x) {
    if (j < 0 || j > b.n) throw std::out_of_range("weighted_op wants 0 <= j <= n");
    detail::OPState s = detail::op_start(b, x);
    for (int i = 0; i < j; ++i) detail::op_step(b, x, s);
    return s.f * std::exp(s.logscale);
}

// K_n(x, y) = sum_{j<n} phi_j(x) phi_j(y). The plain sum form keeps the
// evaluation smooth through x = y; O(n) per call.
inline double cd_kernel(const WeightedOPBasis& b, double x, double y) {
    detail::OPState sx = detail::op_start(b, x);
    detail::OPState sy = detail::op_start(b, y);
    double sum = 0.0;
    double ls = sx.logscale + sy.logscale;
    double w = std::exp(ls);
    for (int j = 0; j < b.n; ++j) {
        const double cur = sx.logscale + sy.logscale;
        if (cur != ls) {
            ls = cur;
            w = std::exp(ls);
        }
        sum += sx.f * sy.f * w;
        detail::op_step(b, x, sx);
        detail::op_step(b, y, sy);
    }
    return sum;
}

struct SineResidual {
    double leading = 0.0;
    double second_order = 0.0;
};

// Bulk-rescaled kernel against the sine kernel:
//   Khat = K_n(x0 + xi/(n rho), x0 + eta/(n rho)) / (n rho)
//   leading = Khat - sinc(pi (xi - eta))
//   second_order = leading minus the explicit 1/n one-cut correction
//     (1/n) { rho'/(2 rho^2) (xi+eta) cos(pi(xi-eta))
//             - (b0-a0) / (4 pi rho (b0-x0)(x0-a0)) cos(2 pi n m(x0) - pi(xi+eta)) }
// with m(x0) the equilibrium mass to the right of x0. The phase 2 pi n m is
// reduced modulo 2 pi before the cosine. Even functions of xi - eta are fed
// |xi - eta| so a (xi, eta) swap returns bit-identical residuals.
inline SineResidual sine_residual(const WeightedOPBasis& b, double x0, double xi, double eta) {
    const EnsembleSpec spec = b.kind == Ensemble::gue   ? EnsembleSpec::gue()
                              : b.kind == Ensemble::lue ? EnsembleSpec::lue()
                                                        : EnsembleSpec::jue();
    if (!(x0 > spec.support.lo && x0 < spec.support.hi))
        throw std::invalid_argument("sine_residual wants x0 in the open support");
    const double ln = std::log((double)b.n);
    if (std::abs(xi) > ln || std::abs(eta) > ln)
        throw std::invalid_argument("sine_residual wants |xi|, |eta| <= log n");
    const double rho0 = density(spec, x0);
    const double scale = 1.0 / (b.n * rho0);
    const double khat = cd_kernel(b, x0 + xi * scale, x0 + eta * scale) * scale;

    const double ad = std::numbers::pi * std::abs(xi - eta);
    const double sinc = ad < 1e-8 ? 1.0 - ad * ad / 6.0 : std::sin(ad) / ad;

    SineResidual r;
    r.leading = khat - sinc;

    const double rho1 = density_deriv(spec, x0, 1);
    const double a0 = spec.support.lo, b0 = spec.support.hi;
    const double phase =
        2.0 * std::numbers::pi * std::fmod(b.n * mu_mass(spec, x0), 1.0);
    const double corr =
        rho1 / (2.0 * rho0 * rho0) * (xi + eta) * std::cos(ad) -
        (b0 - a0) / (4.0 * std::numbers::pi * rho0 * (b0 - x0) * (x0 - a0)) *
            std::cos(phase - std::numbers::pi * (xi + eta));
    r.second_order = r.leading - corr / b.n;
    return r;
}

} // namespace bulkgap
