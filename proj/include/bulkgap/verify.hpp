#pragma once
// Named verification suites shared by the CLI `verify` subcommand and the
// acceptance gate. Each check compares a measured quantity against a closed
// interval [lo, hi]; one-sided bounds use an infinite endpoint. Tolerances
// are regression-locked: where theory gives only an order of magnitude, the
// locked numbers come from pilot runs of this same code.

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "bulkgap/detengine.hpp"
#include "bulkgap/ensembles.hpp"
#include "bulkgap/equilibrium.hpp"
#include "bulkgap/gapstats.hpp"
#include "bulkgap/opkernels.hpp"
#include "bulkgap/rng.hpp"

namespace bulkgap {

struct VerifyCheck {
    std::string name;
    double measured = 0.0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool pass = false;
};

struct VerifyReport {
    std::string suite;
    std::vector<VerifyCheck> checks;
    bool passed() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return !checks.empty();
    }
};

namespace detail {

inline void add_check(VerifyReport& rep, std::string name, double measured, double lo,
                      double hi) {
    const bool ok = std::isfinite(measured) && measured >= lo && measured <= hi;
    rep.checks.push_back({std::move(name), measured, lo, hi, ok});
}

} // namespace detail

// Sine-kernel expansion residuals at one locked bulk point per ensemble:
// leading residual halves per n-doubling, second-order residual quarters.
// Points sit where the oscillatory n^-2 coefficient keeps a stable phase.
inline VerifyReport verify_kernel() {
    VerifyReport rep{"kernel", {}};
    struct P {
        Ensemble k;
        const char* tag;
        double x0;
    };
    for (P p : {P{Ensemble::gue, "gue", 0.22}, P{Ensemble::lue, "lue", 2.21},
                P{Ensemble::jue, "jue", 0.259}}) {
        WeightedOPBasis b1(p.k, 100), b2(p.k, 200), b4(p.k, 400);
        const double s1 = std::abs(sine_residual(b1, p.x0, 0.7, -0.4).second_order);
        const double s2 = std::abs(sine_residual(b2, p.x0, 0.7, -0.4).second_order);
        const double l2 = std::abs(sine_residual(b2, p.x0, 0.0, 0.0).leading);
        const double l4 = std::abs(sine_residual(b4, p.x0, 0.0, 0.0).leading);
        detail::add_check(rep, std::string(p.tag) + " second-order ratio 100/200", s1 / s2,
                          3.0, 5.0);
        detail::add_check(rep, std::string(p.tag) + " leading ratio 200/400", l2 / l4, 1.6,
                          2.4);
    }
    return rep;
}

// Toeplitz determinant versus its asymptotic law: absolute bound
// |log D_n - law| <= 1/(n sin(alpha/2)) on a 3x3 (n, arc-scale) grid, plus
// error halving under n-doubling at fixed arc (the bound's decay direction;
// at fixed n*alpha both sides approach a common finite limit instead).
inline VerifyReport verify_dikz() {
    VerifyReport rep{"dikz", {}};
    for (int n : {100, 200, 400}) {
        const double scale = std::sqrt(32.0 * std::log((double)n)) / n;
        for (double s : {0.8, 1.0, 1.2}) {
            const double alpha = s * scale;
            const double err = std::abs(log_toeplitz_gap_cue(n, alpha) - dikz_log_gap(n, alpha));
            const double bound = 1.0 / (n * std::sin(0.5 * alpha));
            char name[64];
            std::snprintf(name, sizeof name, "bound n=%d s=%.1f", n, s);
            detail::add_check(rep, name, err, 0.0, bound);
        }
    }
    const double alpha = std::sqrt(32.0 * std::log(400.0)) / 400.0;
    double err[3];
    int idx = 0;
    for (int n : {100, 200, 400})
        err[idx++] = std::abs(log_toeplitz_gap_cue(n, alpha) - dikz_log_gap(n, alpha));
    detail::add_check(rep, "halving 100 to 200 at fixed arc", err[1] / err[0], 0.0, 0.7);
    detail::add_check(rep, "halving 200 to 400 at fixed arc", err[2] / err[1], 0.0, 0.7);
    return rep;
}

// Finite-n bulk gap against the CUE arc law, GUE n=200 at x0=0.3, five gap
// sizes below sqrt(log n)/n where the law's absolute error stays within 2%
// of the (still order-one) probability.
inline VerifyReport verify_cue_compare() {
    VerifyReport rep{"cue-compare", {}};
    const auto spec = EnsembleSpec::gue();
    const int n = 200;
    const double x = 0.3, rho = density(spec, x), L = std::log((double)n);
    for (double s : {0.5, 0.6, 0.7, 0.8, 0.9}) {
        const double delta = s * std::sqrt(L) / n;
        const double pf = finite_n_gap(spec, n, x, delta / rho);
        const double pt = toeplitz_gap_cue(n, std::numbers::pi * delta);
        char name[64];
        std::snprintf(name, sizeof name, "relative error at s=%.1f", s);
        detail::add_check(rep, name, std::abs(pf - pt) / pt, 0.0, 0.02);
    }
    return rep;
}

// Interval-integrated gap determinant against M(I) e^{c0-x}/(n sqrt(2 log n)),
// GUE I=[0.5,1], x=0. The o(1) deviation grows through n ~ 1e5 before
// receding, so the ratios are locked at their measured values rather than at
// a monotone schedule.
inline VerifyReport verify_integral_lemma() {
    VerifyReport rep{"integral-lemma", {}};
    const auto spec = EnsembleSpec::gue();
    const IntervalUnion I(0.5, 1.0);
    const auto mrep = classify_minimizers(spec, I);
    const auto cons = constants(spec, I, mrep);
    const double locked[][2] = {{250, 1.0076}, {500, 1.0557}, {1000, 1.0941}};
    for (const auto& row : locked) {
        const int n = (int)row[0];
        const double v = integral_lemma_value(spec, I, mrep, n, 0.0);
        const double lim =
            cons.M_I * std::exp(c0_constant()) / (n * std::sqrt(2.0 * std::log((double)n)));
        char name[48];
        std::snprintf(name, sizeof name, "ratio to limit at n=%d", n);
        detail::add_check(rep, name, v / lim, row[1] - 2e-3, row[1] + 2e-3);
        if (n == 500)
            detail::add_check(rep, "n=500 ratio inside [0.5, 1.5]", v / lim, 0.5, 1.5);
    }
    return rep;
}

// Gap-event negative correlation for GUE n=100 on 100 random disjoint
// interval pairs, plus one locked far-separated pair.
inline VerifyReport verify_negcorr() {
    VerifyReport rep{"negcorr", {}};
    const auto spec = EnsembleSpec::gue();
    const auto far = negative_correlation_check(spec, 100, {-0.5, -0.45}, {0.45, 0.5});
    detail::add_check(rep, "far pair lhs/rhs", far.lhs / far.rhs, 0.9976526803 - 5e-6,
                      0.9976526803 + 5e-6);
    Rng rng(8, 1);
    int done = 0, violations = 0;
    double worst = 0.0;
    while (done < 100) {
        const double a = -1.6 + 1.4 * rng.uniform();
        const double la = 0.02 + 0.28 * rng.uniform();
        const double b = a + la + 0.01 + 1.2 * rng.uniform();
        const double lb = 0.02 + 0.28 * rng.uniform();
        if (b + lb >= 1.99) continue;
        const auto c = negative_correlation_check(spec, 100, {a, a + la}, {b, b + lb});
        if (!(c.lhs <= c.rhs * (1.0 + 1e-10))) ++violations;
        worst = std::max(worst, c.lhs / c.rhs);
        ++done;
    }
    detail::add_check(rep, "violations over 100 random pairs", violations, 0.0, 0.0);
    detail::add_check(rep, "worst lhs/rhs", worst, 0.0, 1.0 + 1e-10);
    return rep;
}

// The two Sigma_k membership predicates (exhaustive assignment search versus
// the three-condition characterization) on 1e5 random conditioned instances.
inline VerifyReport verify_sigma_equiv() {
    VerifyReport rep{"sigma-equiv", {}};
    Rng rng(20260901, 9);
    int tested = 0, trues = 0, mismatches = 0;
    while (tested < 100000) {
        const int n = 2 + (int)(rng.uniform() * 11);
        std::vector<double> lam(n);
        for (double& v : lam) v = 1.2 * rng.uniform();
        std::sort(lam.begin(), lam.end());

        const int parts = 1 + (int)(rng.uniform() * 3);
        std::vector<double> pts(2 * parts);
        for (double& p : pts) p = 1.2 * rng.uniform();
        std::sort(pts.begin(), pts.end());
        bool degenerate = false;
        for (int i = 1; i < 2 * parts; ++i)
            if (pts[i] - pts[i - 1] < 1e-3) degenerate = true;
        if (degenerate) continue;
        std::vector<Interval> iv;
        for (int j = 0; j < parts; ++j) iv.push_back({pts[2 * j], pts[2 * j + 1]});
        const IntervalUnion I(std::move(iv));

        if (!extract_gaps(lam, I).components_match()) continue;

        const int k = 1 + (int)(rng.uniform() * 3);
        std::vector<double> a(k), y(k);
        for (double& v : a) v = 0.001 + 0.15 * rng.uniform();
        for (double& v : y) {
            const double r = rng.uniform();
            if (r < 0.05)
                v = lam[(int)(rng.uniform() * n)];
            else if (r < 0.10)
                v = pts[(int)(rng.uniform() * 2 * parts)];
            else
                v = -0.05 + 1.3 * rng.uniform();
        }
        const bool d = sigma_contains_direct(lam, I, a, y);
        if (d != sigma_contains_conditions(lam, I, a, y)) ++mismatches;
        trues += d;
        ++tested;
    }
    detail::add_check(rep, "mismatches over 1e5 instances", mismatches, 0.0, 0.0);
    detail::add_check(rep, "positive instances exercised", trues, 50.0,
                      std::numeric_limits<double>::infinity());
    return rep;
}

inline std::vector<std::string> verify_suite_names() {
    return {"kernel", "dikz", "cue-compare", "integral-lemma", "negcorr", "sigma-equiv"};
}

inline VerifyReport run_verify_suite(const std::string& name) {
    if (name == "kernel") return verify_kernel();
    if (name == "dikz") return verify_dikz();
    if (name == "cue-compare") return verify_cue_compare();
    if (name == "integral-lemma") return verify_integral_lemma();
    if (name == "negcorr") return verify_negcorr();
    if (name == "sigma-equiv") return verify_sigma_equiv();
    throw std::invalid_argument("unknown verification suite: " + name);
}

inline std::string format_verify_report(const VerifyReport& rep) {
    std::string out = "suite " + rep.suite + "\n";
    for (const auto& c : rep.checks) {
        char line[160];
        std::snprintf(line, sizeof line, "  %-38s measured % .6g  allowed [%g, %g]  %s\n",
                      c.name.c_str(), c.measured, c.lo, c.hi, c.pass ? "pass" : "FAIL");
        out += line;
    }
    out += rep.passed() ? "suite result: pass\n" : "suite result: FAIL\n";
    return out;
}

} // namespace bulkgap
