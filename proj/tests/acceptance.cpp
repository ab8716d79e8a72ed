// Acceptance gate. Runs the eleven end-to-end checks and prints one
// [PASS]/[FAIL] line each, with measured numbers indented underneath.
// Arguments select criteria by number (default: all). Exit is nonzero if
// any selected criterion fails.
//
// Expected values are computed from independent closed forms where one
// exists; everything statistical runs at a fixed seed so the binary either
// passes deterministically or fails deterministically.

#include <bulkgap/detengine.hpp>
#include <bulkgap/harness.hpp>
#include <bulkgap/verify.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

using namespace bulkgap;

namespace {

double now() {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
}

bool runtime_ok(const char* label, double seconds, double budget) {
    std::printf("  %s ran in %.1fs (budget %.0fs)\n", label, seconds, budget);
    return seconds < budget;
}

// ---------------------------------------------------------------------------
// 1. interval constants against per-ensemble closed forms

// c0 to double precision, written out rather than taken from the library so
// the comparison stays independent of c0_constant().
constexpr double kC0 = -0.43850116605469068;

double closed_cvi(Ensemble kind, double a, double b) {
    switch (kind) {
        case Ensemble::gue:
            if (a + b < 0.0) return kC0 + std::log(std::pow(4.0 - a * a, 1.5) / (4.0 * std::fabs(a)));
            if (a + b > 0.0) return kC0 + std::log(std::pow(4.0 - b * b, 1.5) / (4.0 * b));
            return kC0 + std::log(std::pow(4.0 - a * a, 1.5) / (2.0 * std::fabs(a)));
        case Ensemble::lue:
            return kC0 + std::log(std::pow(4.0 - b, 1.5) * std::sqrt(b) / 8.0);
        case Ensemble::jue:
            if (b < 0.5) return kC0 + std::log(std::sqrt((1.0 - b) * b) / (1.0 - 2.0 * b));
            if (a > 0.5) return kC0 + std::log(std::sqrt((1.0 - a) * a) / (2.0 * a - 1.0));
            return kC0 + 0.5 * std::log(std::numbers::pi / 2.0);
        default:
            throw std::invalid_argument("no closed form");
    }
}

bool criterion1() {
    const double t0 = now();
    bool ok = true;
    for (Ensemble kind : {Ensemble::gue, Ensemble::lue, Ensemble::jue}) {
        const auto spec = kind == Ensemble::gue   ? EnsembleSpec::gue()
                          : kind == Ensemble::lue ? EnsembleSpec::lue()
                                                  : EnsembleSpec::jue();
        Rng rng(17, (std::uint64_t)kind);
        double worst_closed = 0.0, worst_identity = 0.0;
        int made = 0;
        while (made < 50) {
            double a = 0.0, b = 0.0;
            if (kind == Ensemble::gue) {
                if (made % 5 == 4) {
                    // symmetric interval: both endpoints minimize the density
                    b = 0.1 + 1.8 * rng.uniform();
                    a = -b;
                } else {
                    a = -1.9 + 3.8 * rng.uniform();
                    b = -1.9 + 3.8 * rng.uniform();
                    if (a > b) std::swap(a, b);
                    // keep clear of the tie between the endpoint densities
                    if (b - a < 0.05 || std::fabs(a + b) < 0.02) continue;
                }
            } else if (kind == Ensemble::lue) {
                a = 0.05 + 3.85 * rng.uniform();
                b = 0.05 + 3.85 * rng.uniform();
                if (a > b) std::swap(a, b);
                if (b - a < 0.05) continue;
            } else {
                a = 0.02 + 0.96 * rng.uniform();
                b = 0.02 + 0.96 * rng.uniform();
                if (a > b) std::swap(a, b);
                // keep the interior minimum clearly inside or clearly outside
                if (b - a < 0.04 || std::fabs(a - 0.5) < 0.02 || std::fabs(b - 0.5) < 0.02)
                    continue;
            }
            ++made;
            const IntervalUnion I(a, b);
            const auto cons = constants(spec, I, classify_minimizers(spec, I));
            worst_closed = std::max(worst_closed, std::fabs(cons.c_VI - closed_cvi(kind, a, b)));
            const double identity = c0_constant() + std::log(cons.M_I * cons.S_I / 4.0);
            worst_identity = std::max(worst_identity, std::fabs(cons.c_VI - identity));
        }
        std::printf("  %s: 50 intervals, worst |c_VI - closed form| %.3e, worst identity gap %.3e\n",
                    ensemble_name(kind), worst_closed, worst_identity);
        ok = ok && worst_closed <= 1e-12 && worst_identity <= 1e-12;
    }
    return ok && runtime_ok("constants", now() - t0, 5.0);
}

// ---------------------------------------------------------------------------
// shared wrapper for the criteria that coincide with a verify suite

bool run_suite(const std::string& name, double budget) {
    const double t0 = now();
    const auto rep = run_verify_suite(name);
    std::string text = format_verify_report(rep);
    // indent the report under the criterion line
    std::string indented = "  ";
    for (char c : text)
        indented += (c == '\n') ? std::string("\n  ") : std::string(1, c);
    if (indented.size() >= 2) indented.resize(indented.size() - 2);
    std::fputs(indented.c_str(), stdout);
    return rep.passed() && runtime_ok(name.c_str(), now() - t0, budget);
}

bool criterion2() { return run_suite("dikz", 120.0); }

// ---------------------------------------------------------------------------
// 3. rescaled arc determinant against the limiting intensity

bool criterion3() {
    const double t0 = now();
    const double c0 = c0_constant();
    double dev[3] = {0, 0, 0};
    const int ns[3] = {500, 1000, 2000};
    bool ok = true;
    for (int i = 0; i < 3; ++i) {
        const int n = ns[i];
        const double L = std::log((double)n);
        for (int q : {1, 2}) {
            RescaleParams p(n, q, 1.0);
            for (double u : {0.0, 0.5}) {
                for (double x : {-0.5, 0.0, 0.5}) {
                    const double alpha = (1.0 + u / L) * gn(p, x) / 2.0;
                    const double lr = L + log_toeplitz_gap_cue(n, alpha) -
                                      (1.0 / q - 0.5) * std::log(2.0 * L) - (c0 - x - 2.0 * u);
                    const double d = std::fabs(std::exp(lr) - 1.0);
                    dev[i] = std::max(dev[i], d);
                    if (n == 1000 && d > 0.20) {
                        std::printf("  n=1000 q=%d u=%.1f x=% .1f off by %.3f\n", q, u, x, d);
                        ok = false;
                    }
                }
            }
        }
    }
    std::printf("  max deviation: n=500 %.4f, n=1000 %.4f, n=2000 %.4f\n", dev[0], dev[1], dev[2]);
    if (!(dev[2] < dev[0])) {
        std::printf("  deviation did not shrink from n=500 to n=2000\n");
        ok = false;
    }
    return ok && runtime_ok("determinant scaling", now() - t0, 600.0);
}

// ---------------------------------------------------------------------------
// 4. width-inflation bound for the arc determinant

bool criterion4() {
    const double t0 = now();
    bool ok = true;
    int checked = 0;
    for (int n : {500, 1000}) {
        RescaleParams p(n, 1, 1.0);
        for (double x : {-1.0, 0.0, 1.0}) {
            const double g2 = 0.5 * gn(p, x);
            const double base = log_toeplitz_gap_cue(n, g2);
            for (double w : {1.1, 1.5, 2.0}) {
                const double lhs = log_toeplitz_gap_cue(n, w * g2);
                const double bound = -(w - 1.0) * std::log((double)n) + 1.0 + base;
                ++checked;
                if (!(lhs <= bound)) {
                    std::printf("  violated at n=%d x=%g w=%g: lhs %.4f bound %.4f\n", n, x, w,
                                lhs, bound);
                    ok = false;
                }
            }
        }
    }
    std::printf("  %d (n, w, x) triples checked\n", checked);
    return ok && runtime_ok("width inflation", now() - t0, 120.0);
}

bool criterion5() { return run_suite("kernel", 60.0); }
bool criterion6() { return run_suite("cue-compare", 120.0); }

// ---------------------------------------------------------------------------
// 7. bulk integral against its limiting constant

bool criterion7() {
    const double t0 = now();
    const auto spec = EnsembleSpec::gue();
    const IntervalUnion I(0.5, 1.0);
    const auto mrep = classify_minimizers(spec, I);
    const auto cons = constants(spec, I, mrep);
    double ratio[2];
    const int ns[2] = {500, 1000};
    for (int i = 0; i < 2; ++i) {
        const int n = ns[i];
        const double v = integral_lemma_value(spec, I, mrep, n, 0.0);
        const double lim =
            cons.M_I * std::exp(c0_constant()) / (n * std::sqrt(2.0 * std::log((double)n)));
        ratio[i] = v / lim;
        std::printf("  ratio to limit at n=%d: %.4f\n", n, ratio[i]);
    }
    const bool in_bracket = ratio[0] >= 0.5 && ratio[0] <= 1.5;
    const bool toward_one = std::fabs(ratio[1] - 1.0) < std::fabs(ratio[0] - 1.0);
    if (!toward_one)
        std::printf("  deviation grows between n=500 and n=1000; in this size range the\n"
                    "  subleading terms still push the ratio away from 1 (it turns back\n"
                    "  only far beyond n=10^5), so the strict-improvement clause fails\n");
    return in_bracket && toward_one && runtime_ok("bulk integral", now() - t0, 600.0);
}

bool criterion8() { return run_suite("negcorr", 300.0); }
bool criterion9() { return run_suite("sigma-equiv", 60.0); }

// ---------------------------------------------------------------------------
// 10. Monte Carlo exceedance statistics against the gamma-Gumbel law

bool criterion10() {
    const double t0 = now();
    bool ok = true;
    struct Case {
        Ensemble kind;
        IntervalUnion I;
    };
    for (const Case& cs : {Case{Ensemble::gue, {0.5, 1.0}}, Case{Ensemble::jue, {0.25, 0.75}}}) {
        double ks500 = 0.0;
        for (int n : {500, 2000}) {
            ExperimentConfig cfg;
            cfg.kind = cs.kind;
            cfg.n = n;
            cfg.replicas = 4000;
            cfg.I = cs.I;
            cfg.k_list = {1};
            cfg.x_list = {0.0};
            cfg.seed = 2026;
            cfg.workers = 4;
            const auto res = run_experiment(cfg);
            const double mean = res.mean_count[0];
            const double var = res.var_count[0];
            const double theory = res.theory_mean[0];
            const double ks = res.ks_by_k[0];
            std::printf("  %s n=%d: mean %.4f (theory %.4f), var/mean %.4f, KS(tau_1) %.4f\n",
                        ensemble_name(cs.kind), n, mean, theory, var / mean, ks);
            if (n == 500) {
                ks500 = ks;
                continue;
            }
            if (!(std::fabs(mean / theory - 1.0) <= 0.25)) {
                std::printf("  %s mean off theory by more than 25%%\n", ensemble_name(cs.kind));
                ok = false;
            }
            if (!(std::fabs(var / mean - 1.0) <= 0.35)) {
                std::printf("  %s variance off mean by more than 35%%\n", ensemble_name(cs.kind));
                ok = false;
            }
            if (!(ks < 0.15 && ks < ks500)) {
                std::printf("  %s KS %.4f not below min(0.15, KS at n=500 = %.4f)\n",
                            ensemble_name(cs.kind), ks, ks500);
                std::printf("  the finite-n exceedance intensity drifts away from e^{c_VI}\n"
                            "  between these sizes (same slow hump that fails criterion 7;\n"
                            "  mean/theory tracks the bulk-integral ratio), so the tau_1 law\n"
                            "  moves away from the limit here and the KS comparison inherits it\n");
                ok = false;
            }
        }
    }
    return ok && runtime_ok("Monte Carlo", now() - t0, 1800.0);
}

// ---------------------------------------------------------------------------
// 11. dense vs tridiagonal sampler law, plus bulk density

bool criterion11() {
    const double t0 = now();
    bool ok = true;
    const int reps = 100000, n = 8;
    const double crit = 1.9495 * std::sqrt(2.0 / (reps * (double)n));  // alpha ~ 1e-3
    for (Ensemble kind : {Ensemble::gue, Ensemble::lue, Ensemble::jue}) {
        std::vector<double> a, b;
        a.reserve((std::size_t)reps * n);
        b.reserve((std::size_t)reps * n);
        for (int r = 0; r < reps; ++r) {
            const auto s = sample(kind, n, 900 + (int)kind, r);
            const auto d = sample_dense(kind, n, 901 + (int)kind, r);
            a.insert(a.end(), s.lambda.begin(), s.lambda.end());
            b.insert(b.end(), d.lambda.begin(), d.lambda.end());
        }
        const double dist = ks_distance_two_sample(std::move(a), std::move(b));
        std::printf("  %s pooled two-sample KS %.5f (critical %.5f)\n", ensemble_name(kind), dist,
                    crit);
        ok = ok && dist < crit;
    }

    struct Win {
        Ensemble kind;
        double lo, hi;
    };
    for (Win w : {Win{Ensemble::gue, -1.0, 1.0}, Win{Ensemble::lue, 0.5, 3.0},
                  Win{Ensemble::jue, 0.2, 0.8}}) {
        auto F = [&](double x) -> double {  // equilibrium cdf
            const double pi = std::numbers::pi;
            switch (w.kind) {
                case Ensemble::gue:
                    return (x * std::sqrt(4.0 - x * x) + 4.0 * std::asin(x / 2.0)) / (4.0 * pi);
                case Ensemble::lue: {
                    const double th = std::asin(std::sqrt(x) / 2.0);
                    return (2.0 * th + std::sin(2.0 * th)) / pi;
                }
                default:
                    return 2.0 / pi * std::asin(std::sqrt(x));
            }
        };
        const int nn = 400, R = 120, B = 8;
        double cnt[B] = {0};
        for (int r = 0; r < R; ++r)
            for (double lam : sample(w.kind, nn, 31, r).lambda) {
                if (lam < w.lo || lam >= w.hi) continue;
                const int bin = (int)((lam - w.lo) / (w.hi - w.lo) * B);
                if (bin >= 0 && bin < B) cnt[bin] += 1.0;
            }
        double worst = 0.0;
        for (int bin = 0; bin < B; ++bin) {
            const double l = w.lo + (w.hi - w.lo) * bin / B;
            const double h = w.lo + (w.hi - w.lo) * (bin + 1) / B;
            worst = std::max(worst, std::fabs(cnt[bin] / R / (nn * (F(h) - F(l))) - 1.0));
        }
        std::printf("  %s bulk density, worst bin off by %.4f (allowed 0.05)\n",
                    ensemble_name(w.kind), worst);
        ok = ok && worst <= 0.05;
    }
    return ok && runtime_ok("sampler law", now() - t0, 600.0);
}

struct Criterion {
    int id;
    const char* title;
    bool (*fn)();
};

const Criterion kCriteria[] = {
    {1, "interval constants match the closed forms", criterion1},
    {2, "small-arc determinant matches its log expansion", criterion2},
    {3, "rescaled arc determinant approaches the limiting intensity", criterion3},
    {4, "arc gap bound under width inflation", criterion4},
    {5, "sine-kernel residual decay orders", criterion5},
    {6, "finite-n gap probability tracks the unitary-group arc law", criterion6},
    {7, "bulk integral approaches its limiting constant", criterion7},
    {8, "gap events are negatively correlated", criterion8},
    {9, "overlap predicate equivalence on randomized instances", criterion9},
    {10, "exceedance statistics follow the gamma-Gumbel law", criterion10},
    {11, "dense and tridiagonal samplers agree; bulk density matches", criterion11},
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        char* end = nullptr;
        const long id = std::strtol(argv[i], &end, 10);
        if (end == argv[i] || *end != '\0' || id < 1 || id > 11) {
            std::fprintf(stderr, "usage: %s [criterion numbers 1..11]\n", argv[0]);
            return 2;
        }
        selected.push_back((int)id);
    }
    if (selected.empty())
        for (const auto& c : kCriteria) selected.push_back(c.id);

    int failures = 0;
    for (int id : selected) {
        const Criterion& c = kCriteria[id - 1];
        bool ok = false;
        try {
            ok = c.fn();
        } catch (const std::exception& e) {
            std::printf("  threw: %s\n", e.what());
        }
        std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", c.id, c.title);
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    std::printf("%zu criteria run, %d failed\n", selected.size(), failures);
    return failures == 0 ? 0 : 1;
}
