#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bulkgap/gapstats.hpp"
#include "bulkgap/rng.hpp"

using namespace bulkgap;
using Catch::Approx;

TEST_CASE("gap extraction on interval unions") {
    SECTION("pairs need both endpoints inside") {
        auto gl = extract_gaps({0.1, 0.4, 0.45, 0.9}, IntervalUnion(0.3, 0.95));
        REQUIRE(gl.gaps.size() == 2);
        CHECK(gl.gaps[0].index == 2);
        CHECK(gl.gaps[0].value == Approx(0.45));
        CHECK(gl.gaps[1].index == 1);
        CHECK(gl.gaps[1].value == Approx(0.05));
        CHECK(gl.lambda_set == std::vector<int>{1, 2});
        CHECK(gl.components_match());
        CHECK(gl.kth(1) == Approx(0.45));
        CHECK(gl.kth(2) == Approx(0.05));
        CHECK_THROWS_AS(gl.kth(3), std::out_of_range);
        CHECK_THROWS_AS(gl.kth(0), std::out_of_range);
    }
    SECTION("no covered pair gives an empty list") {
        auto gl = extract_gaps({0.1, 0.4, 0.45, 0.9}, IntervalUnion(0.5, 0.8));
        CHECK(gl.gaps.empty());
        CHECK(gl.lambda_set.empty());
        CHECK(gl.components_match());
    }
    SECTION("cross-component pairs stay in Lambda but not in Lambda~") {
        // (0.2, 0.6) has both endpoints in I via different components, so it
        // counts as a gap and makes Lambda(I) differ from Lambda~(I)
        auto gl = extract_gaps({0.1, 0.2, 0.6, 0.7},
                               IntervalUnion::parse("0:0.3,0.5:1"));
        REQUIRE(gl.gaps.size() == 3);
        CHECK(gl.lambda_set == std::vector<int>{0, 1, 2});
        CHECK(gl.lambda_tilde == std::vector<int>{0, 2});
        CHECK(!gl.components_match());
        CHECK(gl.gaps[0].value == Approx(0.4));
        CHECK(gl.gaps[1].value == Approx(0.1));
        CHECK(gl.gaps[1].index == 0);  // equal values tie-break by index
        CHECK(gl.gaps[2].index == 2);
    }
    SECTION("gap count always matches Lambda size") {
        Rng rng(7, 0);
        for (int it = 0; it < 200; ++it) {
            std::vector<double> lam(10);
            for (double& v : lam) v = rng.uniform();
            std::sort(lam.begin(), lam.end());
            IntervalUnion I = it % 2 ? IntervalUnion(0.2, 0.8)
                                     : IntervalUnion::parse("0.05:0.3,0.4:0.95");
            auto gl = extract_gaps(lam, I);
            CHECK(gl.gaps.size() == gl.lambda_set.size());
            for (std::size_t i = 1; i < gl.gaps.size(); ++i)
                CHECK(gl.gaps[i - 1].value >= gl.gaps[i].value);
        }
    }
}

TEST_CASE("rescaling G_n and its inverse") {
    SECTION("validation") {
        CHECK_THROWS_AS(RescaleParams(2, 1, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(RescaleParams(100, 0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(RescaleParams(100, 1, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(rescale_gap(RescaleParams(100, 1, 1.0), 0.0), std::invalid_argument);
    }
    SECTION("frozen value at n = round(e^8), q = 1, x = 0") {
        RescaleParams p(2981, 1, 1.0);
        CHECK(gn(p, 0.0) == Approx(0.0047860270270407632).epsilon(1e-14));
        CHECK(gn(RescaleParams::cue(2981), 0.0) == Approx(0.0057161135891680220).epsilon(1e-14));
    }
    SECTION("x cancelling the log-log term leaves the leading term") {
        for (int q : {1, 2, 5}) {
            RescaleParams p(1000, q, 2.0);
            const double L = std::log(1000.0);
            const double xstar = -(3.0 * q - 8.0) / (8.0 * q) * std::log(2.0 * L);
            CHECK(gn(p, xstar) == Approx(std::sqrt(32.0 * L) / 1000.0).epsilon(1e-13));
        }
    }
    SECTION("gn is strictly increasing in x") {
        RescaleParams p(500, 2, 1.5);
        CHECK(gn(p, 0.1) > gn(p, 0.0));
        CHECK(gn(p, -3.0) < gn(p, 3.0));
    }
    SECTION("round trip to 1e-12") {
        Rng rng(11, 0);
        for (int it = 0; it < 100; ++it) {
            const int n = 3 + (int)(rng.uniform() * 999997);
            const int q = 1 + (int)(rng.uniform() * 4);
            const double S = 0.5 + 3.0 * rng.uniform();
            const double x = -5.0 + 10.0 * rng.uniform();
            RescaleParams p(n, q, S);
            CHECK(rescale_gap(p, gn(p, x) / S) == Approx(x).margin(1e-12));
        }
    }
    SECTION("closed-form tau when m matches the leading term") {
        RescaleParams p(4000, 1, 0.7);
        const double L = std::log(4000.0);
        const double m = std::sqrt(32.0 * L) / (4000.0 * 0.7);
        CHECK(rescale_gap(p, m) == Approx(0.625 * std::log(2.0 * L)).epsilon(1e-12));
    }
    SECTION("tau is affine in m") {
        RescaleParams p(777, 2, 1.3);
        const double L = std::log(777.0);
        const double slope = 1.3 * 777.0 * std::sqrt(2.0 * L) / 4.0;
        const double t1 = rescale_gap(p, 0.01), t2 = rescale_gap(p, 0.02);
        CHECK((t2 - t1) / 0.01 == Approx(slope).epsilon(1e-12));
    }
}

TEST_CASE("exceedance counting") {
    CHECK(exceedance_count({}, 0.0) == 0);
    CHECK(exceedance_count({1.0, 0.5, -0.2}, 0.0) == 2);
    CHECK(exceedance_count({0.7}, 0.7) == 1);  // closed at x
    Rng rng(13, 0);
    for (int it = 0; it < 100; ++it) {
        std::vector<double> taus(20);
        for (double& t : taus) t = -2 + 4 * rng.uniform();
        const double x1 = -1 + 2 * rng.uniform(), x2 = x1 + rng.uniform();
        CHECK(exceedance_count(taus, x1) >= exceedance_count(taus, x2));
    }
}

TEST_CASE("Sigma_k membership, direct oracle") {
    const std::vector<double> lam{0.1, 0.9};
    const IntervalUnion I(0.0, 1.0);
    CHECK(sigma_contains_direct(lam, I, {0.3}, {0.2}));
    CHECK(!sigma_contains_direct(lam, I, {0.3}, {0.7}));
    // two draws cannot share the single admissible gap
    CHECK(!sigma_contains_direct(lam, I, {0.1, 0.1}, {0.2, 0.3}));
    CHECK_THROWS_AS(sigma_contains_direct(lam, I, std::vector<double>(7, 0.01),
                                          std::vector<double>(7, 0.2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(sigma_contains_direct(lam, I, {0.0}, {0.2}), std::invalid_argument);
    CHECK_THROWS_AS(sigma_contains_direct(lam, I, {0.1, 0.1}, {0.2}), std::invalid_argument);
}

TEST_CASE("Sigma_k membership, condition characterization") {
    const std::vector<double> lam{0.1, 0.9};
    const IntervalUnion I(0.0, 1.0);
    CHECK(sigma_contains_conditions(lam, I, {0.3}, {0.2}));
    // y + a swallows the next eigenvalue: rejected by (ii)
    CHECK(!sigma_contains_conditions(lam, I, {0.85}, {0.2}));
    // y on the boundary of I: rejected by (i)
    CHECK(!sigma_contains_conditions(lam, I, {0.1}, {0.0}));
    // hypothesis Lambda = Lambda~ enforced
    CHECK_THROWS_AS(sigma_contains_conditions({0.1, 0.2, 0.6, 0.7},
                                              IntervalUnion::parse("0:0.3,0.5:1"),
                                              {0.01}, {0.15}),
                    std::invalid_argument);
}

TEST_CASE("Sigma_k predicates agree on random conditioned instances") {
    Rng rng(20260815, 3);
    int tested = 0, trues = 0;
    while (tested < 20000) {
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
        IntervalUnion I(std::move(iv));

        if (!extract_gaps(lam, I).components_match()) continue;

        const int k = 1 + (int)(rng.uniform() * 3);
        std::vector<double> a(k), y(k);
        for (double& v : a) v = 0.001 + 0.15 * rng.uniform();
        for (double& v : y) {
            const double r = rng.uniform();
            if (r < 0.05)
                v = lam[(int)(rng.uniform() * n)];  // exactly on an eigenvalue
            else if (r < 0.10)
                v = pts[(int)(rng.uniform() * 2 * parts)];  // exactly on a boundary
            else
                v = -0.05 + 1.3 * rng.uniform();
        }
        const bool d = sigma_contains_direct(lam, I, a, y);
        const bool c = sigma_contains_conditions(lam, I, a, y);
        if (d != c) {
            CAPTURE(n, k, I.str());
            REQUIRE(d == c);
        }
        trues += d;
        ++tested;
    }
    INFO("positive fraction " << (double)trues / tested);
    CHECK(trues > 50);  // the sampler must actually exercise the true branch
}
