#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bulkgap/constants.hpp"

using namespace bulkgap;

namespace {

// Independent route to c0: Euler-Mascheroni via harmonic numbers and
// zeta'(2) via Euler-Maclaurin tail, then
//   log A = (gamma + log 2 pi) / 12 - zeta'(2) / (2 pi^2)
//   c0    = log(2)/12 + 3 (1/12 - log A).
double euler_gamma() {
    const int n = 200;
    long double h = 0.0L;
    for (int k = 1; k <= n; ++k) h += 1.0L / k;
    const long double nn = n;
    return (double)(h - std::log(nn) - 1 / (2 * nn) + 1 / (12 * nn * nn) -
                    1 / (120 * nn * nn * nn * nn));
}

double zeta_prime_2() {
    const int K = 4000;
    long double s = 0.0L;
    for (int k = 2; k < K; ++k) s += std::log((long double)k) / ((long double)k * k);
    const long double x = K, lx = std::log(x);
    const long double tail = (lx + 1) / x + lx / (2 * x * x) - (1 - 2 * lx) / (12 * x * x * x) +
                             (26 - 24 * lx) / (720 * x * x * x * x * x);
    return (double)-(s + tail);
}

} // namespace

TEST_CASE("Glaisher constant and zeta'(-1)") {
    CHECK(log_glaisher() == Catch::Approx(0.24875447703378426).margin(1e-14));
    CHECK(zeta_prime_minus1() == Catch::Approx(-0.16542114370045093).margin(1e-14));
}

TEST_CASE("c0 agrees with the functional-equation route to 12+ digits") {
    const double pi = 3.14159265358979323846;
    const double logA = (euler_gamma() + std::log(2 * pi)) / 12.0 - zeta_prime_2() / (2 * pi * pi);
    const double c0_indep = std::log(2.0) / 12.0 + 3.0 * (1.0 / 12.0 - logA);
    CHECK(c0_constant() == Catch::Approx(c0_indep).margin(1e-13));
    CHECK(c0_constant() == Catch::Approx(-0.43850116605469068).margin(1e-12));
}
