#pragma once

// Universal constants entering the large-gap asymptotics.

#include <cmath>
#include <numbers>

namespace bulkgap {

// log of the Glaisher-Kinkelin constant, via the Euler-Maclaurin expansion of
// the hyperfactorial: sum_{k<=N} k log k = (N^2/2 + N/2 + 1/12) log N - N^2/4
// + log A + 1/(720 N^2) - 1/(5040 N^4) + 1/(10080 N^6) + O(N^-8).
inline double log_glaisher() {
    const int N = 100;
    long double s = 0.0L;
    for (int k = 2; k <= N; ++k) s += (long double)k * std::log((long double)k);
    const long double n = N, n2 = (long double)N * N;
    const long double ln = std::log(n);
    long double a = s - (n2 / 2 + n / 2 + 1.0L / 12) * ln + n2 / 4
                    - 1.0L / (720 * n2) + 1.0L / (5040 * n2 * n2)
                    - 1.0L / (10080 * n2 * n2 * n2);
    return (double)a;
}

inline double zeta_prime_minus1() { return 1.0 / 12.0 - log_glaisher(); }

// c0 = (1/12) log 2 + 3 zeta'(-1) = -0.43850116605469...
inline double c0_constant() {
    static const double c = std::numbers::ln2 / 12.0 + 3.0 * zeta_prime_minus1();
    return c;
}

} // namespace bulkgap
