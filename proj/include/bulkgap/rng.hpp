#pragma once

// Deterministic RNG stack for the samplers. xoshiro256** seeded through
// splitmix64 from (seed, stream), so replica streams are independent of
// scheduling and worker count. Variate generators are written out explicitly
// to keep the byte-level output identical across standard libraries.

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace bulkgap {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
} // namespace detail

class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t s = seed ^ (0xA0761D6478BD642FULL * (stream + 1));
        for (auto& w : state_) w = detail::splitmix64(s);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl(state_[3], 45);
        return result;
    }

    // uniform on (0,1]
    double uniform() { return ((next_u64() >> 11) + 1) * 0x1.0p-53; }

    // standard normal, Box-Muller (cosine branch only, deterministic draw count)
    double normal() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    // Gamma(shape, 1) by Marsaglia-Tsang squeeze, shape >= 1
    double gamma(double shape) {
        if (!(shape >= 1.0)) throw std::invalid_argument("gamma sampler wants shape >= 1");
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    double beta(double a, double b) {
        const double x = gamma(a);
        const double y = gamma(b);
        return x / (x + y);
    }

    // chi_k = sqrt(chi^2_k); for even dof this is sqrt(2 Gamma(k/2))
    double chi(double dof) { return std::sqrt(2.0 * gamma(0.5 * dof)); }

private:
    std::uint64_t state_[4];
};

} // namespace bulkgap
