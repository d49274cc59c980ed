#ifndef LEVYORDER_RNG_HPP
#define LEVYORDER_RNG_HPP

#include <cmath>
#include <cstdint>

namespace levyorder {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
}  // namespace detail

/// Counter-based stream keyed by (seed, path, step).
///
/// Two instances constructed with the same key produce identical draw
/// sequences regardless of how paths are partitioned across workers,
/// which is what makes threaded simulation bit-reproducible and makes
/// common-random-number pairing of two process specs valid.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t path, std::uint64_t step) {
        std::uint64_t s = seed;
        std::uint64_t k1 = detail::splitmix64(s);
        s = k1 ^ (path * 0xD6E8FEB86659FD93ULL);
        std::uint64_t k2 = detail::splitmix64(s);
        s = k2 ^ (step * 0xC2B2AE3D27D4EB4FULL);
        state_ = detail::splitmix64(s);
        have_cached_normal_ = false;
        cached_normal_ = 0.0;
    }

    std::uint64_t next_u64() { return detail::splitmix64(state_); }

    /// Uniform on (0, 1), never returning 0 or 1.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }

    /// Standard normal via Box-Muller; caches the second value.
    double normal() {
        if (have_cached_normal_) {
            have_cached_normal_ = false;
            return cached_normal_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        cached_normal_ = r * std::sin(a);
        have_cached_normal_ = true;
        return r * std::cos(a);
    }

    /// Poisson count by Knuth's product-of-uniforms method (small rates).
    int poisson(double lambda) {
        if (lambda <= 0.0) return 0;
        const double limit = std::exp(-lambda);
        int k = 0;
        double prod = uniform();
        while (prod > limit) {
            ++k;
            prod *= uniform();
        }
        return k;
    }

private:
    std::uint64_t state_;
    bool have_cached_normal_;
    double cached_normal_;
};

}  // namespace levyorder

#endif
