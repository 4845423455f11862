/**
 * SplitMix64: seeded PRNG for deterministic Monte Carlo runs.
 *
 * Chosen over std:: engines because the double stream must be identical
 * across platforms and standard library versions: std::uniform_real_distribution
 * is not pinned by the standard, (next() >> 11) * 2^-53 is.
 *
 * Stream layout used by the simulators: one independent substream per
 * measurement context, derived from the experiment seed with substream_seed().
 */

#ifndef BELLKIT_PRNG_HPP
#define BELLKIT_PRNG_HPP

#include <cstdint>

namespace bellkit {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 significant bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Fair coin.
    bool coin() { return uniform01() < 0.5; }

private:
    std::uint64_t state_;
};

/// Seed of substream `k` of `seed`: the (k+1)-th output of SplitMix64(seed).
inline std::uint64_t substream_seed(std::uint64_t seed, unsigned k) {
    SplitMix64 g(seed);
    std::uint64_t v = 0;
    for (unsigned i = 0; i <= k; ++i) v = g.next();
    return v;
}

} // namespace bellkit

#endif // BELLKIT_PRNG_HPP
