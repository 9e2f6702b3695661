#pragma once

#include <cstdint>

namespace rough {

/** SplitMix64 step. Small, fast, and good enough as a counter-based core. */
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/**
 * Deterministic substream of randomness keyed by (seed, stream, substream).
 *
 * Each Monte Carlo task derives its own stream from its task index, so batch
 * results do not depend on thread count or scheduling order. Normals use an
 * explicit Box-Muller transform rather than std::normal_distribution, whose
 * algorithm is implementation-defined; this keeps output identical across
 * standard libraries.
 */
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0);

    std::uint64_t next_u64() { return splitmix64_next(state_); }

    /** Uniform on (0, 1]. Never returns 0, so log(uniform()) is safe. */
    double uniform();

    /** Standard normal via Box-Muller; the second value of each pair is cached. */
    double normal();

private:
    std::uint64_t state_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace rough
