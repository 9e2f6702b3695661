#include "rough/rng.hpp"

#include <cmath>

namespace rough {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

std::uint64_t mix_key(std::uint64_t a, std::uint64_t b) {
    // Two finalizer rounds keep distinct (seed, stream) pairs well separated.
    std::uint64_t s = a ^ (b * 0x9e3779b97f4a7c15ULL);
    splitmix64_next(s);
    splitmix64_next(s);
    return s;
}
}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream) {
    state_ = mix_key(mix_key(seed, stream + 1), substream + 1);
}

double RandomStream::uniform() {
    // 53 random bits, shifted into (0, 1].
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double RandomStream::normal() {
    if (have_cached_) {
        have_cached_ = false;
        return cached_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    cached_ = r * std::sin(kTwoPi * u2);
    have_cached_ = true;
    return r * std::cos(kTwoPi * u2);
}

}  // namespace rough
