#ifndef BILINEARFQ_PRNG_HPP
#define BILINEARFQ_PRNG_HPP

#include <cstdint>

namespace bfq {

/// SplitMix64 (Steele, Lea, Flood). State advances by 0x9E3779B97F4A7C15;
/// output is the standard two-multiply finalizer. next_unit() takes the top
/// 53 bits, so any reimplementation reproduces identical random sets.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    constexpr double next_unit() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound) by rejection.
    constexpr std::uint64_t next_below(std::uint64_t bound) noexcept {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x = next();
        while (x >= limit) x = next();
        return x % bound;
    }

private:
    std::uint64_t state_;
};

}  // namespace bfq

#endif  // BILINEARFQ_PRNG_HPP
