#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>

namespace ctxattn::nn {

/// Deterministic random stream shared by every seeded component.
///
/// Algorithm: xoshiro256** (Blackman & Vigna) whose four state words are
/// filled by four successive outputs of splitmix64 started at `seed`:
///
///     splitmix64: z = (x += 0x9E3779B97F4A7C15);
///                 z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
///                 z = (z ^ (z >> 27)) * 0x94D049BB133111EB;
///                 return z ^ (z >> 31);
///
///     xoshiro256**: result = rotl(s1 * 5, 7) * 9;
///                   t = s1 << 17; s2 ^= s0; s3 ^= s1; s1 ^= s2; s0 ^= s3;
///                   s2 ^= t; s3 = rotl(s3, 45);
///
/// Derived draws:
///   uniform()     = (next_u64() >> 11) * 2^-53, in [0, 1)
///   uniform(a, b) = a + (b - a) * uniform()
///   bernoulli(p)  = uniform() < p
///   below(n)      = rejection sampling on next_u64() % n, rejecting values
///                   below (2^64 - n) % n, so the result is unbiased
///
/// Test vectors (seed 0): next_u64() yields 0x99EC5F36CB75F2B4,
/// 0xBF6E1F784956452A, 0x1A5F849D4933E6E0.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t next_u64() noexcept;
    double uniform() noexcept;
    double uniform(double lo, double hi) noexcept;
    bool bernoulli(double p) noexcept;
    std::uint64_t below(std::uint64_t n) noexcept;

    /// Fisher-Yates from the back: for i = n-1..1 swap(i, below(i+1)).
    template <typename T>
    void shuffle(std::span<T> items) noexcept {
        for (std::size_t i = items.size(); i > 1; --i) {
            auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

    friend bool operator==(const Rng&, const Rng&) = default;

private:
    std::uint64_t seed_;
    std::array<std::uint64_t, 4> state_;
};

/// One splitmix64 step; exposed for test vectors.
std::uint64_t splitmix64(std::uint64_t& x) noexcept;

}  // namespace ctxattn::nn
