#pragma once

#include <cstdint>
#include <stdexcept>

#include "hh/numeric.hpp"

namespace hh {

// SplitMix64 finalizer; used both as a mixer and to derive sub-seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Deterministic sub-seed; distinct tags give unrelated streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
    return splitmix64(master ^ splitmix64(tag ^ 0xA5A5A5A5A5A5A5A5ull));
}

// Pairwise-independent hash h(x) = ((a*x + b) mod p) mod range with
// p = 2^61 - 1, a in [1, p), b in [0, p). For a uniformly seeded instance,
// (h(x), h(y)) is jointly uniform on [range]^2 for x != y up to O(range/p).
class PairwiseHash {
public:
    static constexpr std::uint64_t kPrime = (1ull << 61) - 1;

    PairwiseHash(std::uint64_t seed, std::uint64_t range) : range_(range) {
        if (range == 0) throw std::invalid_argument("PairwiseHash: range must be >= 1");
        if (range >= kPrime) throw std::invalid_argument("PairwiseHash: range too large");
        std::uint64_t s0 = splitmix64(seed ^ 0x6A09E667F3BCC909ull);
        std::uint64_t s1 = splitmix64(s0);
        a_ = 1 + s0 % (kPrime - 1);
        b_ = s1 % kPrime;
    }

    std::uint64_t operator()(std::uint64_t x) const {
        std::uint64_t v = add_mod(mul_mod(a_, x % kPrime), b_);
        return v % range_;
    }

    std::uint64_t range() const { return range_; }

private:
    static std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) {
        detail::uint128 t = static_cast<detail::uint128>(a) * b;
        std::uint64_t lo = static_cast<std::uint64_t>(t & kPrime);
        std::uint64_t hi = static_cast<std::uint64_t>(t >> 61);
        std::uint64_t r = lo + hi;          // < 2^62, may exceed p twice
        if (r >= kPrime) r -= kPrime;
        if (r >= kPrime) r -= kPrime;
        return r;
    }

    static std::uint64_t add_mod(std::uint64_t a, std::uint64_t b) {
        std::uint64_t r = a + b;
        if (r >= kPrime) r -= kPrime;
        return r;
    }

    std::uint64_t a_ = 1;
    std::uint64_t b_ = 0;
    std::uint64_t range_ = 1;
};

// Pairwise-independent sign: one hash bit mapped to {-1, +1}.
class SignHash {
public:
    explicit SignHash(std::uint64_t seed) : bit_(seed, 2) {}

    int operator()(std::uint64_t x) const { return bit_(x) == 0 ? 1 : -1; }

private:
    PairwiseHash bit_;
};

// Rademacher sign from a seeded 64-bit mixer; the seed is the stored state.
class SeededSign {
public:
    explicit SeededSign(std::uint64_t seed) : seed_(seed) {}

    int operator()(std::uint64_t x) const {
        return (splitmix64(seed_ ^ (x * 0xD1342543DE82EF95ull)) >> 63) ? -1 : 1;
    }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
};

}  // namespace hh
