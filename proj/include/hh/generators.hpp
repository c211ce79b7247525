#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "hh/stream.hpp"

namespace hh {

namespace detail {

// Uniform double in [0,1) built from raw engine output so generated streams
// are identical across standard library implementations.
inline double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline std::uint64_t uniform_below(std::mt19937_64& eng, std::uint64_t bound) {
    // rejection sampling, unbiased
    std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t v;
    do {
        v = eng();
    } while (v >= limit);
    return v % bound;
}

template <typename T>
void shuffle_items(std::vector<T>& v, std::mt19937_64& eng) {
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[uniform_below(eng, i)]);
}

}  // namespace detail

// m i.i.d. draws with Pr[item = i] proportional to i^(-s). Cumulative weights
// with binary search; deterministic given seed.
inline Stream gen_zipf(std::uint32_t n, std::uint64_t m, double s, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_zipf: n must be >= 1");
    if (!(s > 0.0)) throw std::invalid_argument("gen_zipf: exponent must be > 0");
    std::vector<double> cum(n);
    double acc = 0.0;
    for (std::uint32_t i = 0; i < n; ++i) {
        acc += std::pow(static_cast<double>(i) + 1.0, -s);
        cum[i] = acc;
    }
    Stream out;
    out.universe_size = n;
    out.items.reserve(m);
    std::mt19937_64 eng(seed);
    for (std::uint64_t j = 0; j < m; ++j) {
        double u = detail::uniform01(eng) * acc;
        auto it = std::upper_bound(cum.begin(), cum.end(), u);
        if (it == cum.end()) --it;
        out.items.push_back(static_cast<ItemId>(it - cum.begin()) + 1);
    }
    return out;
}

enum class SpikeOrder { interleaved, star_last };

// One planted item occurring f_star times plus m - f_star distinct unit items.
inline Stream gen_spike(std::uint32_t n, std::uint64_t m, ItemId star, std::uint64_t f_star,
                        SpikeOrder order, std::uint64_t seed) {
    if (star == 0 || star > n) throw std::invalid_argument("gen_spike: star outside [1, n]");
    if (f_star > m) throw std::invalid_argument("gen_spike: f_star exceeds m");
    std::uint64_t noise = m - f_star;
    if (noise > static_cast<std::uint64_t>(n) - 1)
        throw std::invalid_argument("gen_spike: not enough distinct items for the noise");
    Stream out;
    out.universe_size = n;
    out.items.reserve(m);
    ItemId next = 1;
    for (std::uint64_t i = 0; i < noise; ++i) {
        if (next == star) ++next;
        out.items.push_back(next++);
    }
    out.items.insert(out.items.end(), f_star, star);
    if (order == SpikeOrder::interleaved) {
        std::mt19937_64 eng(seed);
        detail::shuffle_items(out.items, eng);
    }
    return out;
}

}  // namespace hh
