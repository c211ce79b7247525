#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace hh {

namespace detail {

using uint128 = unsigned __int128;

inline int bit_width_u128(uint128 v) {
    std::uint64_t hi = static_cast<std::uint64_t>(v >> 64);
    if (hi != 0) return 64 + std::bit_width(hi);
    return std::bit_width(static_cast<std::uint64_t>(v));
}

// Threshold fraction num / 2^shift * (1 / den): either a small rational
// recovered from the double (den > 1, shift = 0) or the exact binary
// expansion (den = 1, shift >= 0).
struct Fraction {
    std::uint64_t num = 0;
    std::uint64_t den = 1;
    int shift = 0;
};

// Continued-fraction reconstruction: the smallest-denominator rational within
// 1e-9 relative of t, if one exists with denominator <= 2^20. Recovers the
// caller's intended threshold (0.3, 7/40, 1/3, ...) from its double rounding,
// which is what integer cross-multiplication at the boundaries needs.
inline bool rational_from_double(double t, std::uint64_t& num, std::uint64_t& den) {
    const std::uint64_t q_max = 1ull << 20;
    std::uint64_t p_prev = 1, q_prev = 0, p = 0, q = 1;   // convergents of t in (0,1)
    double x = t;
    for (int iter = 0; iter < 40; ++iter) {
        if (std::fabs(t - static_cast<double>(p) / static_cast<double>(q)) <= 1e-9 * t) {
            num = p;
            den = q;
            return true;
        }
        if (x <= 0) break;
        double inv = 1.0 / x;
        double af = std::floor(inv);
        if (af >= static_cast<double>(q_max)) break;
        auto a = static_cast<std::uint64_t>(af);
        std::uint64_t p_next = a * p + p_prev;
        std::uint64_t q_next = a * q + q_prev;
        if (q_next > q_max) break;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
        x = inv - af;
    }
    return false;
}

inline Fraction to_fraction(double t) {
    if (t <= 0.0) return {0, 1, 0};
    if (t >= 1.0) throw std::invalid_argument("threshold fraction must be < 1");
    Fraction f;
    if (rational_from_double(t, f.num, f.den)) return f;
    int exp = 0;
    double mant = std::frexp(t, &exp);                            // t = mant * 2^exp
    f.num = static_cast<std::uint64_t>(std::ldexp(mant, 53));     // exact
    f.den = 1;
    f.shift = 53 - exp;
    return f;
}

enum class Cmp { lt, eq, gt };

// Compares a against t*b exactly, treating t as the fraction above.
inline Cmp scaled_compare(uint128 a, double t, std::uint64_t b) {
    Fraction f = to_fraction(t);
    uint128 rhs = static_cast<uint128>(f.num) * b;                // < 2^117
    uint128 lhs = a;
    if (a == 0) {
        lhs = 0;
    } else if (f.den > 1) {
        // a * den <= 2^127 needs a < 2^107; desk-scale counts are far below
        if (bit_width_u128(a) + std::bit_width(f.den) > 126) return Cmp::gt;
        lhs = a * f.den;
    } else if (f.shift > 0) {
        if (bit_width_u128(a) + f.shift > 120) return Cmp::gt;
        lhs = a << f.shift;
    }
    if (lhs < rhs) return Cmp::lt;
    return lhs == rhs ? Cmp::eq : Cmp::gt;
}

}  // namespace detail

// Exact threshold comparisons a >= t*b, a <= t*b, a > t*b for integer a, b
// (b < 2^64) and a fractional threshold t supplied as a double.
inline bool scaled_ge(detail::uint128 a, double t, std::uint64_t b) {
    return detail::scaled_compare(a, t, b) != detail::Cmp::lt;
}

inline bool scaled_le(detail::uint128 a, double t, std::uint64_t b) {
    return detail::scaled_compare(a, t, b) != detail::Cmp::gt;
}

inline bool scaled_gt(detail::uint128 a, double t, std::uint64_t b) {
    return detail::scaled_compare(a, t, b) == detail::Cmp::gt;
}

// Floor/ceil with a relative snap to the nearest integer, so formula inputs
// like 1/0.01 or 2/0.2 land on the intended integer despite IEEE rounding.
inline std::uint64_t snap_floor(double v) {
    if (v < 0) throw std::invalid_argument("snap_floor: negative value");
    double r = std::nearbyint(v);
    if (std::fabs(v - r) <= 1e-9 * std::fmax(1.0, std::fabs(r)))
        return static_cast<std::uint64_t>(r);
    return static_cast<std::uint64_t>(std::floor(v));
}

inline std::uint64_t snap_ceil(double v) {
    if (v < 0) throw std::invalid_argument("snap_ceil: negative value");
    double r = std::nearbyint(v);
    if (std::fabs(v - r) <= 1e-9 * std::fmax(1.0, std::fabs(r)))
        return static_cast<std::uint64_t>(r);
    return static_cast<std::uint64_t>(std::ceil(v));
}

// Smallest k with 2^k >= v (v >= 1). ceil_log2(1) == 0.
inline unsigned ceil_log2(std::uint64_t v) {
    if (v <= 1) return 0;
    return static_cast<unsigned>(std::bit_width(v - 1));
}

}  // namespace hh
