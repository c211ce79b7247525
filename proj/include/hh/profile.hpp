#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hh/numeric.hpp"
#include "hh/stream.hpp"

namespace hh {

// Accuracy/threshold pair for both heavy-hitter guarantees.
struct HHParams {
    double epsilon = 0.0;
    double phi = 0.0;

    void validate() const {
        if (!(0.0 < epsilon && epsilon < phi && phi < 1.0))
            throw std::invalid_argument("HHParams: need 0 < epsilon < phi < 1");
    }
};

struct HHReport {
    struct Entry {
        ItemId item;
        double estimate;   // estimated frequency, stream counts
    };
    std::vector<Entry> entries;   // item ids distinct

    bool contains(ItemId id) const {
        for (const auto& e : entries)
            if (e.item == id) return true;
        return false;
    }
};

inline void sort_report(HHReport& r) {
    std::sort(r.entries.begin(), r.entries.end(), [](const auto& a, const auto& b) {
        if (a.estimate != b.estimate) return a.estimate > b.estimate;
        return a.item < b.item;
    });
}

// Exact per-item counts plus m and F2; the ground-truth oracle.
struct FrequencyProfile {
    std::unordered_map<ItemId, std::uint64_t> counts;   // only items with f_i > 0
    std::uint64_t total = 0;                             // m
    std::uint64_t f2 = 0;                                // sum of f_i^2

    std::uint64_t frequency(ItemId id) const {
        auto it = counts.find(id);
        return it == counts.end() ? 0 : it->second;
    }
};

inline FrequencyProfile exact_profile(const Stream& s) {
    validate_stream(s);
    FrequencyProfile p;
    for (ItemId id : s.items) {
        std::uint64_t& c = p.counts[id];
        p.f2 += 2 * c + 1;   // (c+1)^2 - c^2
        ++c;
        ++p.total;
    }
    return p;
}

struct TruthSets {
    std::unordered_set<ItemId> must;
    std::unordered_set<ItemId> forbidden;
};

namespace detail {
// Forbidden threshold phi - eps, nudged down one ulp if rounding collapsed it
// onto phi (keeps must and forbidden disjoint for any eps > 0).
inline double forbidden_fraction(const HHParams& p) {
    double t = p.phi - p.epsilon;
    if (t >= p.phi) t = std::nextafter(p.phi, 0.0);
    return t;
}
}  // namespace detail

// must = {i : f_i >= phi*m}, forbidden = {i : f_i <= (phi-eps)*m}.
inline TruthSets truth_l1(const FrequencyProfile& profile, const HHParams& params) {
    params.validate();
    TruthSets t;
    if (profile.total == 0) return t;
    double lo = detail::forbidden_fraction(params);
    for (const auto& [id, f] : profile.counts) {
        if (scaled_ge(f, params.phi, profile.total)) t.must.insert(id);
        if (scaled_le(f, lo, profile.total)) t.forbidden.insert(id);
    }
    return t;
}

// must = {i : f_i^2 >= phi*F2}, forbidden = {i : f_i^2 <= (phi-eps)*F2}.
inline TruthSets truth_l2(const FrequencyProfile& profile, const HHParams& params) {
    params.validate();
    TruthSets t;
    if (profile.f2 == 0) return t;
    double lo = detail::forbidden_fraction(params);
    for (const auto& [id, f] : profile.counts) {
        detail::uint128 sq = static_cast<detail::uint128>(f) * f;
        if (scaled_ge(sq, params.phi, profile.f2)) t.must.insert(id);
        if (scaled_le(sq, lo, profile.f2)) t.forbidden.insert(id);
    }
    return t;
}

}  // namespace hh
