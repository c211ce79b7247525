#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hh/hash.hpp"
#include "hh/misra_gries.hpp"
#include "hh/numeric.hpp"
#include "hh/profile.hpp"

namespace hh {

// l1 heavy hitters in o(eps^-1 log n) bits: pairwise-sample the stream down to
// r = ceil(400/eps^2) updates, run Misra-Gries over hashed item identities on
// the sampled substream, and keep true identities only for the top ceil(2/phi)
// counts. The hashed universe is 50*r^2, large enough that the sampled items
// are perfectly hashed in >= 99% of seeds.
class SampledL1 {
public:
    static constexpr double kSampleConstant = 400.0;       // r = C_s / eps^2
    static constexpr std::uint64_t kUniversePerR2 = 50;    // U_h = 50 * r^2

    SampledL1(double epsilon, double phi, std::uint64_t m_declared, std::uint64_t seed)
        : SampledL1(epsilon, phi, m_declared, seed,
                    snap_ceil(kSampleConstant / (epsilon * epsilon))) {}

    // Test hook: explicit sample budget (0 = sample nothing, >= m = sample all).
    static SampledL1 with_sample_budget(double epsilon, double phi, std::uint64_t m_declared,
                                        std::uint64_t seed, std::uint64_t budget) {
        return SampledL1(epsilon, phi, m_declared, seed, budget);
    }

    void update(ItemId item) {
        ++position_;
        if (!samples_position(position_)) return;
        ++sampled_count_;
        std::uint64_t hid = id_hash_(item);
        inner_.update(hid);
        prune_top();
        std::uint64_t c = inner_.estimate(hid);
        if (c == 0) return;
        for (const auto& e : top_)
            if (e.item == item) return;   // count lives in inner_
        if (top_.size() < top_capacity_) {
            top_.push_back({item, hid});
            return;
        }
        // compare against the weakest entry: lowest count, ties to larger id
        std::size_t weakest = 0;
        std::uint64_t wc = inner_.estimate(top_[0].hashed);
        for (std::size_t i = 1; i < top_.size(); ++i) {
            std::uint64_t ci = inner_.estimate(top_[i].hashed);
            if (ci < wc || (ci == wc && top_[i].item > top_[weakest].item)) {
                weakest = i;
                wc = ci;
            }
        }
        if (c > wc || (c == wc && item < top_[weakest].item)) top_[weakest] = {item, hid};
    }

    // Top-list items whose sampled count reaches (phi - eps/2) * sampled_count,
    // rescaled to stream units.
    HHReport report(double phi) const {
        HHReport out;
        if (sampled_count_ == 0) return out;
        double threshold = phi - epsilon_ / 2.0;
        double scale = static_cast<double>(m_declared_) / static_cast<double>(sampled_count_);
        for (const auto& e : top_) {
            std::uint64_t c = inner_.estimate(e.hashed);
            if (c == 0) continue;
            if (threshold <= 0.0 || scaled_ge(c, threshold, sampled_count_))
                out.entries.push_back({e.item, static_cast<double>(c) * scale});
        }
        sort_report(out);
        return out;
    }

    // Information-theoretic size: identities + inner table + the two seeds.
    std::uint64_t space_bits(std::uint64_t universe_size) const {
        return top_capacity_ * ceil_log2(universe_size) +
               inner_.capacity() * (ceil_log2(hashed_universe_) + ceil_log2(sample_budget_ + 1)) +
               2 * 64;
    }

    // Same accounting from parameters alone (no state, no validation).
    static std::uint64_t space_bits(double epsilon, double phi, std::uint64_t universe_size) {
        std::uint64_t r = snap_ceil(kSampleConstant / (epsilon * epsilon));
        std::uint64_t top = snap_ceil(2.0 / phi);
        std::uint64_t inner_cap = snap_floor(2.0 / epsilon) + 1;
        return top * ceil_log2(universe_size) +
               inner_cap * (ceil_log2(universe_for_budget(r)) + ceil_log2(r + 1)) + 2 * 64;
    }

    bool samples_position(std::uint64_t pos) const {
        return sample_budget_ >= m_declared_ || sampler_(pos) < sample_budget_;
    }

    std::uint64_t hashed_id(ItemId item) const { return id_hash_(item); }
    std::uint64_t sample_budget() const { return sample_budget_; }
    std::uint64_t hashed_universe() const { return hashed_universe_; }
    std::uint64_t position() const { return position_; }
    std::uint64_t sampled_count() const { return sampled_count_; }
    std::uint64_t top_capacity() const { return top_capacity_; }
    const MisraGries& inner() const { return inner_; }

    struct TopEntry {
        ItemId item;
        std::uint64_t hashed;
    };
    const std::vector<TopEntry>& top() const { return top_; }

private:
    SampledL1(double epsilon, double phi, std::uint64_t m_declared, std::uint64_t seed,
              std::uint64_t budget)
        : epsilon_(epsilon),
          phi_(phi),
          m_declared_(m_declared),
          sample_budget_(budget),
          hashed_universe_(universe_for_budget(budget)),
          top_capacity_(snap_ceil(2.0 / phi)),
          sampler_(derive_seed(seed, 1), m_declared),
          id_hash_(derive_seed(seed, 2), universe_for_budget(budget)),
          inner_(epsilon / 2.0) {
        HHParams{epsilon, phi}.validate();
        if (m_declared == 0) throw std::invalid_argument("SampledL1: m_declared must be >= 1");
    }

    static std::uint64_t universe_for_budget(std::uint64_t r) {
        if (r == 0) return 2;
        detail::uint128 u = static_cast<detail::uint128>(kUniversePerR2) * r * r;
        detail::uint128 cap = PairwiseHash::kPrime - 1;
        return static_cast<std::uint64_t>(u < cap ? u : cap);
    }

    void prune_top() {
        std::erase_if(top_, [this](const TopEntry& e) { return inner_.estimate(e.hashed) == 0; });
    }

    double epsilon_;
    double phi_;
    std::uint64_t m_declared_;
    std::uint64_t sample_budget_;      // r
    std::uint64_t hashed_universe_;    // U_h
    std::uint64_t top_capacity_;       // L
    PairwiseHash sampler_;             // over stream positions
    PairwiseHash id_hash_;
    MisraGries inner_;                 // keyed by hashed ids, accuracy eps/2
    std::vector<TopEntry> top_;
    std::uint64_t position_ = 0;
    std::uint64_t sampled_count_ = 0;
};

}  // namespace hh
