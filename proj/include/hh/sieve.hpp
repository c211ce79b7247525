#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "hh/count_sketch.hpp"
#include "hh/f2_tracker.hpp"
#include "hh/hash.hpp"
#include "hh/numeric.hpp"
#include "hh/profile.hpp"

namespace hh {

struct SieveConfig {
    double threshold_c = 0.1;        // C in the stopping rule 2*C*sqrt(dF2 + 1)
    double pairs_per_loglog = 8.0;   // c_J: J = ceil(c_J * log2 log2 n)
    double membership_theta = 0.9;   // fraction of pairs an item must match
    double suffix_fraction = 0.5;    // rho: fraction of rounds used at report time
    F2Mode f2_mode = F2Mode::exact;
};

// Single-heavy-hitter sieve: an amplifier of J sign-counter pairs filters the
// stream down to items that consistently land in the larger counter; a
// sequence of bit-learning rounds with paired counters then records one hash
// bit of the survivor per round. Reporting takes the unique tracked item that
// passes the membership test and matches >= 2/3 of the resolved bits over the
// round suffix. Per-round hash/sign seeds are stored (no derandomization);
// space accounting reports that gap separately.
class Sieve {
public:
    static constexpr std::size_t kMinRounds = 8;
    static constexpr std::uint64_t kStoredRoundBits = 2 * 64 + 1;   // two seeds + bit

    struct BitRound {
        std::uint64_t hash_seed;
        std::uint64_t sign_seed;
        double start_f2;
        int resolved_bit;   // 0 or 1
    };

    Sieve(std::uint32_t universe_size, double phi, std::uint64_t seed, SieveConfig cfg = {})
        : n_(universe_size), phi_(phi), seed_(seed), cfg_(cfg),
          tracker_(cfg.f2_mode, derive_seed(seed, 0xF2)) {
        if (universe_size < 2) throw std::invalid_argument("Sieve: universe size must be >= 2");
        pairs_ = pair_count(universe_size, cfg.pairs_per_loglog);
        split_.reserve(pairs_);
        pair_sign_.reserve(pairs_);
        for (std::size_t j = 0; j < pairs_; ++j) {
            split_.emplace_back(derive_seed(seed, 2 * j), 2);
            pair_sign_.emplace_back(derive_seed(seed, 2 * j + 1));
        }
        amp_.assign(pairs_, {0, 0});
        need_matches_ = static_cast<std::size_t>(
            std::ceil(cfg.membership_theta * static_cast<double>(pairs_) - 1e-9));
        open_round();
    }

    static std::size_t pair_count(std::uint32_t n, double per_loglog = 8.0) {
        double loglog = std::log2(std::log2(static_cast<double>(n)));
        std::uint64_t j = snap_ceil(std::max(0.0, per_loglog * loglog));
        return static_cast<std::size_t>(std::max<std::uint64_t>(j, 1));
    }

    void update(ItemId item) {
        ++updates_seen_;
        seen_.insert(item);
        tracker_.update(item);

        std::size_t matches = 0;
        for (std::size_t j = 0; j < pairs_; ++j) {
            int side = static_cast<int>(split_[j](item));
            amp_[j][side] += pair_sign_[j](item);
            if (side == larger_counter_index(j)) ++matches;
        }
        if (matches >= need_matches_) {
            int side = static_cast<int>(round_hash_(item));
            round_counter_[side] += round_sign_(item);
        }

        double f2 = tracker_.estimate();
        double delta = std::max(0.0, f2 - round_start_f2_);
        double threshold = 2.0 * cfg_.threshold_c * std::sqrt(delta + 1.0);
        std::int64_t c0 = std::llabs(round_counter_[0]);
        std::int64_t c1 = std::llabs(round_counter_[1]);
        if (static_cast<double>(std::max(c0, c1)) > threshold) {
            rounds_.push_back({round_hash_seed_, round_sign_seed_, round_start_f2_,
                               c0 >= c1 ? 0 : 1});
            open_round();
        }
    }

    // Unique tracked item passing membership whose round-hash bits match at
    // least 2/3 of the resolved bits over the last ceil(rho * rounds) rounds.
    std::optional<ItemId> report() const {
        if (rounds_.size() < kMinRounds) return std::nullopt;
        auto suffix = static_cast<std::size_t>(
            std::ceil(cfg_.suffix_fraction * static_cast<double>(rounds_.size()) - 1e-9));
        if (suffix == 0) return std::nullopt;
        std::size_t first = rounds_.size() - suffix;
        std::vector<PairwiseHash> hashes;
        hashes.reserve(suffix);
        for (std::size_t r = first; r < rounds_.size(); ++r)
            hashes.emplace_back(rounds_[r].hash_seed, 2);

        std::optional<ItemId> winner;
        for (ItemId id : seen_) {
            if (!passes_membership(id)) continue;
            std::size_t matched = 0;
            for (std::size_t r = 0; r < suffix; ++r)
                if (static_cast<int>(hashes[r](id)) == rounds_[first + r].resolved_bit) ++matched;
            if (3 * matched >= 2 * suffix) {
                if (winner) return std::nullopt;   // not unique
                winner = id;
            }
        }
        return winner;
    }

    bool passes_membership(ItemId item) const {
        std::size_t matches = 0;
        for (std::size_t j = 0; j < pairs_; ++j)
            if (static_cast<int>(split_[j](item)) == larger_counter_index(j)) ++matches;
        return matches >= need_matches_;
    }

    // Index (0 or 1) of the larger-magnitude counter in pair j; ties go to 0.
    int larger_counter_index(std::size_t j) const {
        return std::llabs(amp_[j][1]) > std::llabs(amp_[j][0]) ? 1 : 0;
    }

    struct SpaceBits {
        std::uint64_t idealized;
        std::uint64_t actual;
        std::uint64_t derandomization_gap() const { return actual - idealized; }
    };

    SpaceBits space_bits() const {
        std::uint64_t ideal = idealized_bits_for(n_, updates_seen_, pairs_);
        return {ideal, ideal + rounds_.size() * kStoredRoundBits};
    }

    // Sweep arithmetic: counters at ceil(log2 m) bits, J pairs plus one active
    // round, one universe-sized word per seed.
    static std::uint64_t idealized_bits(std::uint32_t n, std::uint64_t m,
                                        double per_loglog = 8.0) {
        return idealized_bits_for(n, m, pair_count(n, per_loglog));
    }

    std::size_t pairs() const { return pairs_; }
    std::size_t membership_matches_needed() const { return need_matches_; }
    std::int64_t amplifier_counter(std::size_t j, int side) const { return amp_[j][side]; }
    std::size_t completed_rounds() const { return rounds_.size(); }
    const std::vector<BitRound>& rounds() const { return rounds_; }
    double f2_estimate() const { return tracker_.estimate(); }
    std::uint64_t updates_seen() const { return updates_seen_; }
    const std::unordered_set<ItemId>& seen() const { return seen_; }

private:
    static std::uint64_t idealized_bits_for(std::uint32_t n, std::uint64_t m, std::size_t pairs) {
        std::uint64_t counter_bits = ceil_log2(m < 2 ? 2 : m);
        std::uint64_t word_bits = ceil_log2(n < 2 ? 2 : n);
        std::uint64_t counters = 2 * pairs + 2;
        std::uint64_t words = 2 * pairs + 3;   // pair seeds + round seeds + tracker
        return counters * counter_bits + words * word_bits;
    }

    void open_round() {
        std::uint64_t tag = 0x1000 + 2 * round_serial_;
        round_hash_seed_ = derive_seed(seed_, tag);
        round_sign_seed_ = derive_seed(seed_, tag + 1);
        round_hash_ = PairwiseHash(round_hash_seed_, 2);
        round_sign_ = SeededSign(round_sign_seed_);
        round_counter_ = {0, 0};
        round_start_f2_ = tracker_.estimate();
        ++round_serial_;
    }

    std::uint32_t n_;
    double phi_;
    std::uint64_t seed_;
    SieveConfig cfg_;
    std::size_t pairs_ = 0;                      // J
    std::size_t need_matches_ = 0;
    std::vector<PairwiseHash> split_;            // h^j : item -> {0, 1}
    std::vector<SeededSign> pair_sign_;          // g_j
    std::vector<std::array<std::int64_t, 2>> amp_;
    std::vector<BitRound> rounds_;
    std::uint64_t round_serial_ = 0;
    std::uint64_t round_hash_seed_ = 0;
    std::uint64_t round_sign_seed_ = 0;
    PairwiseHash round_hash_{0, 2};
    SeededSign round_sign_{0};
    std::array<std::int64_t, 2> round_counter_{0, 0};
    double round_start_f2_ = 0.0;
    F2Tracker tracker_;
    std::unordered_set<ItemId> seen_;            // desk-scale candidate set
    std::uint64_t updates_seen_ = 0;
};

// Isolation wrapper: partitions the universe into ceil(4/phi^2) groups with a
// pairwise hash, runs one sieve per group on its substream, estimates each
// group's reported id with a companion CountSketch, and keeps ids with
// estimate^2 >= (phi - eps) * F2.
class PartitionedSieve {
public:
    PartitionedSieve(std::uint32_t universe_size, double phi, double epsilon, std::uint64_t seed,
                     SieveConfig cfg = {})
        : phi_(phi), epsilon_(epsilon),
          groups_(static_cast<std::size_t>(snap_ceil(4.0 / (phi * phi)))),
          partition_(derive_seed(seed, 0xA11), groups_),
          sketch_(companion_buckets(epsilon), 0, derive_seed(seed, 0xC5), universe_size),
          tracker_(cfg.f2_mode, derive_seed(seed, 0xF2F2)) {
        HHParams{epsilon, phi}.validate();
        sieves_.reserve(groups_);
        for (std::size_t g = 0; g < groups_; ++g)
            sieves_.emplace_back(universe_size, phi, derive_seed(seed, 0xB000 + g), cfg);
    }

    void update(ItemId item) {
        sieves_[partition_(item)].update(item);
        sketch_.insert(item);
        tracker_.update(item);
    }

    HHReport report() const {
        HHReport out;
        double f2_hat = tracker_.estimate();
        double threshold = (phi_ - epsilon_) * f2_hat;
        for (const auto& sieve : sieves_) {
            auto id = sieve.report();
            if (!id) continue;
            double est = sketch_.estimate(*id);
            if (est * est >= threshold) out.entries.push_back({*id, est});
        }
        sort_report(out);
        return out;
    }

    std::size_t groups() const { return groups_; }
    const Sieve& group_sieve(std::size_t g) const { return sieves_[g]; }
    std::size_t group_of(ItemId item) const { return partition_(item); }

    Sieve::SpaceBits space_bits() const {
        Sieve::SpaceBits total{0, 0};
        for (const auto& s : sieves_) {
            auto b = s.space_bits();
            total.idealized += b.idealized;
            total.actual += b.actual;
        }
        std::uint64_t cs = sketch_.space_bits(std::max<std::uint64_t>(sketch_.updates_seen(), 2));
        total.idealized += cs;
        total.actual += cs;
        return total;
    }

private:
    static std::uint32_t companion_buckets(double epsilon) {
        return static_cast<std::uint32_t>(snap_ceil(64.0 / (epsilon * epsilon)));
    }

    double phi_;
    double epsilon_;
    std::size_t groups_;
    PairwiseHash partition_;
    std::vector<Sieve> sieves_;
    CountSketch sketch_;
    F2Tracker tracker_;
};

inline HHReport sieve_heavy_hitters(std::uint32_t n, double phi, double epsilon,
                                    std::uint64_t seed, const Stream& stream,
                                    SieveConfig cfg = {}) {
    PartitionedSieve ps(n, phi, epsilon, seed, cfg);
    for (ItemId id : stream.items) ps.update(id);
    return ps.report();
}

}  // namespace hh
