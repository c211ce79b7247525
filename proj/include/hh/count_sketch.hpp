#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "hh/hash.hpp"
#include "hh/numeric.hpp"
#include "hh/profile.hpp"

namespace hh {

// CountSketch: R rows of B signed-counter buckets with per-row pairwise hash
// and sign functions. Point estimates are the lower median across rows of the
// sign-corrected bucket counters. Supports deletions; the sketch is linear.
class CountSketch {
public:
    // rows == 0 selects ceil(log2 universe) + 1 rows (universe must then be given).
    CountSketch(std::uint32_t buckets, std::uint32_t rows, std::uint64_t seed,
                std::uint32_t universe = 0)
        : buckets_(buckets), seed_(seed) {
        if (buckets == 0) throw std::invalid_argument("CountSketch: buckets must be >= 1");
        if (rows == 0) {
            if (universe == 0)
                throw std::invalid_argument("CountSketch: auto row count needs the universe size");
            rows = static_cast<std::uint32_t>(ceil_log2(universe)) + 1;
        }
        rows_ = rows;
        counters_.assign(static_cast<std::size_t>(rows_) * buckets_, 0);
        row_hash_.reserve(rows_);
        row_sign_.reserve(rows_);
        for (std::uint32_t r = 0; r < rows_; ++r) {
            row_hash_.emplace_back(derive_seed(seed, 2 * r), buckets_);
            row_sign_.emplace_back(derive_seed(seed, 2 * r + 1));
        }
        candidate_capacity_ = static_cast<std::size_t>(4) * buckets_;
    }

    // Test mode: every sign fixed to +1.
    static CountSketch with_unit_signs(std::uint32_t buckets, std::uint32_t rows,
                                       std::uint64_t seed = 0) {
        CountSketch cs(buckets, rows, seed);
        cs.unit_signs_ = true;
        return cs;
    }

    void update(ItemId item, int delta) {
        if (delta != 1 && delta != -1)
            throw std::invalid_argument("CountSketch: delta must be +1 or -1");
        ++updates_seen_;
        for (std::uint32_t r = 0; r < rows_; ++r)
            cell(r, row_hash_[r](item)) += delta * sign(r, item);
        if (delta == 1) refresh_candidate(item);
    }

    void insert(ItemId item) { update(item, 1); }
    void erase(ItemId item) { update(item, -1); }

    double estimate(ItemId item) const {
        std::array<std::int64_t, 64> buf;
        std::vector<std::int64_t> spill;
        std::int64_t* vals = buf.data();
        if (rows_ > buf.size()) {
            spill.resize(rows_);
            vals = spill.data();
        }
        for (std::uint32_t r = 0; r < rows_; ++r)
            vals[r] = sign(r, item) * cell(r, row_hash_[r](item));
        std::sort(vals, vals + rows_);
        return static_cast<double>(vals[(rows_ - 1) / 2]);   // lower median
    }

    // Tracked candidates whose squared estimate reaches (phi - eps/2) * f2_hat.
    // f2_hat is supplied by the caller (exact oracle F2 or an estimate).
    HHReport l2_report(double phi, double epsilon, double f2_hat) const {
        if (!(f2_hat > 0.0)) throw std::invalid_argument("CountSketch: f2_hat must be > 0");
        double threshold = (phi - epsilon / 2.0) * f2_hat;
        HHReport out;
        for (const auto& [item, stale] : candidate_estimate_) {
            double est = estimate(item);
            if (est * est >= threshold) out.entries.push_back({item, est});
        }
        sort_report(out);
        return out;
    }

    // Counter-wise addition; requires identical geometry and seed.
    void merge(const CountSketch& other) {
        if (other.buckets_ != buckets_ || other.rows_ != rows_ || other.seed_ != seed_ ||
            other.unit_signs_ != unit_signs_)
            throw std::invalid_argument("CountSketch: merge requires matching (B, R, seed)");
        for (std::size_t i = 0; i < counters_.size(); ++i) counters_[i] += other.counters_[i];
        updates_seen_ += other.updates_seen_;
        for (const auto& [item, est] : other.candidate_estimate_) refresh_candidate(item);
    }

    std::uint32_t rows() const { return rows_; }
    std::uint32_t buckets() const { return buckets_; }
    std::uint64_t updates_seen() const { return updates_seen_; }
    const std::vector<std::int64_t>& counters() const { return counters_; }
    std::int64_t counter(std::uint32_t row, std::uint32_t bucket) const {
        return cell(row, bucket);
    }
    int sign(std::uint32_t row, ItemId item) const {
        return unit_signs_ ? 1 : row_sign_[row](item);
    }
    std::uint32_t bucket_of(std::uint32_t row, ItemId item) const { return row_hash_[row](item); }

    std::uint64_t space_bits(std::uint64_t m) const { return space_bits(buckets_, rows_, m); }

    // Counters at ceil(log2 m) bits plus two 64-bit seeds per row.
    static std::uint64_t space_bits(std::uint32_t buckets, std::uint32_t rows, std::uint64_t m) {
        return static_cast<std::uint64_t>(rows) * buckets * ceil_log2(m < 2 ? 2 : m) +
               static_cast<std::uint64_t>(rows) * 2 * 64;
    }

private:
    std::int64_t& cell(std::uint32_t row, std::uint64_t bucket) {
        return counters_[static_cast<std::size_t>(row) * buckets_ + bucket];
    }
    std::int64_t cell(std::uint32_t row, std::uint64_t bucket) const {
        return counters_[static_cast<std::size_t>(row) * buckets_ + bucket];
    }

    // Ranked ascending by estimate, ties broken toward evicting the larger id.
    struct CandidateRank {
        bool operator()(const std::pair<double, ItemId>& a,
                        const std::pair<double, ItemId>& b) const {
            if (a.first != b.first) return a.first < b.first;
            return a.second > b.second;
        }
    };

    void refresh_candidate(ItemId item) {
        double est = estimate(item);
        auto it = candidate_estimate_.find(item);
        if (it != candidate_estimate_.end()) {
            candidate_order_.erase({it->second, item});
            it->second = est;
        } else {
            candidate_estimate_.emplace(item, est);
        }
        candidate_order_.insert({est, item});
        if (candidate_estimate_.size() > candidate_capacity_) {
            auto weakest = candidate_order_.begin();
            candidate_estimate_.erase(weakest->second);
            candidate_order_.erase(weakest);
        }
    }

    std::uint32_t buckets_;
    std::uint32_t rows_ = 0;
    std::uint64_t seed_;
    bool unit_signs_ = false;
    std::vector<std::int64_t> counters_;   // row-major R x B
    std::vector<PairwiseHash> row_hash_;
    std::vector<SignHash> row_sign_;
    // running top-K candidates, capacity 4B, indexed both ways
    std::unordered_map<ItemId, double> candidate_estimate_;
    std::set<std::pair<double, ItemId>, CandidateRank> candidate_order_;
    std::size_t candidate_capacity_;
    std::uint64_t updates_seen_ = 0;
};

}  // namespace hh
