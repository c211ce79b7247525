#pragma once

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "hh/numeric.hpp"
#include "hh/profile.hpp"

namespace hh {

// Deterministic frequent-items summary: a table of floor(1/eps)+1 counters
// with the classic increment / occupy / decrement-all update rule. Stored
// counts undercount true frequencies by at most eps * (updates processed).
class MisraGries {
public:
    explicit MisraGries(double epsilon) : epsilon_(epsilon) {
        if (!(epsilon > 0.0 && epsilon <= 1.0))
            throw std::invalid_argument("MisraGries: epsilon must be in (0, 1]");
        capacity_ = snap_floor(1.0 / epsilon) + 1;
        table_.reserve(capacity_);
    }

    void update(std::uint64_t item) {
        ++processed_;
        auto it = table_.find(item);
        if (it != table_.end()) {
            ++it->second;
            return;
        }
        if (table_.size() < capacity_) {
            table_.emplace(item, 1);
            return;
        }
        // decrement every counter; the incoming item is not inserted
        for (auto cur = table_.begin(); cur != table_.end();) {
            if (--cur->second == 0)
                cur = table_.erase(cur);
            else
                ++cur;
        }
    }

    std::uint64_t estimate(std::uint64_t item) const {
        auto it = table_.find(item);
        return it == table_.end() ? 0 : it->second;
    }

    // Entries with stored count strictly above (phi - eps) * processed.
    HHReport report(double phi) const {
        double threshold = phi - epsilon_;
        HHReport out;
        for (const auto& [item, count] : table_) {
            if (threshold <= 0.0 || scaled_gt(count, threshold, processed_))
                out.entries.push_back({static_cast<ItemId>(item), static_cast<double>(count)});
        }
        sort_report(out);
        return out;
    }

    double epsilon() const { return epsilon_; }
    std::uint64_t capacity() const { return capacity_; }
    std::size_t size() const { return table_.size(); }
    std::uint64_t processed() const { return processed_; }

    std::vector<std::pair<std::uint64_t, std::uint64_t>> entries() const {
        std::vector<std::pair<std::uint64_t, std::uint64_t>> v(table_.begin(), table_.end());
        std::sort(v.begin(), v.end());
        return v;
    }

    // Table cost in bits: capacity * (id bits + count bits).
    static std::uint64_t space_bits(double epsilon, std::uint64_t n, std::uint64_t m) {
        std::uint64_t cap = snap_floor(1.0 / epsilon) + 1;
        return cap * (ceil_log2(n) + ceil_log2(m + 1));
    }

private:
    double epsilon_;
    std::uint64_t capacity_;
    std::uint64_t processed_ = 0;
    std::unordered_map<std::uint64_t, std::uint64_t> table_;
};

}  // namespace hh
