#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <unordered_map>

#include "hh/hash.hpp"
#include "hh/stream.hpp"

namespace hh {

enum class F2Mode { exact, sketch };

// Running second-moment tracker. Exact mode keeps a side tally and the true
// running F2; sketch mode keeps a 6x16 grid of sign counters and estimates
// F2 as the median over the 6 groups of the mean squared counter per group.
class F2Tracker {
public:
    static constexpr std::size_t kGroups = 6;
    static constexpr std::size_t kPerGroup = 16;

    explicit F2Tracker(F2Mode mode, std::uint64_t seed = 0) : mode_(mode) {
        if (mode_ == F2Mode::sketch) {
            counters_.fill(0);
            for (std::size_t k = 0; k < kGroups * kPerGroup; ++k)
                sign_seeds_[k] = derive_seed(seed, 0xF200 + k);
        }
    }

    void update(ItemId item) {
        if (mode_ == F2Mode::exact) {
            std::uint64_t& c = tally_[item];
            f2_ += 2 * c + 1;
            ++c;
        } else {
            for (std::size_t k = 0; k < kGroups * kPerGroup; ++k)
                counters_[k] += SeededSign(sign_seeds_[k])(item);
        }
    }

    double estimate() const {
        if (mode_ == F2Mode::exact) return static_cast<double>(f2_);
        std::array<double, kGroups> means;
        for (std::size_t g = 0; g < kGroups; ++g) {
            double sum = 0.0;
            for (std::size_t k = 0; k < kPerGroup; ++k) {
                double c = static_cast<double>(counters_[g * kPerGroup + k]);
                sum += c * c;
            }
            means[g] = sum / kPerGroup;
        }
        std::sort(means.begin(), means.end());
        return means[(kGroups - 1) / 2];   // lower median
    }

    F2Mode mode() const { return mode_; }
    std::uint64_t exact_value() const { return f2_; }

private:
    F2Mode mode_;
    std::unordered_map<ItemId, std::uint64_t> tally_;   // exact mode only
    std::uint64_t f2_ = 0;
    std::array<std::int64_t, kGroups * kPerGroup> counters_{};
    std::array<std::uint64_t, kGroups * kPerGroup> sign_seeds_{};
};

}  // namespace hh
