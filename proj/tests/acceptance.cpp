// Acceptance suite: runs every guarantee the library commits to at desk scale
// and prints one pass/fail line per criterion. Exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "hh/count_sketch.hpp"
#include "hh/generators.hpp"
#include "hh/misra_gries.hpp"
#include "hh/profile.hpp"
#include "hh/sampled_l1.hpp"
#include "hh/sieve.hpp"

using namespace hh;

namespace {

struct Criterion {
    int id;
    std::string name;
    bool passed;
    std::string detail;
    double seconds;
};

std::vector<Criterion> g_results;

template <typename F>
void run_criterion(int id, const std::string& name, F&& body) {
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    g_results.push_back({id, name, ok, detail, secs});
    std::printf("[%s] %2d. %-28s %s (%.1f s)\n", ok ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str(), secs);
    std::fflush(stdout);
}

// ---------------------------------------------------------------------------
// 1. Misra-Gries deterministic guarantee: f_i >= estimate >= f_i - eps*m,
//    exactly, on 1000 random streams.
bool criterion_mg_guarantee(std::string& detail) {
    std::mt19937_64 eng(20260808);
    const double eps_grid[3] = {0.5, 0.2, 0.1};
    int clean = 0;
    const int streams = 1000;
    for (int t = 0; t < streams; ++t) {
        std::uint32_t n = 1 + eng() % 50;
        std::uint64_t m = eng() % 501;
        double eps = eps_grid[t % 3];
        Stream s;
        s.universe_size = n;
        for (std::uint64_t i = 0; i < m; ++i)
            s.items.push_back(static_cast<ItemId>(1 + eng() % n));
        MisraGries mg(eps);
        for (ItemId id : s.items) mg.update(id);
        auto p = exact_profile(s);
        bool ok = true;
        for (ItemId id = 1; id <= n; ++id) {
            std::uint64_t f = p.frequency(id);
            std::uint64_t est = mg.estimate(id);
            if (est > f || !scaled_le(f - est, eps, m)) ok = false;
        }
        if (ok) ++clean;
    }
    detail = std::to_string(clean) + "/" + std::to_string(streams) + " streams exact";
    return clean == streams;
}

// Shared workload for criteria 2 and 3.
const Stream& big_zipf() {
    static Stream s = gen_zipf(100000, 1000000, 1.1, 42);
    return s;
}

// 2. Sampling lemma: |hf_i/r - f_i/m| <= eps/2 for all i simultaneously, in
//    >= 95 of 100 seeds.
bool criterion_sampling_lemma(std::string& detail) {
    const double eps = 0.05;
    const Stream& s = big_zipf();
    auto p = exact_profile(s);
    const double m = static_cast<double>(s.length());
    int good = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        SampledL1 state(eps, 0.2, s.length(), seed);
        const double r = static_cast<double>(state.sample_budget());
        std::unordered_map<ItemId, std::uint64_t> sampled;
        std::uint64_t pos = 0;
        for (ItemId id : s.items)
            if (state.samples_position(++pos)) sampled[id]++;
        bool ok = true;
        for (const auto& [id, f] : p.counts) {
            auto it = sampled.find(id);
            double hf = it == sampled.end() ? 0.0 : static_cast<double>(it->second);
            if (std::fabs(hf / r - static_cast<double>(f) / m) > eps / 2) {
                ok = false;
                break;
            }
        }
        if (ok) ++good;
    }
    detail = std::to_string(good) + "/100 seeds within eps/2";
    return good >= 95;
}

// 3. Sampled l1 end-to-end: full must-recall, zero forbidden, |est - f| <=
//    eps*m for everything reported, in >= 95 of 100 seeds.
bool criterion_l1_end_to_end(std::string& detail) {
    const HHParams params{0.05, 0.2};
    const Stream& s = big_zipf();
    auto p = exact_profile(s);
    auto truth = truth_l1(p, params);
    int good = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        SampledL1 state(params.epsilon, params.phi, s.length(), seed);
        for (ItemId id : s.items) state.update(id);
        auto rep = state.report(params.phi);
        bool ok = true;
        for (ItemId id : truth.must)
            if (!rep.contains(id)) ok = false;
        for (const auto& e : rep.entries) {
            if (truth.forbidden.count(e.item)) ok = false;
            double err = std::fabs(e.estimate - static_cast<double>(p.frequency(e.item)));
            if (err > params.epsilon * static_cast<double>(s.length())) ok = false;
        }
        if (ok) ++good;
    }
    detail = std::to_string(good) + "/100 seeds clean";
    return good >= 95;
}

// Spike + zipf mixture shared by criteria 4 and 5.
Stream mixture_stream(ItemId star, std::uint64_t f_star) {
    Stream s = gen_zipf(1 << 12, 30000, 1.1, 7);
    s.items.insert(s.items.end(), f_star, star);
    return s;
}

// 4. CountSketch single-row bound: |estimate - f| <= 3 sqrt(F2/B) for a fixed
//    tracked item in >= 90% of 1000 seeds.
bool criterion_cs_single_row(std::string& detail) {
    const ItemId star = 4000;
    auto s = mixture_stream(star, 2000);
    auto p = exact_profile(s);
    const std::uint32_t B = 256;
    const double bound = 3.0 * std::sqrt(static_cast<double>(p.f2) / B);
    const double truth = static_cast<double>(p.frequency(star));
    int good = 0;
    const int trials = 1000;
    for (int seed = 1; seed <= trials; ++seed) {
        CountSketch cs(B, 1, seed);
        for (ItemId id : s.items) cs.insert(id);
        if (std::fabs(cs.estimate(star) - truth) <= bound) ++good;
    }
    detail = std::to_string(good) + "/1000 seeds within 3 sqrt(F2/B)";
    return good >= 900;
}

// 5. CountSketch median bound with R = ceil(log2 n) + 1 rows: max error over
//    every item in [n] within 3 sqrt(F2/B) in >= 95 of 100 seeds.
bool criterion_cs_median(std::string& detail) {
    const std::uint32_t n = 1 << 12;
    auto s = mixture_stream(4000, 2000);
    auto p = exact_profile(s);
    const std::uint32_t B = 256;
    const double bound = 3.0 * std::sqrt(static_cast<double>(p.f2) / B);
    int good = 0;
    for (int seed = 1; seed <= 100; ++seed) {
        CountSketch cs(B, 0, seed, n);
        for (ItemId id : s.items) cs.insert(id);
        double worst = 0.0;
        for (ItemId i = 1; i <= n; ++i)
            worst = std::max(worst,
                             std::fabs(cs.estimate(i) - static_cast<double>(p.frequency(i))));
        if (worst <= bound) ++good;
    }
    detail = std::to_string(good) + "/100 seeds, R=13, all items bounded";
    return good >= 95;
}

// Spike workload shared by criteria 6 and 7: f*^2 ~ 0.946 F2 >= 0.25 F2.
struct SieveWorkload {
    static constexpr std::uint32_t n = 1 << 16;
    static constexpr std::uint64_t noise = 40000;
    static constexpr std::uint64_t f_star = 840;   // 4.2 * sqrt(noise)
    static constexpr ItemId star = 31337;

    static Stream stream(std::uint64_t trial) {
        return gen_spike(n, noise + f_star, star, f_star, SpikeOrder::interleaved,
                         derive_seed(trial, 0x51));
    }
};

// 6. Sieve recovery on spike streams with f*^2 >= 0.25 F2: the star is
//    reported in >= 90/100 seeds with the exact F2 tracker and >= 80/100 with
//    the sketch tracker.
bool criterion_sieve_recovery(std::string& detail) {
    int exact_hits = 0, sketch_hits = 0;
    for (std::uint64_t t = 1; t <= 100; ++t) {
        auto s = SieveWorkload::stream(t);
        {
            SieveConfig cfg;
            cfg.f2_mode = F2Mode::exact;
            Sieve sieve(SieveWorkload::n, 0.25, derive_seed(t, 0x71), cfg);
            for (ItemId id : s.items) sieve.update(id);
            auto rep = sieve.report();
            if (rep && *rep == SieveWorkload::star) ++exact_hits;
        }
        {
            SieveConfig cfg;
            cfg.f2_mode = F2Mode::sketch;
            Sieve sieve(SieveWorkload::n, 0.25, derive_seed(t, 0x72), cfg);
            for (ItemId id : s.items) sieve.update(id);
            auto rep = sieve.report();
            if (rep && *rep == SieveWorkload::star) ++sketch_hits;
        }
    }
    detail = "exact " + std::to_string(exact_hits) + "/100 (need 90), sketch " +
             std::to_string(sketch_hits) + "/100 (need 80)";
    return exact_hits >= 90 && sketch_hits >= 80;
}

// 7. Amplifier fixing: once the star has passed 4 sqrt(noise F2) occurrences,
//    the larger-counter identity of every pair stays constant, >= 90/100.
bool criterion_amplifier_fixing(std::string& detail) {
    int stable_trials = 0;
    for (std::uint64_t t = 1; t <= 100; ++t) {
        auto s = SieveWorkload::stream(t);
        auto p = exact_profile(s);
        double noise_f2 = static_cast<double>(p.f2) -
                          std::pow(static_cast<double>(p.frequency(SieveWorkload::star)), 2);
        std::uint64_t t0_count =
            static_cast<std::uint64_t>(std::ceil(4.0 * std::sqrt(noise_f2)));
        SieveConfig cfg;
        Sieve sieve(SieveWorkload::n, 0.25, derive_seed(t, 0x73), cfg);
        std::uint64_t star_seen = 0;
        bool recorded = false, stable = true;
        std::vector<int> frozen;
        for (ItemId id : s.items) {
            sieve.update(id);
            if (id == SieveWorkload::star) ++star_seen;
            if (!recorded && star_seen >= t0_count) {
                recorded = true;
                for (std::size_t j = 0; j < sieve.pairs(); ++j)
                    frozen.push_back(sieve.larger_counter_index(j));
            } else if (recorded && stable) {
                for (std::size_t j = 0; j < sieve.pairs(); ++j)
                    if (sieve.larger_counter_index(j) != frozen[j]) {
                        stable = false;
                        break;
                    }
            }
        }
        if (recorded && stable) ++stable_trials;
    }
    detail = std::to_string(stable_trials) + "/100 trials stable after fixing";
    return stable_trials >= 90;
}

// 8. Noise sup bound: on heavy-free streams every amplifier counter stays
//    within 6 sqrt(F2(m)) at all times, >= 90/100.
bool criterion_noise_sup(std::string& detail) {
    const std::uint32_t n = 1 << 16;
    const std::uint64_t m = 50000;   // distinct unit items, F2 = m
    const double bound = 6.0 * std::sqrt(static_cast<double>(m));
    int good = 0;
    for (std::uint64_t t = 1; t <= 100; ++t) {
        auto s = gen_spike(n, m, 1, 1, SpikeOrder::interleaved, derive_seed(t, 0x81));
        Sieve sieve(n, 0.25, derive_seed(t, 0x82));
        bool ok = true;
        for (ItemId id : s.items) {
            sieve.update(id);
            for (std::size_t j = 0; j < sieve.pairs(); ++j) {
                if (std::llabs(sieve.amplifier_counter(j, 0)) > bound ||
                    std::llabs(sieve.amplifier_counter(j, 1)) > bound) {
                    ok = false;
                    break;
                }
            }
            if (!ok) break;
        }
        if (ok) ++good;
    }
    detail = std::to_string(good) + "/100 trials bounded by 6 sqrt(F2)";
    return good >= 90;
}

// Least squares through the origin; returns R^2 against the centered total.
double origin_fit_r2(const std::vector<double>& x, const std::vector<double>& y) {
    double sxy = 0, sxx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += x[i] * y[i];
        sxx += x[i] * x[i];
        sy += y[i];
    }
    double c = sxy / sxx;
    double mean = sy / static_cast<double>(y.size());
    double ss_res = 0, ss_tot = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        ss_res += (y[i] - c * x[i]) * (y[i] - c * x[i]);
        ss_tot += (y[i] - mean) * (y[i] - mean);
    }
    return 1.0 - ss_res / ss_tot;
}

// 9. Space scaling: sieve idealized bits fit c log n log log n, CountSketch
//    bits fit c log^2 n (both R^2 >= 0.99), and l1hh-to-mg ratio at
//    eps = 1/log2 n decreases in n.
bool criterion_space_scaling(std::string& detail) {
    std::vector<double> x_sieve, y_sieve, x_cs, y_cs;
    double prev_ratio = 1e300;
    bool ratio_decreasing = true;
    for (unsigned lg = 10; lg <= 20; lg += 2) {
        std::uint64_t n = 1ull << lg;
        std::uint64_t m = n;
        x_sieve.push_back(lg * std::log2(static_cast<double>(lg)));
        y_sieve.push_back(static_cast<double>(
            Sieve::idealized_bits(static_cast<std::uint32_t>(n), m)));
        std::uint32_t rows = static_cast<std::uint32_t>(ceil_log2(n)) + 1;
        x_cs.push_back(static_cast<double>(lg) * lg);
        y_cs.push_back(static_cast<double>(CountSketch::space_bits(256, rows, m)));
        double eps = 1.0 / static_cast<double>(lg);
        double ratio = static_cast<double>(SampledL1::space_bits(eps, 0.1, n)) /
                       static_cast<double>(MisraGries::space_bits(eps, n, m));
        if (ratio >= prev_ratio) ratio_decreasing = false;
        prev_ratio = ratio;
    }
    double r2_sieve = origin_fit_r2(x_sieve, y_sieve);
    double r2_cs = origin_fit_r2(x_cs, y_cs);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "sieve R2=%.4f, countsketch R2=%.4f, l1/mg ratio %s",
                  r2_sieve, r2_cs, ratio_decreasing ? "decreasing" : "NOT decreasing");
    detail = buf;
    return r2_sieve >= 0.99 && r2_cs >= 0.99 && ratio_decreasing;
}

// 10. CountSketch deletion round-trip and linearity, bit-exact on 100 random
//     insert/delete multisets.
bool criterion_cs_deletion_linearity(std::string& detail) {
    std::mt19937_64 eng(424242);
    int exact = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        std::uint32_t n = 10 + eng() % 1000;
        std::uint64_t m = 1 + eng() % 2000;
        std::vector<ItemId> items;
        for (std::uint64_t i = 0; i < m; ++i)
            items.push_back(static_cast<ItemId>(1 + eng() % n));
        std::uint64_t seed = eng();
        std::uint32_t B = 1 + eng() % 64;
        std::uint32_t R = 1 + eng() % 8;

        bool ok = true;
        // deletion round-trip: insert all, delete a permutation of the same multiset
        CountSketch cs(B, R, seed);
        for (ItemId id : items) cs.insert(id);
        auto shuffled = items;
        for (std::size_t i = shuffled.size(); i > 1; --i)
            std::swap(shuffled[i - 1], shuffled[eng() % i]);
        for (ItemId id : shuffled) cs.erase(id);
        for (auto c : cs.counters())
            if (c != 0) ok = false;

        // linearity: sketch of halves merged equals sketch of the whole
        CountSketch whole(B, R, seed), left(B, R, seed), right(B, R, seed);
        std::size_t half = items.size() / 2;
        for (std::size_t i = 0; i < items.size(); ++i) {
            whole.insert(items[i]);
            (i < half ? left : right).insert(items[i]);
        }
        left.merge(right);
        if (left.counters() != whole.counters()) ok = false;
        if (ok) ++exact;
    }
    detail = std::to_string(exact) + "/100 multisets bit-exact";
    return exact == trials;
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");
    run_criterion(1, "mg-deterministic-guarantee", criterion_mg_guarantee);
    run_criterion(2, "sampling-lemma", criterion_sampling_lemma);
    run_criterion(3, "l1hh-end-to-end", criterion_l1_end_to_end);
    run_criterion(4, "countsketch-single-row", criterion_cs_single_row);
    run_criterion(5, "countsketch-median", criterion_cs_median);
    run_criterion(6, "sieve-recovery", criterion_sieve_recovery);
    run_criterion(7, "amplifier-fixing", criterion_amplifier_fixing);
    run_criterion(8, "noise-sup-bound", criterion_noise_sup);
    run_criterion(9, "space-scaling", criterion_space_scaling);
    run_criterion(10, "cs-deletion-linearity", criterion_cs_deletion_linearity);

    int failed = 0;
    for (const auto& c : g_results)
        if (!c.passed) ++failed;
    std::printf("%zu criteria, %d failed\n", g_results.size(), failed);
    return failed == 0 ? 0 : 1;
}
