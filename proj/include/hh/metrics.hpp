#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "hh/count_sketch.hpp"
#include "hh/generators.hpp"
#include "hh/misra_gries.hpp"
#include "hh/profile.hpp"
#include "hh/sampled_l1.hpp"
#include "hh/sieve.hpp"
#include "hh/stream.hpp"

namespace hh {

enum class Algo { mg, l1, cs, sieve };

inline Algo parse_algo(const std::string& s) {
    if (s == "mg") return Algo::mg;
    if (s == "l1") return Algo::l1;
    if (s == "cs") return Algo::cs;
    if (s == "sieve") return Algo::sieve;
    throw std::runtime_error("unknown algo '" + s + "' (expected mg|l1|cs|sieve)");
}

struct WorkloadSpec {
    enum class Kind { zipf, spike, file };
    Kind kind = Kind::zipf;
    std::uint32_t n = 1024;
    std::uint64_t m = 10000;
    double zipf_s = 1.1;
    ItemId star = 1;
    std::uint64_t f_star = 0;
    SpikeOrder order = SpikeOrder::interleaved;
    std::uint64_t seed = 1;
    std::string path;   // file kind; .hhs binary, anything else text

    Stream materialize() const {
        switch (kind) {
            case Kind::zipf: return gen_zipf(n, m, zipf_s, seed);
            case Kind::spike: return gen_spike(n, m, star, f_star, order, seed);
            case Kind::file:
                if (path.size() >= 4 && path.substr(path.size() - 4) == ".hhs")
                    return read_stream_binary(path);
                return read_stream_text(path, n);
        }
        throw std::runtime_error("unreachable workload kind");
    }
};

struct ExperimentConfig {
    Algo algo = Algo::mg;
    HHParams params;
    WorkloadSpec workload;
    std::vector<std::uint64_t> seeds;
    std::uint32_t cs_buckets = 256;
    std::uint32_t cs_rows = 0;          // 0 = ceil(log2 n) + 1
    F2Mode f2_mode = F2Mode::exact;

    void validate() const {
        params.validate();
        if (seeds.empty()) throw std::runtime_error("experiment needs at least one seed");
    }
};

struct MetricsRow {
    std::uint64_t seed = 0;
    double recall_must = 1.0;         // fraction of the truth must-set reported
    std::uint64_t false_forbidden = 0;
    double max_abs_err = 0.0;         // max |estimate - f_i| over reported items
    std::uint64_t space_bits_ideal = 0;
    std::uint64_t space_bits_actual = 0;
    double wall_time_ms = 0.0;

    bool operator==(const MetricsRow&) const = default;
};

namespace detail {

inline MetricsRow score_report(const HHReport& report, const TruthSets& truth,
                               const FrequencyProfile& profile, std::uint64_t seed) {
    MetricsRow row;
    row.seed = seed;
    if (!truth.must.empty()) {
        std::size_t hit = 0;
        for (ItemId id : truth.must)
            if (report.contains(id)) ++hit;
        row.recall_must = static_cast<double>(hit) / static_cast<double>(truth.must.size());
    }
    for (const auto& e : report.entries) {
        if (truth.forbidden.count(e.item)) ++row.false_forbidden;
        double err = std::fabs(e.estimate - static_cast<double>(profile.frequency(e.item)));
        row.max_abs_err = std::max(row.max_abs_err, err);
    }
    return row;
}

inline MetricsRow run_single(const ExperimentConfig& cfg, const Stream& stream,
                             const FrequencyProfile& profile, const TruthSets& truth,
                             std::uint64_t seed) {
    auto t0 = std::chrono::steady_clock::now();
    HHReport report;
    std::uint64_t ideal = 0;
    std::uint64_t actual = 0;
    std::uint64_t m = std::max<std::uint64_t>(stream.length(), 1);
    switch (cfg.algo) {
        case Algo::mg: {
            MisraGries mg(cfg.params.epsilon);
            for (ItemId id : stream.items) mg.update(id);
            report = mg.report(cfg.params.phi);
            ideal = actual = MisraGries::space_bits(cfg.params.epsilon, stream.universe_size, m);
            break;
        }
        case Algo::l1: {
            SampledL1 l1(cfg.params.epsilon, cfg.params.phi, m, seed);
            for (ItemId id : stream.items) l1.update(id);
            report = l1.report(cfg.params.phi);
            ideal = actual = l1.space_bits(stream.universe_size);
            break;
        }
        case Algo::cs: {
            CountSketch cs(cfg.cs_buckets, cfg.cs_rows, seed, stream.universe_size);
            for (ItemId id : stream.items) cs.insert(id);
            report = cs.l2_report(cfg.params.phi, cfg.params.epsilon,
                                  static_cast<double>(profile.f2));
            ideal = actual = cs.space_bits(m);
            break;
        }
        case Algo::sieve: {
            SieveConfig scfg;
            scfg.f2_mode = cfg.f2_mode;
            PartitionedSieve ps(stream.universe_size, cfg.params.phi, cfg.params.epsilon, seed,
                                scfg);
            for (ItemId id : stream.items) ps.update(id);
            report = ps.report();
            auto bits = ps.space_bits();
            ideal = bits.idealized;
            actual = bits.actual;
            break;
        }
    }
    MetricsRow row = score_report(report, truth, profile, seed);
    row.space_bits_ideal = ideal;
    row.space_bits_actual = actual;
    row.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

}  // namespace detail

// One row per seed, emitted in seed order; trials run in parallel.
inline std::vector<MetricsRow> run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    Stream stream = cfg.workload.materialize();
    FrequencyProfile profile = exact_profile(stream);
    TruthSets truth = (cfg.algo == Algo::mg || cfg.algo == Algo::l1)
                          ? truth_l1(profile, cfg.params)
                          : truth_l2(profile, cfg.params);

    std::vector<MetricsRow> rows(cfg.seeds.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < cfg.seeds.size();)
            rows[i] = detail::run_single(cfg, stream, profile, truth, cfg.seeds[i]);
    };
    unsigned threads = std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                                          static_cast<unsigned>(cfg.seeds.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return rows;
}

struct StatSummary {
    double mean = 0.0;
    double min = 0.0;
    double median = 0.0;
    double max = 0.0;
};

struct AggregateSummary {
    std::size_t rows = 0;
    double success_fraction = 0.0;   // recall_must == 1 and false_forbidden == 0
    StatSummary recall_must;
    StatSummary max_abs_err;
    StatSummary wall_time_ms;
};

namespace detail {
inline StatSummary summarize(std::vector<double> v) {
    StatSummary s;
    std::sort(v.begin(), v.end());
    s.min = v.front();
    s.max = v.back();
    s.median = v[(v.size() - 1) / 2];
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean = sum / static_cast<double>(v.size());
    return s;
}
}  // namespace detail

inline AggregateSummary aggregate(const std::vector<MetricsRow>& rows) {
    if (rows.empty()) throw std::runtime_error("aggregate: no rows");
    AggregateSummary a;
    a.rows = rows.size();
    std::vector<double> recall, err, wall;
    std::size_t ok = 0;
    for (const auto& r : rows) {
        recall.push_back(r.recall_must);
        err.push_back(r.max_abs_err);
        wall.push_back(r.wall_time_ms);
        if (r.recall_must == 1.0 && r.false_forbidden == 0) ++ok;
    }
    a.success_fraction = static_cast<double>(ok) / static_cast<double>(rows.size());
    a.recall_must = detail::summarize(std::move(recall));
    a.max_abs_err = detail::summarize(std::move(err));
    a.wall_time_ms = detail::summarize(std::move(wall));
    return a;
}

// --- report serialization ---------------------------------------------------

inline const char* kMetricsCsvHeader =
    "seed,recall_must,false_forbidden,max_abs_err,space_bits_ideal,space_bits_actual,"
    "wall_time_ms";

namespace detail {
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
}  // namespace detail

inline std::string metrics_to_csv(const std::vector<MetricsRow>& rows) {
    std::ostringstream out;
    out << kMetricsCsvHeader << '\n';
    for (const auto& r : rows) {
        out << r.seed << ',' << detail::format_double(r.recall_must) << ',' << r.false_forbidden
            << ',' << detail::format_double(r.max_abs_err) << ',' << r.space_bits_ideal << ','
            << r.space_bits_actual << ',' << detail::format_double(r.wall_time_ms) << '\n';
    }
    return out.str();
}

inline std::vector<MetricsRow> metrics_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kMetricsCsvHeader)
        throw std::runtime_error("metrics csv: missing or unexpected header");
    std::vector<MetricsRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) f.push_back(field);
        if (f.size() != 7) throw std::runtime_error("metrics csv: bad field count");
        MetricsRow r;
        r.seed = std::strtoull(f[0].c_str(), nullptr, 10);
        r.recall_must = std::strtod(f[1].c_str(), nullptr);
        r.false_forbidden = std::strtoull(f[2].c_str(), nullptr, 10);
        r.max_abs_err = std::strtod(f[3].c_str(), nullptr);
        r.space_bits_ideal = std::strtoull(f[4].c_str(), nullptr, 10);
        r.space_bits_actual = std::strtoull(f[5].c_str(), nullptr, 10);
        r.wall_time_ms = std::strtod(f[6].c_str(), nullptr);
        rows.push_back(r);
    }
    return rows;
}

inline std::string metrics_to_json(const std::vector<MetricsRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        arr.push_back({{"seed", r.seed},
                       {"recall_must", r.recall_must},
                       {"false_forbidden", r.false_forbidden},
                       {"max_abs_err", r.max_abs_err},
                       {"space_bits_ideal", r.space_bits_ideal},
                       {"space_bits_actual", r.space_bits_actual},
                       {"wall_time_ms", r.wall_time_ms}});
    }
    return arr.dump(2);
}

inline std::vector<MetricsRow> metrics_from_json(const std::string& text) {
    auto arr = nlohmann::json::parse(text);
    std::vector<MetricsRow> rows;
    for (const auto& o : arr) {
        MetricsRow r;
        r.seed = o.at("seed").get<std::uint64_t>();
        r.recall_must = o.at("recall_must").get<double>();
        r.false_forbidden = o.at("false_forbidden").get<std::uint64_t>();
        r.max_abs_err = o.at("max_abs_err").get<double>();
        r.space_bits_ideal = o.at("space_bits_ideal").get<std::uint64_t>();
        r.space_bits_actual = o.at("space_bits_actual").get<std::uint64_t>();
        r.wall_time_ms = o.at("wall_time_ms").get<double>();
        rows.push_back(r);
    }
    return rows;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace hh
