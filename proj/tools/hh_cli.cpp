// Command-line front end: generate workloads, run sketch experiments against
// the exact oracle, print ground-truth heavy-hitter sets, and sweep the space
// accounting formulas.

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hh/metrics.hpp"

namespace {

hh::SpikeOrder parse_order(const std::string& s) {
    if (s == "interleaved") return hh::SpikeOrder::interleaved;
    if (s == "star_last") return hh::SpikeOrder::star_last;
    throw std::runtime_error("unknown spike order '" + s + "'");
}

// Flat key=value experiment file; '#' starts a comment line.
std::vector<std::pair<std::string, std::string>> load_config_file(const std::string& path) {
    std::vector<std::pair<std::string, std::string>> kv;
    std::string text = hh::read_text_file(path);
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line without '=': " + line);
        kv.emplace_back(line.substr(0, eq), line.substr(eq + 1));
    }
    return kv;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& v) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) seeds.push_back(std::stoull(tok));
    return seeds;
}

// For file inputs, n == 0 infers the universe from the ids seen.
hh::Stream load_or_generate(const std::string& input, const std::string& workload,
                            std::uint32_t n, std::uint64_t m, double s, std::uint32_t star,
                            std::uint64_t f_star, const std::string& order, std::uint64_t seed) {
    hh::WorkloadSpec spec;
    if (!input.empty()) {
        spec.kind = hh::WorkloadSpec::Kind::file;
        spec.path = input;
        spec.n = n;
        return spec.materialize();
    }
    spec.n = n;
    spec.m = m;
    spec.seed = seed;
    if (workload == "zipf") {
        spec.kind = hh::WorkloadSpec::Kind::zipf;
        spec.zipf_s = s;
    } else if (workload == "spike") {
        spec.kind = hh::WorkloadSpec::Kind::spike;
        spec.star = star;
        spec.f_star = f_star;
        spec.order = parse_order(order);
    } else {
        throw std::runtime_error("unknown workload '" + workload + "' (expected zipf|spike)");
    }
    return spec.materialize();
}

void emit(const std::string& output, const std::string& text) {
    if (output.empty())
        std::cout << text;
    else
        hh::write_text_file(output, text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"streaming heavy-hitters sketches: workloads, experiments, oracle, space"};
    app.require_subcommand(1);

    // --- gen ---
    auto* gen = app.add_subcommand("gen", "generate a workload and write a stream file");
    std::string g_workload = "zipf", g_order = "interleaved", g_output, g_format = "text";
    std::uint32_t g_n = 1024, g_star = 1;
    std::uint64_t g_m = 10000, g_fstar = 0, g_seed = 1;
    double g_s = 1.1;
    gen->add_option("--workload", g_workload, "zipf|spike");
    gen->add_option("--n", g_n, "universe size");
    gen->add_option("--m", g_m, "stream length");
    gen->add_option("--s", g_s, "zipf exponent");
    gen->add_option("--star", g_star, "spike item id");
    gen->add_option("--fstar", g_fstar, "spike item frequency");
    gen->add_option("--order", g_order, "interleaved|star_last");
    gen->add_option("--seed", g_seed, "generator seed");
    gen->add_option("--output", g_output)->required();
    gen->add_option("--format", g_format, "text|bin");

    // --- run ---
    auto* run = app.add_subcommand("run", "run a sketch over a workload, one row per seed");
    std::string r_config;
    run->add_option("--config", r_config, "flat key=value experiment file");
    std::string r_algo = "mg", r_workload = "zipf", r_order = "interleaved", r_input, r_output,
                r_format = "csv", r_f2_mode = "exact";
    std::uint32_t r_n = 1024, r_star = 1, r_b = 256, r_r = 0;
    std::uint64_t r_m = 10000, r_fstar = 0, r_wseed = 1;
    double r_eps = 0.1, r_phi = 0.3, r_s = 1.1;
    std::vector<std::uint64_t> r_seeds;
    std::uint64_t r_trials = 0;
    bool r_n_from_config = false;
    run->add_option("--algo", r_algo, "mg|l1|cs|sieve");
    run->add_option("--epsilon", r_eps);
    run->add_option("--phi", r_phi);
    run->add_option("--workload", r_workload, "zipf|spike");
    run->add_option("--n", r_n);
    run->add_option("--m", r_m);
    run->add_option("--s", r_s);
    run->add_option("--star", r_star);
    run->add_option("--fstar", r_fstar);
    run->add_option("--order", r_order);
    run->add_option("--workload-seed", r_wseed);
    run->add_option("--input", r_input, "read the stream from a file instead of generating");
    run->add_option("--seeds", r_seeds, "explicit sketch seeds")->delimiter(',');
    run->add_option("--trials", r_trials, "shorthand for seeds 1..N");
    run->add_option("--b", r_b, "countsketch buckets");
    run->add_option("--r", r_r, "countsketch rows (0 = ceil(log2 n)+1)");
    run->add_option("--f2-mode", r_f2_mode, "exact|sketch (sieve)");
    run->add_option("--output", r_output);
    run->add_option("--format", r_format, "csv|json");

    // --- truth ---
    auto* truth = app.add_subcommand("truth", "print the oracle must/forbidden sets");
    std::string t_input, t_norm = "l1", t_output, t_workload = "zipf", t_order = "interleaved";
    std::uint32_t t_n = 1024, t_star = 1;
    std::uint64_t t_m = 10000, t_fstar = 0, t_seed = 1;
    double t_eps = 0.1, t_phi = 0.3, t_s = 1.1;
    truth->add_option("--input", t_input);
    truth->add_option("--workload", t_workload);
    truth->add_option("--n", t_n);
    truth->add_option("--m", t_m);
    truth->add_option("--s", t_s);
    truth->add_option("--star", t_star);
    truth->add_option("--fstar", t_fstar);
    truth->add_option("--order", t_order);
    truth->add_option("--seed", t_seed);
    truth->add_option("--epsilon", t_eps);
    truth->add_option("--phi", t_phi);
    truth->add_option("--norm", t_norm, "l1|l2");
    truth->add_option("--output", t_output);

    // --- space ---
    auto* space = app.add_subcommand("space", "sweep the space accounting formulas");
    std::string s_output;
    std::uint32_t s_b = 256;
    double s_phi = 0.1;
    std::vector<unsigned> s_logn = {10, 12, 14, 16, 18, 20};
    space->add_option("--log2n", s_logn, "log2 universe sizes")->delimiter(',');
    space->add_option("--b", s_b, "countsketch buckets");
    space->add_option("--phi", s_phi);
    space->add_option("--output", s_output);

    // Config values act as defaults; explicit flags override them.
    try {
        for (int i = 1; i + 1 < argc; ++i) {
            if (std::string(argv[i]) != "--config") continue;
            for (const auto& [key, value] : load_config_file(argv[i + 1])) {
                if (key == "algo") r_algo = value;
                else if (key == "epsilon") r_eps = std::stod(value);
                else if (key == "phi") r_phi = std::stod(value);
                else if (key == "workload") r_workload = value;
                else if (key == "n") {
                    r_n = static_cast<std::uint32_t>(std::stoul(value));
                    r_n_from_config = true;
                }
                else if (key == "m") r_m = std::stoull(value);
                else if (key == "s") r_s = std::stod(value);
                else if (key == "star") r_star = static_cast<std::uint32_t>(std::stoul(value));
                else if (key == "fstar") r_fstar = std::stoull(value);
                else if (key == "order") r_order = value;
                else if (key == "workload-seed") r_wseed = std::stoull(value);
                else if (key == "input") r_input = value;
                else if (key == "seeds") r_seeds = parse_seed_list(value);
                else if (key == "trials") r_trials = std::stoull(value);
                else if (key == "b") r_b = static_cast<std::uint32_t>(std::stoul(value));
                else if (key == "r") r_r = static_cast<std::uint32_t>(std::stoul(value));
                else if (key == "f2-mode") r_f2_mode = value;
                else if (key == "output") r_output = value;
                else if (key == "format") r_format = value;
                else throw std::runtime_error("unknown config key '" + key + "'");
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            hh::Stream stream = load_or_generate("", g_workload, g_n, g_m, g_s, g_star, g_fstar,
                                                 g_order, g_seed);
            if (g_format == "bin")
                hh::write_stream_binary(stream, g_output);
            else if (g_format == "text")
                hh::write_stream_text(stream, g_output);
            else
                throw std::runtime_error("unknown stream format '" + g_format + "'");
            std::cerr << "wrote " << stream.length() << " items (n=" << stream.universe_size
                      << ") to " << g_output << "\n";
        } else if (*run) {
            hh::ExperimentConfig cfg;
            cfg.algo = hh::parse_algo(r_algo);
            cfg.params = {r_eps, r_phi};
            if (!r_input.empty()) {
                cfg.workload.kind = hh::WorkloadSpec::Kind::file;
                cfg.workload.path = r_input;
                cfg.workload.n = run->count("--n") > 0 || r_n_from_config ? r_n : 0;
            } else if (r_workload == "zipf") {
                cfg.workload.kind = hh::WorkloadSpec::Kind::zipf;
                cfg.workload.n = r_n;
                cfg.workload.m = r_m;
                cfg.workload.zipf_s = r_s;
                cfg.workload.seed = r_wseed;
            } else if (r_workload == "spike") {
                cfg.workload.kind = hh::WorkloadSpec::Kind::spike;
                cfg.workload.n = r_n;
                cfg.workload.m = r_m;
                cfg.workload.star = r_star;
                cfg.workload.f_star = r_fstar;
                cfg.workload.order = parse_order(r_order);
                cfg.workload.seed = r_wseed;
            } else {
                throw std::runtime_error("unknown workload '" + r_workload + "'");
            }
            cfg.seeds = r_seeds;
            for (std::uint64_t i = 1; i <= r_trials; ++i) cfg.seeds.push_back(i);
            if (cfg.seeds.empty()) cfg.seeds = {1};
            cfg.cs_buckets = r_b;
            cfg.cs_rows = r_r;
            if (r_f2_mode == "sketch")
                cfg.f2_mode = hh::F2Mode::sketch;
            else if (r_f2_mode != "exact")
                throw std::runtime_error("unknown f2 mode '" + r_f2_mode + "'");

            if (cfg.algo == hh::Algo::mg && r_phi < 2 * r_eps)
                std::cerr << "warning: phi < 2*epsilon, the mg guarantee needs phi >= 2*epsilon\n";

            auto rows = hh::run_experiment(cfg);
            std::string text = (r_format == "json") ? hh::metrics_to_json(rows) + "\n"
                                                    : hh::metrics_to_csv(rows);
            if (r_format != "json" && r_format != "csv")
                throw std::runtime_error("unknown report format '" + r_format + "'");
            emit(r_output, text);
            auto agg = hh::aggregate(rows);
            std::cerr << "rows=" << agg.rows << " success_fraction=" << agg.success_fraction
                      << " mean_recall=" << agg.recall_must.mean
                      << " max_abs_err(max)=" << agg.max_abs_err.max << "\n";
        } else if (*truth) {
            std::uint32_t file_n = truth->count("--n") > 0 ? t_n : 0;
            hh::Stream stream = load_or_generate(t_input, t_workload,
                                                 t_input.empty() ? t_n : file_n, t_m, t_s,
                                                 t_star, t_fstar, t_order, t_seed);
            auto profile = hh::exact_profile(stream);
            hh::HHParams params{t_eps, t_phi};
            hh::TruthSets sets;
            if (t_norm == "l1")
                sets = hh::truth_l1(profile, params);
            else if (t_norm == "l2")
                sets = hh::truth_l2(profile, params);
            else
                throw std::runtime_error("unknown norm '" + t_norm + "' (expected l1|l2)");
            std::vector<hh::ItemId> must(sets.must.begin(), sets.must.end());
            std::vector<hh::ItemId> forbidden(sets.forbidden.begin(), sets.forbidden.end());
            std::sort(must.begin(), must.end());
            std::sort(forbidden.begin(), forbidden.end());
            nlohmann::json out = {{"norm", t_norm},
                                  {"m", profile.total},
                                  {"f2", profile.f2},
                                  {"must", must},
                                  {"forbidden", forbidden}};
            emit(t_output, out.dump(2) + "\n");
        } else if (*space) {
            std::ostringstream out;
            out << "n,mg_bits,l1hh_bits,countsketch_bits,sieve_ideal_bits\n";
            for (unsigned lg : s_logn) {
                std::uint64_t n = 1ull << lg;
                std::uint64_t m = n;
                double eps = 1.0 / static_cast<double>(lg);
                std::uint32_t rows = static_cast<std::uint32_t>(hh::ceil_log2(n)) + 1;
                out << n << ',' << hh::MisraGries::space_bits(eps, n, m) << ','
                    << hh::SampledL1::space_bits(eps, s_phi, n) << ','
                    << hh::CountSketch::space_bits(s_b, rows, m) << ','
                    << hh::Sieve::idealized_bits(static_cast<std::uint32_t>(n), m) << '\n';
            }
            emit(s_output, out.str());
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
