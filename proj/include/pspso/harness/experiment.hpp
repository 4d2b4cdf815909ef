#pragma once

// Seeded batch execution, CSV results and pairwise comparison.

#include <pspso/detail/format.hpp>
#include <pspso/error.hpp>
#include <pspso/harness/config.hpp>
#include <pspso/pspso.hpp>
#include <pspso/stats.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <istream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace pspso::harness {

inline constexpr std::string_view csv_header = "scenario,algo,seed,offline_error,evaluations,wall_time_ms";
inline constexpr double significance_level = 0.05;

struct RunRecord {
    std::string scenario;
    std::string algo;
    std::uint64_t seed = 0;
    double offline_error = 0.0;
    std::int64_t evaluations = 0;
    std::int64_t wall_time_ms = 0;
};

struct BatchOptions {
    std::size_t jobs = 1;
    std::optional<std::filesystem::path> trace_dir;
    bool timing = false; // wall_time_ms stays 0 unless set, so reruns are byte-identical
};

/// Thrown when a run fails; `completed` holds the runs before the first failed index.
class BatchFailure : public std::runtime_error {
public:
    BatchFailure(const std::string& what, std::vector<RunRecord> completed)
        : std::runtime_error(what), completed(std::move(completed)) {}
    std::vector<RunRecord> completed;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace detail

inline std::uint64_t run_seed(std::uint64_t base_seed, std::size_t run_index) { return base_seed + run_index; }

/// Same for every algorithm at a given (base seed, scenario, run index), so compared runs see the same problem.
inline std::uint64_t dynamics_seed(std::uint64_t base_seed, std::string_view scenario, std::size_t run_index) {
    std::uint64_t h = detail::splitmix64(base_seed);
    h = detail::splitmix64(h ^ detail::fnv1a(scenario));
    return detail::splitmix64(h ^ static_cast<std::uint64_t>(run_index));
}

namespace detail {

inline std::string trace_stem(const RunRecord& r) {
    std::string stem = r.scenario + "_" + r.algo + "_seed" + std::to_string(r.seed);
    for (char& c : stem)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) c = '_';
    return stem;
}

inline void write_traces(const std::filesystem::path& dir, const RunRecord& rec, const RunResult& result,
                         const DynamicLandscape& landscape) {
    const auto stem = trace_stem(rec);
    std::ofstream errors(dir / (stem + ".errors.csv"));
    std::ofstream envs(dir / (stem + ".env.csv"));
    if (!errors || !envs) throw std::runtime_error("cannot write traces to " + dir.string());
    for (double e : result.error_trace) errors << pspso::detail::format_double(e) << '\n';
    write_environment_history(envs, landscape.history());
}

} // namespace detail

/// One run of the configured algorithm at `run_index`.
inline RunRecord run_single(const ExperimentConfig& cfg, std::size_t run_index, const BatchOptions& opts = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    const bool tracing = opts.trace_dir.has_value();
    DynamicLandscape landscape(cfg.problem, dynamics_seed(cfg.base_seed, cfg.scenario, run_index),
                               Recording{tracing, tracing});
    const std::uint64_t seed = run_seed(cfg.base_seed, run_index);
    RunResult result = cfg.algorithm == Algorithm::pspso ? run_pspso(cfg.pspso, landscape, seed)
                                                         : run_restart_baseline(cfg.restart(), landscape, seed);
    RunRecord rec{cfg.scenario, cfg.algo_label(), seed, result.offline_error, result.evaluations_used, 0};
    if (opts.timing)
        rec.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    if (tracing) detail::write_traces(*opts.trace_dir, rec, result, landscape);
    return rec;
}

/// All runs of `cfg`, on up to `opts.jobs` threads; results are ordered by run index.
inline std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg, const BatchOptions& opts = {}) {
    cfg.validate();
    if (opts.trace_dir) std::filesystem::create_directories(*opts.trace_dir);

    std::vector<std::optional<RunRecord>> slots(cfg.runs);
    std::vector<std::exception_ptr> errors(cfg.runs);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};

    auto worker = [&] {
        for (std::size_t i = next++; i < cfg.runs && !failed; i = next++) {
            try {
                slots[i] = run_single(cfg, i, opts);
            } catch (...) {
                errors[i] = std::current_exception();
                failed = true;
            }
        }
    };
    const std::size_t jobs = std::clamp<std::size_t>(opts.jobs, 1, cfg.runs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    }

    std::vector<RunRecord> records;
    for (std::size_t i = 0; i < cfg.runs; ++i) {
        if (errors[i]) {
            std::string what = "run " + std::to_string(i) + " failed";
            try {
                std::rethrow_exception(errors[i]);
            } catch (const std::exception& e) {
                what += ": ";
                what += e.what();
            } catch (...) {
            }
            throw BatchFailure(what, std::move(records));
        }
        if (!slots[i]) throw BatchFailure("run " + std::to_string(i) + " did not complete", std::move(records));
        records.push_back(std::move(*slots[i]));
    }
    return records;
}

inline std::vector<double> offline_errors(const std::vector<RunRecord>& records) {
    std::vector<double> v;
    v.reserve(records.size());
    for (const auto& r : records) v.push_back(r.offline_error);
    return v;
}

inline void write_data_row(std::ostream& out, const RunRecord& r) {
    out << r.scenario << ',' << r.algo << ',' << r.seed << ',' << pspso::detail::format_double(r.offline_error) << ','
        << r.evaluations << ',' << r.wall_time_ms << '\n';
}

/// `#SUMMARY,scenario,algo,runs,mean,std_error`
inline void write_summary_row(std::ostream& out, const std::vector<RunRecord>& records) {
    if (records.empty()) return;
    const auto values = offline_errors(records);
    const auto s = stats::summarize(values);
    out << "#SUMMARY," << records.front().scenario << ',' << records.front().algo << ',' << s.n << ','
        << pspso::detail::format_double(s.mean) << ',' << pspso::detail::format_double(s.std_error) << '\n';
}

/// Data rows only; header, summary and marker lines are skipped.
inline std::vector<RunRecord> read_results(std::istream& in) {
    std::vector<RunRecord> records;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.front() == '#' || line == csv_header) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
        if (fields.size() != 6) throw ConfigError("malformed results row at line " + std::to_string(lineno));
        try {
            records.push_back({fields[0], fields[1], std::stoull(fields[2]), std::stod(fields[3]), std::stoll(fields[4]),
                               std::stoll(fields[5])});
        } catch (const std::logic_error&) {
            throw ConfigError("malformed results row at line " + std::to_string(lineno));
        }
    }
    return records;
}

inline std::vector<RunRecord> read_results_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read results file '" + path + "'");
    return read_results(in);
}

struct Comparison {
    std::string scenario;
    std::string algo_a, algo_b;
    stats::SampleSummary a, b;
    stats::MannWhitneyResult test;

    bool significant() const { return test.p_two_sided < significance_level; }

    std::string verdict() const {
        if (!significant()) return "no significant difference";
        return std::string("significant (") + (a.mean < b.mean ? "a" : "b") + " has lower offline error)";
    }
};

inline Comparison compare(const std::vector<RunRecord>& a, const std::vector<RunRecord>& b) {
    if (a.size() < 2 || b.size() < 2) throw ConfigError("comparison needs at least 2 runs per result set");
    const std::string& scenario = a.front().scenario;
    auto same = [&](const RunRecord& r) { return r.scenario == scenario; };
    if (!std::all_of(a.begin(), a.end(), same) || !std::all_of(b.begin(), b.end(), same))
        throw ConfigError("result sets cover different scenarios");
    const auto va = offline_errors(a);
    const auto vb = offline_errors(b);
    return {scenario, a.front().algo, b.front().algo, stats::summarize(va), stats::summarize(vb),
            stats::mann_whitney_u(va, vb)};
}

inline void write_report(std::ostream& out, const Comparison& c) {
    using pspso::detail::format_double;
    out << "scenario: " << c.scenario << '\n'
        << "a: " << c.algo_a << " runs=" << c.a.n << " mean=" << format_double(c.a.mean)
        << " std_error=" << format_double(c.a.std_error) << '\n'
        << "b: " << c.algo_b << " runs=" << c.b.n << " mean=" << format_double(c.b.mean)
        << " std_error=" << format_double(c.b.std_error) << '\n'
        << "U=" << format_double(c.test.u) << " p=" << format_double(c.test.p_two_sided) << '\n'
        << "verdict (alpha=0.05): " << c.verdict() << '\n';
}

} // namespace pspso::harness
