// Command-line experiment runner.
//
//   pspso run     --scenario F1 --algo pspso --runs 31 --seed 42 --out results.csv
//   pspso sweep   --param p --values 0,0.01,0.025,0.05 --scenario F1 --out sweep.csv
//   pspso compare a.csv b.csv
//
// Exit codes: 0 success, 2 usage error, 3 runtime failure.

#include <pspso/harness/config.hpp>
#include <pspso/harness/experiment.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int exit_usage = 2;
constexpr int exit_runtime = 3;
constexpr const char* jobs_env = "PSPSO_JOBS";

using namespace pspso::harness;

struct RunOptions {
    std::optional<std::string> scenario;
    std::optional<std::string> algo;
    std::optional<std::size_t> runs;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<std::string> config;
    std::vector<std::string> sets;
    std::optional<std::string> trace_dir;
    std::optional<std::size_t> jobs;
    bool timing = false;
};

void add_run_options(CLI::App& cmd, RunOptions& o) {
    cmd.add_option("--scenario", o.scenario, "F1..F12 or custom");
    cmd.add_option("--algo", o.algo, "pspso or restart-baseline");
    cmd.add_option("--runs", o.runs, "number of runs (default 31)");
    cmd.add_option("--seed", o.seed, "base seed (default 42)");
    cmd.add_option("--out", o.out, "results CSV path")->required();
    cmd.add_option("--config", o.config, "INI config file");
    cmd.add_option("--set", o.sets, "override, section.key=value (repeatable)");
    cmd.add_option("--trace-dir", o.trace_dir, "write per-run error traces and environment histories here");
    cmd.add_option("--jobs", o.jobs, std::string("worker threads (default $") + jobs_env + " or 1)");
    cmd.add_flag("--timing", o.timing, "fill wall_time_ms (makes rows non-reproducible)");
}

Settings collect_settings(const RunOptions& o) {
    Settings s;
    if (o.config) s = read_config_file(*o.config);
    if (o.scenario) s.emplace_back("problem.scenario", *o.scenario);
    if (o.algo) s.emplace_back("algo.name", *o.algo);
    if (o.runs) s.emplace_back("run.runs", std::to_string(*o.runs));
    if (o.seed) s.emplace_back("run.seed", std::to_string(*o.seed));
    for (const auto& kv : o.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw pspso::ConfigError("--set expects key=value, got '" + kv + "'");
        s.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return s;
}

BatchOptions batch_options(const RunOptions& o) {
    BatchOptions b;
    if (o.jobs) {
        b.jobs = *o.jobs;
    } else if (const char* env = std::getenv(jobs_env)) {
        try {
            b.jobs = std::stoul(env);
        } catch (const std::exception&) {
            throw pspso::ConfigError(std::string(jobs_env) + " must be a positive integer");
        }
    }
    if (b.jobs < 1) throw pspso::ConfigError("--jobs must be at least 1");
    if (o.trace_dir) b.trace_dir = *o.trace_dir;
    b.timing = o.timing;
    return b;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    return out;
}

// Runs each config in turn, writing data rows then summary rows; a failure
// leaves the finished rows plus a #PARTIAL marker behind.
int execute(const std::vector<ExperimentConfig>& configs, const BatchOptions& batch, const std::string& out_path) {
    {
        auto cfg_out = open_output(out_path + ".config.ini");
        for (std::size_t i = 0; i < configs.size(); ++i) {
            if (i) cfg_out << "\n; ----\n\n";
            cfg_out << dump_config(configs[i]);
        }
    }
    auto out = open_output(out_path);
    out << csv_header << '\n';
    std::vector<std::vector<RunRecord>> all;
    for (const auto& cfg : configs) {
        try {
            all.push_back(run_experiment(cfg, batch));
        } catch (const BatchFailure& e) {
            for (const auto& r : e.completed) write_data_row(out, r);
            out << "#PARTIAL," << e.what() << '\n';
            std::cerr << "error: " << e.what() << '\n';
            return exit_runtime;
        }
        for (const auto& r : all.back()) write_data_row(out, r);
        out.flush();
    }
    for (const auto& records : all) write_summary_row(out, records);
    for (const auto& records : all) write_summary_row(std::cout, records);
    return 0;
}

std::vector<std::string> split_values(const std::string& csv) {
    std::vector<std::string> values;
    std::string item;
    for (char c : csv + ",") {
        if (c == ',') {
            if (!item.empty()) values.push_back(item);
            item.clear();
        } else if (c != ' ') {
            item += c;
        }
    }
    return values;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"PSPSO dynamic-optimization experiment runner"};
    app.require_subcommand(1);

    RunOptions run_opts;
    auto* run_cmd = app.add_subcommand("run", "run a seeded batch and write per-run CSV rows");
    add_run_options(*run_cmd, run_opts);

    RunOptions sweep_opts;
    std::string sweep_param;
    std::string sweep_values;
    auto* sweep_cmd = app.add_subcommand("sweep", "repeat a batch for each value of one parameter");
    add_run_options(*sweep_cmd, sweep_opts);
    sweep_cmd->add_option("--param", sweep_param, "parameter key, e.g. p or algo.n")->required();
    sweep_cmd->add_option("--values", sweep_values, "comma-separated values")->required();

    std::string file_a, file_b;
    auto* compare_cmd = app.add_subcommand("compare", "Mann-Whitney U comparison of two result files");
    compare_cmd->add_option("a", file_a, "first results CSV")->required();
    compare_cmd->add_option("b", file_b, "second results CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (*run_cmd) {
            const auto cfg = resolve_config(collect_settings(run_opts));
            return execute({cfg}, batch_options(run_opts), run_opts.out);
        }
        if (*sweep_cmd) {
            const auto base = collect_settings(sweep_opts);
            const auto values = split_values(sweep_values);
            if (values.empty()) throw pspso::ConfigError("--values needs at least one value");
            std::vector<ExperimentConfig> configs;
            for (const auto& v : values) {
                auto settings = base;
                settings.emplace_back(sweep_param, v);
                auto cfg = resolve_config(settings);
                cfg.label = cfg.algo_label() + "[" + sweep_param + "=" + v + "]";
                configs.push_back(std::move(cfg));
            }
            return execute(configs, batch_options(sweep_opts), sweep_opts.out);
        }
        const auto cmp = compare(read_results_file(file_a), read_results_file(file_b));
        write_report(std::cout, cmp);
        return 0;
    } catch (const pspso::ConfigError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime;
    }
}
