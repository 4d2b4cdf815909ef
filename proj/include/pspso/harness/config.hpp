#pragma once

// Experiment configuration: scenario defaults, overridden by an INI-style
// config file, overridden by command-line `key=value` settings, in that order.

#include <pspso/detail/format.hpp>
#include <pspso/error.hpp>
#include <pspso/harness/scenario.hpp>
#include <pspso/pspso.hpp>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace pspso::harness {

enum class Algorithm { pspso, restart_baseline };

inline std::string to_string(Algorithm a) { return a == Algorithm::pspso ? "pspso" : "restart-baseline"; }

inline Algorithm parse_algorithm(const std::string& s) {
    if (s == "pspso") return Algorithm::pspso;
    if (s == "restart-baseline" || s == "restart") return Algorithm::restart_baseline;
    throw ConfigError("unknown algorithm '" + s + "' (valid: pspso, restart-baseline)");
}

struct ExperimentConfig {
    std::string scenario = "F1";
    Algorithm algorithm = Algorithm::pspso;
    std::string label; // value of the CSV algo column; empty means the algorithm name
    LandscapeParams problem = resolve_scenario("F1");
    PspsoConfig pspso;
    std::int64_t restart_period = 5000;
    std::uint64_t base_seed = 42;
    std::size_t runs = 31;

    std::string algo_label() const { return label.empty() ? to_string(algorithm) : label; }

    RestartConfig restart() const { return {pspso.algo.population_size(), restart_period, pspso.pso}; }

    void validate() const {
        problem.validate();
        pspso.algo.validate();
        if (runs < 1) throw ConfigError("run count must be positive");
        if (restart_period < 1) throw ConfigError("restart period must be positive");
        if (static_cast<std::int64_t>(pspso.algo.population_size()) > problem.schedule.budget())
            throw ConfigError("evaluation budget is smaller than the initial population");
    }
};

/// Ordered `section.key` -> value pairs.
using Settings = std::vector<std::pair<std::string, std::string>>;

namespace detail {

template <class T>
T parse_number(const std::string& key, const std::string& text) {
    T value{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) throw ConfigError("invalid value '" + text + "' for " + key);
    return value;
}

inline std::string qualify(const std::string& key) {
    if (key.find('.') != std::string::npos) return key;
    static const std::pair<const char*, const char*> aliases[] = {
        {"scenario", "problem.scenario"}, {"peaks", "problem.peaks"},
        {"change_frequency", "problem.change_frequency"}, {"dims", "problem.dims"},
        {"shift_severity", "problem.shift_severity"}, {"environments", "problem.environments"},
        {"algo", "algo.name"}, {"n", "algo.n"}, {"s", "algo.s"}, {"alpha", "algo.alpha"},
        {"p", "algo.p"}, {"R", "algo.R"}, {"w", "algo.w"}, {"c1", "algo.c1"}, {"c2", "algo.c2"},
        {"restart_period", "algo.restart_period"}, {"runs", "run.runs"}, {"seed", "run.seed"},
    };
    for (const auto& [alias, full] : aliases)
        if (key == alias) return full;
    throw ConfigError("unknown configuration key '" + key + "'");
}

} // namespace detail

/// Apply one setting. Unknown keys and malformed values raise ConfigError.
inline void apply_setting(ExperimentConfig& cfg, const std::string& raw_key, const std::string& value) {
    using detail::parse_number;
    const std::string key = detail::qualify(raw_key);
    auto& prob = cfg.problem;
    auto& algo = cfg.pspso.algo;
    auto& pso = cfg.pspso.pso;

    if (key == "problem.scenario") {
        prob = resolve_scenario(value);
        cfg.scenario = value;
    } else if (key == "problem.peaks") prob.num_peaks = parse_number<std::size_t>(key, value);
    else if (key == "problem.change_frequency") prob.schedule.change_frequency = parse_number<std::int64_t>(key, value);
    else if (key == "problem.dims") prob.space.dims = parse_number<std::size_t>(key, value);
    else if (key == "problem.shift_severity") prob.schedule.shift_severity = parse_number<double>(key, value);
    else if (key == "problem.height_severity") prob.schedule.height_severity = parse_number<double>(key, value);
    else if (key == "problem.width_severity") prob.schedule.width_severity = parse_number<double>(key, value);
    else if (key == "problem.environments") prob.schedule.num_environments = parse_number<std::int64_t>(key, value);
    else if (key == "problem.lower") prob.space.lower = parse_number<double>(key, value);
    else if (key == "problem.upper") prob.space.upper = parse_number<double>(key, value);
    else if (key == "problem.min_height") prob.min_height = parse_number<double>(key, value);
    else if (key == "problem.max_height") prob.max_height = parse_number<double>(key, value);
    else if (key == "problem.min_width") prob.min_width = parse_number<double>(key, value);
    else if (key == "problem.max_width") prob.max_width = parse_number<double>(key, value);
    else if (key == "algo.name") cfg.algorithm = parse_algorithm(value);
    else if (key == "algo.label") cfg.label = value;
    else if (key == "algo.n") algo.swarm_count = parse_number<std::size_t>(key, value);
    else if (key == "algo.s") algo.swarm_size = parse_number<std::size_t>(key, value);
    else if (key == "algo.alpha") algo.diversity_threshold = parse_number<double>(key, value);
    else if (key == "algo.p") algo.perturbation = parse_number<double>(key, value);
    else if (key == "algo.R") {
        if (value == "auto")
            algo.convergence_radius.reset();
        else
            algo.convergence_radius = parse_number<double>(key, value);
    } else if (key == "algo.w") pso.inertia = parse_number<double>(key, value);
    else if (key == "algo.c1") pso.cognitive = parse_number<double>(key, value);
    else if (key == "algo.c2") pso.social = parse_number<double>(key, value);
    else if (key == "algo.velocity_rule") {
        if (value == "constriction") pso.rule = VelocityRule::constriction;
        else if (value == "inertia") pso.rule = VelocityRule::inertia;
        else throw ConfigError("invalid value '" + value + "' for algo.velocity_rule (constriction, inertia)");
    } else if (key == "algo.restart_period") cfg.restart_period = parse_number<std::int64_t>(key, value);
    else if (key == "run.runs") cfg.runs = parse_number<std::size_t>(key, value);
    else if (key == "run.seed") cfg.base_seed = parse_number<std::uint64_t>(key, value);
    else throw ConfigError("unknown configuration key '" + raw_key + "'");
}

/// Scenario defaults first, then every other setting in order.
inline ExperimentConfig resolve_config(const Settings& settings) {
    ExperimentConfig cfg;
    for (const auto& [k, v] : settings)
        if (detail::qualify(k) == "problem.scenario") apply_setting(cfg, k, v);
    for (const auto& [k, v] : settings)
        if (detail::qualify(k) != "problem.scenario") apply_setting(cfg, k, v);
    cfg.validate();
    return cfg;
}

/// `[section]` headers and `key = value` lines; `;` starts a comment line.
inline Settings parse_config(std::istream& in) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    Settings settings;
    for (const auto& [section, body] : tree) {
        if (body.empty()) throw ConfigError("config key '" + section + "' must live in a [section]");
        for (const auto& [key, leaf] : body) settings.emplace_back(section + "." + key, leaf.data());
    }
    return settings;
}

inline Settings read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    return parse_config(in);
}

/// Fully explicit resolved configuration, in the same format `parse_config` reads.
inline std::string dump_config(const ExperimentConfig& cfg) {
    using pspso::detail::format_double;
    const auto& prob = cfg.problem;
    const auto& algo = cfg.pspso.algo;
    const auto& pso = cfg.pspso.pso;
    std::ostringstream out;
    out << "[problem]\n"
        << "scenario = " << cfg.scenario << '\n'
        << "peaks = " << prob.num_peaks << '\n'
        << "change_frequency = " << prob.schedule.change_frequency << '\n'
        << "dims = " << prob.space.dims << '\n'
        << "shift_severity = " << format_double(prob.schedule.shift_severity) << '\n'
        << "height_severity = " << format_double(prob.schedule.height_severity) << '\n'
        << "width_severity = " << format_double(prob.schedule.width_severity) << '\n'
        << "environments = " << prob.schedule.num_environments << '\n'
        << "lower = " << format_double(prob.space.lower) << '\n'
        << "upper = " << format_double(prob.space.upper) << '\n'
        << "min_height = " << format_double(prob.min_height) << '\n'
        << "max_height = " << format_double(prob.max_height) << '\n'
        << "min_width = " << format_double(prob.min_width) << '\n'
        << "max_width = " << format_double(prob.max_width) << '\n'
        << "\n[algo]\n"
        << "name = " << to_string(cfg.algorithm) << '\n'
        << "label = " << cfg.algo_label() << '\n'
        << "n = " << algo.swarm_count << '\n'
        << "s = " << algo.swarm_size << '\n'
        << "alpha = " << format_double(algo.diversity_threshold) << '\n'
        << "p = " << format_double(algo.perturbation) << '\n'
        << "R = " << format_double(algo.radius_for(prob.space.dims)) << '\n'
        << "w = " << format_double(pso.inertia) << '\n'
        << "c1 = " << format_double(pso.cognitive) << '\n'
        << "c2 = " << format_double(pso.social) << '\n'
        << "velocity_rule = " << (pso.rule == VelocityRule::constriction ? "constriction" : "inertia") << '\n'
        << "restart_period = " << cfg.restart_period << '\n'
        << "\n[run]\n"
        << "runs = " << cfg.runs << '\n'
        << "seed = " << cfg.base_seed << '\n';
    return out.str();
}

} // namespace pspso::harness
