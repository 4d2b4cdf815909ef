#pragma once

// The PSPSO main loop and a naive restart-PSO baseline.
//
// Both optimizers are uninformed: they talk to the landscape only through a
// callback that returns a fitness value.

#include <pspso/error.hpp>
#include <pspso/mechanisms.hpp>
#include <pspso/problem.hpp>
#include <pspso/swarm.hpp>

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace pspso {

struct PspsoConfig {
    AlgoConfig algo;
    PsoParams pso;
};

struct RestartConfig {
    std::size_t population = 70;
    std::int64_t restart_period = 5000; // evaluations between full re-randomizations
    PsoParams pso;
};

struct RunResult {
    double offline_error = 0.0;
    double final_error = 0.0;              // error of the best found at the last evaluation
    std::vector<double> error_trace;       // per evaluation, only with error logging on
    std::int64_t evaluations_used = 0;
    std::vector<std::size_t> swarm_count_trace; // active swarms after each iteration
};

enum class Phase { swarm_update, overlap_removal, perturbation, convergence_detection, diversity };

struct NoObserver {
    void operator()(Phase) const {}
};

/// One iteration of the main loop on `state`. `observer` is told each phase as it starts.
template <class Rng, class Eval, class Observer = NoObserver>
void pspso_iteration(PopulationState& state, const PspsoConfig& cfg, const SearchSpace& space, Rng& rng,
                     Eval&& eval, Observer&& observer = {}) {
    observer(Phase::swarm_update);
    for (auto& swarm : state.swarms)
        if (swarm.active) pso_step(swarm, cfg.pso, space, rng, eval);

    observer(Phase::overlap_removal);
    remove_overlaps(state);

    observer(Phase::perturbation);
    perturb(state, cfg.algo, cfg.pso, space, rng, eval);

    observer(Phase::convergence_detection);
    detect_and_deactivate(state, cfg.algo, space.dims);

    if (diversity_triggered(state, cfg.algo)) {
        observer(Phase::diversity);
        diversity_step(state, cfg.algo, space, rng, eval);
    }
}

/// n * s uniform particles, each evaluated once, speciated into subswarms.
template <class Rng, class Eval>
PopulationState initialize_population(const AlgoConfig& cfg, const SearchSpace& space, Rng& rng, Eval&& eval) {
    std::vector<Particle> population;
    population.reserve(cfg.population_size());
    for (std::size_t i = 0; i < cfg.population_size(); ++i) population.push_back(random_particle(space, rng, eval));
    return PopulationState{speciate(std::move(population), cfg.swarm_size)};
}

namespace detail {

inline RunResult collect(const DynamicLandscape& landscape, std::vector<std::size_t> swarm_counts) {
    RunResult r;
    const auto& tracker = landscape.tracker();
    r.offline_error = tracker.offline_error();
    r.final_error = tracker.last_error();
    r.evaluations_used = landscape.evals_done();
    r.swarm_count_trace = std::move(swarm_counts);
    r.error_trace.reserve(tracker.log().size());
    for (const auto& rec : tracker.log()) r.error_trace.push_back(rec.error());
    return r;
}

} // namespace detail

/// Run PSPSO on a fresh landscape until its evaluation budget is spent.
template <class Observer = NoObserver>
RunResult run_pspso(const PspsoConfig& cfg, DynamicLandscape& landscape, std::uint64_t seed, Observer&& observer = {}) {
    cfg.algo.validate();
    if (landscape.evals_done() != 0) throw ContractViolation("run_pspso needs a fresh landscape");
    if (static_cast<std::int64_t>(cfg.algo.population_size()) > landscape.budget())
        throw ConfigError("evaluation budget is smaller than the initial population");

    const SearchSpace space = landscape.space();
    std::mt19937_64 rng(seed);
    auto eval = [&landscape](std::span<const double> x) { return landscape.evaluate(x); };

    PopulationState state = initialize_population(cfg.algo, space, rng, eval);
    std::vector<std::size_t> swarm_counts;
    while (!landscape.exhausted()) {
        const auto before = landscape.evals_done();
        try {
            pspso_iteration(state, cfg, space, rng, eval, observer);
        } catch (const BudgetExhausted&) {
            swarm_counts.push_back(state.active_swarms());
            break;
        }
        swarm_counts.push_back(state.active_swarms());
        if (landscape.evals_done() == before) throw std::logic_error("iteration consumed no evaluations");
    }
    return detail::collect(landscape, std::move(swarm_counts));
}

/// Single global PSO swarm, fully re-randomized every `restart_period` evaluations.
inline RunResult run_restart_baseline(const RestartConfig& cfg, DynamicLandscape& landscape, std::uint64_t seed) {
    if (cfg.population < 1) throw ConfigError("baseline population must be positive");
    if (cfg.restart_period < 1) throw ConfigError("restart period must be positive");
    if (landscape.evals_done() != 0) throw ContractViolation("run_restart_baseline needs a fresh landscape");
    if (static_cast<std::int64_t>(cfg.population) > landscape.budget())
        throw ConfigError("evaluation budget is smaller than the initial population");

    const SearchSpace space = landscape.space();
    std::mt19937_64 rng(seed);
    auto eval = [&landscape](std::span<const double> x) { return landscape.evaluate(x); };

    auto restart = [&] {
        std::vector<Particle> population;
        population.reserve(cfg.population);
        for (std::size_t i = 0; i < cfg.population; ++i) population.push_back(random_particle(space, rng, eval));
        return speciate(std::move(population), cfg.population).front();
    };

    std::vector<std::size_t> swarm_counts;
    try {
        Subswarm swarm = restart();
        std::int64_t last_restart = 0;
        while (!landscape.exhausted()) {
            if (landscape.evals_done() - last_restart >= cfg.restart_period) {
                last_restart = landscape.evals_done();
                swarm = restart();
            }
            pso_step(swarm, cfg.pso, space, rng, eval);
            swarm_counts.push_back(1);
        }
    } catch (const BudgetExhausted&) {
        swarm_counts.push_back(1);
    }
    return detail::collect(landscape, std::move(swarm_counts));
}

} // namespace pspso
