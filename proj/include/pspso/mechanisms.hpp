#pragma once

// Population management around the subswarms: overlap removal, random
// perturbation, convergence deactivation and the diversity refill.

#include <pspso/error.hpp>
#include <pspso/problem.hpp>
#include <pspso/swarm.hpp>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <random>
#include <vector>

namespace pspso {

struct AlgoConfig {
    std::size_t swarm_count = 10;          // n
    std::size_t swarm_size = 7;            // s
    double diversity_threshold = 0.7;      // alpha
    double perturbation = 0.025;           // p, noise range is p * (Ub - Lb)
    std::optional<double> convergence_radius; // R, defaults to 0.01 * D

    std::size_t population_size() const { return swarm_count * swarm_size; }

    double radius_for(std::size_t dims) const {
        return convergence_radius.value_or(0.01 * static_cast<double>(dims));
    }

    void validate() const {
        if (swarm_count < 1 || swarm_size < 1) throw ConfigError("swarm count and swarm size must be positive");
        if (!(diversity_threshold >= 0.0 && diversity_threshold <= 1.0))
            throw ConfigError("diversity threshold must lie in [0, 1]");
        if (!(perturbation >= 0.0)) throw ConfigError("perturbation factor must be non-negative");
        if (convergence_radius && !(*convergence_radius > 0.0))
            throw ConfigError("convergence radius must be positive");
    }
};

struct PopulationState {
    std::vector<Subswarm> swarms;

    std::size_t active_particles() const {
        std::size_t n = 0;
        for (const auto& s : swarms)
            if (s.active) n += s.members.size();
        return n;
    }

    std::size_t particle_count() const {
        std::size_t n = 0;
        for (const auto& s : swarms) n += s.members.size();
        return n;
    }

    std::size_t active_swarms() const {
        return static_cast<std::size_t>(std::count_if(swarms.begin(), swarms.end(), [](const Subswarm& s) { return s.active; }));
    }

    double best_fitness() const {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& s : swarms) best = std::max(best, s.best_fitness);
        return best;
    }
};

/// Overlap iff the distance between the two global bests is strictly below both frozen radii.
inline bool detect_overlap(const Subswarm& a, const Subswarm& b) {
    const double d = distance(a.best_position, b.best_position);
    return d < a.initial_radius && d < b.initial_radius;
}

/// Single pass over index-ordered pairs; the worse swarm of an overlapping pair
/// (the later one on equal fitness) is dropped at once. Returns the number removed.
inline std::size_t remove_overlaps(PopulationState& state) {
    auto& swarms = state.swarms;
    std::vector<bool> removed(swarms.size(), false);
    for (std::size_t i = 0; i < swarms.size(); ++i) {
        for (std::size_t j = i + 1; j < swarms.size() && !removed[i]; ++j) {
            if (removed[j] || !detect_overlap(swarms[i], swarms[j])) continue;
            if (swarms[i].best_fitness < swarms[j].best_fitness)
                removed[i] = true;
            else
                removed[j] = true;
        }
    }
    std::size_t count = 0;
    std::vector<Subswarm> kept;
    kept.reserve(swarms.size());
    for (std::size_t i = 0; i < swarms.size(); ++i) {
        if (removed[i])
            ++count;
        else
            kept.push_back(std::move(swarms[i]));
    }
    swarms = std::move(kept);
    return count;
}

/// Add uniform noise in [-P, P]^D, P = p * (Ub - Lb), to every velocity of one
/// uniformly chosen swarm. A deactivated pick gets one PSO step right away so the
/// noise has an effect. Returns the index of the chosen swarm.
template <class Rng, class Eval>
std::size_t perturb(PopulationState& state, const AlgoConfig& cfg, const PsoParams& pso, const SearchSpace& space,
                    Rng& rng, Eval&& eval) {
    if (state.swarms.empty()) throw ContractViolation("perturb needs at least one subswarm");
    std::uniform_int_distribution<std::size_t> pick(0, state.swarms.size() - 1);
    const std::size_t chosen = pick(rng);
    Subswarm& swarm = state.swarms[chosen];

    const double range = cfg.perturbation * space.extent();
    if (range > 0.0) {
        std::uniform_real_distribution<double> noise(-range, range);
        for (auto& p : swarm.members)
            for (auto& v : p.velocity) v += noise(rng);
    }
    if (!swarm.active) detail::update_members(swarm, pso, space, rng, std::forward<Eval>(eval));
    return chosen;
}

/// Deactivate converged swarms, except any holding the population-wide best
/// (taken over all swarms, active or not). Returns the number deactivated.
inline std::size_t detect_and_deactivate(PopulationState& state, const AlgoConfig& cfg, std::size_t dims) {
    const double threshold = cfg.radius_for(dims);
    const double best = state.best_fitness();
    std::size_t count = 0;
    for (auto& s : state.swarms) {
        if (!s.active || s.best_fitness == best) continue;
        if (convergence_radius(s) < threshold) {
            s.active = false;
            ++count;
        }
    }
    return count;
}

inline bool diversity_triggered(const PopulationState& state, const AlgoConfig& cfg) {
    return static_cast<double>(state.active_particles()) <
           cfg.diversity_threshold * static_cast<double>(cfg.population_size());
}

/// Uniform position, zero velocity, evaluated once.
template <class Rng, class Eval>
Particle random_particle(const SearchSpace& space, Rng& rng, Eval&& eval) {
    Vector x = space.sample(rng);
    const double f = eval(std::span<const double>(x));
    return Particle::at(std::move(x), f);
}

/// Archive the best particle of each deactivated swarm, drop those swarms, top the
/// population back up to n * s with random particles and re-speciate.
///
/// Survivors keep their full state. Archived particles keep position and memory
/// but restart with zero velocity. If the budget runs out during the refill the
/// state is left speciated over whatever was gathered, then the signal propagates.
template <class Rng, class Eval>
void diversity_step(PopulationState& state, const AlgoConfig& cfg, const SearchSpace& space, Rng& rng,
                    Eval&& eval) {
    std::vector<Particle> archive;
    std::vector<Particle> pool;
    for (auto& s : state.swarms) {
        if (s.active) {
            for (auto& p : s.members) pool.push_back(std::move(p));
        } else if (!s.members.empty()) {
            Particle best = std::move(s.members[s.best_member()]);
            std::fill(best.velocity.begin(), best.velocity.end(), 0.0);
            archive.push_back(std::move(best));
        }
    }
    state.swarms.clear();
    for (auto& p : archive) pool.push_back(std::move(p));
    archive.clear();

    try {
        while (pool.size() < cfg.population_size()) pool.push_back(random_particle(space, rng, eval));
    } catch (const BudgetExhausted&) {
        if (!pool.empty()) state.swarms = speciate(std::move(pool), cfg.swarm_size);
        throw;
    }
    state.swarms = speciate(std::move(pool), cfg.swarm_size);
}

} // namespace pspso
