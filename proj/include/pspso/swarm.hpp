#pragma once

#include <pspso/error.hpp>
#include <pspso/problem.hpp>

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <vector>

namespace pspso {

/// How the inertia weight enters the velocity update.
enum class VelocityRule {
    inertia,      // v = w*v + c1*r1*(pbest - x) + c2*r2*(gbest - x)
    constriction, // v = w*(v + c1*r1*(pbest - x) + c2*r2*(gbest - x))
};

struct PsoParams {
    double inertia = 0.6;
    double cognitive = 2.83;
    double social = 2.83;
    // With w = 0.6 and c1 = c2 = 2.83 the inertia rule is divergent; the
    // constriction rule yields effective coefficients 0.6 / 1.7 / 1.7.
    VelocityRule rule = VelocityRule::constriction;
};

struct Particle {
    Vector position;
    Vector velocity;
    Vector best_position;
    double best_fitness = -std::numeric_limits<double>::infinity();

    /// Fresh particle at `position` with zero velocity; its memory is the first evaluation.
    static Particle at(Vector position, double fitness) {
        Particle p;
        p.velocity.assign(position.size(), 0.0);
        p.best_position = position;
        p.position = std::move(position);
        p.best_fitness = fitness;
        return p;
    }
};

/// One species. `best_*` is the subswarm's private global best.
struct Subswarm {
    std::vector<Particle> members;
    Vector best_position;
    double best_fitness = -std::numeric_limits<double>::infinity();
    double initial_radius = 0.0;
    bool active = true;

    /// Recompute the global best from member memories (first member wins ties).
    void refresh_best() {
        if (members.empty()) return;
        const Particle& best = members[best_member()];
        best_fitness = best.best_fitness;
        best_position = best.best_position;
    }

    /// Index of the member with the highest personal best (first on ties).
    std::size_t best_member() const {
        std::size_t best = 0;
        for (std::size_t i = 1; i < members.size(); ++i)
            if (members[i].best_fitness > members[best].best_fitness) best = i;
        return best;
    }
};

namespace detail {

inline Vector centroid(const std::vector<Particle>& members, Vector Particle::*field) {
    Vector c((members.front().*field).size(), 0.0);
    for (const auto& m : members)
        for (std::size_t k = 0; k < c.size(); ++k) c[k] += (m.*field)[k];
    for (auto& v : c) v /= static_cast<double>(members.size());
    return c;
}

inline double mean_distance(const std::vector<Particle>& members, Vector Particle::*field) {
    const Vector c = centroid(members, field);
    double sum = 0.0;
    for (const auto& m : members) sum += distance(m.*field, c);
    return sum / static_cast<double>(members.size());
}

} // namespace detail

/// Partition `population` into species of `species_size` around successively fitter heads.
///
/// Particles are ranked by personal-best fitness (stable, so index order breaks
/// ties). The fittest remaining particle becomes a head and takes the
/// `species_size - 1` remaining particles nearest to its personal best; this
/// repeats until the ranked list is empty, so the final species may be smaller.
inline std::vector<Subswarm> speciate(std::vector<Particle> population, std::size_t species_size) {
    if (species_size < 1) throw ConfigError("species size must be at least 1");
    if (population.empty()) throw ContractViolation("cannot speciate an empty population");

    std::vector<std::size_t> ranked(population.size());
    std::iota(ranked.begin(), ranked.end(), std::size_t{0});
    std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
        return population[a].best_fitness > population[b].best_fitness;
    });

    std::vector<Subswarm> species;
    std::vector<std::pair<double, std::size_t>> by_distance;
    while (!ranked.empty()) {
        const std::size_t head = ranked.front();
        ranked.erase(ranked.begin());

        by_distance.clear();
        for (std::size_t idx : ranked)
            by_distance.emplace_back(distance(population[idx].best_position, population[head].best_position), idx);
        const std::size_t take = std::min(species_size - 1, by_distance.size());
        std::partial_sort(by_distance.begin(), by_distance.begin() + static_cast<std::ptrdiff_t>(take),
                          by_distance.end());

        Subswarm s;
        s.members.push_back(std::move(population[head]));
        for (std::size_t i = 0; i < take; ++i) s.members.push_back(std::move(population[by_distance[i].second]));
        std::erase_if(ranked, [&](std::size_t idx) {
            return std::any_of(by_distance.begin(), by_distance.begin() + static_cast<std::ptrdiff_t>(take),
                               [idx](const auto& d) { return d.second == idx; });
        });

        s.initial_radius = detail::mean_distance(s.members, &Particle::position);
        s.best_position = s.members.front().best_position;
        s.best_fitness = s.members.front().best_fitness;
        s.active = true;
        species.push_back(std::move(s));
    }
    return species;
}

/// Velocity and position update with given random factors. Clamped dimensions lose their velocity.
inline void move_particle(Particle& p, std::span<const double> guide, const PsoParams& params,
                          const SearchSpace& space, double r1, double r2) {
    for (std::size_t k = 0; k < p.position.size(); ++k) {
        double& v = p.velocity[k];
        double& x = p.position[k];
        const double pull = params.cognitive * r1 * (p.best_position[k] - x) + params.social * r2 * (guide[k] - x);
        v = params.rule == VelocityRule::inertia ? params.inertia * v + pull : params.inertia * (v + pull);
        x += v;
        if (x < space.lower || x > space.upper) {
            x = space.clamp(x);
            v = 0.0;
        }
    }
}

namespace detail {

/// One synchronous PSO pass over all members, regardless of the active flag.
template <class Rng, class Eval>
void update_members(Subswarm& swarm, const PsoParams& params, const SearchSpace& space, Rng& rng, Eval&& eval) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Vector guide = swarm.best_position;
    try {
        for (auto& p : swarm.members) {
            const double r1 = unit(rng);
            const double r2 = unit(rng);
            move_particle(p, guide, params, space, r1, r2);
            const double f = eval(std::span<const double>(p.position));
            if (f > p.best_fitness) {
                p.best_fitness = f;
                p.best_position = p.position;
            }
        }
    } catch (...) {
        swarm.refresh_best();
        throw;
    }
    swarm.refresh_best();
}

} // namespace detail

/// PSO step of an active subswarm. `eval` maps a position to its fitness and may
/// throw BudgetExhausted, which propagates after the subswarm best is refreshed.
template <class Rng, class Eval>
void pso_step(Subswarm& swarm, const PsoParams& params, const SearchSpace& space, Rng& rng, Eval&& eval) {
    if (!swarm.active) throw ContractViolation("pso_step on a deactivated subswarm");
    detail::update_members(swarm, params, space, rng, std::forward<Eval>(eval));
}

/// Mean distance of member personal bests from their centroid.
inline double convergence_radius(const Subswarm& swarm) {
    if (swarm.members.empty()) throw ContractViolation("convergence radius of an empty subswarm");
    return detail::mean_distance(swarm.members, &Particle::best_position);
}

} // namespace pspso
