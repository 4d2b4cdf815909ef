#include <pspso/swarm.hpp>

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace pspso;

namespace {

Particle particle_1d(double x, double fitness) { return Particle::at({x}, fitness); }

const SearchSpace line{1, -100.0, 100.0};

std::vector<Particle> random_population(std::mt19937_64& rng, std::size_t count, std::size_t dims) {
    SearchSpace space{dims, -100.0, 100.0};
    std::uniform_real_distribution<double> fit(0.0, 100.0);
    std::vector<Particle> pop;
    for (std::size_t i = 0; i < count; ++i) pop.push_back(Particle::at(space.sample(rng), fit(rng)));
    return pop;
}

} // namespace

TEST(Speciate, ExactlyOneSpecies) {
    std::vector<Particle> pop{particle_1d(0, 1), particle_1d(5, 3), particle_1d(9, 2)};
    auto species = speciate(pop, 3);
    ASSERT_EQ(species.size(), 1u);
    EXPECT_EQ(species[0].members.size(), 3u);
    EXPECT_DOUBLE_EQ(species[0].best_fitness, 3.0);
    EXPECT_EQ(species[0].best_position, Vector{5});
    EXPECT_TRUE(species[0].active);
}

TEST(Speciate, HandTracedRankedList) {
    // Ranked by fitness: 0 (10), 5 (9), 1 (8), 6 (7). Head 0 takes nearest 1;
    // head 5 takes 6.
    std::vector<Particle> pop{particle_1d(0, 10), particle_1d(1, 8), particle_1d(5, 9), particle_1d(6, 7)};
    auto species = speciate(pop, 2);
    ASSERT_EQ(species.size(), 2u);
    EXPECT_EQ(species[0].members[0].position, Vector{0});
    EXPECT_EQ(species[0].members[1].position, Vector{1});
    EXPECT_EQ(species[1].members[0].position, Vector{5});
    EXPECT_EQ(species[1].members[1].position, Vector{6});
    // center 0.5, mean distance 0.5
    EXPECT_DOUBLE_EQ(species[0].initial_radius, 0.5);
    EXPECT_DOUBLE_EQ(species[1].best_fitness, 9.0);
}

TEST(Speciate, SeventyIntoTen) {
    std::mt19937_64 rng(2);
    auto species = speciate(random_population(rng, 70, 5), 7);
    ASSERT_EQ(species.size(), 10u);
    for (const auto& s : species) EXPECT_EQ(s.members.size(), 7u);
}

TEST(Speciate, RemainderGoesToLastSpecies) {
    std::mt19937_64 rng(3);
    auto species = speciate(random_population(rng, 10, 2), 4);
    ASSERT_EQ(species.size(), 3u);
    EXPECT_EQ(species.back().members.size(), 2u);
}

TEST(Speciate, FitnessTiesKeepIndexOrder) {
    std::vector<Particle> pop{particle_1d(3, 1), particle_1d(-3, 1), particle_1d(50, 1)};
    auto species = speciate(pop, 1);
    ASSERT_EQ(species.size(), 3u);
    EXPECT_EQ(species[0].members[0].position, Vector{3});
    EXPECT_EQ(species[1].members[0].position, Vector{-3});
    EXPECT_EQ(species[2].members[0].position, Vector{50});
}

TEST(Speciate, RejectsBadInput) {
    EXPECT_THROW(speciate({particle_1d(0, 0)}, 0), ConfigError);
    EXPECT_THROW(speciate({}, 3), ContractViolation);
}

TEST(Speciate, PartitionAndHeadDominanceProperty) {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<std::size_t> count(1, 40), size(1, 9), dims(1, 4);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = count(rng), s = size(rng);
        auto pop = random_population(rng, n, dims(rng));
        std::multiset<double> fits;
        for (const auto& p : pop) fits.insert(p.best_fitness);

        auto species = speciate(pop, s);
        EXPECT_EQ(species.size(), (n + s - 1) / s);
        std::multiset<double> seen;
        double prev_head = std::numeric_limits<double>::infinity();
        for (const auto& sp : species) {
            const double head = sp.members.front().best_fitness;
            EXPECT_LE(head, prev_head);
            prev_head = head;
            EXPECT_DOUBLE_EQ(sp.best_fitness, head);
            for (const auto& m : sp.members) {
                EXPECT_LE(m.best_fitness, head);
                seen.insert(m.best_fitness);
            }
        }
        EXPECT_EQ(seen, fits);
    }
}

TEST(MoveParticle, ZeroCoefficientsFreezeParticle) {
    Particle p = particle_1d(3, 0);
    p.velocity = {4};
    p.best_position = {10};
    const Vector gbest{-20};
    move_particle(p, gbest, {0, 0, 0, VelocityRule::inertia}, line, 0.7, 0.3);
    EXPECT_EQ(p.velocity, Vector{0});
    EXPECT_EQ(p.position, Vector{3});
}

TEST(MoveParticle, NoAttractionAtOwnBest) {
    Particle p = particle_1d(12, 5);
    for (double r : {0.0, 0.4, 1.0}) {
        move_particle(p, p.best_position, PsoParams{}, line, r, 1 - r);
        EXPECT_EQ(p.velocity, Vector{0});
        EXPECT_EQ(p.position, Vector{12});
    }
}

TEST(MoveParticle, InertiaRuleHandExample) {
    // v = 0.5*2 + 2*1*(4-0) + 2*1*(10-0) = 29
    Particle p = particle_1d(0, 0);
    p.velocity = {2};
    p.best_position = {4};
    move_particle(p, Vector{10}, {0.5, 2, 2, VelocityRule::inertia}, line, 1.0, 1.0);
    EXPECT_DOUBLE_EQ(p.velocity[0], 29.0);
    EXPECT_DOUBLE_EQ(p.position[0], 29.0);
}

TEST(MoveParticle, ConstrictionRuleHandExample) {
    // v = 0.5*(2 + 8 + 20) = 15
    Particle p = particle_1d(0, 0);
    p.velocity = {2};
    p.best_position = {4};
    move_particle(p, Vector{10}, {0.5, 2, 2, VelocityRule::constriction}, line, 1.0, 1.0);
    EXPECT_DOUBLE_EQ(p.velocity[0], 15.0);
    EXPECT_DOUBLE_EQ(p.position[0], 15.0);
}

TEST(MoveParticle, ClampZeroesVelocityOfClampedDimension) {
    Particle p = Particle::at({95, 0}, 0);
    p.velocity = {20, 1};
    move_particle(p, p.best_position, {1, 0, 0, VelocityRule::inertia}, {2, -100, 100}, 0, 0);
    EXPECT_EQ(p.position, (Vector{100, 1}));
    EXPECT_EQ(p.velocity, (Vector{0, 1}));
}

TEST(PsoStep, RefreshesBestAndPersonalMemory) {
    Subswarm s = speciate({particle_1d(-10, -10), particle_1d(20, -20)}, 2).front();
    std::mt19937_64 rng(1);
    auto eval = [](std::span<const double> x) { return -std::abs(x[0]); };
    for (int i = 0; i < 30; ++i) pso_step(s, PsoParams{}, line, rng, eval);
    for (const auto& m : s.members) EXPECT_DOUBLE_EQ(m.best_fitness, eval(m.best_position));
    const auto best = s.members[s.best_member()];
    EXPECT_DOUBLE_EQ(s.best_fitness, best.best_fitness);
    EXPECT_GT(s.best_fitness, -10.0);
}

TEST(PsoStep, RejectsDeactivatedSwarm) {
    Subswarm s = speciate({particle_1d(0, 0)}, 1).front();
    s.active = false;
    std::mt19937_64 rng(1);
    EXPECT_THROW(pso_step(s, PsoParams{}, line, rng, [](std::span<const double>) { return 0.0; }), ContractViolation);
}

TEST(PsoStep, BudgetSignalPropagatesWithConsistentBest) {
    Subswarm s = speciate({particle_1d(-50, -50), particle_1d(50, -50), particle_1d(0, -60)}, 3).front();
    std::mt19937_64 rng(1);
    int calls = 0;
    auto eval = [&](std::span<const double> x) {
        if (++calls > 2) throw BudgetExhausted();
        return 100.0 - std::abs(x[0]);
    };
    EXPECT_THROW(pso_step(s, PsoParams{}, line, rng, eval), BudgetExhausted);
    EXPECT_DOUBLE_EQ(s.best_fitness, s.members[s.best_member()].best_fitness);
}

TEST(PsoStep, BoundsAndMonotoneBestProperty) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> coef(0.0, 3.0), vel(-400.0, 400.0);
    for (int trial = 0; trial < 300; ++trial) {
        SearchSpace space{1 + static_cast<std::size_t>(trial % 6), -50.0, 50.0};
        std::vector<Particle> pop;
        for (int i = 0; i < 5; ++i) {
            Vector x = space.sample(rng);
            auto p = Particle::at(x, -distance(x, Vector(space.dims, 7.0)));
            for (auto& v : p.velocity) v = vel(rng);
            pop.push_back(p);
        }
        Subswarm s = speciate(pop, 5).front();
        PsoParams params{coef(rng), coef(rng), coef(rng), trial % 2 ? VelocityRule::inertia : VelocityRule::constriction};
        auto eval = [&](std::span<const double> x) { return -distance(x, Vector(space.dims, 7.0)); };
        for (int step = 0; step < 10; ++step) {
            const double before = s.best_fitness;
            pso_step(s, params, space, rng, eval);
            EXPECT_GE(s.best_fitness, before);
            for (const auto& m : s.members) {
                EXPECT_TRUE(space.contains(m.position));
                EXPECT_TRUE(space.contains(m.best_position));
            }
        }
    }
}

TEST(PsoStep, DeterministicForSeed) {
    auto run = [] {
        std::mt19937_64 rng(17);
        SearchSpace space{3, -100, 100};
        std::vector<Particle> pop;
        auto eval = [](std::span<const double> x) { return -distance(x, Vector{1, 2, 3}); };
        for (int i = 0; i < 7; ++i) {
            auto x = space.sample(rng);
            pop.push_back(Particle::at(x, eval(x)));
        }
        Subswarm s = speciate(pop, 7).front();
        for (int i = 0; i < 20; ++i) pso_step(s, PsoParams{}, space, rng, eval);
        return s.members.back().position;
    };
    EXPECT_EQ(run(), run());
}

TEST(ConvergenceRadius, Examples) {
    Subswarm s;
    s.members = {particle_1d(4, 0), particle_1d(4, 0)};
    EXPECT_DOUBLE_EQ(convergence_radius(s), 0.0);
    s.members = {particle_1d(0, 0), particle_1d(2, 0)};
    EXPECT_DOUBLE_EQ(convergence_radius(s), 1.0);
    EXPECT_THROW(convergence_radius(Subswarm{}), ContractViolation);
}

TEST(ConvergenceRadius, UsesPersonalBestsAndIsTranslationInvariant) {
    std::mt19937_64 rng(8);
    SearchSpace space{4, -10, 10};
    Subswarm s;
    for (int i = 0; i < 6; ++i) {
        auto p = Particle::at(space.sample(rng), 0);
        p.position = space.sample(rng); // current position must not matter
        s.members.push_back(p);
    }
    const double r = convergence_radius(s);
    Subswarm shifted = s;
    for (auto& m : shifted.members)
        for (auto& v : m.best_position) v += 3.25;
    EXPECT_NEAR(convergence_radius(shifted), r, 1e-12);
}
