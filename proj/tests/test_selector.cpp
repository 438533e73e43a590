#include "doctest.h"

#include "cogsel/oracle.hpp"
#include "cogsel/selector.hpp"
#include "cogsel/waterfill.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace cogsel;
using cogsel::test::make_instance;

namespace {

// q = [0.9, 0.8, 0.1], sigma^2 = [5, 1, 0.1], P = 1, L = 2.
// Hand algebra: S0 = {0, 1}; walk gives lambda_1 = (1 + 0.8) / 0.8 = 2.25
// (channel 0 at 5 stays dry). Scores at 2.25: ch1 = 1.0, ch2 = 0.215, ch0 < 0
// -> S1 = {1, 2}; lambda_2 = (1 + 0.8 + 0.01) / 0.9 = 1.81 / 0.9; same set.
Instance three_channel() { return make_instance({0.9, 0.8, 0.1}, {5.0, 1.0, 0.1}, 1.0, 2); }

constexpr double kLambda2 = 1.81 / 0.9;

}  // namespace

TEST_SUITE("selector") {

TEST_CASE("coarse iteration trace on the three-channel example") {
    const auto inst = three_channel();
    const auto r = coarse_optimize(inst);
    CHECK(r.initial == SensingSet({0, 1}));
    REQUIRE(r.trace.size() == 2);
    CHECK(r.trace[0].water_level == doctest::Approx(2.25).epsilon(1e-15));
    CHECK(r.trace[0].selected == SensingSet({1, 2}));
    CHECK(r.trace[1].water_level == doctest::Approx(kLambda2).epsilon(1e-15));
    CHECK(r.trace[1].selected == SensingSet({1, 2}));
    CHECK(r.iterations == 2);
    CHECK_FALSE(r.cycled);

    CHECK(r.sensing == SensingSet({1, 2}));
    CHECK(r.lambda_min == doctest::Approx(2.01111).epsilon(1e-5));
    CHECK(r.alloc.powers[0] == 0.0);
    CHECK(r.alloc.powers[1] == doctest::Approx(kLambda2 - 1.0).epsilon(1e-14));
    CHECK(r.alloc.powers[2] == doctest::Approx(kLambda2 - 0.1).epsilon(1e-14));
    const double cap = 0.4 * std::log(kLambda2) + 0.05 * std::log(kLambda2 / 0.1);
    CHECK(r.alloc.capacity_nats == doctest::Approx(cap).epsilon(1e-14));
    CHECK(r.alloc.capacity_nats == doctest::Approx(0.4296).epsilon(1e-4));
    CHECK(r.method == Method::coarse);
    CHECK(r.certified_optimal);

    // Agrees with brute force.
    const auto e = exhaustive_search(inst);
    CHECK(e.sensing == r.sensing);
}

TEST_CASE("sensing every channel is plain water-filling") {
    const auto inst = make_instance({0.7, 0.4, 0.9}, {1.0, 1.5, 0.8}, 5.0, 3);
    const auto r = coarse_optimize(inst);
    const auto plain = solve_waterfill(inst, SensingSet({0, 1, 2}));
    CHECK(r.sensing == SensingSet({0, 1, 2}));
    CHECK(r.iterations == 1);
    CHECK(r.alloc.water_level == plain.water_level);
    CHECK(r.alloc.capacity_nats == plain.capacity_nats);
    CHECK(lemma1_certificate(inst, r));
}

TEST_CASE("identical channels: first L indices, flat level") {
    const auto inst = make_instance({0.5, 0.5, 0.5, 0.5, 0.5}, {2.0, 2.0, 2.0, 2.0, 2.0}, 3.0, 3);
    const auto r = coarse_optimize(inst);
    CHECK(r.sensing == SensingSet({0, 1, 2}));
    CHECK(r.lambda_min == doctest::Approx(2.0 + 3.0 / (3 * 0.5)).epsilon(1e-15));
    CHECK_FALSE(lemma1_certificate(inst, r));
    CHECK(candidate_set(inst, r.lambda_min) == SensingSet({0, 1, 2, 3, 4}));

    const auto f = fine_optimize(inst, r);
    CHECK(f.sensing == r.sensing);
    CHECK(f.method == Method::fine);
    CHECK(fine_lambda(inst, SensingSet({1, 3, 4})) == doctest::Approx(2.0 + 3.0 / 1.5).epsilon(1e-15));

    const auto j = joint_optimize(inst);
    CHECK_FALSE(j.certified_optimal);
    CHECK(j.alloc.capacity_nats == doctest::Approx(exhaustive_search(inst).alloc.capacity_nats).epsilon(1e-14));
}

TEST_CASE("coarse needs a channel with positive availability") {
    CHECK_THROWS_AS(coarse_optimize(make_instance({0.0, 0.0}, {1.0, 2.0}, 1.0, 1)), Error);
}

TEST_CASE("lemma1 certificate") {
    const auto inst = three_channel();
    const auto r = coarse_optimize(inst);
    CHECK(lemma1_certificate(inst, r));

    OptResult everything;
    everything.sensing = SensingSet({0, 1, 2});
    everything.lambda_min = 100.0;
    CHECK(lemma1_certificate(make_instance({0.1, 0.1, 0.1}, {1, 1, 1}, 1.0, 3), everything));
}

TEST_CASE("candidate set") {
    const auto inst = three_channel();
    CHECK(candidate_set(inst, kLambda2) == SensingSet({1, 2}));
    CHECK(candidate_set(inst, 5.0) == SensingSet({0, 1, 2}));
    CHECK(candidate_set(inst, 0.05).empty());
}

TEST_CASE("fine_lambda") {
    CHECK(fine_lambda(make_instance({1.0}, {1.0}, 1.0, 1), SensingSet({0})) == doctest::Approx(2.0));
    const auto inst = three_channel();
    CHECK(fine_lambda(inst, SensingSet({1, 2})) == doctest::Approx(kLambda2).epsilon(1e-15));
    CHECK(fine_lambda(inst, SensingSet({1, 2})) == doctest::Approx(coarse_optimize(inst).lambda_min).epsilon(1e-15));
    CHECK_THROWS_AS(fine_lambda(make_instance({0.0}, {1.0}, 1.0, 1), SensingSet({0})), DegenerateSetError);
}

TEST_CASE("fine_lambda equals the water level when every channel is wet") {
    std::mt19937_64 gen(31);
    int checked = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        auto inst = cogsel::test::random_instance(gen, 8, 5);
        auto s = cogsel::test::random_subset(gen, 8, 5);
        const double closed = fine_lambda(inst, s);
        bool all_wet = true;
        for (std::size_t n : s) all_wet = all_wet && inst.channels[n].noise_var <= closed;
        if (!all_wet) continue;
        ++checked;
        CHECK(std::abs(solve_waterfill(inst, s).water_level - closed) <= 1e-10 * std::max(1.0, closed));
    }
    CHECK(checked > 200);
}

TEST_CASE("fine_score values") {
    CHECK(fine_score(3.0, 3.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(std::abs(fine_score(3.0, 3.0)) < 1e-15);
    CHECK(fine_score(2.0, 1e-12) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(fine_score(4.0, 2.0) == doctest::Approx(4.0 * (1.0 - std::exp(0.5) / 2.0)).epsilon(1e-14));
    CHECK(fine_score(4.0, 2.0) / 4.0 == doctest::Approx(0.17564).epsilon(1e-4));
}

TEST_CASE("fine_score sign matches the admissibility inequality") {
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 5000; ++i) {
        const double lambda = std::pow(10.0, u(gen));
        const double noise = lambda * std::pow(10.0, u(gen) / 3.0);
        if (std::abs(noise / lambda - 1.0) < 1e-6) continue;
        const bool admissible = lambda > noise * std::exp(1.0 - noise / lambda);
        CHECK((fine_score(lambda, noise) > 0.0) == admissible);
        // The ranking key has the same sign.
        CHECK((fine_rank_key(lambda, {0.5, noise}) > 0.0) == admissible);
    }
}

TEST_CASE("fine stage keeps the coarse result in the certified regime") {
    const auto inst = three_channel();
    const auto c = coarse_optimize(inst);
    CHECK(candidate_set(inst, c.lambda_min) == SensingSet({1, 2}));
    const auto f = fine_optimize(inst, c);
    CHECK(f.sensing == c.sensing);
    CHECK(f.alloc.capacity_nats == c.alloc.capacity_nats);
    const auto j = joint_optimize(inst);
    CHECK(j.certified_optimal);
    CHECK(j.sensing == SensingSet({1, 2}));
}

TEST_CASE("fine matches the oracle on the seeded 20 dB instance") {
    const auto inst = generate_instance(7, 16, 8, 20.0, 4);
    const auto c = coarse_optimize(inst);
    const auto f = fine_optimize(inst, c);
    const auto e = exhaustive_search(inst);
    CHECK(cogsel::test::rel_close(f.alloc.capacity_nats, e.alloc.capacity_nats, 1e-6));
    CHECK(f.alloc.capacity_nats >= c.alloc.capacity_nats);
}

TEST_CASE("unweighted ranking orders admissible candidates by noise only") {
    const auto inst = generate_instance(7, 16, 8, 20.0, 4);
    const auto c = coarse_optimize(inst);
    const auto f = fine_optimize(inst, c, FineRanking::unweighted);
    const auto pool = candidate_set(inst, c.lambda_min);
    for (std::size_t n : pool) {
        if (f.sensing.contains(n)) continue;
        for (std::size_t m : f.sensing) CHECK(inst.channels[m].noise_var <= inst.channels[n].noise_var);
    }
}

TEST_CASE("selector invariants on random instances") {
    std::mt19937_64 gen(99);
    int monotone_misses = 0;
    int certified = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 4 + trial % 7;
        const int l = 1 + trial % n;
        const auto inst = cogsel::test::random_instance(gen, n, l);
        const auto c = coarse_optimize(inst);
        const auto f = fine_optimize(inst, c);
        const auto e = exhaustive_search(inst);

        CHECK(c.iterations <= 64);
        CHECK(f.iterations <= 64);
        CHECK(c.sensing.size() <= static_cast<std::size_t>(l));
        CHECK(f.sensing.size() <= static_cast<std::size_t>(l));

        // Allocation is re-derivable from the set.
        const auto wf = solve_waterfill(inst, c.sensing);
        CHECK(wf.water_level == c.alloc.water_level);
        CHECK(wf.capacity_nats == c.alloc.capacity_nats);

        // Fixed point: one more Step II + III reproduces the set.
        if (!c.cycled) {
            CHECK(c.trace.back().selected == c.sensing);
            for (std::size_t k = 1; k < c.trace.size(); ++k) {
                if (c.trace[k].water_level > c.trace[k - 1].water_level * (1 + 1e-12)) ++monotone_misses;
            }
        }

        // Fine selection stays inside the candidate set.
        const auto pool = candidate_set(inst, c.lambda_min);
        for (std::size_t m : f.sensing) CHECK(pool.contains(m));

        // Oracle dominates; certificate is sound.
        CHECK(e.alloc.capacity_nats >= c.alloc.capacity_nats - 1e-12);
        CHECK(e.alloc.capacity_nats >= f.alloc.capacity_nats - 1e-12);
        if (lemma1_certificate(inst, c)) {
            ++certified;
            CHECK(cogsel::test::rel_close(c.alloc.capacity_nats, e.alloc.capacity_nats, 1e-9));
        }
        const auto j = joint_optimize(inst);
        CHECK(j.alloc.capacity_nats == std::max(c.alloc.capacity_nats, f.alloc.capacity_nats));
        CHECK(j.certified_optimal == lemma1_certificate(inst, c));
    }
    CHECK(certified > 0);
    if (monotone_misses > 0) MESSAGE("coarse water level rose within an iteration on ", monotone_misses, " steps");
}

TEST_CASE("method names") {
    CHECK(parse_method("coarse") == Method::coarse);
    CHECK(parse_method("fine") == Method::fine);
    CHECK(parse_method("exhaustive") == Method::exhaustive);
    CHECK(to_string(Method::fine) == "fine");
    CHECK_THROWS_AS(parse_method("greedy"), Error);
}

}  // TEST_SUITE
