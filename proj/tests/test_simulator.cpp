#include "doctest.h"

#include "cogsel/selector.hpp"
#include "cogsel/simulator.hpp"
#include "cogsel/waterfill.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace cogsel;
using cogsel::test::make_instance;

TEST_SUITE("simulator") {

TEST_CASE("always-free channels reproduce the analytical rate exactly") {
    const auto inst = make_instance({1.0, 1.0, 1.0}, {0.5, 1.0, 3.0}, 4.0, 3);
    const SensingSet s({0, 1, 2});
    const auto alloc = solve_waterfill(inst, s);
    const auto r = simulate(inst, s, alloc, 1000, 5);
    CHECK(r.empirical_rate == alloc.capacity_nats);
    CHECK(r.rate_stderr == 0.0);
    CHECK(r.empirical_avg_power == doctest::Approx(inst.power_budget).epsilon(1e-12));
    CHECK(r.slots == 1000);
}

TEST_CASE("never-free channels carry nothing") {
    const auto inst = make_instance({0.0, 0.0}, {0.5, 1.0}, 4.0, 2);
    Allocation alloc{3.0, {2.5, 2.0}, 0.0};
    const auto r = simulate(inst, SensingSet({0, 1}), alloc, 500, 1);
    CHECK(r.empirical_rate == 0.0);
    CHECK(r.empirical_avg_power == 0.0);
}

TEST_CASE("single slot has unbounded standard error") {
    const auto inst = generate_instance(7, 16, 8, 10.0, 4);
    const auto opt = coarse_optimize(inst);
    const auto r = simulate(inst, opt.sensing, opt.alloc, 1, 3);
    CHECK(std::isinf(r.rate_stderr));
    CHECK(r.slots == 1);
}

TEST_CASE("deterministic in the seed") {
    const auto inst = generate_instance(7, 16, 8, 10.0, 4);
    const auto opt = joint_optimize(inst);
    const auto a = simulate(inst, opt.sensing, opt.alloc, 2000, 17);
    const auto b = simulate(inst, opt.sensing, opt.alloc, 2000, 17);
    const auto c = simulate(inst, opt.sensing, opt.alloc, 2000, 18);
    CHECK(a.empirical_rate == b.empirical_rate);
    CHECK(a.rate_stderr == b.rate_stderr);
    CHECK(a.empirical_avg_power == b.empirical_avg_power);
    CHECK(a.empirical_rate != c.empirical_rate);
}

TEST_CASE("golden instance falls inside the three-sigma band") {
    const auto inst = generate_instance(7, 16, 8, 10.0, 4);
    const auto opt = joint_optimize(inst);
    const auto r = simulate(inst, opt.sensing, opt.alloc, 100000, 1);
    CHECK(r.within_band(opt.alloc.capacity_nats));
    CHECK(r.empirical_avg_power <= inst.power_budget + 3.0 * r.power_stderr);
}

TEST_CASE("inconsistent allocation is rejected") {
    const auto inst = make_instance({0.5, 0.5}, {1.0, 1.0}, 1.0, 1);
    Allocation alloc{2.0, {1.0, 1.0}, 0.0};
    CHECK_THROWS_AS(simulate(inst, SensingSet({0}), alloc, 10, 1), Error);
    CHECK_THROWS_AS(simulate(inst, SensingSet({0, 1}), alloc, 10, 1), ValidationError);
    CHECK_THROWS_AS(simulate(inst, SensingSet({0}), Allocation{2.0, {1.0}, 0.0}, 10, 1), Error);
    CHECK_THROWS_AS(simulate(inst, SensingSet({0}), Allocation{2.0, {1.0, 0.0}, 0.0}, 0, 1), Error);
}

}  // TEST_SUITE
