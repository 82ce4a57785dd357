#include <cmath>
#include <cstdlib>
#include <vector>

#include <doctest.h>

#include "helpers.hpp"
#include "sta/cost.hpp"
#include "sta/errors.hpp"
#include "sta/optimize.hpp"

using namespace sta;

namespace {

bool same_params(const PulseParameters& a, const PulseParameters& b) {
    if (a.T != b.T || a.a != b.a || a.t0 != b.t0 || a.w != b.w) return false;
    return true;
}

PulseParameters two_gaussian_start(double T) {
    PulseParameters p;
    p.T = T;
    p.a = {0.1, -0.1};
    p.t0 = {-0.05 * T, 0.05 * T};
    p.w = {0.1 * T, 0.1 * T};
    return p;
}

}  // namespace

TEST_SUITE("optimize") {

TEST_CASE("seed box rejects empty ranges") {
    SeedBox box;
    box.a_lo = 0.5;
    box.a_hi = 0.5;
    CHECK_THROWS_AS(box.validate(), ValidationError);
    box = SeedBox{};
    box.w_lo = -0.1;
    CHECK_THROWS_AS(box.validate(), ValidationError);
    box = SeedBox{};
    box.t0_lo = 0.6;
    CHECK_THROWS_AS(box.validate(), ValidationError);
    CHECK_NOTHROW(SeedBox{}.validate());
}

TEST_CASE("seed streams are reproducible and stay in the box") {
    const SeedBox box;
    const double T = 0.25e-3;
    SeedStream s1(box, T, 3, 401);
    SeedStream s2(box, T, 3, 401);
    for (int i = 0; i < 50; ++i) {
        const auto p1 = s1.next();
        const auto p2 = s2.next();
        CHECK(same_params(p1, p2));
        for (int k = 0; k < 3; ++k) {
            CHECK(p1.a[k] >= box.a_lo);
            CHECK(p1.a[k] < box.a_hi);
            CHECK(p1.t0[k] >= box.t0_lo * T);
            CHECK(p1.t0[k] < box.t0_hi * T);
            CHECK(p1.w[k] >= box.w_lo * T);
            CHECK(p1.w[k] < box.w_hi * T);
        }
    }
    CHECK(s1.produced() == 50);

    SeedBox other = box;
    other.rng_seed = 2;
    SeedStream s3(other, T, 3, 401);
    CHECK_FALSE(same_params(s1.next(), s3.next()));
}

TEST_CASE("seed generation validates its inputs") {
    const SeedBox box;
    CHECK_THROWS_AS(generate_seeds(box, 0, 0.25e-3, 2), ValidationError);
    CHECK_THROWS_AS(SeedStream(box, 0.0, 2), ValidationError);
    CHECK_THROWS_AS(SeedStream(box, 0.25e-3, -1), ValidationError);

    const auto seeds = generate_seeds(box, 7, 0.25e-3, 2, 401);
    CHECK(seeds.size() == 7);
    for (const auto& p : seeds) CHECK(p.n_gaussians() == 2);

    // zero free Gaussians is legal: the stream returns the bare reference
    const auto flat = generate_seeds(box, 3, 0.25e-3, 0, 401);
    for (const auto& p : flat) CHECK(p.n_gaussians() == 0);
}

TEST_CASE("a hostile box trips the resample guard") {
    SeedBox box;
    box.a_lo = -1.0;
    box.a_hi = -0.95;
    box.t0_lo = -0.05;
    box.t0_hi = 0.05;
    box.w_lo = 0.45;
    box.w_hi = 0.5;
    SeedStream stream(box, 0.25e-3, 2, 401);
    bool tripped = false;
    try {
        for (int i = 0; i < 500; ++i) stream.next();
    } catch (const Error&) {
        tripped = true;
    }
    CHECK(tripped);
    CHECK(stream.degenerate() > stream.produced());
}

TEST_CASE("screening keeps the cheapest candidates in order") {
    const auto cfg = test::default_config(401);
    const CostModel cost;
    SeedBox box;
    box.rng_seed = 11;
    const auto seeds = generate_seeds(box, 40, 0.25e-3, 2, 401);

    const auto result = screen(seeds, cfg, cost, 10);
    CHECK(result.n_evaluated == 40);
    CHECK(result.rows.size() <= 10);
    REQUIRE(result.rows.size() >= 2);
    for (std::size_t i = 1; i < result.rows.size(); ++i)
        CHECK(result.rows[i].second.C >= result.rows[i - 1].second.C);
    for (std::size_t i = 0; i < result.rows.size(); i += 4) {
        const int idx = result.rows[i].first;
        REQUIRE(idx >= 0);
        REQUIRE(idx < 40);
        const auto direct = evaluate_candidate(seeds[idx], cfg, cost);
        CHECK(direct.C == result.rows[i].second.C);
    }

    CHECK_THROWS_AS(screen(seeds, cfg, cost, 41), ValidationError);

    // keep == count returns everything that evaluated cleanly
    const auto all = screen(seeds, cfg, cost, 40);
    CHECK(static_cast<long>(all.rows.size()) ==
          all.n_evaluated - all.n_failed);
}

TEST_CASE("screening does not depend on the worker count") {
    const auto cfg = test::default_config(401);
    const CostModel cost;
    SeedBox box;
    box.rng_seed = 3;
    const auto seeds = generate_seeds(box, 24, 0.25e-3, 2, 401);
    const auto serial = screen(seeds, cfg, cost, 8, 1);
    const auto parallel = screen(seeds, cfg, cost, 8, 3);
    REQUIRE(serial.rows.size() == parallel.rows.size());
    for (std::size_t i = 0; i < serial.rows.size(); ++i) {
        CHECK(serial.rows[i].first == parallel.rows[i].first);
        CHECK(serial.rows[i].second.C == parallel.rows[i].second.C);
    }
}

TEST_CASE("unit budget evaluates the start and stops") {
    const auto cfg = test::default_config(401);
    const CostModel cost;
    const auto start = two_gaussian_start(0.25e-3);
    const auto trace = local_minimize(start, cfg, cost, 1);
    CHECK(trace.evaluations == 1);
    CHECK(trace.no_improvement);
    REQUIRE(trace.points.size() == 1);
    CHECK(trace.points[0].C == trace.best.C);
    CHECK(trace.best.C == evaluate_candidate(start, cfg, cost).C);
    CHECK(same_params(trace.best.params, start));

    CHECK_THROWS_AS(local_minimize(start, cfg, cost, 0), ValidationError);
}

TEST_CASE("descent traces are monotone and land in the box") {
    const auto cfg = test::default_config(401);
    const CostModel cost;
    const SeedBox box;
    const double T = 0.25e-3;
    const auto start = two_gaussian_start(T);
    const auto trace = local_minimize(start, cfg, cost, 200, box, true);

    CHECK(trace.evaluations <= 200);
    REQUIRE(!trace.points.empty());
    for (std::size_t i = 1; i < trace.points.size(); ++i)
        CHECK(trace.points[i].C <= trace.points[i - 1].C);
    CHECK(trace.best.C == trace.points.back().C);
    CHECK(trace.best.C <= evaluate_candidate(start, cfg, cost).C);
    CHECK(trace.best.C == evaluate_candidate(trace.best.params, cfg, cost).C);

    const auto& p = trace.best.params;
    for (int k = 0; k < p.n_gaussians(); ++k) {
        CHECK(p.a[k] >= box.a_lo);
        CHECK(p.a[k] <= box.a_hi);
        CHECK(p.t0[k] >= box.t0_lo * T);
        CHECK(p.t0[k] <= box.t0_hi * T);
        CHECK(p.w[k] >= box.w_lo * T);
        CHECK(p.w[k] <= box.w_hi * T);
    }
}

TEST_CASE("a bad start is always improved") {
    const auto cfg = test::default_config(401);
    const CostModel cost;
    PulseParameters start;
    start.T = 0.25e-3;
    start.a = {0.5, 0.5};
    start.t0 = {-0.1 * start.T, 0.1 * start.T};
    start.w = {0.15 * start.T, 0.15 * start.T};
    const double c_init = evaluate_candidate(start, cfg, cost).C;
    const auto trace = local_minimize(start, cfg, cost, 250);
    CHECK(trace.best.C < c_init);
}

TEST_CASE("convergence is reported before the budget runs out") {
    const auto cfg = test::default_config(401);
    const CostModel cost;
    PulseParameters start;
    start.T = 0.25e-3;
    start.a = {0.2};
    start.t0 = {0.0};
    start.w = {0.1 * start.T};
    const auto trace = local_minimize(start, cfg, cost, 3000);
    CHECK(trace.no_improvement);
    CHECK(trace.evaluations < 3000);
}

TEST_CASE("repeated runs are bitwise identical") {
    const auto cfg = test::default_config(401);
    const CostModel cost;
    const auto start = two_gaussian_start(0.25e-3);
    const auto t1 = local_minimize(start, cfg, cost, 150);
    const auto t2 = local_minimize(start, cfg, cost, 150);
    CHECK(t1.best.C == t2.best.C);
    CHECK(t1.evaluations == t2.evaluations);
    CHECK(same_params(t1.best.params, t2.best.params));
}

TEST_CASE("pooled optimization is independent of threading") {
    const auto cfg = test::default_config(401);
    const CostModel cost;
    SeedBox box;
    box.rng_seed = 17;
    const auto starts = generate_seeds(box, 6, 0.25e-3, 2, 401);
    const auto serial = optimize_pool(starts, cfg, cost, 80, box, false, 1);
    const auto threaded = optimize_pool(starts, cfg, cost, 80, box, false, 3);
    REQUIRE(serial.size() == starts.size());
    REQUIRE(threaded.size() == starts.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].best.C == threaded[i].best.C);
        CHECK(same_params(serial[i].best.params, threaded[i].best.params));
    }
}

TEST_CASE("duration sweep reports coherent per-duration optima") {
    auto cfg = test::default_config(401);
    const CostModel cost;
    SeedBox box;
    box.rng_seed = 5;
    const std::vector<double> durations = {0.22e-3, 0.28e-3};
    const auto sweep = duration_sweep(durations, cfg, cost, box, 30, 4, 120);
    REQUIRE(sweep.size() == 2);
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        CHECK(sweep[i].T == durations[i]);
        CHECK(std::isfinite(sweep[i].best.C));
        CHECK(sweep[i].peak_min <= sweep[i].best.omega_peak);
        CHECK(sweep[i].q_min <= sweep[i].best.q);
        CHECK(sweep[i].best.params.T == durations[i]);
    }
}

TEST_CASE("thread resolution honors the environment override") {
    unsetenv("STA_THREADS");
    CHECK(resolve_threads(2) == 2);
    CHECK(resolve_threads(0) == 1);
    setenv("STA_THREADS", "5", 1);
    CHECK(resolve_threads(2) == 5);
    setenv("STA_THREADS", "junk", 1);
    CHECK(resolve_threads(3) == 3);
    unsetenv("STA_THREADS");
}

}  // TEST_SUITE
