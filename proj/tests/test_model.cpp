#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "sta/errors.hpp"
#include "sta/model.hpp"

using namespace sta;
using test::default_config;
using test::gaussian_baseline;

TEST_SUITE("model") {

TEST_CASE("base parametrization peaks at the origin") {
    const auto p = gaussian_baseline();
    const auto cfg = default_config();
    CHECK(eval_parametrization(p, cfg, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    // even in t
    for (double t : {0.3e-4, 1.1e-4, 2.4e-4})
        CHECK(eval_parametrization(p, cfg, t) ==
              doctest::Approx(eval_parametrization(p, cfg, -t)).epsilon(1e-14));
}

TEST_CASE("grid max is one, off-grid max stays close") {
    PulseParameters p;
    p.T = 0.4e-3;
    p.a = {0.5};
    p.t0 = {p.T / 8.0};
    p.w = {p.T / 10.0};
    const auto cfg = default_config();

    // brute-force max over the module's own grid and a 20x denser one
    const int M = cfg.grid_points;
    const Shape shape(p, M);
    double grid_max = 0.0, dense_max = 0.0;
    for (int k = 0; k < 20 * (M - 1) + 1; ++k) {
        const double u = p.T * k / (20.0 * (M - 1)) - 0.6 * p.T;
        const double v = shape.value(u);
        dense_max = std::max(dense_max, v);
        if (k % 20 == 0) grid_max = std::max(grid_max, v);
    }
    CHECK(grid_max == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dense_max == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(eval_parametrization(p, cfg, 0.0) < 1.0);
    CHECK(eval_parametrization(p, cfg, 0.07e-3) ==
          doctest::Approx(shape.value(0.07e-3)).epsilon(1e-14));
}

TEST_CASE("non-finite evaluation points are rejected") {
    const auto p = gaussian_baseline();
    const auto cfg = default_config();
    CHECK_THROWS_AS(eval_parametrization(p, cfg, std::numeric_limits<double>::quiet_NaN()),
                    ValidationError);
    CHECK_THROWS_AS(eval_parametrization(p, cfg, std::numeric_limits<double>::infinity()),
                    ValidationError);
}

TEST_CASE("degenerate parametrization is rejected") {
    PulseParameters p;
    p.T = 0.4e-3;
    p.a = {-1.0};
    p.t0 = {0.0};
    p.w = {p.T / 6.0};  // cancels the base Gaussian exactly
    CHECK_THROWS_AS(reference_pulses(p, default_config()), DegenerateParametrizationError);
}

TEST_CASE("reference pulses peak where the shifts put them") {
    const auto p = gaussian_baseline();
    const auto cfg = default_config();
    const auto ref = reference_pulses(p, cfg);
    const int M = cfg.grid_points;

    int argmax_P = 0, argmax_S = 0;
    for (int k = 0; k < M; ++k) {
        if (ref.omega_P[k] > ref.omega_P[argmax_P]) argmax_P = k;
        if (ref.omega_S[k] > ref.omega_S[argmax_S]) argmax_S = k;
    }
    CHECK(ref.times[argmax_P] == doctest::Approx(0.24e-3).epsilon(1e-12));
    CHECK(ref.times[argmax_S] == doctest::Approx(0.16e-3).epsilon(1e-12));
    CHECK(ref.omega_P[argmax_P] == doctest::Approx(cfg.omega0).epsilon(1e-12));
}

TEST_CASE("pump and Stokes mirror each other on the grid") {
    PulseParameters p;
    p.T = 0.25e-3;
    p.a = {0.3, -0.2};
    p.t0 = {0.05 * p.T, -0.1 * p.T};
    p.w = {0.1 * p.T, 0.2 * p.T};
    const auto cfg = default_config();
    const auto ref = reference_pulses(p, cfg);
    const int M = cfg.grid_points;
    for (int k = 0; k < M; ++k) {
        CHECK(ref.omega_P[k] == ref.omega_S[M - 1 - k]);
        CHECK(ref.omega_P_dot[k] == -ref.omega_S_dot[M - 1 - k]);
        CHECK(ref.omega_P_ddot[k] == ref.omega_S_ddot[M - 1 - k]);
    }
}

TEST_CASE("boundary ratio of the plain Gaussian is e^-7.2, any T") {
    for (double T : {0.1e-3, 0.25e-3, 0.4e-3}) {
        const auto ref = reference_pulses(gaussian_baseline(T), default_config());
        CHECK(ref.ratio0 == doctest::Approx(std::exp(-7.2)).epsilon(1e-10));
        CHECK(ref.ratioT == doctest::Approx(std::exp(-7.2)).epsilon(1e-10));
    }
}

TEST_CASE("endpoints are clamped to exact zeros") {
    const auto cfg = default_config();
    const auto ref = reference_pulses(gaussian_baseline(), cfg);
    CHECK(ref.omega_P.front() == 0.0);
    CHECK(ref.omega_S.back() == 0.0);
    CHECK(ref.omega_P.back() > 0.0);
    CHECK(ref.omega_S.front() > 0.0);
}

TEST_CASE("boundary-condition violations are rejected") {
    PulseParameters p;
    p.T = 0.4e-3;
    p.a = {1.0};
    p.t0 = {-0.5 * p.T};
    p.w = {0.5 * p.T};  // fat tail at the pump's left boundary
    CHECK_THROWS_AS(reference_pulses(p, default_config()), BoundaryConditionError);
}

TEST_CASE("parameter box is enforced on validation") {
    PulseParameters p;
    p.T = 0.4e-3;
    p.a = {1.5};
    p.t0 = {0.0};
    p.w = {0.1 * p.T};
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p.a = {0.5};
    p.w = {p.T / 100.0};
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p.w = {0.1 * p.T};
    p.t0 = {0.6 * p.T};
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p.t0 = {0.0};
    CHECK_NOTHROW(p.validate());
    p.t0 = {};
    CHECK_THROWS_AS(p.validate(), ValidationError);  // ragged arrays
}

TEST_CASE("system config guards the adiabatic-elimination regime") {
    SystemConfig cfg;
    cfg.delta = 10.0 * cfg.omega0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = SystemConfig{};
    cfg.grid_points = 2;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg = SystemConfig{};
    cfg.q_norm = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    CHECK_NOTHROW(SystemConfig{}.validate());
}

TEST_CASE("normalization property holds for random draws") {
    // max over grid of f == 1 within 1e-12 for every valid parameter set
    const auto cfg = default_config();
    std::mt19937_64 rng(42);
    int checked = 0;
    while (checked < 12) {
        PulseParameters p;
        p.T = 0.25e-3;
        for (int i = 0; i < 4; ++i) {
            p.a.push_back(-1.0 + 2.0 * (rng() >> 11) * 0x1.0p-53);
            p.t0.push_back(p.T * (-0.5 + (rng() >> 11) * 0x1.0p-53));
            p.w.push_back(p.T * (0.02 + 0.48 * (rng() >> 11) * 0x1.0p-53));
        }
        try {
            const Shape shape(p, cfg.grid_points);
            double m = 0.0;
            for (int k = 0; k < cfg.grid_points; ++k) {
                const double u =
                    p.T * k / (cfg.grid_points - 1.0) - 0.6 * p.T;
                m = std::max(m, shape.value(u));
            }
            CHECK(m == doctest::Approx(1.0).epsilon(1e-12));
            ++checked;
        } catch (const DegenerateParametrizationError&) {
        }
    }
}

}  // TEST_SUITE
