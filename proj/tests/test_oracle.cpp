#include <doctest.h>

#include <cmath>

#include "biasgame/equilibrium.hpp"
#include "biasgame/errors.hpp"
#include "biasgame/oracle.hpp"
#include "support.hpp"

using namespace biasgame;
using doctest::Approx;

TEST_CASE("fd_gradient") {
    CHECK(std::abs(fd_gradient([](double q) { return q * q; }, 3.0, 1e-6) - 6.0) < 1e-6);
    CHECK_THROWS_AS(fd_gradient([](double q) { return q; }, 0.0, 0.0), InvalidParams);
    CHECK_THROWS_AS(fd_gradient([](double q) { return q; }, 0.0, -1e-3), InvalidParams);
}

TEST_CASE("fd_gradient error is second order") {
    const auto cube = [](double q) { return q * q * q; };
    // Central difference error on q^3 is exactly h^2.
    const double e1 = fd_gradient(cube, 2.0, 1e-2) - 12.0;
    const double e2 = fd_gradient(cube, 2.0, 5e-3) - 12.0;
    CHECK(e1 == Approx(1e-4).epsilon(1e-6));
    CHECK(e1 / e2 == Approx(4.0).epsilon(1e-5));
}

TEST_CASE("fd_gradient at derived and printed responses") {
    const auto params = worked_example_params();
    const double q2 = testing::kWorkedQ2;
    const auto objective = [&](double q1) {
        return expected_utility_p1(PlayerType::Overconfident, params, {q1, q2});
    };
    const double derived = best_response_p1(PlayerType::Overconfident, q2, params);
    CHECK(std::abs(fd_gradient(objective, derived, 1e-6)) < 1e-5);
    const double printed =
        best_response_p1(PlayerType::Overconfident, q2, params, FocMode::PaperVerbatim);
    // 2*theta*(derived - printed) = 2*theta*k*s = 1 at these params.
    CHECK(fd_gradient(objective, printed, 1e-6) == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("numeric best responses agree with closed forms") {
    testing::Draws draws(31);
    for (int i = 0; i < 200; ++i) {
        const auto params = draws.acceptance_params();
        const double q2 = draws.uniform(-params.a, params.a);
        const double q1o = draws.uniform(-params.a, params.a);
        const double q1a = draws.uniform(-params.a, params.a);
        for (auto type : {PlayerType::Overconfident, PlayerType::RiskAverse}) {
            CHECK(std::abs(numeric_best_response_p1(type, q2, params) -
                           best_response_p1(type, q2, params)) < 1e-8);
        }
        CHECK(std::abs(numeric_best_response_p2(q1o, q1a, params) -
                       best_response_p2(q1o, q1a, params)) < 1e-8);
    }
}

TEST_CASE("numeric responses: symmetry, mixture collapse, theta invariance") {
    auto params = worked_example_params();
    params.delta = 0.0;
    params.c_a = params.c_o;
    const OracleConfig cfg;
    CHECK(std::abs(numeric_best_response_p1(PlayerType::Overconfident, 2.0, params) -
                   numeric_best_response_p1(PlayerType::RiskAverse, 2.0, params)) < cfg.tol);

    auto p1 = worked_example_params();
    p1.p = 1.0;
    CHECK(std::abs(numeric_best_response_p2(3.0, -7.0, p1) -
                   numeric_best_response_p1(PlayerType::Overconfident, 3.0, p1)) < 1e-9);

    auto no_safe = worked_example_params();
    no_safe.s = 0.0;
    no_safe.theta = 0.3;
    const double r1 = numeric_best_response_p2(3.0, 2.0, no_safe);
    no_safe.theta = 0.6;
    const double r2 = numeric_best_response_p2(3.0, 2.0, no_safe);
    CHECK(std::abs(r1 - r2) < 1e-9);
}

TEST_CASE("interior maximizer when q2 equals B_O") {
    const auto params = worked_example_params();
    const double b_o = 11.0;
    const double q = numeric_best_response_p1(PlayerType::Overconfident, b_o, params);
    const double halfwidth = OracleConfig{}.halfwidth_for(params);
    CHECK(std::abs(q) < halfwidth);
    CHECK(q == Approx(0.0).epsilon(1e-8).scale(1.0));
}

TEST_CASE("bracket expansion and exhaustion") {
    const auto params = worked_example_params();
    OracleConfig cfg;
    cfg.bracket_halfwidth = 1.0;
    // Maximizer (11 - (-10))/2 = 10.5; the bracket reaches [-1, 15] only on
    // its third expansion.
    CHECK(numeric_best_response_p1(PlayerType::Overconfident, -10.0, params, cfg) ==
          Approx(10.5).epsilon(1e-10));
    cfg.bracket_halfwidth = 0.01;
    CHECK_THROWS_AS(numeric_best_response_p1(PlayerType::Overconfident, -10.0, params, cfg),
                    BracketExhausted);
}

TEST_CASE("oracle config validation") {
    const auto params = worked_example_params();
    OracleConfig cfg;
    cfg.damping = 0.0;
    CHECK_THROWS_AS(fixed_point_solve(params, cfg), InvalidParams);
    cfg.damping = 1.5;
    CHECK_THROWS_AS(fixed_point_solve(params, cfg), InvalidParams);
    cfg = {};
    cfg.tol = 0.0;
    CHECK_THROWS_AS(fixed_point_solve(params, cfg), InvalidParams);
    cfg = {};
    cfg.max_iter = 0;
    CHECK_THROWS_AS(fixed_point_solve(params, cfg), InvalidParams);
    cfg = {};
    cfg.bracket_halfwidth = -1.0;
    CHECK_THROWS_AS(fixed_point_solve(params, cfg), InvalidParams);
}

TEST_CASE("fixed_point_solve worked example") {
    const auto sol = fixed_point_solve(worked_example_params());
    CHECK(sol.mode == FocMode::DerivedFoc);
    CHECK(std::abs(sol.q1_o - testing::kWorkedQ1O) < 1e-8);
    CHECK(std::abs(sol.q1_a - testing::kWorkedQ1A) < 1e-8);
    CHECK(std::abs(sol.q2 - testing::kWorkedQ2) < 1e-8);
    for (double r : sol.residuals) {
        CHECK(std::abs(r) < 1e-5);
    }
}

TEST_CASE("fixed_point_solve symmetric game") {
    auto params = worked_example_params();
    params.delta = 0.0;
    params.c_a = 1.5;
    params.c_o = 1.5;
    const double expected = (10.0 - 1.5 + 1.0) / 3.0;
    const auto sol = fixed_point_solve(params, {}, {5.0, -3.0, 8.0});
    CHECK(std::abs(sol.q1_o - expected) < 1e-8);
    CHECK(std::abs(sol.q1_a - expected) < 1e-8);
    CHECK(std::abs(sol.q2 - expected) < 1e-8);
}

TEST_CASE("undamped iteration converges quickly") {
    OracleConfig cfg;
    cfg.damping = 1.0;
    const auto result = fixed_point_iterate(worked_example_params(), cfg);
    MESSAGE("undamped iterations: " << result.iterations);
    CHECK(result.iterations <= 60);
    CHECK(std::abs(result.solution.q2 - testing::kWorkedQ2) < 1e-8);
}

TEST_CASE("damped iteration contracts geometrically") {
    const auto params = worked_example_params();
    OracleConfig cfg;
    cfg.damping = 0.5;
    const auto change_after = [&](int steps) {
        OracleConfig capped = cfg;
        capped.max_iter = steps;
        try {
            fixed_point_iterate(params, capped, {20.0, -20.0, 20.0});
        } catch (const NoConvergence& e) {
            return e.last_change();
        }
        return 0.0;
    };
    double previous = change_after(5);
    for (int steps = 6; steps <= 30; ++steps) {
        const double current = change_after(steps);
        CHECK(current <= (1.0 - cfg.damping / 2.0) * previous * (1.0 + 1e-6) + 1e-12);
        previous = current;
    }
}

TEST_CASE("fixed_point_solve reports non-convergence") {
    OracleConfig cfg;
    cfg.max_iter = 3;
    try {
        fixed_point_solve(worked_example_params(), cfg);
        FAIL("expected NoConvergence");
    } catch (const NoConvergence& e) {
        CHECK(e.iterations() == 3);
        CHECK(e.last_change() > 0.0);
    }
}
