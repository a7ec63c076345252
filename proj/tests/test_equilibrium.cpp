#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "biasgame/equilibrium.hpp"
#include "biasgame/errors.hpp"
#include "biasgame/oracle.hpp"
#include "support.hpp"

using namespace biasgame;
using doctest::Approx;

TEST_CASE("best_response_p1 matches the numerical maximizer") {
    const auto params = worked_example_params();
    const double q2 = 3.1667;
    const double br_o = best_response_p1(PlayerType::Overconfident, q2, params);
    const double br_a = best_response_p1(PlayerType::RiskAverse, q2, params);
    CHECK(br_o == Approx(3.9167).epsilon(1e-4));
    CHECK(br_a == Approx(2.4167).epsilon(1e-4));
    CHECK(std::abs(br_o - numeric_best_response_p1(PlayerType::Overconfident, q2, params)) < 1e-8);
    CHECK(std::abs(br_a - numeric_best_response_p1(PlayerType::RiskAverse, q2, params)) < 1e-8);
}

TEST_CASE("best responses coincide across types without bias or cost gap") {
    testing::Draws draws(21);
    for (int i = 0; i < 100; ++i) {
        auto params = draws.acceptance_params();
        params.delta = 0.0;
        params.c_a = params.c_o;
        const double q2 = draws.uniform(-10, 30);
        for (auto mode : {FocMode::DerivedFoc}) {
            CHECK(best_response_p1(PlayerType::Overconfident, q2, params, mode) ==
                  best_response_p1(PlayerType::RiskAverse, q2, params, mode));
        }
    }
}

TEST_CASE("verbatim overconfident response differs by the safe-return term") {
    testing::Draws draws(22);
    for (int i = 0; i < 100; ++i) {
        const auto params = draws.acceptance_params();
        const double q2 = draws.uniform(-10, 30);
        const double derived = best_response_p1(PlayerType::Overconfident, q2, params);
        const double verbatim =
            best_response_p1(PlayerType::Overconfident, q2, params, FocMode::PaperVerbatim);
        CHECK(std::abs(derived - verbatim - params.safe_weight() * params.s) <
              1e-12 * (1 + std::abs(derived)));
        CHECK(best_response_p1(PlayerType::RiskAverse, q2, params, FocMode::PaperVerbatim) ==
              best_response_p1(PlayerType::RiskAverse, q2, params));
    }
}

TEST_CASE("best_response_p2") {
    const auto params = worked_example_params();
    const double derived = best_response_p2(3.9167, 2.4167, params);
    CHECK(derived == Approx(3.1667).epsilon(1e-4));
    CHECK(std::abs(derived - numeric_best_response_p2(3.9167, 2.4167, params)) < 1e-8);
    CHECK(best_response_p2(3.9167, 2.4167, params, FocMode::PaperVerbatim) ==
          Approx(2.0 * derived).epsilon(1e-15));

    // Mixture collapse: p = 1, no bias or cost gap, equal q1 -> the Player 1
    // formula with roles swapped.
    ModelParams sym = params;
    sym.p = 1.0;
    sym.delta = 0.0;
    sym.c_a = sym.c_o;
    CHECK(best_response_p2(2.5, 2.5, sym) ==
          Approx(best_response_p1(PlayerType::Overconfident, 2.5, sym)));
}

TEST_CASE("solve_bne worked example") {
    const auto sol = solve_bne(worked_example_params());
    CHECK(sol.mode == FocMode::DerivedFoc);
    CHECK(sol.q1_o == Approx(testing::kWorkedQ1O).epsilon(1e-14));
    CHECK(sol.q1_a == Approx(testing::kWorkedQ1A).epsilon(1e-14));
    CHECK(sol.q2 == Approx(testing::kWorkedQ2).epsilon(1e-14));
    CHECK(sol.r_o == 10.0 - sol.q1_o - sol.q2);
    CHECK(sol.r_a == 10.0 - sol.q1_a - sol.q2);
    for (double r : sol.residuals) {
        CHECK(std::abs(r) < kResidualTolerance);
    }
}

TEST_CASE("solve_bne satisfies its own best-response equations") {
    testing::Draws draws(23);
    for (int i = 0; i < 300; ++i) {
        const auto params = draws.acceptance_params();
        for (auto mode : {FocMode::DerivedFoc, FocMode::PaperVerbatim}) {
            const auto sol = solve_bne(params, mode);
            const double scale = 1.0 + std::max({std::abs(sol.q1_o), std::abs(sol.q1_a),
                                                 std::abs(sol.q2)});
            CHECK(std::abs(sol.q1_o - best_response_p1(PlayerType::Overconfident, sol.q2,
                                                       params, mode)) < 1e-10 * scale);
            CHECK(std::abs(sol.q1_a - best_response_p1(PlayerType::RiskAverse, sol.q2, params,
                                                       mode)) < 1e-10 * scale);
            CHECK(std::abs(sol.q2 - best_response_p2(sol.q1_o, sol.q1_a, params, mode)) <
                  1e-10 * scale);
        }
    }
}

TEST_CASE("verbatim solution matches hand elimination") {
    // From the printed equations: q2 = 2*Abar + 2*k*s - Bbar_v with
    // Abar = p*A_O + (1-p)*A_A and Bbar_v = p*(A_O - k*s) + (1-p)*(A_A + k*s).
    testing::Draws draws(24);
    for (int i = 0; i < 100; ++i) {
        const auto params = draws.acceptance_params();
        const double ks = params.safe_weight() * params.s;
        const double ao = params.a + params.delta - params.c_o;
        const double aa = params.a - params.delta - params.c_a;
        const double abar = params.p * ao + (1 - params.p) * aa;
        const double bbar = params.p * (ao - ks) + (1 - params.p) * (aa + ks);
        const double q2 = 2 * abar + 2 * ks - bbar;
        const auto sol = solve_bne(params, FocMode::PaperVerbatim);
        CHECK(sol.mode == FocMode::PaperVerbatim);
        CHECK(sol.q2 == Approx(q2).scale(1 + std::abs(q2)));
        CHECK(sol.q1_o == Approx((ao - ks - q2) / 2).scale(1 + std::abs(q2)));
        CHECK(sol.q1_a == Approx((aa + ks - q2) / 2).scale(1 + std::abs(q2)));
    }
    const auto worked = solve_bne(worked_example_params(), FocMode::PaperVerbatim);
    CHECK(worked.q2 == Approx(10.5));
    CHECK(worked.q1_o == Approx(-0.75));
    CHECK(worked.q1_a == Approx(-1.25));
}

TEST_CASE("symmetric game gives equal quantities") {
    testing::Draws draws(25);
    for (int i = 0; i < 100; ++i) {
        auto params = draws.acceptance_params();
        params.delta = 0.0;
        params.c_a = params.c_o;
        const double expected =
            (params.a - params.c_o + params.safe_weight() * params.s) / 3.0;
        const auto sol = solve_bne(params);
        CHECK(sol.q1_o == Approx(expected).epsilon(1e-12));
        CHECK(sol.q1_a == Approx(expected).epsilon(1e-12));
        CHECK(sol.q2 == Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("degenerate beliefs still report the off-path type") {
    auto params = worked_example_params();
    params.p = 1.0;
    const auto sol = solve_bne(params);
    CHECK(sol.q1_a == Approx(best_response_p1(PlayerType::RiskAverse, sol.q2, params)));
    // Two-equation subsystem: q1_o = (B_O - q2)/2, q2 = (B_O - q1_o)/2 -> B_O/3.
    CHECK(sol.q2 == Approx(11.0 / 3.0));
    CHECK(sol.q1_o == Approx(11.0 / 3.0));

    params.p = 0.0;
    const auto sol0 = solve_bne(params);
    CHECK(sol0.q2 == Approx(8.0 / 3.0));
    CHECK(sol0.q1_o == Approx(best_response_p1(PlayerType::Overconfident, sol0.q2, params)));
}

TEST_CASE("type gap and belief sensitivity identities") {
    testing::Draws draws(26);
    for (int i = 0; i < 200; ++i) {
        const auto params = draws.acceptance_params();
        const auto sol = solve_bne(params);
        CHECK(sol.q1_o - sol.q1_a ==
              Approx(params.delta + (params.c_a - params.c_o) / 2).scale(1 + params.a));

        auto lo = params;
        auto hi = params;
        const double h = 1e-4;
        lo.p = std::max(0.0, params.p - h);
        hi.p = std::min(1.0, params.p + h);
        const double slope = (solve_bne(hi).q2 - solve_bne(lo).q2) / (hi.p - lo.p);
        CHECK(std::abs(slope - (2 * params.delta + params.c_a - params.c_o) / 3.0) < 1e-6 * (1 + params.a));
    }
}

TEST_CASE("scale covariance") {
    testing::Draws draws(27);
    for (int i = 0; i < 50; ++i) {
        const auto params = draws.acceptance_params();
        const auto base = solve_bne(params);
        for (double lambda : {0.5, 2.0, 10.0}) {
            auto scaled = params;
            scaled.a *= lambda;
            scaled.delta *= lambda;
            scaled.c_o *= lambda;
            scaled.c_a *= lambda;
            scaled.s *= lambda;
            const auto sol = solve_bne(scaled);
            CHECK(sol.q1_o == Approx(lambda * base.q1_o).epsilon(1e-10));
            CHECK(sol.q1_a == Approx(lambda * base.q1_a).epsilon(1e-10));
            CHECK(sol.q2 == Approx(lambda * base.q2).epsilon(1e-10));
        }
    }
}

TEST_CASE("foc_residuals expose the verbatim gap") {
    auto params = worked_example_params();
    const auto derived = solve_bne(params, FocMode::DerivedFoc);
    const auto verbatim = solve_bne(params, FocMode::PaperVerbatim);
    for (double r : derived.residuals) {
        CHECK(std::abs(r) < 1e-5);
    }
    // Derivative of the stated utility at the printed response:
    // theta*k*s + (1-theta)*s = 2*(1-theta)*s = 1 here.
    CHECK(verbatim.residuals[0] == Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(verbatim.residuals[0]) >= params.theta * params.safe_weight() * params.s);
    CHECK(std::abs(verbatim.residuals[1]) < 1e-5);
    // Player 2: N - 2 theta q2 with q2 = N / theta gives -theta*q2.
    CHECK(verbatim.residuals[2] == Approx(-params.theta * verbatim.q2).epsilon(1e-6));

    params.s = 0.0;
    const auto d0 = solve_bne(params, FocMode::DerivedFoc);
    const auto v0 = solve_bne(params, FocMode::PaperVerbatim);
    CHECK(std::abs(d0.residuals[0]) < 1e-5);
    CHECK(std::abs(v0.residuals[0]) < 1e-5);
    CHECK(best_response_p1(PlayerType::Overconfident, 3.0, params, FocMode::DerivedFoc) ==
          best_response_p1(PlayerType::Overconfident, 3.0, params, FocMode::PaperVerbatim));
}

TEST_CASE("verbatim overconfident residual is 2(1-theta)s across draws") {
    testing::Draws draws(28);
    for (int i = 0; i < 200; ++i) {
        const auto params = draws.acceptance_params();
        const auto sol = solve_bne(params, FocMode::PaperVerbatim);
        CHECK(sol.residuals[0] ==
              Approx(2 * (1 - params.theta) * params.s).epsilon(1e-6).scale(1 + params.a));
    }
}

TEST_CASE("non-negative domain truncates responses") {
    ModelParams params = worked_example_params();
    CHECK(best_response_p1(PlayerType::RiskAverse, 100.0, params, FocMode::DerivedFoc,
                           QuantityDomain::NonNegative) == 0.0);
    CHECK(best_response_p2(100.0, 100.0, params, FocMode::DerivedFoc,
                           QuantityDomain::NonNegative) == 0.0);

    // Verbatim worked example has short P1 positions; the clamped game does not.
    const auto clamped =
        solve_bne(params, FocMode::PaperVerbatim, QuantityDomain::NonNegative);
    CHECK(clamped.q1_o >= 0.0);
    CHECK(clamped.q1_a >= 0.0);
    CHECK(clamped.q2 >= 0.0);
    const auto m = FocMode::PaperVerbatim;
    const auto nn = QuantityDomain::NonNegative;
    CHECK(clamped.q1_o ==
          Approx(best_response_p1(PlayerType::Overconfident, clamped.q2, params, m, nn)));
    CHECK(clamped.q1_a ==
          Approx(best_response_p1(PlayerType::RiskAverse, clamped.q2, params, m, nn)));
    CHECK(clamped.q2 == Approx(best_response_p2(clamped.q1_o, clamped.q1_a, params, m, nn)));

    // Risk-averse type priced out in the derived game.
    params.c_a = 9.0;
    const auto priced_out = solve_bne(params, FocMode::DerivedFoc, QuantityDomain::NonNegative);
    CHECK(priced_out.q1_a == 0.0);
    CHECK(priced_out.q1_o > 0.0);
    CHECK(priced_out.q2 ==
          Approx(best_response_p2(priced_out.q1_o, 0.0, params, FocMode::DerivedFoc, nn)));

    // Interior solutions are unaffected by the clamp.
    const auto interior = solve_bne(worked_example_params(), FocMode::DerivedFoc, nn);
    CHECK(interior == solve_bne(worked_example_params()));
}

TEST_CASE("solve_bne rejects invalid params") {
    ModelParams params = worked_example_params();
    params.theta = 1.0;
    CHECK_THROWS_AS(solve_bne(params), InvalidParams);
    params.theta = 0.0;
    CHECK_THROWS_AS(solve_bne(params, FocMode::PaperVerbatim), InvalidParams);
}

TEST_CASE("mode names") {
    CHECK(parse_foc_mode("derived") == FocMode::DerivedFoc);
    CHECK(parse_foc_mode("verbatim") == FocMode::PaperVerbatim);
    CHECK(parse_foc_mode(to_string(FocMode::PaperVerbatim)) == FocMode::PaperVerbatim);
    CHECK_THROWS_AS(parse_foc_mode("exact"), InvalidParams);
}
