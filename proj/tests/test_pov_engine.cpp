#include "povliq/error.hpp"
#include "povliq/pov_engine.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace povliq;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected povliq::Error");
    return ErrorCode::InvalidArgument;
}

LiquidationProblem with_curve(LiquidationProblem p, VolumeCurve c) {
    p.volume_curve = std::move(c);
    return p;
}

VolumeCurve two_rate_total() {
    const std::vector<ProfilePiece> pieces{{0.5, 6e6}, {0.5, 2e6}};
    return VolumeCurve::piecewise(pieces);
}

// Closed-form flat-curve rate, written out independently of the library.
double reference_rate(double gamma, double sigma, double q0, double eta, double phi, double v) {
    return std::pow(gamma * sigma * sigma * q0 * q0 / (6.0 * eta * phi * v), 1.0 / (1.0 + phi));
}

} // namespace

TEST_CASE("objective at the Total 10% rate") {
    const auto p = fixtures::total_10();
    // high-precision direct evaluation of both flat-curve terms
    CHECK(execution_cost_term(p, 0.171) == doctest::Approx(15251.2531594909).epsilon(1e-12));
    CHECK(risk_term(p, 0.171) == doctest::Approx(9624.06015037594).epsilon(1e-12));
    CHECK(objective(p, 0.171) == doctest::Approx(24875.3133098669).epsilon(1e-12));
    CHECK(code_of([&] { objective(p, 0.0); }) == ErrorCode::NonPositiveRate);
    CHECK(code_of([&] { objective(p, -0.1); }) == ErrorCode::NonPositiveRate);
}

TEST_CASE("objective limits") {
    auto p = fixtures::total_10();
    p.gamma = 1e-300;
    double prev = 0.0;
    for (double rho = 0.01; rho < 5.0; rho *= 1.5) {
        const double j = objective(p, rho);
        CHECK(j == doctest::Approx(execution_cost_term(p, rho)).epsilon(1e-12));
        CHECK(j > prev);
        prev = j;
    }

    auto tiny = fixtures::total_10();
    tiny.q0 = 1e-9;
    CHECK(objective(tiny, 0.2) < 1e-9);
}

TEST_CASE("terminal cash distribution, Total 10%") {
    const auto p = fixtures::total_10();
    const auto d = terminal_cash_distribution(p, 0.171);
    CHECK(d.mean == doctest::Approx(15937548.7468405).epsilon(1e-13));
    CHECK(d.variance == doctest::Approx(6416040100.25063).epsilon(1e-12));
    CHECK(d.stddev() == doctest::Approx(80100.1878914814).epsilon(1e-12));
    CHECK(d.horizon_t == doctest::Approx(0.584795321637427).epsilon(1e-13));
    CHECK(d.rho == 0.171);
    CHECK(d.mean <= p.notional());

    auto costless = p;
    costless.impact = {1e-15, 0.63, 0.0, 0.0};
    CHECK(terminal_cash_distribution(costless, 0.171).mean == doctest::Approx(p.notional()).epsilon(1e-15));

    auto shifted = p;
    shifted.price_s0 = 77.0;
    shifted.impact.psi = 0.5;
    shifted.impact.k_perm = 1e-4;
    CHECK(terminal_cash_distribution(shifted, 0.171).variance == d.variance);
}

TEST_CASE("closed-form utility") {
    const auto p = fixtures::total_10();
    const auto d = terminal_cash_distribution(p, 0.2);
    CHECK(certainty_equivalent(p, 0.2) == doctest::Approx(d.mean - 0.5 * p.gamma * d.variance));
    CHECK(expected_utility(p, 0.2) == doctest::Approx(-std::exp(-p.gamma * certainty_equivalent(p, 0.2))));
    // CE = q0 S0 - psi q0 - k q0^2 / 2 - J(rho)
    const double fixed = p.impact.psi * p.q0 + 0.5 * p.impact.k_perm * p.q0 * p.q0;
    CHECK(certainty_equivalent(p, 0.2) ==
          doctest::Approx(p.notional() - fixed - objective(p, 0.2)).epsilon(1e-14));
}

TEST_CASE("closed-form optimal rate") {
    const auto p = fixtures::total_10();
    const auto sol = optimal_rate_closed_form(p);
    CHECK(sol.method == RateMethod::ClosedForm);
    CHECK(sol.rho_star == doctest::Approx(0.171172137154205).epsilon(1e-13));
    CHECK(sol.objective_value == doctest::Approx(24875.3053765846).epsilon(1e-12));
    CHECK(sol.objective_value == doctest::Approx(objective(p, sol.rho_star)).epsilon(1e-12));
    CHECK(sol.horizon_t == doctest::Approx(4e5 / (sol.rho_star * 4e6)));
    CHECK_FALSE(sol.exceeds_full_participation);
    CHECK(std::abs(sol.rho_star * 100.0 - 17.1) <= 0.1);

    const auto axa = fixtures::flat_problem(fixtures::axa_market(), fixtures::axa_impact(), 0.15);
    CHECK(std::abs(optimal_rate_closed_form(axa).rho_star * 100.0 - 22.5) <= 0.1);

    auto linear = p;
    linear.impact.phi = 1.0;
    const double s = p.sigma_model;
    CHECK(optimal_rate_closed_form(linear).rho_star ==
          doctest::Approx(std::sqrt(p.gamma * s * s * p.q0 * p.q0 / (6.0 * p.impact.eta * 4e6))));

    for (double lambda : {0.5, 3.0}) {
        auto scaled = p;
        scaled.q0 *= lambda;
        CHECK(optimal_rate_closed_form(scaled).rho_star ==
              doctest::Approx(sol.rho_star * std::pow(lambda, 2.0 / 1.63)).epsilon(1e-13));
    }

    auto urgent = p;
    urgent.gamma = 1e-3;
    const auto fast = optimal_rate_closed_form(urgent);
    CHECK(fast.rho_star > 1.0);
    CHECK(fast.exceeds_full_participation);

    CHECK(code_of([&] { optimal_rate_closed_form(with_curve(p, two_rate_total())); }) ==
          ErrorCode::RequiresFlatCurve);
}

TEST_CASE("first-order condition and blow-up at both ends") {
    std::mt19937_64 gen(7);
    for (int i = 0; i < 50; ++i) {
        auto p = fixtures::total_10();
        p.gamma = oracle::log_uniform(gen, 1e-7, 1e-5);
        p.impact.eta = oracle::log_uniform(gen, 0.01, 1.0);
        p.impact.phi = oracle::log_uniform(gen, 0.2, 2.0);
        const auto sol = optimal_rate_closed_form(p);
        const double r = sol.rho_star;
        const double s = p.sigma_model;
        const double lhs = p.impact.eta * p.impact.phi * std::pow(r, p.impact.phi - 1.0);
        const double rhs = p.gamma * s * s * p.q0 * p.q0 / (6.0 * r * r * 4e6);
        CHECK(std::abs(lhs - rhs) <= 1e-8 * rhs);
        CHECK(objective(p, 1e-8) >= 10.0 * sol.objective_value);
        CHECK(objective(p, 1e8) >= 10.0 * sol.objective_value);
    }
}

TEST_CASE("numeric rate matches the closed form on flat curves") {
    const auto p = fixtures::total_10();
    const auto closed = optimal_rate_closed_form(p);
    const auto numeric = optimal_rate_numeric(p);
    CHECK(numeric.method == RateMethod::Numeric);
    CHECK(std::abs(numeric.rho_star - closed.rho_star) <= 1e-6 * closed.rho_star);
    CHECK(numeric.objective_value == doctest::Approx(closed.objective_value).epsilon(1e-12));

    std::mt19937_64 gen(99);
    for (int i = 0; i < 200; ++i) {
        auto q = p;
        q.gamma = oracle::log_uniform(gen, 1e-8, 1e-4);
        q.sigma_model = oracle::log_uniform(gen, 0.01, 100.0);
        q.q0 = oracle::log_uniform(gen, 1e3, 1e7);
        q.impact.eta = oracle::log_uniform(gen, 1e-3, 10.0);
        q.impact.phi = oracle::log_uniform(gen, 0.05, 500.0);
        const double v = oracle::log_uniform(gen, 1e5, 1e9);
        q.volume_curve = VolumeCurve::flat(v);
        const double expected =
            reference_rate(q.gamma, q.sigma_model, q.q0, q.impact.eta, q.impact.phi, v);
        const auto sol = optimal_rate_numeric(q, {expected * 1e-6, expected * 1e6});
        CAPTURE(i);
        CHECK(std::abs(sol.rho_star - expected) <= 1e-6 * expected);
    }
}

TEST_CASE("numeric rate on a two-rate profile beats a dense grid") {
    auto p = with_curve(fixtures::total_10(), two_rate_total());
    const auto sol = optimal_rate_numeric(p, {1e-4, 10.0});
    CHECK(sol.rho_star > 1e-4);
    CHECK(sol.rho_star < 10.0);
    const auto [grid_x, grid_f] =
        oracle::grid_minimum([&](double r) { return objective(p, r); }, 1e-4, 10.0, 10000);
    CHECK(sol.objective_value <= grid_f);
    CHECK(std::abs(std::log(sol.rho_star / grid_x)) < 2e-3);
    CHECK(sol.horizon_t == doctest::Approx(p.volume_curve.completion_time(sol.rho_star, p.q0)));
    CHECK(optimal_rate(p).method == RateMethod::Numeric);
}

TEST_CASE("numeric rate argument checks") {
    const auto p = fixtures::total_10();
    CHECK(code_of([&] { optimal_rate_numeric(p, {1.0, 2.0}); }) == ErrorCode::BracketTooNarrow);
    CHECK(code_of([&] { optimal_rate_numeric(p, {1e-6, 1e-3}); }) == ErrorCode::BracketTooNarrow);
    CHECK(code_of([&] { optimal_rate_numeric(p, {0.0, 2.0}); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { optimal_rate_numeric(p, {2.0, 1.0}); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { optimal_rate_numeric(p, {}, 1e-13); }) == ErrorCode::InvalidArgument);
    CHECK_NOTHROW(optimal_rate_numeric(p, {}, 1e-12));
}

TEST_CASE("comparative statics of the optimal rate") {
    const auto base = fixtures::total_10();
    const double r0 = optimal_rate_closed_form(base).rho_star;
    auto bump = [&](auto mutate) {
        auto p = base;
        mutate(p);
        return optimal_rate_closed_form(p).rho_star;
    };
    CHECK(bump([](auto& p) { p.gamma *= 1.1; }) > r0);
    CHECK(bump([](auto& p) { p.sigma_model *= 1.1; }) > r0);
    CHECK(bump([](auto& p) { p.q0 *= 1.1; }) > r0);
    CHECK(bump([](auto& p) { p.impact.eta *= 1.1; }) < r0);
    CHECK(bump([](auto& p) { p.impact.psi = 0.5; }) == r0);
    CHECK(bump([](auto& p) { p.impact.k_perm = 1e-3; }) == r0);
    CHECK(bump([](auto& p) { p.price_s0 = 1000.0; }) == r0);

    const double speed = r0 * 4e6;
    auto liquid = base;
    liquid.volume_curve = VolumeCurve::flat(8e6);
    const double faster = optimal_rate_closed_form(liquid).rho_star * 8e6;
    CHECK(faster > speed);
}
