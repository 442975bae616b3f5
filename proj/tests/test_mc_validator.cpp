#include "povliq/error.hpp"
#include "povliq/mc_validator.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
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

SimConfig config(std::int64_t paths, std::int64_t steps, double rho, bool zero_noise = false) {
    SimConfig c;
    c.n_paths = paths;
    c.n_steps = steps;
    c.rho = rho;
    c.seed = 42;
    c.zero_noise = zero_noise;
    return c;
}

double zero_noise_error(const LiquidationProblem& p, double rho, std::int64_t steps) {
    const auto r = simulate(p, config(1, steps, rho, true));
    return std::abs(r.sample_mean - r.analytic.mean);
}

} // namespace

TEST_CASE("zero-noise Euler reproduces the analytic mean") {
    const auto p = fixtures::total_10();
    const auto r = simulate(p, config(3, 10000, 0.171, true));
    CHECK(std::abs(r.sample_mean - r.analytic.mean) <= 1e-6 * r.analytic.mean);
    CHECK(r.sample_variance == 0.0);
    CHECK(r.x_terminal[0] == r.x_terminal[2]);
}

TEST_CASE("discretization error is first order") {
    const auto p = fixtures::total_10();
    double prev = zero_noise_error(p, 0.171, 100);
    for (std::int64_t steps = 200; steps <= 1600; steps *= 2) {
        const double err = zero_noise_error(p, 0.171, steps);
        CAPTURE(steps);
        CHECK(prev / err >= 1.8);
        prev = err;
    }
}

TEST_CASE("inventory is cleared exactly") {
    auto p = fixtures::total_10();
    for (std::int64_t steps : {1, 7, 500}) {
        const auto r = simulate(p, config(1, steps, 0.23, true));
        CHECK(r.residual_inventory == 0.0);
        CHECK(std::abs(r.executed_volume - p.q0) <= 1e-12 * p.q0);
    }
    const std::vector<ProfilePiece> pieces{{0.3, 9e6}, {0.4, 1e6}, {0.3, 3e6}};
    p.volume_curve = VolumeCurve::piecewise(pieces);
    p.q0 = 3e6; // several days
    const auto r = simulate(p, config(1, 333, 0.2, true));
    CHECK(r.residual_inventory == 0.0);
    CHECK(std::abs(r.executed_volume - p.q0) <= 1e-12 * p.q0);
    CHECK(std::abs(r.sample_mean - r.analytic.mean) <= 1e-3 * r.analytic.mean);
}

TEST_CASE("permanent impact bookkeeping") {
    auto p = fixtures::total_10();
    p.sigma_model = 1e-300;
    p.impact.k_perm = 1e-5;
    const double rho = 0.171;
    const auto r = simulate(p, config(2, 20000, rho, false));
    const double shortfall = (p.notional() - r.sample_mean) / p.q0;
    const double expected =
        p.impact.psi + 0.5 * p.impact.k_perm * p.q0 + p.impact.eta * std::pow(rho, p.impact.phi);
    CHECK(shortfall == doctest::Approx(expected).epsilon(1e-4));
}

TEST_CASE("fixed seed is bit-identical across runs and thread counts") {
    const auto p = fixtures::total_10();
    auto c = config(4001, 50, 0.171);
    c.threads = 1;
    const auto a = simulate(p, c);
    c.threads = 3;
    const auto b = simulate(p, c);
    c.threads = 8;
    const auto d = simulate(p, c);
    CHECK(a.x_terminal == b.x_terminal);
    CHECK(a.x_terminal == d.x_terminal);
    CHECK(a.sample_mean == d.sample_mean);
    CHECK(a.sample_variance == d.sample_variance);
    CHECK(a.log_neg_utility == d.log_neg_utility);

    c.seed = 43;
    CHECK(simulate(p, c).x_terminal != a.x_terminal);
}

TEST_CASE("moderate run matches the analytic law") {
    const auto p = fixtures::total_10();
    const auto r = simulate(p, config(20000, 400, 0.171));
    CHECK(r.std_error_mean == doctest::Approx(std::sqrt(r.sample_variance / 20000.0)));
    CHECK(r.variance_ratio == doctest::Approx(r.sample_variance / r.analytic.variance));
    CHECK(std::abs(r.z_score_mean) <= 3.0);
    CHECK(std::abs(r.variance_ratio - 1.0) <= 0.05);
    CHECK(std::abs(r.log_neg_utility - r.log_neg_utility_analytic) <= 3.0 * r.log_neg_utility_std_error);
    CHECK(r.utility_estimate == doctest::Approx(-std::exp(r.log_neg_utility)));
    CHECK(r.utility_estimate < 0.0);

    const auto test = distribution_test(r, 0.99);
    CHECK(test.pass);
    CHECK(test.z_critical == doctest::Approx(2.5758293035489).epsilon(1e-10));
    CHECK(test.variance_ratio_lo < 1.0);
    CHECK(test.variance_ratio_hi > 1.0);

    SimResult inflated = r;
    inflated.sample_variance *= 2.0;
    inflated.variance_ratio *= 2.0;
    const auto bad = distribution_test(inflated, 0.99);
    CHECK_FALSE(bad.pass);
    CHECK_FALSE(bad.variance_pass);
    CHECK(bad.mean_pass);
}

TEST_CASE("config and test preconditions") {
    const auto p = fixtures::total_10();
    CHECK(code_of([&] { simulate(p, config(0, 10, 0.1)); }) == ErrorCode::InvalidConfig);
    CHECK(code_of([&] { simulate(p, config(10, 0, 0.1)); }) == ErrorCode::InvalidConfig);
    CHECK(code_of([&] { simulate(p, config(10, 10, 0.0)); }) == ErrorCode::InvalidConfig);

    const auto few = simulate(p, config(10, 10, 0.171));
    CHECK(code_of([&] { distribution_test(few, 0.99); }) == ErrorCode::TooFewPaths);
    const auto enough = simulate(p, config(1000, 10, 0.171));
    CHECK(code_of([&] { distribution_test(enough, 1.0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("path CSV dump") {
    const auto r = simulate(fixtures::total_10(), config(3, 10, 0.171));
    std::ostringstream out;
    write_paths_csv(r, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "path_id,x_terminal");
    for (std::size_t i = 0; i < 3; ++i) {
        REQUIRE(std::getline(in, line));
        const auto comma = line.find(',');
        CHECK(line.substr(0, comma) == std::to_string(i));
        CHECK(std::stod(line.substr(comma + 1)) == r.x_terminal[i]);
    }
    CHECK_FALSE(std::getline(in, line));
}
