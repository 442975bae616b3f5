#include "povliq/error.hpp"
#include "povliq/volume_curve.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>
#include <vector>

using povliq::ErrorCode;
using povliq::ProfilePiece;
using povliq::VolumeCurve;

namespace {

VolumeCurve two_rate() {
    const std::vector<ProfilePiece> p{{0.5, 2000.0}, {0.5, 500.0}};
    return VolumeCurve::piecewise(p);
}

VolumeCurve to_curve(const oracle::Profile& profile) {
    std::vector<ProfilePiece> pieces;
    for (const auto& [d, r] : profile) {
        pieces.push_back({d, r});
    }
    return VolumeCurve::piecewise(pieces);
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const povliq::Error& e) {
        return e.code();
    }
    FAIL("expected povliq::Error");
    return ErrorCode::InvalidArgument;
}

} // namespace

TEST_CASE("cum_volume") {
    const auto flat = VolumeCurve::flat(1000.0);
    CHECK(flat.cum_volume(0.5) == doctest::Approx(500.0));
    CHECK(flat.cum_volume(0.0) == 0.0);
    CHECK(two_rate().cum_volume(0.0) == 0.0);
    // 1000 + 250 on day 0, then a quarter day at 2000
    CHECK(two_rate().cum_volume(1.25) == doctest::Approx(1750.0).epsilon(1e-14));
    CHECK(code_of([&] { flat.cum_volume(-1e-9); }) == ErrorCode::NegativeTime);
}

TEST_CASE("rate_at uses half-open pieces") {
    const auto c = two_rate();
    CHECK(c.rate_at(0.0) == 2000.0);
    CHECK(c.rate_at(0.4999) == 2000.0);
    CHECK(c.rate_at(0.5) == 500.0);
    CHECK(c.rate_at(1.0) == 2000.0);
    CHECK(c.lower_bound() == 500.0);
    CHECK(c.upper_bound() == 2000.0);
}

TEST_CASE("completion_time") {
    CHECK(VolumeCurve::flat(1000.0).completion_time(0.1, 100.0) == doctest::Approx(1.0));
    CHECK(VolumeCurve::flat(4e6).completion_time(0.171, 4e5) ==
          doctest::Approx(0.584795321637427).epsilon(1e-14));
    // 1000 shares in the first half day, then 100 more at 500 / day
    CHECK(two_rate().completion_time(1.0, 1100.0) == doctest::Approx(0.7).epsilon(1e-14));
    // exactly two days of volume
    CHECK(two_rate().completion_time(1.0, 2500.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(code_of([] { VolumeCurve::flat(1.0).completion_time(0.0, 1.0); }) ==
          ErrorCode::NonPositiveRate);
}

TEST_CASE("risk_integral closed forms") {
    CHECK(VolumeCurve::flat(1000.0).risk_integral(0.1, 100.0) ==
          doctest::Approx(10000.0 / 3.0).epsilon(1e-14));
    CHECK(VolumeCurve::flat(4e6).risk_integral(0.171, 4e5) ==
          doctest::Approx(31189083820.6628).epsilon(1e-12));
    CHECK(VolumeCurve::flat(4e6).risk_integral(0.171, 0.0) == 0.0);
    CHECK(VolumeCurve::flat(4e6).risk_integral(0.171, 1e-6) < 1e-15);
    // ∫_0^0.7 (1100 - C(t))^2 dt, hand integration of the two pieces
    CHECK(two_rate().risk_integral(1.0, 1100.0) == doctest::Approx(222333.333333333).epsilon(1e-13));
}

TEST_CASE("profile validation") {
    const std::vector<ProfilePiece> short_day{{0.5, 1.0}, {0.4, 1.0}};
    CHECK(code_of([&] { VolumeCurve::piecewise(short_day); }) == ErrorCode::InvalidProfile);
    const std::vector<ProfilePiece> zero_rate{{0.5, 1.0}, {0.5, 0.0}};
    CHECK(code_of([&] { VolumeCurve::piecewise(zero_rate); }) == ErrorCode::InvalidProfile);
    CHECK(code_of([] { VolumeCurve::piecewise({}); }) == ErrorCode::InvalidProfile);
    CHECK(code_of([] { VolumeCurve::flat(0.0); }) == ErrorCode::NonPositiveInput);
}

TEST_CASE("piecewise curves agree with scanning and quadrature oracles") {
    std::mt19937_64 gen(20240611);
    std::uniform_real_distribution<double> days(0.02, 6.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto profile = oracle::random_profile(gen, 2e5, 5e6);
        const auto curve = to_curve(profile);
        const double rho = oracle::log_uniform(gen, 0.01, 2.0);
        const double q0 = rho * curve.daily_volume() * days(gen);
        CAPTURE(trial);

        const double t = days(gen);
        CHECK(curve.cum_volume(t) == doctest::Approx(oracle::scan_cum_volume(profile, t)).epsilon(1e-12));

        const double horizon = curve.completion_time(rho, q0);
        CHECK(std::abs(rho * curve.cum_volume(horizon) - q0) <= 1e-12 * q0);
        CHECK(horizon == doctest::Approx(oracle::scan_completion_time(profile, rho, q0)).epsilon(1e-12));

        const double exact = curve.risk_integral(rho, q0);
        const double quad = oracle::quadrature_risk_integral(profile, rho, q0);
        CHECK(std::abs(exact - quad) <= 1e-10 * quad);

        // bounds from the extreme rates
        const double lo = rho * rho * curve.lower_bound() * curve.lower_bound() * horizon * horizon * horizon / 3.0;
        const double hi = rho * rho * curve.upper_bound() * curve.upper_bound() * horizon * horizon * horizon / 3.0;
        CHECK(exact >= lo * (1.0 - 1e-12));
        CHECK(exact <= hi * (1.0 + 1e-12));

        // monotonicity in rho and q0
        CHECK(curve.completion_time(rho * 1.01, q0) < horizon);
        CHECK(curve.completion_time(rho, q0 * 1.01) > horizon);
        CHECK(curve.lower_bound() * t <= curve.cum_volume(t) * (1.0 + 1e-12));
        CHECK(curve.cum_volume(t) <= curve.upper_bound() * t * (1.0 + 1e-12));
    }
}

TEST_CASE("long liquidations use the periodic closed form") {
    // hundreds of days exercise the full-day summation
    const auto curve = two_rate();
    const oracle::Profile profile{{0.5, 2000.0}, {0.5, 500.0}};
    const double rho = 0.01;
    const double q0 = 2500.0 * rho * 300.4;
    const double quad = oracle::quadrature_risk_integral(profile, rho, q0);
    CHECK(std::abs(curve.risk_integral(rho, q0) - quad) <= 1e-10 * quad);
}
