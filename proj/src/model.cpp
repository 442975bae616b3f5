#include "povliq/model.hpp"

#include "povliq/error.hpp"

#include <cmath>

namespace povliq {

namespace {

void require_positive(double value, const char* field) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw Error(ErrorCode::NonPositiveInput, field, "must be > 0 and finite");
    }
}

void require_nonnegative(double value, const char* field) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
        throw Error(ErrorCode::NonPositiveInput, field, "must be >= 0 and finite");
    }
}

} // namespace

void validate(const MarketSpec& spec) {
    require_positive(spec.price_s0, "market.price");
    require_positive(spec.adv, "market.adv");
    if (spec.annualized_vol == 0.0) {
        throw Error(ErrorCode::ZeroVolatility, "market.annualized_vol", "volatility must be > 0");
    }
    require_positive(spec.annualized_vol, "market.annualized_vol");
    require_positive(spec.trading_days_per_year, "market.trading_days_per_year");
}

void validate(const ImpactParams& impact) {
    require_positive(impact.eta, "impact.eta");
    require_positive(impact.phi, "impact.phi");
    require_nonnegative(impact.psi, "impact.psi");
    require_nonnegative(impact.k_perm, "impact.k");
}

double daily_arithmetic_vol(const MarketSpec& spec) {
    return spec.annualized_vol * spec.price_s0 / std::sqrt(spec.trading_days_per_year);
}

LiquidationProblem build_problem(const MarketSpec& spec, const ImpactParams& impact, double q0,
                                 double gamma, const VolumeCurve& curve, Side side) {
    validate(spec);
    validate(impact);
    require_positive(q0, "order.q0");
    require_positive(gamma, "trader.gamma");

    LiquidationProblem problem;
    problem.q0 = q0;
    problem.gamma = gamma;
    problem.sigma_model = daily_arithmetic_vol(spec);
    problem.price_s0 = spec.price_s0;
    problem.volume_curve = curve;
    problem.impact = impact;
    problem.side = side;
    return problem;
}

} // namespace povliq
