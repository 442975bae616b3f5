#pragma once

#include "povliq/volume_curve.hpp"

#include <cmath>

namespace povliq {

// Stock observables in trader conventions.
struct MarketSpec {
    double price_s0 = 0.0;        // currency / share
    double adv = 0.0;             // shares / day
    double annualized_vol = 0.0;  // fraction, e.g. 0.18
    double trading_days_per_year = 252.0;
};

// Execution cost L(rho) = eta * rho^(1 + phi) plus psi per share, and linear
// permanent impact k (the price drifts by -k per share sold).
struct ImpactParams {
    double eta = 0.0;
    double phi = 0.0;
    double psi = 0.0;
    double k_perm = 0.0;
};

enum class Side { Sell, Buy };

// Fully converted model inputs. Time unit is the trading day.
struct LiquidationProblem {
    double q0 = 0.0;           // shares
    double gamma = 0.0;        // absolute risk aversion, 1 / currency
    double sigma_model = 0.0;  // arithmetic vol, currency / share / sqrt(day)
    double price_s0 = 0.0;     // mark-to-market price used for notional and cash
    VolumeCurve volume_curve = VolumeCurve::flat(1.0);
    ImpactParams impact;
    Side side = Side::Sell;

    double notional() const noexcept { return q0 * price_s0; }
};

// annualized_vol * price / sqrt(trading_days_per_year).
double daily_arithmetic_vol(const MarketSpec& spec);

void validate(const MarketSpec& spec);
void validate(const ImpactParams& impact);

// Validates every input and converts the market spec into model units.
LiquidationProblem build_problem(const MarketSpec& spec, const ImpactParams& impact, double q0,
                                 double gamma, const VolumeCurve& curve, Side side = Side::Sell);

// L(rho): execution cost per unit of market volume at participation rate rho.
inline double execution_cost(const ImpactParams& impact, double rho) {
    return impact.eta * std::pow(rho, 1.0 + impact.phi);
}

} // namespace povliq
