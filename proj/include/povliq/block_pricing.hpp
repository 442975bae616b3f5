#pragma once

#include "povliq/model.hpp"
#include "povliq/pov_engine.hpp"

#include <optional>

namespace povliq {

// Component amounts expressed in basis points of the pre-trade notional q0 * S0.
struct PremiumBps {
    double premium_total = 0.0;
    double permanent = 0.0;
    double instantaneous = 0.0;
    double risk = 0.0;
    std::optional<double> is_premium;
};

// Risk-liquidity premium of a POV liquidation at the optimal rate, split into
// permanent impact k q0^2 / 2, instantaneous impact psi q0 + eta rho*^phi q0,
// and the price-risk charge.
//
// On flat curves risk == phi * (instantaneous - psi q0) holds exactly; on
// piecewise curves the risk charge is the evaluated variance term and that
// identity is not expected.
struct PremiumReport {
    double block_price = 0.0;
    double premium_total = 0.0;
    double permanent_component = 0.0;
    double instantaneous_component = 0.0;
    double risk_component = 0.0;
    std::optional<double> is_premium; // flat curves only
    double rho_star = 0.0;
    RateMethod method = RateMethod::ClosedForm;
    double notional = 0.0;
    Side side = Side::Sell;
    PremiumBps bps;
};

PremiumReport pov_premium(const LiquidationProblem& problem);

// Certainty-equivalent price of the block: q0 S0 - premium for a sale,
// q0 S0 + premium for a purchase.
double block_price(const LiquidationProblem& problem);

// Premium of a time-unconstrained IS liquidation. Flat curves only.
double is_premium(const LiquidationProblem& problem);

// g(phi) = (1 + phi) / (1 + 3 phi) * 3^(phi / (1 + phi)), the lower bound of
// the IS / POV premium ratio.
double premium_ratio_bound(double phi);

// argmin of g: (2 - ln 3) / (3 ln 3 - 2).
double phi_star();

// min over phi of g: e ln 3 / (2 sqrt 3).
double premium_ratio_floor();

struct StrategyComparison {
    double pov_premium = 0.0;
    double is_premium = 0.0;
    double ratio = 0.0;        // is / pov
    double bound = 0.0;        // g(phi)
    double savings_bps = 0.0;  // (pov - is) in bps of notional
    double notional = 0.0;
};

// Flat curves only.
StrategyComparison compare_strategies(const LiquidationProblem& problem);

double to_bps(double amount, double notional);

} // namespace povliq
