#pragma once

#include "povliq/model.hpp"

namespace povliq {

// Law of the terminal cash X_T of a POV liquidation at constant rate rho. X_T
// is Gaussian, so mean and variance determine it.
struct CashDistribution {
    double mean = 0.0;      // currency
    double variance = 0.0;  // currency^2
    double horizon_t = 0.0; // days
    double rho = 0.0;

    double stddev() const { return std::sqrt(variance); }
};

enum class RateMethod { ClosedForm, Numeric };

struct RateSolution {
    double rho_star = 0.0;
    double objective_value = 0.0; // reduced objective at rho_star, currency
    RateMethod method = RateMethod::ClosedForm;
    double horizon_t = 0.0;       // days to complete at rho_star
    // The optimal rate is relative to market volume excluding our own, so it
    // may exceed one. Reported, never capped.
    bool exceeds_full_participation = false;
};

struct RateBracket {
    double lo = 1e-6;
    double hi = 10.0;
};

inline constexpr int kRateGridPoints = 32;

// Reduced objective: (L(rho)/rho) q0 + (gamma/2) sigma^2 * risk_integral(rho).
double objective(const LiquidationProblem& problem, double rho);

// Execution-cost term eta * rho^phi * q0 of the reduced objective.
double execution_cost_term(const LiquidationProblem& problem, double rho);

// Risk term (gamma/2) sigma^2 * risk_integral(rho) of the reduced objective.
double risk_term(const LiquidationProblem& problem, double rho);

// Sell-side proceeds. The side flag only flips the sign of the premium in the
// block price; the cash law is stated for the liquidation.
CashDistribution terminal_cash_distribution(const LiquidationProblem& problem, double rho);

// E[-exp(-gamma X_T)] in closed form.
double expected_utility(const LiquidationProblem& problem, double rho);

// mean - (gamma/2) variance.
double certainty_equivalent(const LiquidationProblem& problem, double rho);

// rho* = (gamma sigma^2 q0^2 / (6 eta phi V))^(1/(1+phi)); flat curves only.
RateSolution optimal_rate_closed_form(const LiquidationProblem& problem);

// Global minimizer of the reduced objective over the bracket: a log-spaced
// grid of kRateGridPoints picks the basin (smallest rho wins ties), then
// Brent refines in log(rho) to rel_tol. Throws BracketTooNarrow if the grid
// minimum sits on either end of the bracket.
RateSolution optimal_rate_numeric(const LiquidationProblem& problem, RateBracket bracket = {},
                                  double rel_tol = 1e-10);

// Closed form for flat curves, numeric search with the default bracket otherwise.
RateSolution optimal_rate(const LiquidationProblem& problem);

} // namespace povliq
