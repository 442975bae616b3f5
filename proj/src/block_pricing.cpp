#include "povliq/block_pricing.hpp"

#include "povliq/error.hpp"

#include <cmath>
#include <numbers>

namespace povliq {

namespace {

void require_flat(const LiquidationProblem& problem, const char* what) {
    if (!problem.volume_curve.is_flat()) {
        throw Error(ErrorCode::RequiresFlatCurve, "volume.profile",
                    std::string(what) + " is only defined for a flat volume curve");
    }
}

// eta^(1/(1+phi)) * (gamma sigma^2 / (divisor phi V))^(phi/(1+phi)) * q0^((1+3phi)/(1+phi))
double scaled_power_term(const LiquidationProblem& problem, double divisor) {
    const double eta = problem.impact.eta;
    const double phi = problem.impact.phi;
    const double sigma = problem.sigma_model;
    const double v = problem.volume_curve.daily_volume();
    const double base = problem.gamma * sigma * sigma / (divisor * phi * v);
    return std::pow(eta, 1.0 / (1.0 + phi)) * std::pow(base, phi / (1.0 + phi)) *
           std::pow(problem.q0, (1.0 + 3.0 * phi) / (1.0 + phi));
}

double permanent_cost(const LiquidationProblem& problem) {
    return 0.5 * problem.impact.k_perm * problem.q0 * problem.q0;
}

double signed_price(const LiquidationProblem& problem, double premium) {
    return problem.side == Side::Sell ? problem.notional() - premium
                                      : problem.notional() + premium;
}

} // namespace

double to_bps(double amount, double notional) {
    return amount / notional * 1e4;
}

PremiumReport pov_premium(const LiquidationProblem& problem) {
    validate(problem.impact);
    const double q0 = problem.q0;
    const double fixed = problem.impact.psi * q0;

    PremiumReport report;
    report.side = problem.side;
    report.notional = problem.notional();
    report.permanent_component = permanent_cost(problem);

    if (problem.volume_curve.is_flat()) {
        const auto sol = optimal_rate_closed_form(problem);
        const double nonlinear = scaled_power_term(problem, 6.0);
        report.rho_star = sol.rho_star;
        report.method = sol.method;
        report.instantaneous_component = fixed + nonlinear;
        report.risk_component = problem.impact.phi * nonlinear;
        report.is_premium = is_premium(problem);
    } else {
        const auto sol = optimal_rate_numeric(problem);
        report.rho_star = sol.rho_star;
        report.method = sol.method;
        report.instantaneous_component = fixed + execution_cost_term(problem, sol.rho_star);
        report.risk_component = risk_term(problem, sol.rho_star);
    }

    report.premium_total =
        report.permanent_component + report.instantaneous_component + report.risk_component;
    report.block_price = signed_price(problem, report.premium_total);

    const double n = report.notional;
    report.bps.premium_total = to_bps(report.premium_total, n);
    report.bps.permanent = to_bps(report.permanent_component, n);
    report.bps.instantaneous = to_bps(report.instantaneous_component, n);
    report.bps.risk = to_bps(report.risk_component, n);
    if (report.is_premium) {
        report.bps.is_premium = to_bps(*report.is_premium, n);
    }
    return report;
}

double block_price(const LiquidationProblem& problem) {
    return pov_premium(problem).block_price;
}

double is_premium(const LiquidationProblem& problem) {
    require_flat(problem, "the IS premium");
    validate(problem.impact);
    const double phi = problem.impact.phi;
    const double shape = (1.0 + phi) * (1.0 + phi) / (1.0 + 3.0 * phi);
    return permanent_cost(problem) + problem.impact.psi * problem.q0 +
           shape * scaled_power_term(problem, 2.0);
}

double premium_ratio_bound(double phi) {
    if (!(phi > 0.0) || !std::isfinite(phi)) {
        throw Error(ErrorCode::NonPositivePhi, "phi", "phi must be > 0");
    }
    return (1.0 + phi) / (1.0 + 3.0 * phi) * std::pow(3.0, phi / (1.0 + phi));
}

double phi_star() {
    const double ln3 = std::log(3.0);
    return (2.0 - ln3) / (3.0 * ln3 - 2.0);
}

double premium_ratio_floor() {
    return std::numbers::e * std::log(3.0) / (2.0 * std::sqrt(3.0));
}

StrategyComparison compare_strategies(const LiquidationProblem& problem) {
    require_flat(problem, "the POV / IS comparison");
    const auto report = pov_premium(problem);

    StrategyComparison cmp;
    cmp.notional = report.notional;
    cmp.pov_premium = report.premium_total;
    cmp.is_premium = *report.is_premium;
    cmp.ratio = cmp.is_premium / cmp.pov_premium;
    cmp.bound = premium_ratio_bound(problem.impact.phi);
    cmp.savings_bps = to_bps(cmp.pov_premium - cmp.is_premium, cmp.notional);
    return cmp;
}

} // namespace povliq
