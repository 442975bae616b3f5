#include "povliq/pov_engine.hpp"

#include "povliq/error.hpp"
#include "povliq/scalar_min.hpp"

#include <array>
#include <cmath>
#include <string>

namespace povliq {

namespace {

void require_rate(double rho) {
    if (!(rho > 0.0) || !std::isfinite(rho)) {
        throw Error(ErrorCode::NonPositiveRate, "rho", "participation rate must be > 0");
    }
}

} // namespace

double execution_cost_term(const LiquidationProblem& problem, double rho) {
    require_rate(rho);
    return problem.impact.eta * std::pow(rho, problem.impact.phi) * problem.q0;
}

double risk_term(const LiquidationProblem& problem, double rho) {
    require_rate(rho);
    const double sigma = problem.sigma_model;
    return 0.5 * problem.gamma * sigma * sigma *
           problem.volume_curve.risk_integral(rho, problem.q0);
}

double objective(const LiquidationProblem& problem, double rho) {
    return execution_cost_term(problem, rho) + risk_term(problem, rho);
}

CashDistribution terminal_cash_distribution(const LiquidationProblem& problem, double rho) {
    require_rate(rho);
    const auto& imp = problem.impact;
    const double q0 = problem.q0;
    const double sigma = problem.sigma_model;

    CashDistribution dist;
    dist.rho = rho;
    dist.mean = q0 * problem.price_s0 - imp.psi * q0 - 0.5 * imp.k_perm * q0 * q0 -
                execution_cost_term(problem, rho);
    dist.variance = sigma * sigma * problem.volume_curve.risk_integral(rho, q0);
    dist.horizon_t = problem.volume_curve.completion_time(rho, q0);
    return dist;
}

double certainty_equivalent(const LiquidationProblem& problem, double rho) {
    const auto dist = terminal_cash_distribution(problem, rho);
    return dist.mean - 0.5 * problem.gamma * dist.variance;
}

double expected_utility(const LiquidationProblem& problem, double rho) {
    return -std::exp(-problem.gamma * certainty_equivalent(problem, rho));
}

RateSolution optimal_rate_closed_form(const LiquidationProblem& problem) {
    if (!problem.volume_curve.is_flat()) {
        throw Error(ErrorCode::RequiresFlatCurve, "volume.profile",
                    "the closed-form rate needs a flat volume curve");
    }
    validate(problem.impact);
    if (!(problem.q0 > 0.0) || !(problem.gamma > 0.0) || !(problem.sigma_model > 0.0)) {
        throw Error(ErrorCode::NonPositiveInput, "problem",
                    "q0, gamma and sigma must all be > 0");
    }

    const double eta = problem.impact.eta;
    const double phi = problem.impact.phi;
    const double v = problem.volume_curve.daily_volume();
    const double q0 = problem.q0;
    const double sigma = problem.sigma_model;
    const double risk_scale = problem.gamma * sigma * sigma / (6.0 * phi * v);

    RateSolution sol;
    sol.method = RateMethod::ClosedForm;
    sol.rho_star = std::pow(risk_scale * q0 * q0 / eta, 1.0 / (1.0 + phi));
    sol.objective_value = (1.0 + phi) * std::pow(eta, 1.0 / (1.0 + phi)) *
                          std::pow(risk_scale, phi / (1.0 + phi)) *
                          std::pow(q0, (1.0 + 3.0 * phi) / (1.0 + phi));
    sol.horizon_t = problem.volume_curve.completion_time(sol.rho_star, q0);
    sol.exceeds_full_participation = sol.rho_star > 1.0;
    return sol;
}

RateSolution optimal_rate_numeric(const LiquidationProblem& problem, RateBracket bracket,
                                  double rel_tol) {
    if (!(bracket.lo > 0.0) || !(bracket.hi > bracket.lo) || !std::isfinite(bracket.hi)) {
        throw Error(ErrorCode::InvalidArgument, "bracket", "need 0 < lo < hi");
    }
    if (!(rel_tol >= 1e-12)) {
        throw Error(ErrorCode::InvalidArgument, "rel_tol", "must be >= 1e-12");
    }

    const auto f = [&](double log_rho) { return objective(problem, std::exp(log_rho)); };

    const double u_lo = std::log(bracket.lo);
    const double u_hi = std::log(bracket.hi);
    const double step = (u_hi - u_lo) / (kRateGridPoints - 1);

    std::array<double, kRateGridPoints> grid{};
    std::size_t best = 0;
    double best_value = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid[i] = (i + 1 == grid.size()) ? u_hi : u_lo + step * static_cast<double>(i);
        const double value = f(grid[i]);
        if (i == 0 || value < best_value) {
            best = i;
            best_value = value;
        }
    }
    if (best == 0 || best + 1 == grid.size()) {
        throw Error(ErrorCode::BracketTooNarrow, "bracket",
                    "grid minimum at rho = " + std::to_string(std::exp(grid[best])) +
                        " lies on the bracket boundary");
    }

    // Refine as an offset from the grid point so the stopping tolerance is an
    // absolute one in log(rho), i.e. relative in rho.
    const double center = grid[best];
    const auto g = [&](double offset) { return f(center + offset); };
    const auto min = brent_minimize(g, grid[best - 1] - center, grid[best + 1] - center, rel_tol);

    RateSolution sol;
    sol.method = RateMethod::Numeric;
    sol.rho_star = std::exp(center + min.x);
    sol.objective_value = min.fx;
    if (best_value < sol.objective_value) {
        sol.rho_star = std::exp(center);
        sol.objective_value = best_value;
    }
    sol.horizon_t = problem.volume_curve.completion_time(sol.rho_star, problem.q0);
    sol.exceeds_full_participation = sol.rho_star > 1.0;
    return sol;
}

RateSolution optimal_rate(const LiquidationProblem& problem) {
    if (problem.volume_curve.is_flat()) {
        return optimal_rate_closed_form(problem);
    }
    return optimal_rate_numeric(problem);
}

} // namespace povliq
