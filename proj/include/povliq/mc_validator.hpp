#pragma once

#include "povliq/model.hpp"
#include "povliq/pov_engine.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace povliq {

struct SimConfig {
    std::int64_t n_paths = 100000;
    std::int64_t n_steps = 500;
    std::uint64_t seed = 42;
    double rho = 0.0;
    // Replace every Gaussian increment by zero; isolates the discretization error.
    bool zero_noise = false;
    // 0 picks std::thread::hardware_concurrency(). Results do not depend on it.
    unsigned threads = 0;
};

struct SimResult {
    std::int64_t n_paths = 0;
    std::int64_t n_steps = 0;
    double sample_mean = 0.0;
    double sample_variance = 0.0;
    double std_error_mean = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    CashDistribution analytic;
    double z_score_mean = 0.0;
    double variance_ratio = 0.0;

    // Sample mean of -exp(-gamma X_T). Underflows to zero for very large
    // gamma * X_T; the log-domain fields below do not.
    double utility_estimate = 0.0;
    double log_neg_utility = 0.0;           // ln(-utility_estimate)
    double log_neg_utility_std_error = 0.0; // delta-method standard error
    double log_neg_utility_analytic = 0.0;  // -gamma * certainty equivalent

    // Deterministic schedule bookkeeping shared by every path.
    double executed_volume = 0.0;
    double residual_inventory = 0.0;

    std::vector<double> x_terminal; // one entry per path, in path order
};

// Euler scheme for dS = sigma dW - k v dt and the cash process on a uniform grid
// over [0, T], trading rho * ∫ V over each step and exactly the remaining
// inventory on the last one. Each path draws from its own generator keyed by
// (seed, path index), so results are bit-identical for any thread count.
SimResult simulate(const LiquidationProblem& problem, const SimConfig& config);

struct DistributionTestReport {
    bool pass = false;
    bool mean_pass = false;
    bool variance_pass = false;
    bool skewness_pass = false;
    bool kurtosis_pass = false;
    double confidence = 0.0;
    double z_critical = 0.0;
    double variance_ratio_lo = 0.0;
    double variance_ratio_hi = 0.0;
    double skewness_bound = 0.0;
    double kurtosis_bound = 0.0;
};

// Checks the sample against the Gaussian law of X_T: two-sided z test on the
// mean, chi-square interval on the variance ratio, and moment bounds
// |skew| <= 4 sqrt(6/n), |excess kurtosis| <= 4 sqrt(24/n).
DistributionTestReport distribution_test(const SimResult& result, double confidence = 0.99);

// CSV with header "path_id,x_terminal".
void write_paths_csv(const SimResult& result, std::ostream& out);

} // namespace povliq
