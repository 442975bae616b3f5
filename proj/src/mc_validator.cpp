#include "povliq/mc_validator.hpp"

#include "povliq/error.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <locale>
#include <ostream>
#include <random>
#include <thread>

namespace povliq {

namespace {

void validate_config(const SimConfig& config) {
    if (config.n_paths < 1) {
        throw Error(ErrorCode::InvalidConfig, "n_paths", "must be >= 1");
    }
    if (config.n_steps < 1) {
        throw Error(ErrorCode::InvalidConfig, "n_steps", "must be >= 1");
    }
    if (!(config.rho > 0.0) || !std::isfinite(config.rho)) {
        throw Error(ErrorCode::InvalidConfig, "rho", "must be > 0");
    }
}

// Volume executed in each step; the last step clears the inventory exactly.
std::vector<double> step_volumes(const LiquidationProblem& problem, double rho, double horizon,
                                 std::int64_t n_steps) {
    const auto& curve = problem.volume_curve;
    const double dt = horizon / static_cast<double>(n_steps);
    std::vector<double> volumes(static_cast<std::size_t>(n_steps));
    double executed = 0.0;
    double cum_prev = 0.0;
    for (std::int64_t i = 0; i + 1 < n_steps; ++i) {
        const double cum_next = curve.cum_volume(dt * static_cast<double>(i + 1));
        const double dq = std::min(rho * (cum_next - cum_prev), problem.q0 - executed);
        volumes[static_cast<std::size_t>(i)] = dq;
        executed += dq;
        cum_prev = cum_next;
    }
    volumes.back() = problem.q0 - executed;
    return volumes;
}

std::mt19937_64 path_generator(std::uint64_t seed, std::uint64_t path) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32)};
    return std::mt19937_64(seq);
}

struct PathKernel {
    const std::vector<double>& volumes;
    double s0;
    double cost_per_share; // eta rho^phi + psi
    double noise_scale;    // sigma sqrt(dt)
    double k_perm;
    std::uint64_t seed;
    bool zero_noise;

    double operator()(std::uint64_t path) const {
        double price = s0;
        double cash = 0.0;
        if (zero_noise) {
            for (const double dq : volumes) {
                cash += dq * (price - cost_per_share);
                price -= k_perm * dq;
            }
            return cash;
        }
        auto gen = path_generator(seed, path);
        std::normal_distribution<double> normal;
        for (const double dq : volumes) {
            cash += dq * (price - cost_per_share);
            price += noise_scale * normal(gen) - k_perm * dq;
        }
        return cash;
    }
};

} // namespace

SimResult simulate(const LiquidationProblem& problem, const SimConfig& config) {
    validate_config(config);
    const double rho = config.rho;
    const auto analytic = terminal_cash_distribution(problem, rho);
    const double horizon = analytic.horizon_t;
    if (!std::isfinite(horizon) || !(horizon > 0.0)) {
        throw Error(ErrorCode::InvalidConfig, "rho", "liquidation horizon is not finite");
    }

    const auto volumes = step_volumes(problem, rho, horizon, config.n_steps);
    const double dt = horizon / static_cast<double>(config.n_steps);
    const PathKernel kernel{volumes,
                            problem.price_s0,
                            problem.impact.eta * std::pow(rho, problem.impact.phi) +
                                problem.impact.psi,
                            problem.sigma_model * std::sqrt(dt),
                            problem.impact.k_perm,
                            config.seed,
                            config.zero_noise};

    const auto n = static_cast<std::size_t>(config.n_paths);
    std::vector<double> terminal(n);

    unsigned threads = config.threads != 0 ? config.threads : std::thread::hardware_concurrency();
    threads = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(std::min<std::size_t>(n, 256)));
    if (threads == 1) {
        for (std::size_t p = 0; p < n; ++p) {
            terminal[p] = kernel(p);
        }
    } else {
        std::vector<std::jthread> workers;
        const std::size_t chunk = (n + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t begin = t * chunk;
            const std::size_t end = std::min(n, begin + chunk);
            if (begin >= end) {
                break;
            }
            workers.emplace_back([&, begin, end] {
                for (std::size_t p = begin; p < end; ++p) {
                    terminal[p] = kernel(p);
                }
            });
        }
    }

    SimResult result;
    result.n_paths = config.n_paths;
    result.n_steps = config.n_steps;
    result.analytic = analytic;

    double executed = 0.0;
    for (const double dq : volumes) {
        executed += dq;
    }
    result.executed_volume = executed;
    result.residual_inventory = problem.q0 - executed;

    // Ordered two-pass reduction.
    const double count = static_cast<double>(n);
    double sum = 0.0;
    for (const double x : terminal) {
        sum += x;
    }
    const double mean = sum / count;
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (const double x : terminal) {
        const double d = x - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    result.sample_mean = mean;
    result.sample_variance = n > 1 ? m2 / (count - 1.0) : 0.0;
    result.std_error_mean = std::sqrt(result.sample_variance / count);
    if (m2 > 0.0) {
        const double pop_var = m2 / count;
        result.skewness = (m3 / count) / std::pow(pop_var, 1.5);
        result.excess_kurtosis = (m4 / count) / (pop_var * pop_var) - 3.0;
    }
    const double diff = mean - analytic.mean;
    if (result.std_error_mean > 0.0) {
        result.z_score_mean = diff / result.std_error_mean;
    } else {
        result.z_score_mean = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    }
    result.variance_ratio = result.sample_variance / analytic.variance;

    // Utility in the log domain, shifted by the analytic certainty equivalent.
    const double gamma = problem.gamma;
    const double ce = analytic.mean - 0.5 * gamma * analytic.variance;
    double u_sum = 0.0;
    for (const double x : terminal) {
        u_sum += std::exp(-gamma * (x - ce));
    }
    const double u_mean = u_sum / count;
    double u_m2 = 0.0;
    for (const double x : terminal) {
        const double d = std::exp(-gamma * (x - ce)) - u_mean;
        u_m2 += d * d;
    }
    const double u_se = n > 1 ? std::sqrt(u_m2 / (count - 1.0) / count) : 0.0;
    result.log_neg_utility = -gamma * ce + std::log(u_mean);
    result.log_neg_utility_std_error = u_se / u_mean;
    result.log_neg_utility_analytic = -gamma * ce;
    result.utility_estimate = -std::exp(result.log_neg_utility);

    result.x_terminal = std::move(terminal);
    return result;
}

DistributionTestReport distribution_test(const SimResult& result, double confidence) {
    if (result.n_paths < 1000) {
        throw Error(ErrorCode::TooFewPaths, "n_paths", "distribution test needs >= 1000 paths");
    }
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "confidence", "must lie in (0, 1)");
    }

    const double alpha = 1.0 - confidence;
    const double n = static_cast<double>(result.n_paths);
    const boost::math::normal_distribution<double> standard;
    const boost::math::chi_squared_distribution<double> chi2(n - 1.0);

    DistributionTestReport report;
    report.confidence = confidence;
    report.z_critical = boost::math::quantile(standard, 1.0 - alpha / 2.0);
    report.variance_ratio_lo = boost::math::quantile(chi2, alpha / 2.0) / (n - 1.0);
    report.variance_ratio_hi = boost::math::quantile(chi2, 1.0 - alpha / 2.0) / (n - 1.0);
    report.skewness_bound = 4.0 * std::sqrt(6.0 / n);
    report.kurtosis_bound = 4.0 * std::sqrt(24.0 / n);

    report.mean_pass = std::abs(result.z_score_mean) <= report.z_critical;
    report.variance_pass = result.variance_ratio >= report.variance_ratio_lo &&
                           result.variance_ratio <= report.variance_ratio_hi;
    report.skewness_pass = std::abs(result.skewness) <= report.skewness_bound;
    report.kurtosis_pass = std::abs(result.excess_kurtosis) <= report.kurtosis_bound;
    report.pass = report.mean_pass && report.variance_pass && report.skewness_pass &&
                  report.kurtosis_pass;
    return report;
}

void write_paths_csv(const SimResult& result, std::ostream& out) {
    const auto old_locale = out.imbue(std::locale::classic());
    const auto old_precision = out.precision(17);
    out << "path_id,x_terminal\n";
    for (std::size_t i = 0; i < result.x_terminal.size(); ++i) {
        out << i << ',' << result.x_terminal[i] << '\n';
    }
    out.precision(old_precision);
    out.imbue(old_locale);
}

} // namespace povliq
