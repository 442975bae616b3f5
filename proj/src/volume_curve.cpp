#include "povliq/volume_curve.hpp"

#include "povliq/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace povliq {

namespace {

constexpr double kDurationTolerance = 1e-9;

void require_rate_and_size(double rho, double q0) {
    if (!(rho > 0.0) || !std::isfinite(rho)) {
        throw Error(ErrorCode::NonPositiveRate, "rho", "participation rate must be > 0");
    }
    if (!(q0 >= 0.0) || !std::isfinite(q0)) {
        throw Error(ErrorCode::NonPositiveInput, "q0", "order size must be >= 0");
    }
}

// ∫ over a segment of length `len` on which the residual x decreases linearly
// from x_a to x_b.
double linear_square_integral(double len, double x_a, double x_b) {
    return len * (x_a * x_a + x_a * x_b + x_b * x_b) / 3.0;
}

} // namespace

VolumeCurve VolumeCurve::flat(double volume_per_day) {
    if (!(volume_per_day > 0.0) || !std::isfinite(volume_per_day)) {
        throw Error(ErrorCode::NonPositiveInput, "volume", "flat volume must be > 0 and finite");
    }
    VolumeCurve curve;
    curve.flat_ = true;
    curve.pieces_ = {{1.0, volume_per_day}};
    curve.starts_ = {0.0};
    curve.cum_starts_ = {0.0, volume_per_day};
    curve.daily_volume_ = volume_per_day;
    curve.lower_ = volume_per_day;
    curve.upper_ = volume_per_day;
    return curve;
}

VolumeCurve VolumeCurve::piecewise(std::span<const ProfilePiece> day_profile) {
    if (day_profile.empty()) {
        throw Error(ErrorCode::InvalidProfile, "volume.profile", "profile has no pieces");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < day_profile.size(); ++i) {
        const auto& p = day_profile[i];
        const std::string where = "volume.profile[" + std::to_string(i) + "]";
        if (!(p.duration > 0.0) || !std::isfinite(p.duration)) {
            throw Error(ErrorCode::InvalidProfile, where + ".duration", "duration must be > 0");
        }
        if (!(p.rate > 0.0) || !std::isfinite(p.rate)) {
            throw Error(ErrorCode::InvalidProfile, where + ".rate", "rate must be > 0 and finite");
        }
        total += p.duration;
    }
    if (std::abs(total - 1.0) > kDurationTolerance) {
        throw Error(ErrorCode::InvalidProfile, "volume.profile",
                    "durations sum to " + std::to_string(total) + ", expected 1 day");
    }

    VolumeCurve curve;
    curve.flat_ = false;
    curve.pieces_.assign(day_profile.begin(), day_profile.end());
    // Absorb the rounding slack into the last piece so the day ends at exactly 1.
    double start = 0.0;
    for (std::size_t i = 0; i + 1 < curve.pieces_.size(); ++i) {
        start += curve.pieces_[i].duration;
    }
    curve.pieces_.back().duration = 1.0 - start;

    start = 0.0;
    double cum = 0.0;
    curve.lower_ = curve.pieces_.front().rate;
    curve.upper_ = curve.pieces_.front().rate;
    for (const auto& p : curve.pieces_) {
        curve.starts_.push_back(start);
        curve.cum_starts_.push_back(cum);
        start += p.duration;
        cum += p.duration * p.rate;
        curve.lower_ = std::min(curve.lower_, p.rate);
        curve.upper_ = std::max(curve.upper_, p.rate);
    }
    curve.cum_starts_.push_back(cum);
    curve.daily_volume_ = cum;
    return curve;
}

double VolumeCurve::rate_at(double t) const {
    if (!(t >= 0.0)) {
        throw Error(ErrorCode::NegativeTime, "t", "time must be >= 0");
    }
    if (flat_) {
        return daily_volume_;
    }
    const double s = t - std::floor(t);
    auto it = std::upper_bound(starts_.begin(), starts_.end(), s);
    return pieces_[static_cast<std::size_t>(it - starts_.begin()) - 1].rate;
}

double VolumeCurve::intraday_cum(double s) const {
    auto it = std::upper_bound(starts_.begin(), starts_.end(), s);
    const auto k = static_cast<std::size_t>(it - starts_.begin()) - 1;
    return cum_starts_[k] + (s - starts_[k]) * pieces_[k].rate;
}

double VolumeCurve::intraday_time(double volume) const {
    // cum_starts_ has one more entry than starts_ (the daily total).
    auto it = std::upper_bound(cum_starts_.begin(), cum_starts_.end() - 1, volume);
    const auto k = static_cast<std::size_t>(it - cum_starts_.begin()) - 1;
    const double s = starts_[k] + (volume - cum_starts_[k]) / pieces_[k].rate;
    return std::min(s, 1.0);
}

double VolumeCurve::cum_volume(double t) const {
    if (!(t >= 0.0)) {
        throw Error(ErrorCode::NegativeTime, "t", "time must be >= 0");
    }
    if (flat_) {
        return daily_volume_ * t;
    }
    const double days = std::floor(t);
    return days * daily_volume_ + intraday_cum(t - days);
}

double VolumeCurve::completion_time(double rho, double q0) const {
    require_rate_and_size(rho, q0);
    const double volume = q0 / rho;
    if (flat_) {
        return volume / daily_volume_;
    }
    double days = std::floor(volume / daily_volume_);
    double residual = volume - days * daily_volume_;
    if (residual < 0.0) {
        days -= 1.0;
        residual += daily_volume_;
    } else if (residual >= daily_volume_) {
        days += 1.0;
        residual -= daily_volume_;
    }
    return days + intraday_time(residual);
}

double VolumeCurve::risk_integral(double rho, double q0) const {
    require_rate_and_size(rho, q0);
    if (flat_) {
        // rho^2 V^2 T^3 / 3 with T = q0 / (rho V)
        return q0 * q0 * q0 / (3.0 * rho * daily_volume_);
    }

    // Work in volume units (inventory / rho) and rescale by rho^2 at the end.
    const double volume = q0 / rho;
    const double d = daily_volume_;
    double n = std::floor(volume / d);
    double u = volume - n * d;
    if (u < 0.0) {
        n -= 1.0;
        u += d;
    } else if (u >= d) {
        n += 1.0;
        u -= d;
    }

    double total = 0.0;

    // Full days k = 0..n-1. Inside day k at intraday cumulative volume c the
    // residual is u + (n - k) d - c = alpha + d m with alpha = u + d - c >= 0
    // and m = n - k - 1 in [0, n - 1], so every expanded term is nonnegative.
    if (n > 0.0) {
        const double s1 = n * (n - 1.0) / 2.0;
        const double s2 = (n - 1.0) * n * (2.0 * n - 1.0) / 6.0;
        for (std::size_t i = 0; i < pieces_.size(); ++i) {
            const double a = u + d - cum_starts_[i];
            const double b = u + d - cum_starts_[i + 1];
            total += pieces_[i].duration *
                     (n * (a * a + a * b + b * b) / 3.0 + d * (a + b) * s1 + d * d * s2);
        }
    }

    // Final partial day: residual falls from u to 0 over [0, tau).
    const double tau = intraday_time(u);
    for (std::size_t i = 0; i < pieces_.size() && starts_[i] < tau; ++i) {
        const double end = std::min(starts_[i] + pieces_[i].duration, tau);
        const double x_a = u - cum_starts_[i];
        const double x_b = std::max(u - intraday_cum(end), 0.0);
        total += linear_square_integral(end - starts_[i], x_a, x_b);
    }

    return rho * rho * total;
}

} // namespace povliq
