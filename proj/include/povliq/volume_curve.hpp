#pragma once

#include <span>
#include <vector>

namespace povliq {

// One slice of an intraday volume profile: `duration` days traded at a
// constant market volume of `rate` shares/day.
struct ProfilePiece {
    double duration;
    double rate;
};

// Deterministic market volume V_t in shares/day, time measured in trading days.
//
// Either flat, or piecewise constant over one trading day and repeated day
// after day. Pieces are half-open intervals [start, end) so V_t is
// single-valued. All integrals are evaluated in closed form.
class VolumeCurve {
public:
    static VolumeCurve flat(double volume_per_day);

    // Durations must be positive and sum to one day (within 1e-9); rates must
    // be strictly positive and finite.
    static VolumeCurve piecewise(std::span<const ProfilePiece> day_profile);

    bool is_flat() const noexcept { return flat_; }

    // Flat-curve volume; for piecewise curves this is the daily total.
    double daily_volume() const noexcept { return daily_volume_; }

    double lower_bound() const noexcept { return lower_; }
    double upper_bound() const noexcept { return upper_; }

    const std::vector<ProfilePiece>& pieces() const noexcept { return pieces_; }

    // V_t.
    double rate_at(double t) const;

    // ∫_0^t V_s ds.
    double cum_volume(double t) const;

    // The unique T with rho * cum_volume(T) = q0.
    double completion_time(double rho, double q0) const;

    // rho^2 ∫_0^T (∫_t^T V_s ds)^2 dt, i.e. ∫_0^T q_t^2 dt for the residual
    // inventory q_t of a POV liquidation at rate rho.
    double risk_integral(double rho, double q0) const;

private:
    VolumeCurve() = default;

    // Volume traded from the start of a day up to intraday time s in [0, 1].
    double intraday_cum(double s) const;
    // Inverse of intraday_cum on [0, daily_volume_].
    double intraday_time(double volume) const;

    bool flat_ = true;
    std::vector<ProfilePiece> pieces_;
    std::vector<double> starts_;     // intraday start time of each piece
    std::vector<double> cum_starts_; // intraday cumulative volume at each start
    double daily_volume_ = 0.0;
    double lower_ = 0.0;
    double upper_ = 0.0;
};

} // namespace povliq
