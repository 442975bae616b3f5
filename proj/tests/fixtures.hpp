#pragma once

#include "povliq/model.hpp"

namespace fixtures {

inline povliq::MarketSpec total_market() { return {40.0, 4e6, 0.18, 252.0}; }
inline povliq::ImpactParams total_impact() { return {0.116, 0.63, 0.002, 5.8e-7}; }

inline povliq::MarketSpec axa_market() { return {13.0, 7e6, 0.22, 252.0}; }
inline povliq::ImpactParams axa_impact() { return {0.046, 0.63, 0.0007, 1.9e-7}; }

inline povliq::MarketSpec danone_market() { return {50.0, 1.7e6, 0.18, 252.0}; }
inline povliq::ImpactParams danone_impact() { return {0.145, 0.63, 0.003, 2.7e-6}; }

inline constexpr double kGamma = 3e-6;

inline povliq::LiquidationProblem flat_problem(const povliq::MarketSpec& m,
                                               const povliq::ImpactParams& i, double adv_fraction,
                                               povliq::Side side = povliq::Side::Sell) {
    return povliq::build_problem(m, i, adv_fraction * m.adv, kGamma,
                                 povliq::VolumeCurve::flat(m.adv), side);
}

inline povliq::LiquidationProblem total_10() {
    return flat_problem(total_market(), total_impact(), 0.10);
}

} // namespace fixtures
