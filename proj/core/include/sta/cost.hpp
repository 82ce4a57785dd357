#pragma once

#include "sta/types.hpp"

namespace sta {

// C = exp[pw (peak - peak_target)] + exp[qw (q - q_target)], saturated at
// c_max so screening extreme seeds never overflows.
struct CostModel {
    double peak_target = 1.14;
    double q_target = 1.59;
    double peak_weight = 10.0;
    double q_weight = 2.0;
    double c_max = 1e12;

    double operator()(double omega_peak, double q) const;
};

// max over both pulses and all grid points of Omega_t / Omega_0.
double peak_rabi(const PhysicalPulses& pulses, const SystemConfig& cfg);

// Full map params -> reference -> frame -> (physical peak, q) -> C.
// Throws the pipeline's validation errors for unusable parameter sets.
CostReport evaluate_candidate(const PulseParameters& params,
                              const SystemConfig& cfg, const CostModel& cost,
                              bool adiabatic = false);

}  // namespace sta
