#include "sta/cost.hpp"

#include <cmath>

#include "sta/errors.hpp"
#include "sta/frame.hpp"
#include "sta/model.hpp"
#include "sta/robustness.hpp"

namespace sta {

double CostModel::operator()(double omega_peak, double q) const {
    if (!std::isfinite(omega_peak) || !std::isfinite(q))
        throw ValidationError("cost arguments must be finite");
    // exp saturates well before overflow; 700 keeps the sum finite.
    const double xp = std::min(peak_weight * (omega_peak - peak_target), 700.0);
    const double xq = std::min(q_weight * (q - q_target), 700.0);
    const double C = std::exp(xp) + std::exp(xq);
    return C < c_max ? C : c_max;
}

double peak_rabi(const PhysicalPulses& pulses, const SystemConfig& cfg) {
    double peak = 0.0;
    for (double v : pulses.omega_P_t)
        if (v > peak) peak = v;
    for (double v : pulses.omega_S_t)
        if (v > peak) peak = v;
    return peak / cfg.omega0;
}

CostReport evaluate_candidate(const PulseParameters& params,
                              const SystemConfig& cfg, const CostModel& cost,
                              bool adiabatic) {
    const ReferencePulses ref = reference_pulses(params, cfg);
    const FrameSamples frame = effective_frame(ref, cfg, adiabatic);
    const PhysicalPulses phys = physical_pulses(frame, cfg);
    CostReport report;
    report.omega_peak = peak_rabi(phys, cfg);
    report.q = sensitivity(frame, cfg);
    report.C = cost(report.omega_peak, report.q);
    report.params = params;
    return report;
}

}  // namespace sta
