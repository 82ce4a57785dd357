#include "sta/frame.hpp"

#include <cmath>
#include <stdexcept>

#include "sta/errors.hpp"

namespace sta {

FrameSamples effective_frame(const ReferencePulses& ref,
                             const SystemConfig& cfg, bool adiabatic) {
    const int M = ref.size();
    const double delta = cfg.delta;
    const double singular_floor = 1e-24 * cfg.omega0 * cfg.omega0;

    FrameSamples fr;
    fr.times = ref.times;
    fr.omega_P = ref.omega_P;
    fr.omega_S = ref.omega_S;
    fr.delta = delta;
    fr.omega0 = cfg.omega0;
    fr.phi_L = cfg.phi_L;
    fr.omega_eff.resize(M);
    fr.delta_eff.resize(M);
    fr.omega_a.resize(M);
    fr.gamma_dot.resize(M);
    fr.omega_eff_t.resize(M);
    fr.delta_eff_t.resize(M);
    fr.gamma.resize(M);
    fr.theta.resize(M);

    double prev_raw = 0.0;
    double offset = 0.0;
    for (int k = 0; k < M; ++k) {
        const double P = ref.omega_P[k];
        const double S = ref.omega_S[k];
        const double dP = ref.omega_P_dot[k];
        const double dS = ref.omega_S_dot[k];
        const double sum2 = P * P + S * S;
        if (sum2 < singular_floor)
            throw SingularMixingError(
                "singular mixing angle: pulses vanish simultaneously");

        fr.theta[k] = std::atan2(P, S);
        const double wr = dP * S - dS * P;
        double om_a = 0.0;
        double dom_a = 0.0;
        if (!adiabatic) {
            const double dwr = ref.omega_P_ddot[k] * S - ref.omega_S_ddot[k] * P;
            om_a = 2.0 * wr / sum2;
            dom_a = 2.0 * (dwr * sum2 - wr * 2.0 * (P * dP + S * dS)) /
                    (sum2 * sum2);
        }
        const double om_eff = P * S / (2.0 * delta);
        const double dom_eff = (dP * S + P * dS) / (2.0 * delta);
        const double d_eff = (P * P - S * S) / (4.0 * delta);
        const double h2 = om_eff * om_eff + om_a * om_a;
        const double gdot = h2 > 0.0 ? (dom_a * om_eff - dom_eff * om_a) / h2 : 0.0;

        const double raw = std::atan2(om_a, om_eff);
        if (k > 0) {
            const double d = raw - prev_raw;
            if (d > M_PI)
                offset -= 2.0 * M_PI;
            else if (d < -M_PI)
                offset += 2.0 * M_PI;
        }
        prev_raw = raw;

        fr.omega_a[k] = om_a;
        fr.omega_eff[k] = om_eff;
        fr.delta_eff[k] = d_eff;
        fr.gamma_dot[k] = gdot;
        fr.gamma[k] = raw + offset + cfg.phi_L;
        fr.omega_eff_t[k] = std::sqrt(h2);
        fr.delta_eff_t[k] = d_eff + gdot;
    }
    return fr;
}

Eigen::Matrix2cd counter_diabatic_term(const FrameSamples& frame, int k) {
    if (k < 0 || k >= frame.size())
        throw std::out_of_range("counter_diabatic_term: grid index");
    const double theta_dot = 0.5 * frame.omega_a[k];
    Eigen::Matrix2cd H;
    H << 0.0, std::complex<double>(0.0, -theta_dot),
        std::complex<double>(0.0, theta_dot), 0.0;
    return H;
}

PhysicalPulses physical_pulses(const FrameSamples& frame,
                               const SystemConfig& cfg) {
    const int M = frame.size();
    const double delta = cfg.delta;

    PhysicalPulses out;
    out.times = frame.times;
    out.omega_P_t.resize(M);
    out.omega_S_t.resize(M);

    for (int k = 0; k < M; ++k) {
        const double Dt = frame.delta_eff_t[k];
        const double Ot = frame.omega_eff_t[k];
        const double root = std::sqrt(Dt * Dt + Ot * Ot);
        double radP = 2.0 * delta * (root + Dt);
        double radS = 2.0 * delta * (root - Dt);
        // root >= |Dt| algebraically; anything beyond roundoff means the
        // frame itself is broken.
        const double tol = 1e-12 * (4.0 * delta * root + 1.0);
        if (radP < -tol || radS < -tol)
            throw NonPhysicalFrameError(
                "non-physical frame: negative radicand beyond tolerance");
        if (radP < 0.0) radP = 0.0;
        if (radS < 0.0) radS = 0.0;
        out.omega_P_t[k] = std::sqrt(radP);
        out.omega_S_t[k] = std::sqrt(radS);
    }
    return out;
}

}  // namespace sta
