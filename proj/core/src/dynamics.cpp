#include "sta/dynamics.hpp"

#include <cmath>
#include <complex>

#include "sta/errors.hpp"
#include "sta/grid.hpp"

namespace sta {

namespace {

using cd = std::complex<double>;

int substeps(double rate, double h_grid, double cap) {
    const int n = static_cast<int>(std::ceil(rate * h_grid / cap));
    return n > 1 ? n : 1;
}

void check_norm(double norm, const char* what) {
    if (std::abs(norm - 1.0) > 1e-6)
        throw NormDriftError(std::string("norm drift in ") + what);
}

}  // namespace

Eigen::Vector2cd integrate_two_level(const FrameSamples& frame,
                                     const Eigen::Vector2cd& psi0,
                                     double epsilon,
                                     std::vector<Eigen::Vector2cd>* trajectory,
                                     double step_cap) {
    if (!(step_cap > 0.0)) throw ValidationError("step cap must be positive");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw ValidationError("epsilon must be positive and finite");
    const int M = frame.size();
    const double h_grid = frame.dt();
    const double e2 = epsilon * epsilon;

    double rate = 0.0;
    for (int k = 0; k < M; ++k) {
        const double r =
            0.5 * (std::abs(frame.delta_eff_t[k]) + frame.omega_eff_t[k]);
        if (r > rate) rate = r;
    }
    const int nsub = substeps(rate * e2, h_grid, step_cap);
    const double h = h_grid / nsub;

    cd p0 = psi0(0);
    cd p1 = psi0(1);
    if (trajectory) {
        trajectory->clear();
        trajectory->reserve(M);
        trajectory->push_back(psi0);
    }

    // H = -1/2 [[D, O], [O, -D]] scaled by epsilon^2; dpsi = -i H psi.
    // Substeps align with the grid interval so every RK4 stage sees the
    // linear interpolant of (D, O) as a smooth function.
    for (int k = 0; k + 1 < M; ++k) {
        const double D0 = e2 * frame.delta_eff_t[k];
        const double D1 = e2 * frame.delta_eff_t[k + 1];
        const double O0 = e2 * frame.omega_eff_t[k];
        const double O1 = e2 * frame.omega_eff_t[k + 1];
        for (int j = 0; j < nsub; ++j) {
            const double fa = static_cast<double>(j) / nsub;
            const double fb = (j + 0.5) / nsub;
            const double fc = (j + 1.0) / nsub;
            const double da = D0 + (D1 - D0) * fa, oa = O0 + (O1 - O0) * fa;
            const double db = D0 + (D1 - D0) * fb, ob = O0 + (O1 - O0) * fb;
            const double dc = D0 + (D1 - D0) * fc, oc = O0 + (O1 - O0) * fc;
            const cd i05(0.0, 0.5);

            const cd k10 = i05 * (da * p0 + oa * p1);
            const cd k11 = i05 * (oa * p0 - da * p1);
            cd q0 = p0 + 0.5 * h * k10;
            cd q1 = p1 + 0.5 * h * k11;
            const cd k20 = i05 * (db * q0 + ob * q1);
            const cd k21 = i05 * (ob * q0 - db * q1);
            q0 = p0 + 0.5 * h * k20;
            q1 = p1 + 0.5 * h * k21;
            const cd k30 = i05 * (db * q0 + ob * q1);
            const cd k31 = i05 * (ob * q0 - db * q1);
            q0 = p0 + h * k30;
            q1 = p1 + h * k31;
            const cd k40 = i05 * (dc * q0 + oc * q1);
            const cd k41 = i05 * (oc * q0 - dc * q1);
            p0 += h / 6.0 * (k10 + 2.0 * k20 + 2.0 * k30 + k40);
            p1 += h / 6.0 * (k11 + 2.0 * k21 + 2.0 * k31 + k41);
        }
        if (trajectory) trajectory->push_back(Eigen::Vector2cd(p0, p1));
    }
    check_norm(std::sqrt(std::norm(p0) + std::norm(p1)), "two-level integration");
    return Eigen::Vector2cd(p0, p1);
}

Eigen::Vector3cd integrate_three_level(const PhysicalPulses& pulses,
                                       const SystemConfig& cfg,
                                       const Eigen::Vector3cd& psi0,
                                       double epsilon,
                                       std::vector<Eigen::Vector3cd>* trajectory,
                                       double step_cap) {
    if (!(step_cap > 0.0)) throw ValidationError("step cap must be positive");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw ValidationError("epsilon must be positive and finite");
    const int M = pulses.size();
    const double h_grid = pulses.dt();
    const double delta = cfg.delta;

    double peak = 0.0;
    for (int k = 0; k < M; ++k) {
        const double v = pulses.omega_P_t[k] + pulses.omega_S_t[k];
        if (v > peak) peak = v;
    }
    const int nsub =
        substeps(delta + 0.5 * epsilon * peak, h_grid, step_cap);
    const double h = h_grid / nsub;

    const cd eip(std::cos(cfg.phi_L), std::sin(cfg.phi_L));
    const cd eim = std::conj(eip);
    cd c1 = psi0(0), c2 = psi0(1), c3 = psi0(2);
    if (trajectory) {
        trajectory->clear();
        trajectory->reserve(M);
        trajectory->push_back(psi0);
    }

    // H = 1/2 [[0, P e^{i phi}, 0], [P e^{-i phi}, 2 delta, S], [0, S, 0]].
    const cd mi(0.0, -1.0);
    for (int k = 0; k + 1 < M; ++k) {
        const double P0 = pulses.omega_P_t[k], dPk = pulses.omega_P_t[k + 1] - P0;
        const double S0 = pulses.omega_S_t[k], dSk = pulses.omega_S_t[k + 1] - S0;
        for (int j = 0; j < nsub; ++j) {
            const double fa = static_cast<double>(j) / nsub;
            const double fm = (j + 0.5) / nsub;
            const double fb = (j + 1.0) / nsub;
            const double Pa = epsilon * (P0 + dPk * fa), Sa = epsilon * (S0 + dSk * fa);
            const double Pm = epsilon * (P0 + dPk * fm), Sm = epsilon * (S0 + dSk * fm);
            const double Pb = epsilon * (P0 + dPk * fb), Sb = epsilon * (S0 + dSk * fb);

            const cd k11 = mi * 0.5 * Pa * eip * c2;
            const cd k12 = mi * (0.5 * Pa * eim * c1 + delta * c2 + 0.5 * Sa * c3);
            const cd k13 = mi * 0.5 * Sa * c2;
            cd b1 = c1 + 0.5 * h * k11;
            cd b2 = c2 + 0.5 * h * k12;
            cd b3 = c3 + 0.5 * h * k13;
            const cd k21 = mi * 0.5 * Pm * eip * b2;
            const cd k22 = mi * (0.5 * Pm * eim * b1 + delta * b2 + 0.5 * Sm * b3);
            const cd k23 = mi * 0.5 * Sm * b2;
            b1 = c1 + 0.5 * h * k21;
            b2 = c2 + 0.5 * h * k22;
            b3 = c3 + 0.5 * h * k23;
            const cd k31 = mi * 0.5 * Pm * eip * b2;
            const cd k32 = mi * (0.5 * Pm * eim * b1 + delta * b2 + 0.5 * Sm * b3);
            const cd k33 = mi * 0.5 * Sm * b2;
            b1 = c1 + h * k31;
            b2 = c2 + h * k32;
            b3 = c3 + h * k33;
            const cd k41 = mi * 0.5 * Pb * eip * b2;
            const cd k42 = mi * (0.5 * Pb * eim * b1 + delta * b2 + 0.5 * Sb * b3);
            const cd k43 = mi * 0.5 * Sb * b2;
            c1 += h / 6.0 * (k11 + 2.0 * k21 + 2.0 * k31 + k41);
            c2 += h / 6.0 * (k12 + 2.0 * k22 + 2.0 * k32 + k42);
            c3 += h / 6.0 * (k13 + 2.0 * k23 + 2.0 * k33 + k43);
        }
        if (trajectory) trajectory->push_back(Eigen::Vector3cd(c1, c2, c3));
    }
    check_norm(std::sqrt(std::norm(c1) + std::norm(c2) + std::norm(c3)),
               "three-level integration");
    return Eigen::Vector3cd(c1, c2, c3);
}

double two_level_fidelity(const FrameSamples& frame, double epsilon) {
    const Eigen::Vector2cd psi =
        integrate_two_level(frame, Eigen::Vector2cd(1.0, 0.0), epsilon);
    return std::norm(psi(1));
}

double three_level_fidelity(const PhysicalPulses& pulses,
                            const SystemConfig& cfg, double epsilon) {
    const Eigen::Vector3cd psi = integrate_three_level(
        pulses, cfg, Eigen::Vector3cd(1.0, 0.0, 0.0), epsilon);
    return std::norm(psi(2));
}

ScalingSweep scaling_sweep(const FrameSamples& frame, double q,
                           double eps_min, double eps_max, int n) {
    if (!(eps_min > 0.0) || !(eps_min < 1.0) || !(eps_max > 1.0))
        throw ValidationError("epsilon range must satisfy 0 < lo < 1 < hi");
    if (n < 3) throw ValidationError("epsilon sweep needs at least 3 points");
    ScalingSweep sweep;
    sweep.epsilons = linspace(eps_min, eps_max, n);
    sweep.fidelities.resize(n);
    sweep.model_fidelities.resize(n);
    for (int k = 0; k < n; ++k) {
        const double e = sweep.epsilons[k];
        sweep.fidelities[k] = two_level_fidelity(frame, e);
        const double model = 1.0 - 4.0 * q * (e - 1.0) * (e - 1.0);
        sweep.model_fidelities[k] = model > 0.0 ? model : 0.0;
    }
    return sweep;
}

}  // namespace sta
