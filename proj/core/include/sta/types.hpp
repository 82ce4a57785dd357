#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace sta {

inline constexpr double kTwoPi = 6.28318530717958647692528676656;

// Default Rabi scale Omega_0 = 2*pi * 5 MHz.
inline constexpr double kOmega0Default = kTwoPi * 5.0e6;

// Calibrated one-photon detuning in units of Omega_0.  Fixed by the
// calibration run: the Gaussian reference at T = 0.4 ms reaches peak
// physical Rabi frequency 1.14 * Omega_0 at this detuning.
inline constexpr double kDeltaOverOmega0 = 489.4726;

// Physical constants of the Lambda system plus numerical grid resolution.
struct SystemConfig {
    double delta = kDeltaOverOmega0 * kOmega0Default;  // one-photon detuning, rad/s
    double omega0 = kOmega0Default;                    // Rabi scale, rad/s
    double phi_L = 0.0;                                // laser phase, rad
    int grid_points = 2001;                            // uniform time samples
    double q_norm = 1.0;  // sensitivity normalization, fixed by calibration

    // Throws ValidationError when invariants fail; emits a warning line on
    // stderr for 20 <= delta/omega0 < 100 where adiabatic elimination is
    // marginal.
    void validate() const;
};

// Control vector of the sum-of-Gaussians reference pulses.
struct PulseParameters {
    double T = 0.0;          // pulse duration, s
    std::vector<double> a;   // amplitudes, dimensionless
    std::vector<double> t0;  // centers, s
    std::vector<double> w;   // widths, s

    int n_gaussians() const { return static_cast<int>(a.size()); }

    // Shape invariants and the sampling box: |a| <= 1, |t0| <= T/2,
    // T/50 <= w <= T/2.  Throws ValidationError.
    void validate() const;
};

// Reference pump/Stokes pulses sampled on the uniform grid, with analytic
// derivatives of the underlying parametrization (never finite differences).
struct ReferencePulses {
    std::vector<double> times;                       // s
    std::vector<double> omega_P, omega_S;            // rad/s
    std::vector<double> omega_P_dot, omega_S_dot;    // rad/s^2
    std::vector<double> omega_P_ddot, omega_S_ddot;  // rad/s^3
    double ratio0 = 0.0;  // Omega_P(0)/Omega_S(0) before endpoint clamping
    double ratioT = 0.0;  // Omega_S(T)/Omega_P(T) before endpoint clamping

    int size() const { return static_cast<int>(times.size()); }
};

// Every derived quantity of the effective and rotated frames, sampled on
// the same grid as the reference pulses.
struct FrameSamples {
    std::vector<double> times;                        // s
    std::vector<double> omega_eff, delta_eff;         // rad/s
    std::vector<double> omega_a;                      // rad/s
    std::vector<double> gamma_dot;                    // rad/s
    std::vector<double> omega_eff_t, delta_eff_t;     // rotated frame, rad/s
    std::vector<double> gamma;                        // rad, unwrapped
    std::vector<double> theta;                        // rad, mixing angle
    std::vector<double> omega_P, omega_S;             // reference pulses, rad/s
    double delta = 0.0;                               // detuning used, rad/s
    double omega0 = 0.0;
    double phi_L = 0.0;

    int size() const { return static_cast<int>(times.size()); }
    double dt() const { return times[1] - times[0]; }
};

// Laboratory pump/Stokes pulses implementing the rotated-frame Hamiltonian.
struct PhysicalPulses {
    std::vector<double> times;                // s
    std::vector<double> omega_P_t, omega_S_t;  // rad/s

    int size() const { return static_cast<int>(times.size()); }
    double dt() const { return times[1] - times[0]; }
};

// Accumulated phases of the two dressed states.
struct PhaseRecord {
    std::vector<double> times;  // s
    std::vector<double> xi0;    // rad
    std::vector<double> xim;    // rad
};

// Fidelity versus amplitude-scaling factor epsilon, numeric and
// second-order model.
struct ScalingSweep {
    std::vector<double> epsilons;
    std::vector<double> fidelities;
    std::vector<double> model_fidelities;
};

// Score of one candidate.
struct CostReport {
    double omega_peak = 0.0;  // dimensionless peak physical Rabi frequency
    double q = 0.0;           // dimensionless sensitivity
    double C = 0.0;           // cost
    PulseParameters params;
};

}  // namespace sta
