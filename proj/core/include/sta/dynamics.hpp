#pragma once

#include <Eigen/Core>
#include <vector>

#include "sta/types.hpp"

namespace sta {

// Fixed-step RK4 propagators.  Sampled arrays are interpolated linearly
// between grid points; substeps align with the grid intervals so each RK4
// step sees a smooth (linear in t) Hamiltonian.  The substep count per
// interval is chosen so ||H|| h stays below the cap (rad per step).

inline constexpr double kTwoLevelStepCap = 0.05;
inline constexpr double kThreeLevelStepCap = 0.02;

// Evolves psi0 under the rotated two-level Hamiltonian
//   H = -1/2 [[Dt, Ot], [Ot, -Dt]]
// with the amplitude scaling applied to the physical pulses, which enters
// the effective quantities quadratically: (Dt, Ot) -> epsilon^2 (Dt, Ot).
// When trajectory is non-null it receives the state at every grid node.
// step_cap overrides the default substep criterion (convergence studies).
// Throws NormDriftError when |norm - 1| > 1e-6 at the end.
Eigen::Vector2cd integrate_two_level(const FrameSamples& frame,
                                     const Eigen::Vector2cd& psi0,
                                     double epsilon,
                                     std::vector<Eigen::Vector2cd>* trajectory = nullptr,
                                     double step_cap = kTwoLevelStepCap);

// Evolves psi0 under the three-level Hamiltonian
//   H = 1/2 [[0, eP e^{i phi_L}, 0], [eP e^{-i phi_L}, 2 delta, eS], [0, eS, 0]]
// with eP = epsilon * omega_P_t etc.
Eigen::Vector3cd integrate_three_level(const PhysicalPulses& pulses,
                                       const SystemConfig& cfg,
                                       const Eigen::Vector3cd& psi0,
                                       double epsilon,
                                       std::vector<Eigen::Vector3cd>* trajectory = nullptr,
                                       double step_cap = kThreeLevelStepCap);

// Transfer fidelity |<3|psi(T)>|^2 from |1>, global phase ignored.
double two_level_fidelity(const FrameSamples& frame, double epsilon);
double three_level_fidelity(const PhysicalPulses& pulses,
                            const SystemConfig& cfg, double epsilon);

// n uniform epsilon values over [eps_min, eps_max]; numeric fidelity from
// the two-level integrator, model fidelity max(0, 1 - 4 q (eps-1)^2).
ScalingSweep scaling_sweep(const FrameSamples& frame, double q,
                           double eps_min, double eps_max, int n);

}  // namespace sta
