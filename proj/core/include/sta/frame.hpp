#pragma once

#include <Eigen/Core>

#include "sta/types.hpp"

namespace sta {

// Adiabatic elimination plus counter-diabatic correction.  Computes
//   Omega_eff = P S / (2 delta)
//   Delta_eff = (P^2 - S^2) / (4 delta)
//   theta     = atan2(P, S)
//   omega_a   = 2 (Pdot S - Sdot P) / (P^2 + S^2)        (= 2 theta_dot)
//   gamma     = unwrap(atan2(omega_a, Omega_eff)) + phi_L
//   gamma_dot by analytic differentiation of that expression
//   Omega_eff_t = sqrt(Omega_eff^2 + omega_a^2)
//   Delta_eff_t = Delta_eff + gamma_dot
// all from the analytic derivative arrays carried by ref.  The factor 2 on
// omega_a makes H_tilde = H_0 + H_cd exact; see counter_diabatic_term.
// With adiabatic set, omega_a and gamma_dot are forced to zero and the
// frame degenerates to plain adiabatic elimination.
// Throws SingularMixingError when P^2 + S^2 < 1e-24 * Omega_0^2 anywhere.
FrameSamples effective_frame(const ReferencePulses& ref,
                             const SystemConfig& cfg, bool adiabatic = false);

// The counter-diabatic Hamiltonian matrix at grid point k in the
// {|1>, |3>} basis:
//   [[0, -i theta_dot], [i theta_dot, 0]],  theta_dot = omega_a[k] / 2.
Eigen::Matrix2cd counter_diabatic_term(const FrameSamples& frame, int k);

// Inverts the effective-frame map for the rotated quantities:
//   P_t = sqrt(2 delta (sqrt(Dt^2 + Ot^2) + Dt))
//   S_t = sqrt(2 delta (sqrt(Dt^2 + Ot^2) - Dt)).
// Radicands are clamped at zero; a radicand below -1e-12 relative to its
// scale raises NonPhysicalFrameError.
PhysicalPulses physical_pulses(const FrameSamples& frame,
                               const SystemConfig& cfg);

}  // namespace sta
