#pragma once

#include <Eigen/Core>

#include "sta/types.hpp"

namespace sta {

struct DressedStates {
    Eigen::Vector2d a0;  // (cos theta, -sin theta) in {|1>, |3>}
    Eigen::Vector2d am;  // (sin theta,  cos theta)
    double E0 = 0.0;     // +0.5 sqrt(Delta_eff^2 + Omega_eff^2), rad/s
    double Em = 0.0;     // -E0
};

// Instantaneous eigenvectors and eigenvalues of the effective Hamiltonian
// at grid point k.
DressedStates dressed_states(const FrameSamples& frame, int k);

// xi_n(t) = -int_0^t E_n dt' by cumulative Simpson.  The geometric term
// vanishes identically for the real dressed states; this is asserted from
// the closed form <a_n | d a_n / d theta> * theta_dot and raises
// GeometricPhaseError if it ever exceeds 1e-10.
PhaseRecord accumulate_phases(const FrameSamples& frame);

// Sensitivity q of the transfer fidelity to uniform amplitude scaling:
//   q = q_norm * | int_0^T e^{i (xi0 - xim)} m(t) dt |^2
//   m = -1/2 Delta_eff_t sin(2 theta)
//       -1/2 Omega_eff_t (cos(2 theta) cos(gamma) + i sin(gamma))
// which is the dressed-basis matrix element of the rotated Hamiltonian
// (rotation direction U H U^dagger; recorded in output metadata).
// Throws Error on a non-finite integrand.
double sensitivity(const FrameSamples& frame, const SystemConfig& cfg);

}  // namespace sta
