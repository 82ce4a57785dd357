#pragma once

#include <vector>

#include "sta/types.hpp"

namespace sta {

// Normalized sum-of-Gaussians f(u) with analytic first and second
// derivatives.  The base term is exp(-u^2/(T/6)^2); N additional terms
// a_n exp(-(u - t0_n)^2 / w_n^2) are added on top.  The normalization A
// scales the maximum over the evaluation grid {t_k - 0.6 T} to exactly 1,
// which is the grid the pump pulse samples, so the reference pulses peak
// at Omega_0.
class Shape {
  public:
    // Throws DegenerateParametrizationError when the unnormalized sum has
    // no positive value on the grid.
    Shape(const PulseParameters& p, int grid_points);

    double value(double u) const;  // normalized, not clipped
    double d1(double u) const;
    double d2(double u) const;
    double norm() const { return A_; }

  private:
    std::vector<double> amp_, center_, w2_;  // base term included
    double A_ = 0.0;
};

// f(t) of the validated parameter set, normalized over the same grid the
// pipeline uses.  Rejects non-finite t.
double eval_parametrization(const PulseParameters& p, const SystemConfig& cfg,
                            double t);

// Omega_P(t) = Omega_0 f(t - 0.6 T), Omega_S its time mirror, sampled on
// grid_points uniform points of [0, T], clipped at zero from below.
// Checks the boundary-tail ratios against 1e-2 and clamps the two
// crossing-tail endpoints to exact zeros.  Throws
// DegenerateParametrizationError or BoundaryConditionError.
ReferencePulses reference_pulses(const PulseParameters& p,
                                 const SystemConfig& cfg);

}  // namespace sta
