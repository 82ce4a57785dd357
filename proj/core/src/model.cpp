#include "sta/model.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "sta/errors.hpp"
#include "sta/grid.hpp"

namespace sta {

void SystemConfig::validate() const {
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw ValidationError("delta must be positive and finite");
    if (!(omega0 > 0.0) || !std::isfinite(omega0))
        throw ValidationError("omega0 must be positive and finite");
    if (!std::isfinite(phi_L)) throw ValidationError("phi_L must be finite");
    const double ratio = delta / omega0;
    if (ratio < 20.0)
        throw ValidationError(
            "delta/omega0 = " + std::to_string(ratio) +
            " too small for adiabatic elimination (need >= 20)");
    if (ratio < 100.0)
        std::fprintf(stderr,
                     "warning: delta/omega0 = %.3g below 100, adiabatic "
                     "elimination is marginal\n",
                     ratio);
    if (grid_points < 3) throw ValidationError("grid_points must be >= 3");
    if (!(q_norm > 0.0) || !std::isfinite(q_norm))
        throw ValidationError("q_norm must be positive and finite");
}

void PulseParameters::validate() const {
    if (!(T > 0.0) || !std::isfinite(T))
        throw ValidationError("pulse duration T must be positive and finite");
    const auto N = a.size();
    if (t0.size() != N || w.size() != N)
        throw ValidationError("amplitude, center and width counts differ");
    for (std::size_t i = 0; i < N; ++i) {
        if (!std::isfinite(a[i]) || !std::isfinite(t0[i]) || !std::isfinite(w[i]))
            throw ValidationError("non-finite pulse parameter");
        if (a[i] < -1.0 || a[i] > 1.0)
            throw ValidationError("amplitude a[" + std::to_string(i) +
                                  "] outside [-1, 1]");
        if (t0[i] < -0.5 * T || t0[i] > 0.5 * T)
            throw ValidationError("center t0[" + std::to_string(i) +
                                  "] outside [-T/2, T/2]");
        if (w[i] < T / 50.0 || w[i] > 0.5 * T)
            throw ValidationError("width w[" + std::to_string(i) +
                                  "] outside [T/50, T/2]");
    }
}

Shape::Shape(const PulseParameters& p, int grid_points) {
    const double T = p.T;
    const int N = p.n_gaussians();
    amp_.reserve(N + 1);
    center_.reserve(N + 1);
    w2_.reserve(N + 1);
    amp_.push_back(1.0);
    center_.push_back(0.0);
    w2_.push_back((T / 6.0) * (T / 6.0));
    for (int i = 0; i < N; ++i) {
        amp_.push_back(p.a[i]);
        center_.push_back(p.t0[i]);
        w2_.push_back(p.w[i] * p.w[i]);
    }
    A_ = 1.0;  // value() below returns the raw sum until A_ is set
    double fmax = -std::numeric_limits<double>::infinity();
    const double step = T / (grid_points - 1);
    for (int k = 0; k < grid_points; ++k) {
        const double u = step * k - 0.6 * T;
        const double f = value(u);
        if (f > fmax) fmax = f;
    }
    if (!(fmax > 0.0))
        throw DegenerateParametrizationError(
            "degenerate parametrization: Gaussian sum has no positive value");
    A_ = 1.0 / fmax;
}

double Shape::value(double u) const {
    double s = 0.0;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
        const double d = u - center_[i];
        s += amp_[i] * std::exp(-d * d / w2_[i]);
    }
    return A_ * s;
}

double Shape::d1(double u) const {
    double s = 0.0;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
        const double d = u - center_[i];
        s += amp_[i] * (-2.0 * d / w2_[i]) * std::exp(-d * d / w2_[i]);
    }
    return A_ * s;
}

double Shape::d2(double u) const {
    double s = 0.0;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
        const double d = u - center_[i];
        s += amp_[i] * (4.0 * d * d / (w2_[i] * w2_[i]) - 2.0 / w2_[i]) *
             std::exp(-d * d / w2_[i]);
    }
    return A_ * s;
}

double eval_parametrization(const PulseParameters& p, const SystemConfig& cfg,
                            double t) {
    if (!std::isfinite(t)) throw ValidationError("non-finite evaluation time");
    p.validate();
    Shape shape(p, cfg.grid_points);
    return shape.value(t);
}

ReferencePulses reference_pulses(const PulseParameters& p,
                                 const SystemConfig& cfg) {
    p.validate();
    const double T = p.T;
    const int M = cfg.grid_points;
    const double om0 = cfg.omega0;
    Shape shape(p, M);

    ReferencePulses ref;
    ref.times = linspace(0.0, T, M);
    ref.omega_P.resize(M);
    ref.omega_S.resize(M);
    ref.omega_P_dot.resize(M);
    ref.omega_S_dot.resize(M);
    ref.omega_P_ddot.resize(M);
    ref.omega_S_ddot.resize(M);

    // Pump first; Stokes is the exact index mirror, so the construction
    // symmetry Omega_P[k] = Omega_S[M-1-k] is bitwise.
    for (int k = 0; k < M; ++k) {
        const double u = ref.times[k] - 0.6 * T;
        const double f = shape.value(u);
        if (f > 0.0) {
            ref.omega_P[k] = om0 * f;
            ref.omega_P_dot[k] = om0 * shape.d1(u);
            ref.omega_P_ddot[k] = om0 * shape.d2(u);
        } else {
            ref.omega_P[k] = 0.0;
            ref.omega_P_dot[k] = 0.0;
            ref.omega_P_ddot[k] = 0.0;
        }
    }
    for (int k = 0; k < M; ++k) {
        const int m = M - 1 - k;
        ref.omega_S[k] = ref.omega_P[m];
        ref.omega_S_dot[k] = -ref.omega_P_dot[m];
        ref.omega_S_ddot[k] = ref.omega_P_ddot[m];
    }

    const double inf = std::numeric_limits<double>::infinity();
    ref.ratio0 = ref.omega_S[0] > 0.0 ? ref.omega_P[0] / ref.omega_S[0] : inf;
    ref.ratioT =
        ref.omega_P[M - 1] > 0.0 ? ref.omega_S[M - 1] / ref.omega_P[M - 1] : inf;
    if (!(ref.ratio0 < 1e-2 && ref.ratioT < 1e-2)) {
        char msg[128];
        std::snprintf(msg, sizeof msg,
                      "boundary conditions violated: tail ratios %.3g, %.3g",
                      ref.ratio0, ref.ratioT);
        throw BoundaryConditionError(msg);
    }
    // The crossing tails are Gaussian leftovers below threshold; pin them
    // to the exact zeros the transfer guarantee assumes.
    ref.omega_P[0] = 0.0;
    ref.omega_S[M - 1] = 0.0;
    return ref;
}

}  // namespace sta
