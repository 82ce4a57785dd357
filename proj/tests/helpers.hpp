#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "sta/frame.hpp"
#include "sta/grid.hpp"
#include "sta/model.hpp"
#include "sta/types.hpp"

namespace sta::test {

inline PulseParameters gaussian_baseline(double T = 0.4e-3) {
    PulseParameters p;
    p.T = T;
    return p;
}

inline SystemConfig default_config(int grid_points = 2001) {
    SystemConfig cfg;
    cfg.grid_points = grid_points;
    return cfg;
}

// A reference-pulse bundle built from explicit closed forms, for frame
// tests that need inputs reference_pulses cannot produce.
struct AnalyticPulse {
    std::function<double(double)> f, d1, d2;
};

inline ReferencePulses make_ref(double T, int M, const AnalyticPulse& P,
                                const AnalyticPulse& S) {
    ReferencePulses ref;
    ref.times = linspace(0.0, T, M);
    ref.omega_P.resize(M);
    ref.omega_S.resize(M);
    ref.omega_P_dot.resize(M);
    ref.omega_S_dot.resize(M);
    ref.omega_P_ddot.resize(M);
    ref.omega_S_ddot.resize(M);
    for (int k = 0; k < M; ++k) {
        const double t = ref.times[k];
        ref.omega_P[k] = P.f(t);
        ref.omega_P_dot[k] = P.d1(t);
        ref.omega_P_ddot[k] = P.d2(t);
        ref.omega_S[k] = S.f(t);
        ref.omega_S_dot[k] = S.d1(t);
        ref.omega_S_ddot[k] = S.d2(t);
    }
    ref.ratio0 = 0.0;
    ref.ratioT = 0.0;
    return ref;
}

inline AnalyticPulse constant_pulse(double value) {
    return {[value](double) { return value; }, [](double) { return 0.0; },
            [](double) { return 0.0; }};
}

// Least-squares fit of y = c0 + c1 x + c2 x^2; returns (c0, c1, c2).
inline std::array<double, 3> quad_fit(const std::vector<double>& x,
                                      const std::vector<double>& y) {
    double s[5] = {0, 0, 0, 0, 0};
    double b[3] = {0, 0, 0};
    for (std::size_t i = 0; i < x.size(); ++i) {
        double xp = 1.0;
        for (int p = 0; p < 5; ++p) {
            s[p] += xp;
            if (p < 3) b[p] += xp * y[i];
            xp *= x[i];
        }
    }
    double A[3][3] = {{s[0], s[1], s[2]}, {s[1], s[2], s[3]}, {s[2], s[3], s[4]}};
    // Gaussian elimination with partial pivoting, 3x3.
    int idx[3] = {0, 1, 2};
    for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::abs(A[idx[r]][c]) > std::abs(A[idx[piv]][c])) piv = r;
        std::swap(idx[c], idx[piv]);
        for (int r = c + 1; r < 3; ++r) {
            const double m = A[idx[r]][c] / A[idx[c]][c];
            for (int cc = c; cc < 3; ++cc) A[idx[r]][cc] -= m * A[idx[c]][cc];
            b[idx[r]] -= m * b[idx[c]];
        }
    }
    std::array<double, 3> out{};
    for (int c = 2; c >= 0; --c) {
        double v = b[idx[c]];
        for (int cc = c + 1; cc < 3; ++cc) v -= A[idx[c]][cc] * out[cc];
        out[c] = v / A[idx[c]][c];
    }
    return out;
}

// Recursive adaptive Simpson quadrature, an oracle independent of the
// library's composite rule.
inline double adaptive_simpson(const std::function<double(double)>& f,
                               double a, double b, double tol, int depth = 24) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    std::function<double(double, double, double, double, double, double, int)>
        rec = [&](double lo, double hi, double flo, double fmid, double fhi,
                  double whole, int d) -> double {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        const double flm = f(lm), frm = f(rm);
        const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
        const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
        if (d <= 0 || std::abs(left + right - whole) < 15.0 * tol)
            return left + right + (left + right - whole) / 15.0;
        return rec(lo, mid, flo, flm, fmid, left, d - 1) +
               rec(mid, hi, fmid, frm, fhi, right, d - 1);
    };
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return rec(a, b, fa, fm, fb, whole, depth);
}

// Largest ||H|| h over the grid for the two-level integrator's step rule.
inline double two_level_rate(const FrameSamples& frame) {
    double rate = 0.0;
    for (std::size_t k = 0; k < frame.size(); ++k) {
        const double r =
            0.5 * (std::abs(frame.delta_eff_t[k]) + frame.omega_eff_t[k]);
        if (r > rate) rate = r;
    }
    return rate;
}

}  // namespace sta::test
