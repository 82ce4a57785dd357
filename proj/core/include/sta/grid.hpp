#pragma once

#include <vector>

namespace sta {

// n uniform samples covering [a, b] inclusive.
std::vector<double> linspace(double a, double b, int n);

// Composite Simpson on a uniform grid.  An even sample count closes with a
// trapezoid on the final panel.
template <class T>
T simpson(const std::vector<T>& y, double dt) {
    const int n = static_cast<int>(y.size());
    if (n < 2) return T{};
    if (n == 2) return dt / 2.0 * (y[0] + y[1]);
    const int m = (n % 2 == 1) ? n : n - 1;
    T odd{};
    T even{};
    for (int k = 1; k < m - 1; k += 2) odd += y[k];
    for (int k = 2; k < m - 2; k += 2) even += y[k];
    T out = dt / 3.0 * (y[0] + y[m - 1] + 4.0 * odd + 2.0 * even);
    if (n % 2 == 0) out += dt / 2.0 * (y[n - 2] + y[n - 1]);
    return out;
}

// Cumulative Simpson antiderivative, out[0] = 0.  Even indices come from
// whole Simpson pairs; odd indices from the 5/8/-1 Newton-Cotes half panel.
std::vector<double> cumulative_simpson(const std::vector<double>& y, double dt);

}  // namespace sta
