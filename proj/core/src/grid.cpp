#include "sta/grid.hpp"

namespace sta {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out(n);
    const double step = (b - a) / (n - 1);
    for (int k = 0; k < n; ++k) out[k] = a + step * k;
    out[n - 1] = b;
    return out;
}

std::vector<double> cumulative_simpson(const std::vector<double>& y, double dt) {
    const int n = static_cast<int>(y.size());
    std::vector<double> out(n, 0.0);
    for (int k = 2; k < n; k += 2)
        out[k] = out[k - 2] + dt / 3.0 * (y[k - 2] + 4.0 * y[k - 1] + y[k]);
    for (int k = 1; k < n; k += 2) {
        if (k + 1 < n)
            out[k] = out[k - 1] +
                     dt / 12.0 * (5.0 * y[k - 1] + 8.0 * y[k] - y[k + 1]);
        else
            out[k] = out[k - 1] +
                     dt / 12.0 * (-y[k - 2] + 8.0 * y[k - 1] + 5.0 * y[k]);
    }
    return out;
}

}  // namespace sta
