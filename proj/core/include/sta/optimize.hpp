#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "sta/cost.hpp"
#include "sta/types.hpp"

namespace sta {

// Sampling ranges for random seeds.  Centers and widths scale with the
// duration: t0 in [t0_lo, t0_hi] * T, w in [w_lo, w_hi] * T.
struct SeedBox {
    double a_lo = -1.0, a_hi = 1.0;
    double t0_lo = -0.5, t0_hi = 0.5;
    double w_lo = 0.02, w_hi = 0.5;
    std::uint64_t rng_seed = 1;

    void validate() const;  // lo < hi per range
};

// Deterministic stream of parameter sets drawn uniformly from the box.
// Draws whose Gaussian sum is degenerate (no positive value) are resampled
// and counted.  Other failure modes (boundary tails, singular frames) are
// left for screening to count.
class SeedStream {
  public:
    SeedStream(const SeedBox& box, double T, int N, int grid_points = 2001);

    PulseParameters next();  // throws Error when the resample guard trips

    long produced() const { return produced_; }
    long degenerate() const { return degenerate_; }

  private:
    SeedBox box_;
    double T_;
    int N_, grid_points_;
    std::mt19937_64 rng_;
    long produced_ = 0, degenerate_ = 0;
};

// count valid parameter sets.  Signals when the degenerate resample rate
// exceeds 50%.
std::vector<PulseParameters> generate_seeds(const SeedBox& box, int count,
                                            double T, int N,
                                            int grid_points = 2001,
                                            long* degenerate_count = nullptr);

struct ScreenResult {
    // (seed index, report) sorted ascending by C, ties by index.
    std::vector<std::pair<int, CostReport>> rows;
    long n_evaluated = 0;
    long n_failed = 0;  // seeds the STA map rejects, counted and skipped
};

// Evaluates the full STA map and cost for every seed (no Schrodinger
// integration) and retains the keep lowest-cost candidates.
ScreenResult screen(const std::vector<PulseParameters>& seeds,
                    const SystemConfig& cfg, const CostModel& cost, int keep,
                    int threads = 1);

struct OptimizationTrace {
    struct Point {
        int iteration;
        double C, omega_peak, q;  // best-so-far
    };
    std::vector<Point> points;   // empty when tracing is disabled
    CostReport best;             // best point ever evaluated
    int evaluations = 0;
    bool no_improvement = false;  // last restart cycle gained nothing meaningful
};

// Derivative-free local minimization (Nelder-Mead with restarts) of C over
// the 3N parameters, in box-relative coordinates (a, t0/T, w/T).  Proposals
// outside the box are reflected back inside before evaluation.  Best-so-far
// C is non-increasing along the trace, and the returned best point is the
// best ever evaluated.
OptimizationTrace local_minimize(const PulseParameters& start,
                                 const SystemConfig& cfg,
                                 const CostModel& cost, int budget,
                                 const SeedBox& box = {},
                                 bool record_trace = true);

// local_minimize over a pool of starts, parallel across starts; results
// keep the pool order, so output is independent of scheduling.
std::vector<OptimizationTrace> optimize_pool(
    const std::vector<PulseParameters>& starts, const SystemConfig& cfg,
    const CostModel& cost, int budget, const SeedBox& box = {},
    bool record_trace = false, int threads = 1);

struct DurationPoint {
    double T = 0.0;
    CostReport best;        // lowest cost over the optimized pool
    double peak_min = 0.0;  // independent minima over the same pool
    double q_min = 0.0;
};

// Screen + optimize per duration, ascending, carrying the previous
// duration's best-peak and best-q solutions into the next pool as warm
// starts (parameters rescale with T).
std::vector<DurationPoint> duration_sweep(const std::vector<double>& T_list,
                                          const SystemConfig& cfg,
                                          const CostModel& cost,
                                          const SeedBox& box, int n_seeds,
                                          int keep, int budget,
                                          int threads = 1);

// STA_THREADS overrides the configured worker count when set.
int resolve_threads(int configured);

}  // namespace sta
