#include "sta/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "sta/errors.hpp"
#include "sta/model.hpp"

namespace sta {

namespace {

// uniform_real_distribution output is implementation defined; this fixed
// mapping keeps seed streams byte-identical across toolchains.
double u01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& g, double lo, double hi) {
    return lo + (hi - lo) * u01(g);
}

// Run fn(i) for i in [0, n) on the requested number of workers.  Results
// must be written to per-index slots; the first exception wins.
template <class Fn>
void parallel_for(int n, int threads, Fn&& fn) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int count = std::min(threads, n);
    pool.reserve(count);
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

void SeedBox::validate() const {
    if (!(a_lo < a_hi) || !(t0_lo < t0_hi) || !(w_lo < w_hi))
        throw ValidationError("seed box ranges need lo < hi");
    if (!(w_lo > 0.0)) throw ValidationError("seed box widths must be positive");
}

int resolve_threads(int configured) {
    if (const char* env = std::getenv("STA_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return configured >= 1 ? configured : 1;
}

SeedStream::SeedStream(const SeedBox& box, double T, int N, int grid_points)
    : box_(box), T_(T), N_(N), grid_points_(grid_points), rng_(box.rng_seed) {
    box_.validate();
    if (!(T > 0.0)) throw ValidationError("seed stream duration must be positive");
    if (N < 0) throw ValidationError("negative Gaussian count");
}

PulseParameters SeedStream::next() {
    for (;;) {
        PulseParameters p;
        p.T = T_;
        p.a.resize(N_);
        p.t0.resize(N_);
        p.w.resize(N_);
        for (int i = 0; i < N_; ++i) p.a[i] = uniform(rng_, box_.a_lo, box_.a_hi);
        for (int i = 0; i < N_; ++i)
            p.t0[i] = uniform(rng_, box_.t0_lo * T_, box_.t0_hi * T_);
        for (int i = 0; i < N_; ++i)
            p.w[i] = uniform(rng_, box_.w_lo * T_, box_.w_hi * T_);
        try {
            Shape probe(p, grid_points_);
            (void)probe;
            ++produced_;
            return p;
        } catch (const DegenerateParametrizationError&) {
            ++degenerate_;
            if (degenerate_ + produced_ >= 100 &&
                degenerate_ > produced_)
                throw Error("seed resample rate exceeded 50%");
        }
    }
}

std::vector<PulseParameters> generate_seeds(const SeedBox& box, int count,
                                            double T, int N, int grid_points,
                                            long* degenerate_count) {
    if (count < 1) throw ValidationError("seed count must be >= 1");
    SeedStream stream(box, T, N, grid_points);
    std::vector<PulseParameters> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) out.push_back(stream.next());
    if (degenerate_count) *degenerate_count = stream.degenerate();
    return out;
}

ScreenResult screen(const std::vector<PulseParameters>& seeds,
                    const SystemConfig& cfg, const CostModel& cost, int keep,
                    int threads) {
    const int n = static_cast<int>(seeds.size());
    if (keep > n)
        throw ValidationError("keep exceeds the number of generated seeds");

    std::vector<std::optional<CostReport>> slots(n);
    std::atomic<long> failed{0};
    parallel_for(n, threads, [&](int i) {
        try {
            slots[i] = evaluate_candidate(seeds[i], cfg, cost);
        } catch (const Error&) {
            failed.fetch_add(1);
        }
    });

    ScreenResult result;
    result.n_evaluated = n;
    result.n_failed = failed.load();
    result.rows.reserve(n - result.n_failed);
    for (int i = 0; i < n; ++i)
        if (slots[i]) result.rows.emplace_back(i, std::move(*slots[i]));
    std::stable_sort(result.rows.begin(), result.rows.end(),
                     [](const auto& a, const auto& b) {
                         return a.second.C < b.second.C;
                     });
    if (static_cast<int>(result.rows.size()) > keep) result.rows.resize(keep);
    return result;
}

namespace {

// Nelder-Mead coordinates: [a_1..a_N, t0_1/T..t0_N/T, w_1/T..w_N/T].

std::vector<double> pack(const PulseParameters& p) {
    const int N = p.n_gaussians();
    std::vector<double> x(3 * N);
    for (int i = 0; i < N; ++i) {
        x[i] = p.a[i];
        x[N + i] = p.t0[i] / p.T;
        x[2 * N + i] = p.w[i] / p.T;
    }
    return x;
}

PulseParameters unpack(const std::vector<double>& x, double T) {
    const int N = static_cast<int>(x.size()) / 3;
    PulseParameters p;
    p.T = T;
    p.a.assign(x.begin(), x.begin() + N);
    p.t0.resize(N);
    p.w.resize(N);
    for (int i = 0; i < N; ++i) {
        p.t0[i] = x[N + i] * T;
        p.w[i] = x[2 * N + i] * T;
    }
    return p;
}

// Modular reflection into [lo, hi]: the line is folded back and forth so
// any proposal lands inside without a gradient discontinuity at the walls.
double reflect_coord(double v, double lo, double hi) {
    if (v >= lo && v <= hi) return v;  // keep in-box values bit-exact
    const double span = hi - lo;
    double u = std::fmod(v - lo, 2.0 * span);
    if (u < 0.0) u += 2.0 * span;
    return lo + (u <= span ? u : 2.0 * span - u);
}

std::vector<double> reflect_box(std::vector<double> x, const SeedBox& box) {
    const int N = static_cast<int>(x.size()) / 3;
    for (int i = 0; i < N; ++i) {
        x[i] = reflect_coord(x[i], box.a_lo, box.a_hi);
        x[N + i] = reflect_coord(x[N + i], box.t0_lo, box.t0_hi);
        x[2 * N + i] = reflect_coord(x[2 * N + i], box.w_lo, box.w_hi);
    }
    return x;
}

struct NmObjective {
    const SystemConfig& cfg;
    const CostModel& cost;
    const SeedBox& box;
    double T;
    OptimizationTrace* trace;
    bool record;
    int budget;
    int evaluations = 0;
    int iteration = 0;
    double best_C = std::numeric_limits<double>::infinity();
    CostReport best;

    double eval(const PulseParameters& p) {
        ++evaluations;
        CostReport report;
        try {
            report = evaluate_candidate(p, cfg, cost);
        } catch (const Error&) {
            report.omega_peak = std::numeric_limits<double>::quiet_NaN();
            report.q = std::numeric_limits<double>::quiet_NaN();
            report.C = cost.c_max;
            report.params = p;
        }
        if (report.C < best_C) {
            best_C = report.C;
            best = report;
        }
        return report.C;
    }

    double operator()(const std::vector<double>& x) {
        return eval(unpack(reflect_box(x, box), T));
    }

    void record_point() {
        if (record)
            trace->points.push_back(
                {iteration, best_C, best.omega_peak, best.q});
        ++iteration;
    }

    bool exhausted() const { return evaluations >= budget; }
};

// One Nelder-Mead pass from x0 until convergence or budget exhaustion.
// Standard coefficients (reflect 1, expand 2, contract 0.5, shrink 0.5),
// simplex seeded scipy-style with 5% per-coordinate perturbations.
void nelder_mead_cycle(NmObjective& f, std::vector<double> x0) {
    const int n = static_cast<int>(x0.size());
    const double xatol = 1e-10, fatol = 1e-12;
    // Reflections preserve simplex volume, so a pass can crawl along a curved
    // valley indefinitely without meeting the spread tolerances. Cut the pass
    // off after a long run of iterations that fail to move the incumbent.
    const int stall_limit = 20 * n + 40;

    std::vector<std::vector<double>> simplex;
    std::vector<double> fv;
    simplex.reserve(n + 1);
    simplex.push_back(x0);
    fv.push_back(f(x0));
    f.record_point();
    for (int i = 0; i < n && !f.exhausted(); ++i) {
        std::vector<double> v = x0;
        v[i] = v[i] != 0.0 ? v[i] * 1.05 : 0.00025;
        simplex.push_back(v);
        fv.push_back(f(v));
    }
    if (static_cast<int>(simplex.size()) < n + 1) return;

    std::vector<int> order(n + 1);
    auto sort_simplex = [&] {
        for (int i = 0; i <= n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return fv[a] < fv[b]; });
        std::vector<std::vector<double>> s2(n + 1);
        std::vector<double> f2(n + 1);
        for (int i = 0; i <= n; ++i) {
            s2[i] = simplex[order[i]];
            f2[i] = fv[order[i]];
        }
        simplex.swap(s2);
        fv.swap(f2);
    };
    sort_simplex();
    int stall = 0;
    double incumbent = fv[0];

    while (!f.exhausted()) {
        double xspread = 0.0, fspread = 0.0;
        for (int i = 1; i <= n; ++i) {
            fspread = std::max(fspread, std::abs(fv[i] - fv[0]));
            for (int j = 0; j < n; ++j)
                xspread = std::max(xspread, std::abs(simplex[i][j] - simplex[0][j]));
        }
        if (xspread < xatol && fspread < fatol) return;

        std::vector<double> centroid(n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) centroid[j] += simplex[i][j] / n;

        auto blend = [&](double coef) {
            std::vector<double> x(n);
            for (int j = 0; j < n; ++j)
                x[j] = centroid[j] + coef * (centroid[j] - simplex[n][j]);
            return x;
        };

        const std::vector<double> xr = blend(1.0);
        const double fr = f(xr);
        bool shrink = false;
        if (fr < fv[0]) {
            if (f.exhausted()) {
                if (fr < fv[n]) { simplex[n] = xr; fv[n] = fr; }
            } else {
                const std::vector<double> xe = blend(2.0);
                const double fe = f(xe);
                if (fe < fr) { simplex[n] = xe; fv[n] = fe; }
                else { simplex[n] = xr; fv[n] = fr; }
            }
        } else if (fr < fv[n - 1]) {
            simplex[n] = xr;
            fv[n] = fr;
        } else if (!f.exhausted()) {
            if (fr < fv[n]) {
                const std::vector<double> xc = blend(0.5);
                const double fc = f(xc);
                if (fc <= fr) { simplex[n] = xc; fv[n] = fc; }
                else shrink = true;
            } else {
                const std::vector<double> xc = blend(-0.5);
                const double fc = f(xc);
                if (fc < fv[n]) { simplex[n] = xc; fv[n] = fc; }
                else shrink = true;
            }
        }
        if (shrink) {
            for (int i = 1; i <= n && !f.exhausted(); ++i) {
                for (int j = 0; j < n; ++j)
                    simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
                fv[i] = f(simplex[i]);
            }
        }
        sort_simplex();
        f.record_point();
        if (fv[0] < incumbent - fatol * (1.0 + std::abs(incumbent))) {
            incumbent = fv[0];
            stall = 0;
        } else if (++stall >= stall_limit) {
            return;
        }
    }
}

}  // namespace

OptimizationTrace local_minimize(const PulseParameters& start,
                                 const SystemConfig& cfg,
                                 const CostModel& cost, int budget,
                                 const SeedBox& box, bool record_trace) {
    if (budget < 1) throw ValidationError("optimization budget must be >= 1");
    start.validate();
    box.validate();

    OptimizationTrace trace;
    NmObjective f{cfg, cost, box, start.T, &trace, record_trace, budget};

    if (start.n_gaussians() == 0 || budget == 1) {
        f.eval(start);
        f.record_point();
        trace.best = f.best;
        trace.evaluations = f.evaluations;
        trace.no_improvement = true;
        return trace;
    }

    std::vector<double> x0 = reflect_box(pack(start), box);
    // Restarts that gain less than this (relative) are numerical chatter;
    // without the threshold ulp-level "improvements" can burn the whole budget.
    const double restart_gain = 1e-9;
    while (!f.exhausted()) {
        const double before = f.best_C;
        nelder_mead_cycle(f, x0);
        if (!(before - f.best_C > restart_gain * (1.0 + std::abs(before)))) {
            // A cycle truncated by the budget has not had its chance; only a
            // cycle that ran out of moves counts as a converged stop.
            trace.no_improvement = !f.exhausted();
            break;
        }
        x0 = reflect_box(pack(f.best.params), box);
    }
    trace.best = f.best;
    trace.evaluations = f.evaluations;
    return trace;
}

std::vector<OptimizationTrace> optimize_pool(
    const std::vector<PulseParameters>& starts, const SystemConfig& cfg,
    const CostModel& cost, int budget, const SeedBox& box, bool record_trace,
    int threads) {
    std::vector<OptimizationTrace> traces(starts.size());
    parallel_for(static_cast<int>(starts.size()), threads, [&](int i) {
        traces[i] =
            local_minimize(starts[i], cfg, cost, budget, box, record_trace);
    });
    return traces;
}

std::vector<DurationPoint> duration_sweep(const std::vector<double>& T_list,
                                          const SystemConfig& cfg,
                                          const CostModel& cost,
                                          const SeedBox& box, int n_seeds,
                                          int keep, int budget, int threads) {
    for (double T : T_list)
        if (!(T > 0.0)) throw ValidationError("durations must be positive");
    std::vector<double> Ts = T_list;
    std::sort(Ts.begin(), Ts.end());

    std::vector<DurationPoint> out;
    std::optional<PulseParameters> warm_peak, warm_q;
    int t_index = 0;
    for (double T : Ts) {
        SeedBox tbox = box;
        tbox.rng_seed = box.rng_seed + 1000003ull * static_cast<std::uint64_t>(t_index++);
        const auto seeds =
            generate_seeds(tbox, n_seeds, T, 4, cfg.grid_points, nullptr);
        const ScreenResult screened = screen(seeds, cfg, cost, keep, threads);

        std::vector<PulseParameters> starts;
        starts.reserve(screened.rows.size() + 2);
        for (const auto& row : screened.rows) starts.push_back(row.second.params);
        // Previous duration's winners transfer: the parameters are
        // duration-relative, and both peak and q shrink with T.
        auto rescale = [T](PulseParameters p, double) {
            const double ratio = T / p.T;
            for (auto& v : p.t0) v *= ratio;
            for (auto& v : p.w) v *= ratio;
            p.T = T;
            return p;
        };
        if (warm_peak) starts.push_back(rescale(*warm_peak, T));
        if (warm_q) starts.push_back(rescale(*warm_q, T));

        const std::vector<OptimizationTrace> traces =
            optimize_pool(starts, cfg, cost, budget, box, false, threads);

        DurationPoint point;
        point.T = T;
        double best_C = std::numeric_limits<double>::infinity();
        double peak_min = std::numeric_limits<double>::infinity();
        double q_min = std::numeric_limits<double>::infinity();
        for (const auto& tr : traces) {
            if (!std::isfinite(tr.best.omega_peak)) continue;
            if (tr.best.C < best_C) {
                best_C = tr.best.C;
                point.best = tr.best;
            }
            if (tr.best.omega_peak < peak_min) {
                peak_min = tr.best.omega_peak;
                warm_peak = tr.best.params;
            }
            if (tr.best.q < q_min) {
                q_min = tr.best.q;
                warm_q = tr.best.params;
            }
        }
        if (!std::isfinite(best_C))
            throw Error("duration sweep found no usable solution at one T");
        point.peak_min = peak_min;
        point.q_min = q_min;
        out.push_back(std::move(point));
    }
    return out;
}

}  // namespace sta
