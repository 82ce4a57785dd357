#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sta/cost.hpp"
#include "sta/optimize.hpp"
#include "sta/types.hpp"

namespace sta {

// Everything a pipeline run needs, loadable from one flat JSON object.
// Units at the boundary are ms and MHz (frequencies as Omega/2pi);
// internally everything is rad/s and s.
struct RunConfig {
    SystemConfig sys;
    double T = 0.4e-3;  // s
    int N = 4;
    int n_seeds = 100000;
    int keep = 100;
    int budget = 2000;
    CostModel cost;
    std::uint64_t rng_seed = 1;
    std::string out_dir = "out";
    double epsilon_min = 0.9, epsilon_max = 1.1;
    int epsilon_count = 41;
    std::vector<double> durations;  // s, for the duration sweep
    bool write_traces = false;
    int threads = 1;

    void validate() const;
};

RunConfig default_run_config();

// Strict parsers: malformed JSON, unknown keys, or invariant violations
// raise ValidationError with the offending key or byte offset.
RunConfig load_run_config(const std::string& path);
PulseParameters load_pulse_parameters(const std::string& path);

std::string run_config_to_json(const RunConfig& cfg);
std::string pulse_parameters_to_json(const PulseParameters& p);
void save_pulse_parameters(const std::string& path, const PulseParameters& p);

// FNV-1a over the canonical (key-sorted) JSON serialization.
std::uint64_t config_hash(const RunConfig& cfg);

// Deterministic shortest-roundtrip float formatting used by all writers.
std::string format_double(double v);

// Metadata comment block stamped at the top of every CSV artifact.
void write_csv_metadata(std::ostream& os, const RunConfig& cfg,
                        bool with_rng_seed = false);

void write_reference_csv(std::ostream& os, const RunConfig& cfg,
                         const ReferencePulses& ref);
void write_frame_csv(std::ostream& os, const RunConfig& cfg,
                     const FrameSamples& frame);
void write_physical_csv(std::ostream& os, const RunConfig& cfg,
                        const PhysicalPulses& pulses);
void write_sweep_csv(std::ostream& os, const RunConfig& cfg,
                     const ScalingSweep& sweep);
void write_cost_report_csv(std::ostream& os, const RunConfig& cfg,
                           const CostReport& report);
// One row per seed, flagged screened/optimized, sorted by stage then cost.
void write_results_csv(std::ostream& os, const RunConfig& cfg,
                       const std::vector<std::pair<int, CostReport>>& screened,
                       const std::vector<std::pair<int, CostReport>>& optimized);
void write_trace_csv(std::ostream& os, const RunConfig& cfg,
                     const OptimizationTrace& trace);
void write_duration_csv(std::ostream& os, const RunConfig& cfg,
                        const std::vector<DurationPoint>& points);
// Populations of both integrators on the grid.
void write_evolution_csv(std::ostream& os, const RunConfig& cfg,
                         const std::vector<double>& times,
                         const std::vector<double>& p1,
                         const std::vector<double>& p2,
                         const std::vector<double>& p3,
                         const std::vector<double>& p1_eff,
                         const std::vector<double>& p3_eff);

}  // namespace sta
