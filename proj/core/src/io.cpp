#include "sta/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "sta/errors.hpp"
#include "sta/version.hpp"

namespace sta {

namespace {

using nlohmann::json;

constexpr double kMHz = kTwoPi * 1.0e6;  // rad/s per (Omega/2pi) MHz
constexpr double kMs = 1.0e-3;

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

void require_object(const json& j, const std::string& what) {
    if (!j.is_object()) throw ValidationError(what + " must be a JSON object");
}

double take_number(const json& j, const std::string& key) {
    if (!j.is_number()) throw ValidationError("key '" + key + "' must be a number");
    return j.get<double>();
}

int take_int(const json& j, const std::string& key) {
    if (!j.is_number_integer())
        throw ValidationError("key '" + key + "' must be an integer");
    return j.get<int>();
}

std::uint64_t take_u64(const json& j, const std::string& key) {
    if (!j.is_number_integer() || (j.is_number_integer() && j.get<long long>() < 0))
        throw ValidationError("key '" + key + "' must be a non-negative integer");
    return j.get<std::uint64_t>();
}

}  // namespace

void RunConfig::validate() const {
    sys.validate();
    if (!(T > 0.0) || !std::isfinite(T))
        throw ValidationError("T_ms must be positive");
    if (N < 0) throw ValidationError("n_gaussians must be >= 0");
    if (n_seeds < 1) throw ValidationError("n_seeds must be >= 1");
    if (keep < 1) throw ValidationError("keep must be >= 1");
    if (keep > n_seeds) throw ValidationError("keep exceeds n_seeds");
    if (budget < 1) throw ValidationError("budget must be >= 1");
    if (!(cost.peak_weight > 0.0) || !(cost.q_weight > 0.0))
        throw ValidationError("cost weights must be positive");
    if (!(cost.c_max > 0.0)) throw ValidationError("c_max must be positive");
    if (!(epsilon_min > 0.0) || !(epsilon_min < 1.0) || !(epsilon_max > 1.0))
        throw ValidationError("epsilon range must satisfy 0 < min < 1 < max");
    if (epsilon_count < 3) throw ValidationError("epsilon_count must be >= 3");
    for (double T_i : durations)
        if (!(T_i > 0.0)) throw ValidationError("durations_ms must be positive");
    if (threads < 1) throw ValidationError("threads must be >= 1");
}

RunConfig default_run_config() { return RunConfig{}; }

RunConfig load_run_config(const std::string& path) {
    const json j = parse_file(path);
    require_object(j, "config");
    RunConfig cfg;
    for (const auto& [key, value] : j.items()) {
        if (key == "delta_over_2pi_MHz") cfg.sys.delta = take_number(value, key) * kMHz;
        else if (key == "omega0_over_2pi_MHz") cfg.sys.omega0 = take_number(value, key) * kMHz;
        else if (key == "phi_L") cfg.sys.phi_L = take_number(value, key);
        else if (key == "grid_points") cfg.sys.grid_points = take_int(value, key);
        else if (key == "q_norm") cfg.sys.q_norm = take_number(value, key);
        else if (key == "T_ms") cfg.T = take_number(value, key) * kMs;
        else if (key == "n_gaussians") cfg.N = take_int(value, key);
        else if (key == "n_seeds") cfg.n_seeds = take_int(value, key);
        else if (key == "keep") cfg.keep = take_int(value, key);
        else if (key == "budget") cfg.budget = take_int(value, key);
        else if (key == "peak_target") cfg.cost.peak_target = take_number(value, key);
        else if (key == "q_target") cfg.cost.q_target = take_number(value, key);
        else if (key == "peak_weight") cfg.cost.peak_weight = take_number(value, key);
        else if (key == "q_weight") cfg.cost.q_weight = take_number(value, key);
        else if (key == "c_max") cfg.cost.c_max = take_number(value, key);
        else if (key == "rng_seed") cfg.rng_seed = take_u64(value, key);
        else if (key == "out_dir") {
            if (!value.is_string()) throw ValidationError("key 'out_dir' must be a string");
            cfg.out_dir = value.get<std::string>();
        } else if (key == "epsilon_min") cfg.epsilon_min = take_number(value, key);
        else if (key == "epsilon_max") cfg.epsilon_max = take_number(value, key);
        else if (key == "epsilon_count") cfg.epsilon_count = take_int(value, key);
        else if (key == "durations_ms") {
            if (!value.is_array()) throw ValidationError("key 'durations_ms' must be an array");
            cfg.durations.clear();
            for (const auto& d : value) cfg.durations.push_back(take_number(d, key) * kMs);
        } else if (key == "write_traces") {
            if (!value.is_boolean()) throw ValidationError("key 'write_traces' must be a boolean");
            cfg.write_traces = value.get<bool>();
        } else if (key == "threads") cfg.threads = take_int(value, key);
        else throw ValidationError("unknown config key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

PulseParameters load_pulse_parameters(const std::string& path) {
    const json j = parse_file(path);
    require_object(j, "params");
    PulseParameters p;
    bool have_T = false;
    for (const auto& [key, value] : j.items()) {
        if (key == "T_ms") {
            p.T = take_number(value, key) * kMs;
            have_T = true;
        } else if (key == "gaussians") {
            if (!value.is_array())
                throw ValidationError("key 'gaussians' must be an array");
            for (const auto& g : value) {
                require_object(g, "gaussians entry");
                bool have_a = false, have_t0 = false, have_w = false;
                for (const auto& [gk, gv] : g.items()) {
                    if (gk == "a") { p.a.push_back(take_number(gv, gk)); have_a = true; }
                    else if (gk == "t0_ms") { p.t0.push_back(take_number(gv, gk) * kMs); have_t0 = true; }
                    else if (gk == "w_ms") { p.w.push_back(take_number(gv, gk) * kMs); have_w = true; }
                    else throw ValidationError("unknown gaussian key '" + gk + "'");
                }
                if (!have_a || !have_t0 || !have_w)
                    throw ValidationError("each gaussian needs keys a, t0_ms, w_ms");
            }
        } else {
            throw ValidationError("unknown params key '" + key + "'");
        }
    }
    if (!have_T) throw ValidationError("params missing key 'T_ms'");
    p.validate();
    return p;
}

namespace {

// for_hash drops the fields that cannot affect results (output location,
// trace dumping, worker count), so runs that differ only there share a hash.
json run_config_json(const RunConfig& cfg, bool for_hash = false) {
    json j;
    j["delta_over_2pi_MHz"] = cfg.sys.delta / kMHz;
    j["omega0_over_2pi_MHz"] = cfg.sys.omega0 / kMHz;
    j["phi_L"] = cfg.sys.phi_L;
    j["grid_points"] = cfg.sys.grid_points;
    j["q_norm"] = cfg.sys.q_norm;
    j["T_ms"] = cfg.T / kMs;
    j["n_gaussians"] = cfg.N;
    j["n_seeds"] = cfg.n_seeds;
    j["keep"] = cfg.keep;
    j["budget"] = cfg.budget;
    j["peak_target"] = cfg.cost.peak_target;
    j["q_target"] = cfg.cost.q_target;
    j["peak_weight"] = cfg.cost.peak_weight;
    j["q_weight"] = cfg.cost.q_weight;
    j["c_max"] = cfg.cost.c_max;
    j["rng_seed"] = cfg.rng_seed;
    if (!for_hash) j["out_dir"] = cfg.out_dir;
    j["epsilon_min"] = cfg.epsilon_min;
    j["epsilon_max"] = cfg.epsilon_max;
    j["epsilon_count"] = cfg.epsilon_count;
    json ds = json::array();
    for (double T_i : cfg.durations) ds.push_back(T_i / kMs);
    j["durations_ms"] = std::move(ds);
    if (!for_hash) {
        j["write_traces"] = cfg.write_traces;
        j["threads"] = cfg.threads;
    }
    return j;
}

}  // namespace

std::string run_config_to_json(const RunConfig& cfg) {
    return run_config_json(cfg).dump(2) + "\n";
}

std::string pulse_parameters_to_json(const PulseParameters& p) {
    json j;
    j["T_ms"] = p.T / kMs;
    json gs = json::array();
    for (int i = 0; i < p.n_gaussians(); ++i) {
        json g;
        g["a"] = p.a[i];
        g["t0_ms"] = p.t0[i] / kMs;
        g["w_ms"] = p.w[i] / kMs;
        gs.push_back(std::move(g));
    }
    j["gaussians"] = std::move(gs);
    return j.dump(2) + "\n";
}

void save_pulse_parameters(const std::string& path, const PulseParameters& p) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << pulse_parameters_to_json(p);
}

std::uint64_t config_hash(const RunConfig& cfg) {
    // nlohmann objects iterate key-sorted, so dump() is already canonical.
    const std::string s = run_config_json(cfg, true).dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_csv_metadata(std::ostream& os, const RunConfig& cfg,
                        bool with_rng_seed) {
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    os << "# sta version " << kVersion << "\n";
    os << "# config fnv1a 0x" << hash << "\n";
    os << "# phases " << kPhaseConvention << "\n";
    if (with_rng_seed) os << "# rng_seed " << cfg.rng_seed << "\n";
}

namespace {

double mhz(double omega) { return omega / kMHz; }

void write_params_cells(std::ostream& os, const PulseParameters& p) {
    for (double a : p.a) os << "," << format_double(a);
    for (double t0 : p.t0) os << "," << format_double(t0 / kMs);
    for (double w : p.w) os << "," << format_double(w / kMs);
}

void write_params_header(std::ostream& os, int N) {
    for (int i = 1; i <= N; ++i) os << ",a_" << i;
    for (int i = 1; i <= N; ++i) os << ",t0_" << i << "_ms";
    for (int i = 1; i <= N; ++i) os << ",w_" << i << "_ms";
}

}  // namespace

void write_reference_csv(std::ostream& os, const RunConfig& cfg,
                         const ReferencePulses& ref) {
    write_csv_metadata(os, cfg);
    os << "t_ms,omega_P_MHz,omega_S_MHz,domega_P_MHz_per_ms,domega_S_MHz_per_ms,"
          "ddomega_P_MHz_per_ms2,ddomega_S_MHz_per_ms2\n";
    for (std::size_t k = 0; k < ref.size(); ++k) {
        os << format_double(ref.times[k] / kMs) << ","
           << format_double(mhz(ref.omega_P[k])) << ","
           << format_double(mhz(ref.omega_S[k])) << ","
           << format_double(mhz(ref.omega_P_dot[k]) * kMs) << ","
           << format_double(mhz(ref.omega_S_dot[k]) * kMs) << ","
           << format_double(mhz(ref.omega_P_ddot[k]) * kMs * kMs) << ","
           << format_double(mhz(ref.omega_S_ddot[k]) * kMs * kMs) << "\n";
    }
}

void write_frame_csv(std::ostream& os, const RunConfig& cfg,
                     const FrameSamples& frame) {
    write_csv_metadata(os, cfg);
    os << "t_ms,omega_eff_MHz,delta_eff_MHz,omega_a_MHz,gamma_dot_MHz,"
          "omega_eff_t_MHz,delta_eff_t_MHz,gamma_rad,theta_rad\n";
    for (std::size_t k = 0; k < frame.size(); ++k) {
        os << format_double(frame.times[k] / kMs) << ","
           << format_double(mhz(frame.omega_eff[k])) << ","
           << format_double(mhz(frame.delta_eff[k])) << ","
           << format_double(mhz(frame.omega_a[k])) << ","
           << format_double(mhz(frame.gamma_dot[k])) << ","
           << format_double(mhz(frame.omega_eff_t[k])) << ","
           << format_double(mhz(frame.delta_eff_t[k])) << ","
           << format_double(frame.gamma[k]) << ","
           << format_double(frame.theta[k]) << "\n";
    }
}

void write_physical_csv(std::ostream& os, const RunConfig& cfg,
                        const PhysicalPulses& pulses) {
    write_csv_metadata(os, cfg);
    os << "t_ms,omega_P_t_MHz,omega_S_t_MHz\n";
    for (std::size_t k = 0; k < pulses.size(); ++k) {
        os << format_double(pulses.times[k] / kMs) << ","
           << format_double(mhz(pulses.omega_P_t[k])) << ","
           << format_double(mhz(pulses.omega_S_t[k])) << "\n";
    }
}

void write_sweep_csv(std::ostream& os, const RunConfig& cfg,
                     const ScalingSweep& sweep) {
    write_csv_metadata(os, cfg);
    os << "epsilon,fidelity,model_fidelity\n";
    for (std::size_t k = 0; k < sweep.epsilons.size(); ++k) {
        os << format_double(sweep.epsilons[k]) << ","
           << format_double(sweep.fidelities[k]) << ","
           << format_double(sweep.model_fidelities[k]) << "\n";
    }
}

void write_cost_report_csv(std::ostream& os, const RunConfig& cfg,
                           const CostReport& report) {
    write_csv_metadata(os, cfg);
    os << "omega_peak,q,C\n";
    os << format_double(report.omega_peak) << "," << format_double(report.q)
       << "," << format_double(report.C) << "\n";
}

void write_results_csv(std::ostream& os, const RunConfig& cfg,
                       const std::vector<std::pair<int, CostReport>>& screened,
                       const std::vector<std::pair<int, CostReport>>& optimized) {
    write_csv_metadata(os, cfg, true);
    const int N = screened.empty()
                      ? (optimized.empty() ? cfg.N
                                           : optimized.front().second.params.n_gaussians())
                      : screened.front().second.params.n_gaussians();
    os << "stage,seed_index,T_ms,omega_peak,q,C";
    write_params_header(os, N);
    os << "\n";
    auto rows = [&](const char* stage,
                    const std::vector<std::pair<int, CostReport>>& list) {
        for (const auto& [index, report] : list) {
            os << stage << "," << index << ","
               << format_double(report.params.T / kMs) << ","
               << format_double(report.omega_peak) << ","
               << format_double(report.q) << "," << format_double(report.C);
            write_params_cells(os, report.params);
            os << "\n";
        }
    };
    rows("screened", screened);
    rows("optimized", optimized);
}

void write_trace_csv(std::ostream& os, const RunConfig& cfg,
                     const OptimizationTrace& trace) {
    write_csv_metadata(os, cfg, true);
    os << "iteration,C,omega_peak,q\n";
    for (const auto& p : trace.points) {
        os << p.iteration << "," << format_double(p.C) << ","
           << format_double(p.omega_peak) << "," << format_double(p.q) << "\n";
    }
}

void write_duration_csv(std::ostream& os, const RunConfig& cfg,
                        const std::vector<DurationPoint>& points) {
    write_csv_metadata(os, cfg, true);
    os << "T_ms,omega_peak,q,C,omega_peak_min,q_min\n";
    for (const auto& p : points) {
        os << format_double(p.T / kMs) << ","
           << format_double(p.best.omega_peak) << ","
           << format_double(p.best.q) << "," << format_double(p.best.C) << ","
           << format_double(p.peak_min) << "," << format_double(p.q_min)
           << "\n";
    }
}

void write_evolution_csv(std::ostream& os, const RunConfig& cfg,
                         const std::vector<double>& times,
                         const std::vector<double>& p1,
                         const std::vector<double>& p2,
                         const std::vector<double>& p3,
                         const std::vector<double>& p1_eff,
                         const std::vector<double>& p3_eff) {
    write_csv_metadata(os, cfg);
    os << "t_ms,p1,p2,p3,p1_eff,p3_eff\n";
    for (std::size_t k = 0; k < times.size(); ++k) {
        os << format_double(times[k] / kMs) << "," << format_double(p1[k])
           << "," << format_double(p2[k]) << "," << format_double(p3[k]) << ","
           << format_double(p1_eff[k]) << "," << format_double(p3_eff[k])
           << "\n";
    }
}

}  // namespace sta
