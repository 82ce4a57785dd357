// sta: STIRAP pulse design pipeline.
//
// Subcommands: map, simulate, sweep-epsilon, sensitivity, optimize,
// sweep-duration.  All output is CSV/JSON under --out; exit code 0 on
// success, 1 on runtime failure, 2 on validation failure.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sta/dynamics.hpp"
#include "sta/errors.hpp"
#include "sta/frame.hpp"
#include "sta/io.hpp"
#include "sta/model.hpp"
#include "sta/optimize.hpp"
#include "sta/robustness.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string params_path;
    std::string out_dir;
    std::optional<std::uint64_t> rng_seed;
    std::optional<int> grid_points;
    bool adiabatic = false;
    std::string epsilon_range;
    double epsilon = 1.0;
};

sta::RunConfig load_config(const CommonArgs& args) {
    sta::RunConfig cfg = args.config_path.empty()
                             ? sta::default_run_config()
                             : sta::load_run_config(args.config_path);
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    if (args.rng_seed) cfg.rng_seed = *args.rng_seed;
    if (args.grid_points) cfg.sys.grid_points = *args.grid_points;
    if (!args.epsilon_range.empty()) {
        const auto c1 = args.epsilon_range.find(':');
        const auto c2 = args.epsilon_range.find(':', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw sta::ValidationError("--epsilon-range expects LO:HI:N");
        try {
            cfg.epsilon_min = std::stod(args.epsilon_range.substr(0, c1));
            cfg.epsilon_max = std::stod(args.epsilon_range.substr(c1 + 1, c2 - c1 - 1));
            cfg.epsilon_count = std::stoi(args.epsilon_range.substr(c2 + 1));
        } catch (const std::exception&) {
            throw sta::ValidationError("--epsilon-range expects LO:HI:N");
        }
    }
    cfg.validate();
    return cfg;
}

sta::PulseParameters load_params(const CommonArgs& args) {
    if (args.params_path.empty())
        throw sta::ValidationError("this subcommand requires --params");
    return sta::load_pulse_parameters(args.params_path);
}

std::ofstream open_out(const sta::RunConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.out_dir);
    const fs::path path = fs::path(cfg.out_dir) / name;
    std::ofstream out(path);
    if (!out) throw sta::Error("cannot write " + path.string());
    return out;
}

int cmd_map(const CommonArgs& args) {
    const sta::RunConfig cfg = load_config(args);
    const sta::PulseParameters p = load_params(args);
    const sta::ReferencePulses ref = sta::reference_pulses(p, cfg.sys);
    const sta::FrameSamples frame =
        sta::effective_frame(ref, cfg.sys, args.adiabatic);
    const sta::PhysicalPulses phys = sta::physical_pulses(frame, cfg.sys);
    {
        auto out = open_out(cfg, "reference.csv");
        sta::write_reference_csv(out, cfg, ref);
    }
    {
        auto out = open_out(cfg, "frame.csv");
        sta::write_frame_csv(out, cfg, frame);
    }
    {
        auto out = open_out(cfg, "physical.csv");
        sta::write_physical_csv(out, cfg, phys);
    }
    std::cout << "wrote reference.csv frame.csv physical.csv to " << cfg.out_dir
              << "\n";
    return 0;
}

int cmd_simulate(const CommonArgs& args) {
    const sta::RunConfig cfg = load_config(args);
    const sta::PulseParameters p = load_params(args);
    const sta::ReferencePulses ref = sta::reference_pulses(p, cfg.sys);
    const sta::FrameSamples frame =
        sta::effective_frame(ref, cfg.sys, args.adiabatic);
    const sta::PhysicalPulses phys = sta::physical_pulses(frame, cfg.sys);

    std::vector<Eigen::Vector3cd> traj3;
    std::vector<Eigen::Vector2cd> traj2;
    const Eigen::Vector3cd psi3 = sta::integrate_three_level(
        phys, cfg.sys, Eigen::Vector3cd(1.0, 0.0, 0.0), args.epsilon, &traj3);
    const Eigen::Vector2cd psi2 = sta::integrate_two_level(
        frame, Eigen::Vector2cd(1.0, 0.0), args.epsilon, &traj2);

    std::vector<double> p1, p2, p3, p1e, p3e;
    for (const auto& v : traj3) {
        p1.push_back(std::norm(v(0)));
        p2.push_back(std::norm(v(1)));
        p3.push_back(std::norm(v(2)));
    }
    for (const auto& v : traj2) {
        p1e.push_back(std::norm(v(0)));
        p3e.push_back(std::norm(v(1)));
    }
    auto out = open_out(cfg, "evolution.csv");
    sta::write_evolution_csv(out, cfg, frame.times, p1, p2, p3, p1e, p3e);
    std::cout << "epsilon " << sta::format_double(args.epsilon)
              << "  three-level F " << sta::format_double(std::norm(psi3(2)))
              << "  two-level F " << sta::format_double(std::norm(psi2(1)))
              << "\n";
    return 0;
}

int cmd_sweep_epsilon(const CommonArgs& args) {
    const sta::RunConfig cfg = load_config(args);
    const sta::PulseParameters p = load_params(args);
    const sta::ReferencePulses ref = sta::reference_pulses(p, cfg.sys);
    const sta::FrameSamples frame = sta::effective_frame(ref, cfg.sys);
    const double q = sta::sensitivity(frame, cfg.sys);
    const sta::ScalingSweep sweep = sta::scaling_sweep(
        frame, q, cfg.epsilon_min, cfg.epsilon_max, cfg.epsilon_count);
    auto out = open_out(cfg, "sweep.csv");
    sta::write_sweep_csv(out, cfg, sweep);
    std::cout << "q " << sta::format_double(q) << "  wrote sweep.csv to "
              << cfg.out_dir << "\n";
    return 0;
}

int cmd_sensitivity(const CommonArgs& args) {
    const sta::RunConfig cfg = load_config(args);
    const sta::PulseParameters p = load_params(args);
    const sta::CostReport report =
        sta::evaluate_candidate(p, cfg.sys, cfg.cost);
    auto out = open_out(cfg, "sensitivity.csv");
    sta::write_cost_report_csv(out, cfg, report);
    std::cout << "omega_peak " << sta::format_double(report.omega_peak)
              << "  q " << sta::format_double(report.q) << "  C "
              << sta::format_double(report.C) << "\n";
    return 0;
}

int cmd_optimize(const CommonArgs& args) {
    const sta::RunConfig cfg = load_config(args);
    const int threads = sta::resolve_threads(cfg.threads);

    sta::SeedBox box;
    box.rng_seed = cfg.rng_seed;
    const auto seeds = sta::generate_seeds(box, cfg.n_seeds, cfg.T, cfg.N,
                                           cfg.sys.grid_points);
    const sta::ScreenResult screened =
        sta::screen(seeds, cfg.sys, cfg.cost, cfg.keep, threads);
    if (screened.rows.empty())
        throw sta::Error("no valid seeds survived screening");

    std::vector<sta::PulseParameters> starts;
    starts.reserve(screened.rows.size());
    for (const auto& row : screened.rows) starts.push_back(row.second.params);
    const std::vector<sta::OptimizationTrace> traces = sta::optimize_pool(
        starts, cfg.sys, cfg.cost, cfg.budget, box, cfg.write_traces, threads);

    std::vector<std::pair<int, sta::CostReport>> optimized;
    optimized.reserve(traces.size());
    for (std::size_t i = 0; i < traces.size(); ++i)
        optimized.emplace_back(screened.rows[i].first, traces[i].best);
    std::stable_sort(optimized.begin(), optimized.end(),
                     [](const auto& a, const auto& b) {
                         return a.second.C < b.second.C;
                     });

    {
        auto out = open_out(cfg, "results.csv");
        sta::write_results_csv(out, cfg, screened.rows, optimized);
    }
    sta::save_pulse_parameters(
        (fs::path(cfg.out_dir) / "best_params.json").string(),
        optimized.front().second.params);
    if (cfg.write_traces) {
        for (std::size_t i = 0; i < traces.size(); ++i) {
            auto out = open_out(cfg, "trace_" +
                                          std::to_string(screened.rows[i].first) +
                                          ".csv");
            sta::write_trace_csv(out, cfg, traces[i]);
        }
    }
    const sta::CostReport& best = optimized.front().second;
    std::cout << "screened " << screened.n_evaluated << " seeds ("
              << screened.n_failed << " rejected), optimized "
              << optimized.size() << "\n";
    std::cout << "best omega_peak " << sta::format_double(best.omega_peak)
              << "  q " << sta::format_double(best.q) << "  C "
              << sta::format_double(best.C) << "\n";
    return 0;
}

int cmd_sweep_duration(const CommonArgs& args) {
    sta::RunConfig cfg = load_config(args);
    if (cfg.durations.empty())
        cfg.durations = {0.2e-3, 0.25e-3, 0.3e-3, 0.35e-3, 0.4e-3};
    const int threads = sta::resolve_threads(cfg.threads);
    sta::SeedBox box;
    box.rng_seed = cfg.rng_seed;
    const std::vector<sta::DurationPoint> points =
        sta::duration_sweep(cfg.durations, cfg.sys, cfg.cost, box, cfg.n_seeds,
                            cfg.keep, cfg.budget, threads);
    {
        auto out = open_out(cfg, "duration.csv");
        sta::write_duration_csv(out, cfg, points);
    }
    for (const auto& pt : points) {
        char name[64];
        std::snprintf(name, sizeof(name), "best_params_T%g_ms.json",
                      pt.T * 1e3);
        sta::save_pulse_parameters((fs::path(cfg.out_dir) / name).string(),
                                   pt.best.params);
        std::cout << "T " << sta::format_double(pt.T * 1e3)
                  << " ms  omega_peak " << sta::format_double(pt.best.omega_peak)
                  << "  q " << sta::format_double(pt.best.q) << "  C "
                  << sta::format_double(pt.best.C) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"STIRAP pulse design via shortcuts to adiabaticity"};
    app.require_subcommand(1);

    CommonArgs args;
    auto add_common = [&](CLI::App* cmd, bool with_params) {
        cmd->add_option("--config", args.config_path, "run config JSON");
        if (with_params)
            cmd->add_option("--params", args.params_path, "pulse parameters JSON");
        cmd->add_option("--out", args.out_dir, "output directory");
        cmd->add_option("--rng-seed", args.rng_seed, "override rng seed");
        cmd->add_option("--grid-points", args.grid_points, "override grid size");
        return cmd;
    };

    CLI::App* map = add_common(app.add_subcommand("map", "reference -> frame -> physical pulses"), true);
    map->add_flag("--adiabatic", args.adiabatic, "drop the counter-diabatic term");
    CLI::App* simulate = add_common(app.add_subcommand("simulate", "integrate both models, write populations"), true);
    simulate->add_flag("--adiabatic", args.adiabatic, "drop the counter-diabatic term");
    simulate->add_option("--epsilon", args.epsilon, "amplitude scaling factor");
    CLI::App* sweep_eps = add_common(app.add_subcommand("sweep-epsilon", "fidelity vs amplitude scaling"), true);
    sweep_eps->add_option("--epsilon-range", args.epsilon_range, "LO:HI:N");
    add_common(app.add_subcommand("sensitivity", "peak Rabi, sensitivity q, cost C"), true);
    add_common(app.add_subcommand("optimize", "screen random seeds, locally minimize C"), false);
    add_common(app.add_subcommand("sweep-duration", "optimize across durations"), false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // --help is success, bad usage is validation
    }

    try {
        if (app.got_subcommand("map")) return cmd_map(args);
        if (app.got_subcommand("simulate")) return cmd_simulate(args);
        if (app.got_subcommand("sweep-epsilon")) return cmd_sweep_epsilon(args);
        if (app.got_subcommand("sensitivity")) return cmd_sensitivity(args);
        if (app.got_subcommand("optimize")) return cmd_optimize(args);
        if (app.got_subcommand("sweep-duration")) return cmd_sweep_duration(args);
    } catch (const sta::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
