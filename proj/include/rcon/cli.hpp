#pragma once

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rcon/analysis.hpp"
#include "rcon/config.hpp"
#include "rcon/ensemble.hpp"
#include "rcon/functionals.hpp"
#include "rcon/io.hpp"
#include "rcon/presets.hpp"

namespace rcon {

namespace cli_detail {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<int> t_max;
    std::optional<std::string> out;
    std::optional<double> a;
    std::optional<int> threads;

    void apply(ExperimentConfig& cfg) const {
        if (seed) cfg.master_seed = *seed;
        if (trials) cfg.trials = *trials;
        if (t_max) {
            cfg.t_max = *t_max;
            std::vector<int> kept;
            for (int c : cfg.checkpoints)
                if (c <= cfg.t_max) kept.push_back(c);
            cfg.checkpoints = kept;
        }
        if (out) cfg.out_dir = *out;
        if (a) {
            cfg.a = *a;
            cfg.schedule_optimal = false;
        }
        if (threads) cfg.threads = *threads;
        cfg.validate();
    }
};

inline void add_override_flags(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--seed", ov.seed, "Override the master seed");
    cmd->add_option("--trials", ov.trials, "Override the trial count");
    cmd->add_option("--t-max", ov.t_max, "Override the iteration horizon");
    cmd->add_option("--out", ov.out, "Override the output directory");
    cmd->add_option("--a", ov.a, "Override the gain a (disables schedule.a=optimal)");
    cmd->add_option("--threads", ov.threads, "Worker threads (0 = hardware)");
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw param_error("cannot open config file " + path);
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw param_error("config parse error in " + path + ": " + e.what());
    }
    try {
        return ExperimentConfig::from_json(j);
    } catch (const json::exception& e) {
        throw param_error("config error in " + path + ": " + e.what());
    }
}

// Resolve schedule.a = "optimal" into a concrete gain via the closed-form
// optimizer, evaluated at the configured theta.
inline StepSchedule resolve_schedule(const ExperimentConfig& cfg, const Graph& g,
                                     const Spectrum& sp) {
    if (!cfg.schedule_optimal) return StepSchedule{cfg.a};
    if (!cfg.channel_noise)
        throw param_error("schedule.a=optimal needs a channel noise model");
    const NoiseFunctionals fn = functionals(*cfg.channel_noise, cfg.f);
    return StepSchedule{optimal_gain(g, sp, fn, cfg.h, cfg.sensing.theta).a_star};
}

inline void run_figdata_config(const ExperimentConfig& cfg) {
    const Graph g = cfg.graph.build();
    const StepSchedule schedule = cfg.schedule_optimal
                                      ? resolve_schedule(cfg, g, spectrum(g))
                                      : StepSchedule{cfg.a};
    if (cfg.trials == 1) {
        TrialTrajectory traj =
            run_trial(g, cfg.h, cfg.f, cfg.channel_noise, schedule, cfg.sensing, cfg.t_max,
                      cfg.resolved_checkpoints(), cfg.master_seed, 0, !cfg.sensing_fixed_once);
        auto os = open_output(cfg.out_dir, cfg.name + "_trajectory.csv");
        write_trajectory_csv(os, cfg, {traj});
        auto os2 = open_output(cfg.out_dir, cfg.name + "_summary.csv");
        write_trial_summary_csv(os2, cfg, {traj});
        return;
    }
    if (cfg.checkpoints.empty()) {
        // Trajectory-style multi-run figure: first-node paths only.
        std::vector<TrialTrajectory> trajs;
        for (int m = 0; m < cfg.trials; ++m)
            trajs.push_back(run_trial(g, cfg.h, cfg.f, cfg.channel_noise, schedule, cfg.sensing,
                                      cfg.t_max, cfg.resolved_checkpoints(), cfg.master_seed,
                                      static_cast<std::uint64_t>(m), !cfg.sensing_fixed_once));
        auto os = open_output(cfg.out_dir, cfg.name + "_trajectory.csv");
        write_trajectory_csv(os, cfg, trajs, 1);
        auto os2 = open_output(cfg.out_dir, cfg.name + "_summary.csv");
        write_trial_summary_csv(os2, cfg, trajs);
        return;
    }
    EnsembleStats stats =
        run_ensemble(g, cfg.h, cfg.f, cfg.channel_noise, schedule, cfg.sensing, cfg.trials,
                     cfg.t_max, cfg.resolved_checkpoints(), cfg.master_seed,
                     !cfg.sensing_fixed_once, cfg.threads);
    auto os = open_output(cfg.out_dir, cfg.name + "_ensemble.csv");
    write_ensemble_csv(os, cfg, stats);
    auto os2 = open_output(cfg.out_dir, cfg.name + "_ensemble.json");
    write_json(os2, ensemble_to_json(cfg, stats));
}

}  // namespace cli_detail

// Entry point shared by the binary and the CLI tests.
// Exit codes: 0 success, 1 usage/config error, 2 numeric/precondition error.
inline int cli_main(int argc, const char* const* argv) {
    using cli_detail::Overrides;

    CLI::App app{"Robust average-consensus simulation and analysis toolkit"};
    app.require_subcommand(1);

    // --- graphs ------------------------------------------------------------
    auto* graphs = app.add_subcommand("graphs", "Build a graph and print its spectral summary");
    std::string family = "ring", load_path, save_path;
    int gn = 8, gk = 2, gp_nodes = 0, gq_nodes = 0;
    double gp = 0.3, gradius = 0.3;
    std::uint64_t gseed = 1;
    graphs->add_option("--family", family,
                       "complete|star|ring|line|tree|cubic|k_regular_lattice|"
                       "bipartite_complete|erdos_renyi|geometric");
    graphs->add_option("--n", gn, "Node count");
    graphs->add_option("--k", gk, "Lattice degree");
    graphs->add_option("--p-nodes", gp_nodes, "Bipartite part size p");
    graphs->add_option("--q-nodes", gq_nodes, "Bipartite part size q");
    graphs->add_option("--p", gp, "Erdos-Renyi edge probability");
    graphs->add_option("--radius", gradius, "Geometric connection radius");
    graphs->add_option("--seed", gseed, "Random-graph seed");
    graphs->add_option("--load", load_path, "Load an edge-list file instead of building");
    graphs->add_option("--save", save_path, "Write the edge list to a file");

    // --- simulate / ensemble / analyze -------------------------------------
    std::string sim_config, ens_config, ana_config;
    Overrides sim_ov, ens_ov, ana_ov;
    bool ens_compare = false;
    double ana_theta0 = std::numeric_limits<double>::quiet_NaN();

    auto* simulate = app.add_subcommand("simulate", "Run one trial, emit trajectory CSV");
    simulate->add_option("--config", sim_config, "Experiment config (JSON)")->required();
    cli_detail::add_override_flags(simulate, sim_ov);

    auto* ensemble = app.add_subcommand("ensemble", "Run a Monte Carlo ensemble");
    ensemble->add_option("--config", ens_config, "Experiment config (JSON)")->required();
    ensemble->add_flag("--compare", ens_compare,
                       "Also emit the empirical-vs-analytic comparison table");
    cli_detail::add_override_flags(ensemble, ens_ov);

    auto* analyze_cmd = app.add_subcommand("analyze", "Emit the closed-form analytic report");
    analyze_cmd->add_option("--config", ana_config, "Experiment config (JSON)")->required();
    analyze_cmd->add_option("--theta0", ana_theta0,
                            "Evaluation point theta0 (default: sensing theta)");
    cli_detail::add_override_flags(analyze_cmd, ana_ov);

    // --- figdata -------------------------------------------------------------
    auto* figdata = app.add_subcommand("figdata", "Emit the data series behind a bundled figure");
    std::string fig;
    Overrides fig_ov;
    figdata->add_option("figure", fig, "fig1..fig7")->required();
    cli_detail::add_override_flags(figdata, fig_ov);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*graphs) {
            GraphSpec spec;
            if (!load_path.empty()) {
                spec.family = "file";
                spec.path = load_path;
            } else {
                spec.family = family;
                spec.n = gn;
                spec.k = gk;
                spec.p_nodes = gp_nodes;
                spec.q_nodes = gq_nodes ? gq_nodes : gn - gp_nodes;
                spec.p = gp;
                spec.radius = gradius;
                spec.seed = gseed;
            }
            const Graph g = spec.build();
            const Eigen::VectorXd ev = laplacian_eigenvalues(g);
            std::cout << "graph: " << spec.describe() << "\n"
                      << "N: " << g.node_count() << "\n"
                      << "edges: " << g.edge_count() << "\n"
                      << "d_max: " << g.d_max() << "\n"
                      << "connected: " << (g.is_connected() ? "true" : "false") << "\n"
                      << "lambda2: " << fmt_double(ev(1)) << "\n"
                      << "lambdaN: " << fmt_double(ev(ev.size() - 1)) << "\n";
            if (!save_path.empty()) g.save_file(save_path);
            return 0;
        }
        if (*simulate) {
            ExperimentConfig cfg = cli_detail::load_config(sim_config);
            sim_ov.apply(cfg);
            const Graph g = cfg.graph.build();
            const StepSchedule schedule =
                cfg.schedule_optimal ? cli_detail::resolve_schedule(cfg, g, spectrum(g))
                                     : StepSchedule{cfg.a};
            TrialTrajectory traj = run_trial(g, cfg.h, cfg.f, cfg.channel_noise, schedule,
                                             cfg.sensing, cfg.t_max, cfg.resolved_checkpoints(),
                                             cfg.master_seed, 0, !cfg.sensing_fixed_once);
            auto os = open_output(cfg.out_dir, cfg.name + "_trajectory.csv");
            write_trajectory_csv(os, cfg, {traj});
            auto os2 = open_output(cfg.out_dir, cfg.name + "_summary.csv");
            write_trial_summary_csv(os2, cfg, {traj});
            std::cout << "trajectory written to " << cfg.out_dir << "/" << cfg.name
                      << "_trajectory.csv (theta_hat=" << fmt_double(traj.theta_hat) << ")\n";
            return 0;
        }
        if (*ensemble) {
            ExperimentConfig cfg = cli_detail::load_config(ens_config);
            ens_ov.apply(cfg);
            const Graph g = cfg.graph.build();
            const Spectrum sp = spectrum(g);
            const StepSchedule schedule = cli_detail::resolve_schedule(cfg, g, sp);
            EnsembleStats stats = run_ensemble(
                g, cfg.h, cfg.f, cfg.channel_noise, schedule, cfg.sensing, cfg.trials,
                cfg.t_max, cfg.resolved_checkpoints(), cfg.master_seed,
                !cfg.sensing_fixed_once, cfg.threads);
            auto os = open_output(cfg.out_dir, cfg.name + "_ensemble.csv");
            write_ensemble_csv(os, cfg, stats);
            auto os2 = open_output(cfg.out_dir, cfg.name + "_ensemble.json");
            write_json(os2, ensemble_to_json(cfg, stats));
            if (ens_compare) {
                if (!cfg.channel_noise)
                    throw param_error("--compare needs a channel noise model");
                const NoiseFunctionals fn = functionals(*cfg.channel_noise, cfg.f);
                const CovarianceReport cov = asymptotic_covariance(
                    g, sp, fn, cfg.h, cfg.sensing.theta, schedule.a);
                const ComparisonTable table = compare_empirical_analytic(stats, cov);
                auto os3 = open_output(cfg.out_dir, cfg.name + "_comparison.csv");
                write_comparison_csv(os3, cfg, table);
            }
            std::cout << "ensemble stats written to " << cfg.out_dir << "/" << cfg.name
                      << "_ensemble.csv\n";
            return 0;
        }
        if (*analyze_cmd) {
            ExperimentConfig cfg = cli_detail::load_config(ana_config);
            ana_ov.apply(cfg);
            if (!cfg.channel_noise) throw param_error("analyze needs a channel noise model");
            const Graph g = cfg.graph.build();
            const Spectrum sp = spectrum(g);
            const NoiseFunctionals fn = functionals(*cfg.channel_noise, cfg.f);
            const double theta0 =
                std::isnan(ana_theta0) ? cfg.sensing.theta : ana_theta0;
            const AnalyticReport rep = analyze(g, sp, fn, cfg.h, theta0,
                                               StepSchedule{cfg.a}, cfg.schedule_optimal);
            auto os = open_output(cfg.out_dir, cfg.name + "_report.json");
            const json j = analytic_report_to_json(cfg, g, rep);
            write_json(os, j);
            std::cout << j.dump(2) << "\n";
            return 0;
        }
        if (*figdata) {
            for (ExperimentConfig cfg : figure_presets(fig)) {
                fig_ov.apply(cfg);
                cli_detail::run_figdata_config(cfg);
                std::cout << "wrote series " << cfg.name << " to " << cfg.out_dir << "\n";
            }
            return 0;
        }
    } catch (const param_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace rcon
