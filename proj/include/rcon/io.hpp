#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "rcon/analysis.hpp"
#include "rcon/common.hpp"
#include "rcon/config.hpp"
#include "rcon/engine.hpp"
#include "rcon/ensemble.hpp"

namespace rcon {

// Every emitted file starts with this block so outputs are traceable to
// their configuration and reproducible from it.
inline void write_header_block(std::ostream& os, const ExperimentConfig& cfg) {
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(cfg.config_hash()));
    os << "# name: " << cfg.name << "\n";
    os << "# config_hash: " << hash << "\n";
    os << "# master_seed: " << cfg.master_seed << "\n";
}

inline std::ofstream open_output(const std::string& dir, const std::string& file) {
    if (!dir.empty()) std::filesystem::create_directories(dir);
    const std::string path = dir.empty() ? file : dir + "/" + file;
    std::ofstream os(path);
    if (!os) throw param_error("cannot open " + path + " for writing");
    return os;
}

// Checkpoint rows: trial,t,node,value. `nodes_limit` restricts to the first
// k nodes (0 = all).
inline void write_trajectory_csv(std::ostream& os, const ExperimentConfig& cfg,
                                 const std::vector<TrialTrajectory>& trajectories,
                                 int nodes_limit = 0) {
    write_header_block(os, cfg);
    os << "trial,t,node,value\n";
    for (const auto& traj : trajectories) {
        for (std::size_t k = 0; k < traj.times.size(); ++k) {
            const int n = static_cast<int>(traj.states[k].size());
            const int last = nodes_limit > 0 ? std::min(nodes_limit, n) : n;
            for (int i = 0; i < last; ++i)
                os << traj.trial_index << "," << traj.times[k] << "," << i << ","
                   << fmt_double(traj.states[k](i)) << "\n";
        }
    }
}

// Summary rows: trial,theta_hat,dispersion_final,seed.
inline void write_trial_summary_csv(std::ostream& os, const ExperimentConfig& cfg,
                                    const std::vector<TrialTrajectory>& trajectories) {
    write_header_block(os, cfg);
    os << "trial,theta_hat,dispersion_final,seed\n";
    for (const auto& traj : trajectories)
        os << traj.trial_index << "," << fmt_double(traj.theta_hat) << ","
           << fmt_double(traj.dispersion.back()) << "," << traj.master_seed << "\n";
}

inline void write_ensemble_csv(std::ostream& os, const ExperimentConfig& cfg,
                               const EnsembleStats& stats) {
    write_header_block(os, cfg);
    os << "t,cov_norm,mean_dispersion\n";
    for (std::size_t c = 0; c < stats.times.size(); ++c)
        os << stats.times[c] << "," << fmt_double(stats.cov_norm[c]) << ","
           << fmt_double(stats.mean_dispersion[c]) << "\n";
}

inline void write_comparison_csv(std::ostream& os, const ExperimentConfig& cfg,
                                 const ComparisonTable& table) {
    write_header_block(os, cfg);
    os << "t,empirical_cov_norm,analytic_cov_norm,rel_error\n";
    for (const auto& row : table.rows)
        os << row.t << "," << fmt_double(row.empirical) << "," << fmt_double(row.analytic)
           << "," << fmt_double(row.rel_error) << "\n";
}

inline json ensemble_to_json(const ExperimentConfig& cfg, const EnsembleStats& stats) {
    json j;
    j["name"] = cfg.name;
    j["config"] = cfg.to_json();
    j["trials"] = stats.trials;
    j["theta_hat_mean"] = stats.theta_hat_mean;
    j["theta_hat_var"] = stats.theta_hat_var;
    j["mse_vs_xbar"] = stats.mse_vs_xbar;
    j["xbar_mean"] = stats.xbar_mean;
    j["checkpoints"] = stats.times;
    j["cov_norm"] = stats.cov_norm;
    j["mean_dispersion"] = stats.mean_dispersion;
    return j;
}

// Full analytic report plus provenance for the `analyze` subcommand.
inline json analytic_report_to_json(const ExperimentConfig& cfg, const Graph& g,
                                    const AnalyticReport& rep) {
    json j;
    j["provenance"] = {{"name", cfg.name},
                       {"graph", cfg.graph.describe()},
                       {"nodes", g.node_count()},
                       {"edges", g.edge_count()},
                       {"d_max", g.d_max()},
                       {"h", cfg.h.formula()},
                       {"f", cfg.f.formula()},
                       {"channel_noise",
                        cfg.channel_noise ? cfg.channel_noise->describe() : "none"},
                       {"master_seed", cfg.master_seed}};
    j["theta0"] = rep.theta0;
    j["gain"] = rep.gain;
    j["gain_is_optimal"] = rep.gain_is_optimal;
    j["sigma_n_sq"] = rep.sigma_n_sq;
    j["stability_margin"] = rep.stability_margin;
    j["g_prime_zero"] = rep.g_prime_zero;
    j["h_prime_theta0"] = rep.h_prime_theta0;
    std::vector<double> sdiag(rep.s_diag.data(), rep.s_diag.data() + rep.s_diag.size());
    j["s_diag"] = sdiag;
    j["c_rc_norm"] = rep.c_rc_norm;
    j["a_star"] = rep.a_star;
    j["c_star_norm"] = rep.c_star_norm;
    j["varrho"] = rep.varrho;
    j["mse_bound"] = rep.mse_bound;
    j["fisher_ratio"] = rep.fisher_ratio;
    j["one_over_j"] = rep.one_over_j;
    j["fisher_satisfied"] = rep.fisher_satisfied;
    return j;
}

inline void write_json(std::ostream& os, const json& j) { os << j.dump(2) << "\n"; }

}  // namespace rcon
