#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "rcon/analysis.hpp"
#include "rcon/common.hpp"
#include "rcon/engine.hpp"

namespace rcon {

// Cross-trial statistics at each checkpoint. The covariance is the unbiased
// sample covariance of sqrt(t) * (X(t) - theta_hat 1) with per-trial
// centering at theta_hat = xbar(T_max).
struct EnsembleStats {
    std::vector<int> times;
    std::vector<Eigen::MatrixXd> covariance;
    std::vector<double> cov_norm;
    std::vector<double> mean_dispersion;
    double theta_hat_mean = 0.0;
    double theta_hat_var = 0.0;
    double mse_vs_xbar = 0.0;  // mean over trials of (theta_hat - xbar(0))^2
    double xbar_mean = 0.0;
    int trials = 0;
    std::uint64_t master_seed = 0;
};

// Run M independent trials (parallelized; aggregation is a deterministic
// reduction in trial order, so the result does not depend on scheduling).
inline EnsembleStats run_ensemble(const Graph& g, const TransmitMap& h, const ReceiveMap& f,
                                  const std::optional<NoiseModel>& channel_noise,
                                  const StepSchedule& schedule, const SensingConfig& sensing,
                                  int trials, int t_max, std::vector<int> checkpoints,
                                  std::uint64_t master_seed,
                                  bool resample_initials_per_trial = true, int threads = 0) {
    if (trials < 1) throw param_error("trials must be >= 1");
    std::sort(checkpoints.begin(), checkpoints.end());
    checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
    if (checkpoints.empty()) throw param_error("at least one checkpoint required");
    if (checkpoints.front() < 1 || checkpoints.back() > t_max)
        throw param_error("checkpoints must lie in [1, t_max]");

    const int n = g.node_count();
    const std::size_t cp_count = checkpoints.size();
    std::vector<Eigen::MatrixXd> states(cp_count, Eigen::MatrixXd(trials, n));
    std::vector<double> theta_hat(trials), xbar0(trials);
    std::vector<Eigen::VectorXd> dispersion(cp_count, Eigen::VectorXd(trials));

    std::atomic<int> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    std::int64_t first_error_trial = -1;

    auto worker = [&]() {
        while (true) {
            const int m = next.fetch_add(1);
            if (m >= trials) return;
            try {
                TrialTrajectory traj =
                    run_trial(g, h, f, channel_noise, schedule, sensing, t_max, checkpoints,
                              master_seed, static_cast<std::uint64_t>(m),
                              resample_initials_per_trial);
                for (std::size_t c = 0; c < cp_count; ++c) {
                    states[c].row(m) = traj.states[c].transpose();
                    dispersion[c](m) = traj.dispersion[c];
                }
                theta_hat[m] = traj.theta_hat;
                xbar0[m] = traj.xbar0;
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error || m < first_error_trial) {
                    first_error = std::current_exception();
                    first_error_trial = m;
                }
                return;
            }
        }
    };

    int nthreads = threads > 0 ? threads
                               : static_cast<int>(std::thread::hardware_concurrency());
    nthreads = std::max(1, std::min(nthreads, trials));
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (first_error) {
        try {
            std::rethrow_exception(first_error);
        } catch (const error& e) {
            throw numeric_error("trial " + std::to_string(first_error_trial) + " (seed " +
                                std::to_string(master_seed) + ") failed: " + e.what());
        }
    }

    EnsembleStats stats;
    stats.times = checkpoints;
    stats.trials = trials;
    stats.master_seed = master_seed;
    stats.covariance.reserve(cp_count);
    for (std::size_t c = 0; c < cp_count; ++c) {
        const double sqrt_t = std::sqrt(static_cast<double>(checkpoints[c]));
        Eigen::MatrixXd dev(trials, n);
        for (int m = 0; m < trials; ++m)
            dev.row(m) = sqrt_t * (states[c].row(m).array() - theta_hat[m]).matrix();
        if (trials == 1) {
            stats.covariance.push_back(Eigen::MatrixXd::Zero(n, n));
            stats.cov_norm.push_back(0.0);
        } else {
            const Eigen::RowVectorXd mean = dev.colwise().mean();
            Eigen::MatrixXd centered = dev.rowwise() - mean;
            Eigen::MatrixXd cov =
                centered.transpose() * centered / static_cast<double>(trials - 1);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, Eigen::EigenvaluesOnly);
            stats.covariance.push_back(std::move(cov));
            stats.cov_norm.push_back(es.eigenvalues().maxCoeff());
        }
        stats.mean_dispersion.push_back(dispersion[c].mean());
    }
    double th_mean = 0.0, th_sq = 0.0, mse = 0.0, xb = 0.0;
    for (int m = 0; m < trials; ++m) {
        th_mean += theta_hat[m];
        xb += xbar0[m];
        const double d = theta_hat[m] - xbar0[m];
        mse += d * d;
    }
    th_mean /= trials;
    xb /= trials;
    mse /= trials;
    for (int m = 0; m < trials; ++m) {
        const double d = theta_hat[m] - th_mean;
        th_sq += d * d;
    }
    stats.theta_hat_mean = th_mean;
    stats.theta_hat_var = trials > 1 ? th_sq / (trials - 1) : 0.0;
    stats.mse_vs_xbar = mse;
    stats.xbar_mean = xb;
    return stats;
}

struct ComparisonRow {
    int t = 0;
    double empirical = 0.0;
    double analytic = 0.0;
    double rel_error = 0.0;
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;
    bool error_non_increasing = false;
};

// Per-checkpoint relative error of the empirical covariance norm against the
// closed form, plus the trend check that the error shrinks with t.
inline ComparisonTable compare_empirical_analytic(const EnsembleStats& stats,
                                                  const CovarianceReport& report) {
    if (!(report.stability_margin > 0.0))
        throw precondition_error("comparison refused: stability margin = " +
                                 fmt_double(report.stability_margin));
    ComparisonTable table;
    for (std::size_t c = 0; c < stats.times.size(); ++c) {
        ComparisonRow row;
        row.t = stats.times[c];
        row.empirical = stats.cov_norm[c];
        row.analytic = report.c_rc_norm;
        row.rel_error = std::fabs(row.empirical - row.analytic) / row.analytic;
        table.rows.push_back(row);
    }
    table.error_non_increasing = true;
    for (std::size_t c = 1; c < table.rows.size(); ++c)
        if (table.rows[c].rel_error > table.rows[c - 1].rel_error + 1e-12)
            table.error_non_increasing = false;
    return table;
}

}  // namespace rcon
