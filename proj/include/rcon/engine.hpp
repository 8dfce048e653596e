#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rcon/common.hpp"
#include "rcon/graph.hpp"
#include "rcon/maps.hpp"
#include "rcon/noise.hpp"
#include "rcon/rng.hpp"

namespace rcon {

// Decreasing gain sequence alpha(t) = a/(t+1): sum alpha diverges, sum
// alpha^2 = a^2 * pi^2/6.
struct StepSchedule {
    double a = 1.0;

    double alpha(int t) const { return a / (t + 1); }
    double sum_alpha_sq() const { return a * a * kPi * kPi / 6.0; }
};

// Sensing model x_i(0) = theta + eta_i, or an explicit initial vector.
struct SensingConfig {
    double theta = 0.0;
    std::optional<NoiseModel> noise;                 // eta_i distribution
    std::optional<Eigen::VectorXd> fixed_initials;   // overrides theta/noise
};

struct InitialState {
    Eigen::VectorXd x;
    double xbar;
};

inline InitialState initial_state(const SensingConfig& cfg, int n, RngStream rng) {
    InitialState out;
    if (cfg.fixed_initials) {
        if (cfg.fixed_initials->size() != n)
            throw param_error("fixed_initials length != node count");
        out.x = *cfg.fixed_initials;
    } else {
        out.x = Eigen::VectorXd::Constant(n, cfg.theta);
        if (cfg.noise && !cfg.noise->is_none())
            for (int i = 0; i < n; ++i) out.x(i) += cfg.noise->sample(rng);
    }
    out.xbar = out.x.mean();
    return out;
}

// One RC update:
//   x_i+ = x_i - alpha * sum_{j in N_i} f( h(x_i) - h(x_j) - n_ij )
// with n_ij drawn fresh per ordered pair (receiver i, sender j); n_ij and
// n_ji are distinct draws. The noise callback receives
// (receiver, sender, edge_index, direction) so callers can key draws either
// by node labels (tests) or by counters (production).
template <class NoiseFn>
Eigen::VectorXd rc_step(const Eigen::VectorXd& x, const Graph& g, const TransmitMap& h,
                        const ReceiveMap& f, double alpha, NoiseFn&& noise) {
    const int n = g.node_count();
    Eigen::VectorXd hx(n);
    for (int i = 0; i < n; ++i) hx(i) = h(x(i));
    Eigen::VectorXd out = x;
    const auto& edges = g.edges();
    for (int k = 0; k < static_cast<int>(edges.size()); ++k) {
        const auto [i, j] = edges[k];
        const double d = hx(i) - hx(j);
        const double nij = noise(i, j, k, 0);
        const double nji = noise(j, i, k, 1);
        out(i) -= alpha * f(d - nij);
        out(j) -= alpha * f(-d - nji);
    }
    return out;
}

// Production channel-noise source: each directed-edge draw at iteration t of
// a trial owns the substream keyed by (seed, trial, t, draw index), so the
// realization is independent of evaluation order.
struct ChannelNoise {
    const NoiseModel* model = nullptr;  // null or none => noise-free
    std::uint64_t master_seed = 0;
    std::uint64_t trial = 0;
    int t = 0;

    double operator()(int /*receiver*/, int /*sender*/, int edge_index, int direction) const {
        if (model == nullptr || model->is_none()) return 0.0;
        RngStream rng = RngStream::keyed(master_seed, StreamTag::channel, trial,
                                         static_cast<std::uint64_t>(t),
                                         static_cast<std::uint64_t>(2 * edge_index + direction));
        return model->sample(rng);
    }
};

struct TrialTrajectory {
    std::vector<int> times;               // strictly increasing; starts at 0
    std::vector<Eigen::VectorXd> states;  // X(t) at the recorded times
    std::vector<double> dispersion;       // ||X(t) - xbar(t) 1||
    std::vector<double> running_mean;     // xbar(t)
    double theta_hat = 0.0;               // xbar(T_max), the limit estimate
    double xbar0 = 0.0;
    std::uint64_t trial_index = 0;
    std::uint64_t master_seed = 0;
};

// Dense checkpoints for t <= 100, then logarithmically thinned. The final
// time is always included.
inline std::vector<int> default_checkpoints(int t_max) {
    std::vector<int> out;
    for (int t = 0; t <= std::min(t_max, 100); ++t) out.push_back(t);
    double t = 100.0;
    while (true) {
        t *= 1.1;
        const int ti = static_cast<int>(t);
        if (ti >= t_max) break;
        if (ti > out.back()) out.push_back(ti);
    }
    if (out.back() != t_max) out.push_back(t_max);
    return out;
}

inline std::vector<int> every_iteration_checkpoints(int t_max) {
    std::vector<int> out(t_max + 1);
    for (int t = 0; t <= t_max; ++t) out[t] = t;
    return out;
}

// Run the RC recursion for t = 0 .. T_max-1 and record the requested
// checkpoints. Fully reproducible from (master_seed, trial_index); always
// runs to T_max (ensemble covariances need aligned horizons).
inline TrialTrajectory run_trial(const Graph& g, const TransmitMap& h, const ReceiveMap& f,
                                 const std::optional<NoiseModel>& channel_noise,
                                 const StepSchedule& schedule, const SensingConfig& sensing,
                                 int t_max, const std::vector<int>& checkpoints,
                                 std::uint64_t master_seed, std::uint64_t trial_index,
                                 bool resample_initials_per_trial = true) {
    if (t_max < 1) throw param_error("t_max must be >= 1");
    for (std::size_t k = 1; k < checkpoints.size(); ++k)
        if (checkpoints[k] <= checkpoints[k - 1])
            throw param_error("checkpoints must be strictly increasing");
    if (!checkpoints.empty() && (checkpoints.front() < 0 || checkpoints.back() > t_max))
        throw param_error("checkpoints must lie in [0, t_max]");

    TrialTrajectory traj;
    traj.trial_index = trial_index;
    traj.master_seed = master_seed;

    const std::uint64_t sensing_key = resample_initials_per_trial ? trial_index + 1 : 0;
    InitialState init = initial_state(
        sensing, g.node_count(), RngStream::keyed(master_seed, StreamTag::sensing, sensing_key));
    traj.xbar0 = init.xbar;

    Eigen::VectorXd x = std::move(init.x);
    std::size_t next_cp = 0;
    auto record = [&](int t) {
        const double xbar = x.mean();
        traj.times.push_back(t);
        traj.states.push_back(x);
        traj.running_mean.push_back(xbar);
        traj.dispersion.push_back((x.array() - xbar).matrix().norm());
    };
    if (next_cp < checkpoints.size() && checkpoints[next_cp] == 0) {
        record(0);
        ++next_cp;
    }

    ChannelNoise noise{channel_noise && !channel_noise->is_none() ? &*channel_noise : nullptr,
                       master_seed, trial_index, 0};
    for (int t = 0; t < t_max; ++t) {
        noise.t = t;
        x = rc_step(x, g, h, f, schedule.alpha(t), noise);
        if (!x.allFinite())
            throw numeric_error("non-finite state at iteration " + std::to_string(t + 1) +
                                " (trial " + std::to_string(trial_index) + ")");
        if (next_cp < checkpoints.size() && checkpoints[next_cp] == t + 1) {
            record(t + 1);
            ++next_cp;
        }
    }
    traj.theta_hat = x.mean();
    return traj;
}

// Verification of the mean recursion xbar(t+1) = xbar(t) - vtilde(t).
// Noise-free, the mean is conserved exactly (1^T mu(x) = 0); noisy, the
// martingale increments are bounded by alpha(t) * d_max * 2 F_max.
struct MeanPreservationReport {
    double max_mean_step = 0.0;          // max_t |xbar(t+1) - xbar(t)|
    bool conserved = false;              // noise-free check at 1e-12
    std::vector<double> increments;      // vtilde(t) = xbar(t) - xbar(t+1)
    int bound_violations = 0;            // |vtilde(t)| > alpha(t) * d_max * 2 F_max
    bool within_bound = false;
};

inline MeanPreservationReport mean_preservation_check(const TrialTrajectory& traj,
                                                      const StepSchedule& schedule,
                                                      const Graph& g, const ReceiveMap& f,
                                                      bool noise_free) {
    for (std::size_t k = 0; k < traj.times.size(); ++k)
        if (traj.times[k] != static_cast<int>(k))
            throw param_error("mean_preservation_check needs per-iteration checkpoints");
    MeanPreservationReport rep;
    const double f_max = f.bound();
    for (std::size_t k = 0; k + 1 < traj.times.size(); ++k) {
        const double step = traj.running_mean[k] - traj.running_mean[k + 1];
        rep.increments.push_back(step);
        rep.max_mean_step = std::max(rep.max_mean_step, std::fabs(step));
        const double bound = schedule.alpha(static_cast<int>(k)) * g.d_max() * 2.0 * f_max;
        if (std::fabs(step) > bound) ++rep.bound_violations;
    }
    rep.conserved = !noise_free || rep.max_mean_step <= 1e-12;
    rep.within_bound = rep.bound_violations == 0;
    return rep;
}

}  // namespace rcon
