// Minimal library walkthrough: build a ring, run one noisy RC trial, and
// compare the empirical limit against the closed-form gain recommendation.
#include <iostream>

#include "rcon/analysis.hpp"
#include "rcon/engine.hpp"
#include "rcon/functionals.hpp"
#include "rcon/graph.hpp"

int main() {
    using namespace rcon;

    const Graph g = Graph::ring(10);
    const Spectrum sp = spectrum(g);
    std::cout << "ring(10): lambda2 = " << sp.lambda2() << ", d_max = " << g.d_max() << "\n";

    const TransmitMap h = TransmitMap::identity();
    const ReceiveMap f = ReceiveMap::tanh_scaled(2.0);
    const NoiseModel channel = NoiseModel::cauchy(0.2);

    const NoiseFunctionals fn = functionals(channel, f);
    const OptimalGain og = optimal_gain(g, sp, fn, h, /*theta0=*/5.0);
    std::cout << "g'(0) = " << fn.e_f_prime << ", optimal gain a* = " << og.a_star << "\n";

    SensingConfig sensing;
    sensing.theta = 5.0;
    sensing.noise = NoiseModel::gaussian(1.0);

    const StepSchedule schedule{og.a_star};
    const TrialTrajectory traj = run_trial(g, h, f, channel, schedule, sensing,
                                           /*t_max=*/2000, default_checkpoints(2000),
                                           /*master_seed=*/7, /*trial_index=*/0);
    std::cout << "xbar(0) = " << traj.xbar0 << ", theta_hat = " << traj.theta_hat
              << ", final dispersion = " << traj.dispersion.back() << "\n";
    return 0;
}
