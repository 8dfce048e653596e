#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "rcon/common.hpp"
#include "rcon/engine.hpp"
#include "rcon/functionals.hpp"
#include "rcon/graph.hpp"
#include "rcon/maps.hpp"

namespace rcon {

// sigma_n^2 = (sum_i d_i / N^2) * E[f^2(n)]: the limit variance of the
// noise projected on the consensus direction.
inline double sigma_n_sq(const Graph& g, const NoiseFunctionals& fn) {
    const double n = g.node_count();
    return g.degree_sum() / (n * n) * fn.e_f_squared;
}

struct CovarianceReport {
    Eigen::VectorXd s_diag;   // N-1 diagonal entries of the rotated covariance
    Eigen::MatrixXd c_rc;     // N x N asymptotic covariance of sqrt(t)(X - theta0 1)
    double c_rc_norm = 0.0;   // spectral norm
    double stability_margin = 0.0;  // 2 a g'(0) h'(theta0) lambda_2 - 1
    double g_prime_zero = 0.0;
    double h_prime_theta0 = 0.0;
};

// Asymptotic covariance of sqrt(t)(X(t) - theta0 1):
//   C_RC = a^2 sigma_n^2 11^T + Phi diag(s) Phi^T,
//   s_i  = a^2 N sigma_n^2 / (2 a g'(0) h'(theta0) lambda_{i+1} - 1).
// This is the composition the Monte Carlo ensembles reproduce (the rotated
// noise covariance is N sigma_n^2 I and no extra 1/N enters when mapping
// back to node coordinates).
inline CovarianceReport asymptotic_covariance(const Graph& g, const Spectrum& sp,
                                              const NoiseFunctionals& fn, const TransmitMap& h,
                                              double theta0, double a) {
    const int n = g.node_count();
    CovarianceReport rep;
    rep.g_prime_zero = fn.e_f_prime;
    rep.h_prime_theta0 = h.deriv(theta0);
    const double slope = rep.g_prime_zero * rep.h_prime_theta0;
    if (!(slope > 0.0))
        throw precondition_error("degenerate derivative: g'(0) h'(theta0) = " +
                                 fmt_double(slope));
    rep.stability_margin = 2.0 * a * slope * sp.lambda2() - 1.0;
    if (!(rep.stability_margin > 0.0))
        throw precondition_error("stability violated: 2 a g'(0) h'(theta0) lambda_2 - 1 = " +
                                 fmt_double(rep.stability_margin) + " (needs > 0)");
    const double sn2 = sigma_n_sq(g, fn);
    rep.s_diag.resize(n - 1);
    for (int i = 0; i < n - 1; ++i) {
        const double denom = 2.0 * a * slope * sp.eigenvalues(i + 1) - 1.0;
        rep.s_diag(i) = a * a * n * sn2 / denom;
    }
    rep.c_rc = a * a * sn2 * Eigen::MatrixXd::Ones(n, n) +
               sp.phi * rep.s_diag.asDiagonal() * sp.phi.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(rep.c_rc, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw numeric_error("covariance eigensolve failed");
    rep.c_rc_norm = solver.eigenvalues().maxCoeff();
    return rep;
}

struct OptimalGain {
    double a_star = 0.0;
    double c_star_norm = 0.0;
};

// Gain minimizing the asymptotic-covariance norm, and the optimal value:
//   a*     = (N+1) / (2 N lambda_2 g'(0) h'(theta0))
//   ||C*|| = (sum d_i / N^2) ((N+1)/(2N))^2 (E[f^2]/E[f']^2) / (lambda_2 h'(theta0))^2
inline OptimalGain optimal_gain(const Graph& g, const Spectrum& sp, const NoiseFunctionals& fn,
                                const TransmitMap& h, double theta0) {
    const double hp = h.deriv(theta0);
    const double slope = fn.e_f_prime * hp;
    if (!(slope > 0.0))
        throw precondition_error("degenerate derivative: g'(0) h'(theta0) = " +
                                 fmt_double(slope));
    const double n = g.node_count();
    const double l2 = sp.lambda2();
    OptimalGain out;
    out.a_star = (n + 1.0) / (2.0 * n * l2 * slope);
    const double half = (n + 1.0) / (2.0 * n);
    out.c_star_norm =
        g.degree_sum() / (n * n) * half * half * fn.ratio / (l2 * l2 * hp * hp);
    return out;
}

struct MseBoundReport {
    double varrho = 0.0;  // N d_max sup_x var[f(x+n)], certified bound on E||n(t,x)||^2
    double bound = 0.0;   // varrho N^-2 sum_t alpha(t)^2
};

inline MseBoundReport mse_bound(const Graph& g, const NoiseFunctionals& fn,
                                const StepSchedule& schedule) {
    MseBoundReport out;
    const double n = g.node_count();
    out.varrho = n * g.d_max() * fn.sup_var;
    out.bound = out.varrho / (n * n) * schedule.sum_alpha_sq();
    return out;
}

struct FisherCheck {
    double ratio = 0.0;       // E[f^2] / (E[f'])^2
    double one_over_j = 0.0;  // 1 / J
    bool satisfied = false;   // ratio >= 1/J - 1e-6
};

inline FisherCheck fisher_check(const NoiseFunctionals& fn) {
    if (std::isnan(fn.fisher_info))
        throw precondition_error("Fisher information unavailable for this noise kind");
    FisherCheck out;
    out.ratio = fn.ratio;
    out.one_over_j = 1.0 / fn.fisher_info;
    out.satisfied = out.ratio >= out.one_over_j - 1e-6;
    return out;
}

// Aggregate closed-form report behind the `analyze` CLI subcommand.
struct AnalyticReport {
    double sigma_n_sq = 0.0;
    Eigen::VectorXd s_diag;
    Eigen::MatrixXd c_rc;
    double c_rc_norm = 0.0;
    double a_star = 0.0;
    double c_star_norm = 0.0;
    double varrho = 0.0;
    double mse_bound = 0.0;
    double fisher_ratio = 0.0;
    double one_over_j = 0.0;
    bool fisher_satisfied = false;
    double stability_margin = 0.0;
    double g_prime_zero = 0.0;
    double h_prime_theta0 = 0.0;
    double theta0 = 0.0;
    double gain = 0.0;
    bool gain_is_optimal = false;
};

inline AnalyticReport analyze(const Graph& g, const Spectrum& sp, const NoiseFunctionals& fn,
                              const TransmitMap& h, double theta0, const StepSchedule& schedule,
                              bool gain_is_optimal) {
    AnalyticReport rep;
    rep.theta0 = theta0;
    rep.sigma_n_sq = sigma_n_sq(g, fn);
    const OptimalGain og = optimal_gain(g, sp, fn, h, theta0);
    rep.a_star = og.a_star;
    rep.c_star_norm = og.c_star_norm;
    rep.gain = gain_is_optimal ? og.a_star : schedule.a;
    rep.gain_is_optimal = gain_is_optimal;
    const CovarianceReport cov = asymptotic_covariance(g, sp, fn, h, theta0, rep.gain);
    rep.s_diag = cov.s_diag;
    rep.c_rc = cov.c_rc;
    rep.c_rc_norm = cov.c_rc_norm;
    rep.stability_margin = cov.stability_margin;
    rep.g_prime_zero = cov.g_prime_zero;
    rep.h_prime_theta0 = cov.h_prime_theta0;
    StepSchedule used{rep.gain};
    const MseBoundReport mse = mse_bound(g, fn, used);
    rep.varrho = mse.varrho;
    rep.mse_bound = mse.bound;
    const FisherCheck fc = fisher_check(fn);
    rep.fisher_ratio = fc.ratio;
    rep.one_over_j = fc.one_over_j;
    rep.fisher_satisfied = fc.satisfied;
    return rep;
}

}  // namespace rcon
