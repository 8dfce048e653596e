#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "rcon/common.hpp"
#include "rcon/maps.hpp"
#include "rcon/noise.hpp"
#include "rcon/quadrature.hpp"
#include "rcon/rng.hpp"

namespace rcon {

struct ExpectationOptions {
    std::uint64_t mc_seed = 0x5eed0001u;  // recorded seed for Monte Carlo fallbacks
    std::size_t mc_draws = 1'000'000;
    double quad_tol = kQuadTol;
};

struct ExpectationResult {
    double value = 0.0;
    double standard_error = 0.0;  // 0 for quadrature
    bool via_monte_carlo = false;
};

// E_n[phi(n)]: quadrature against the closed-form density when available,
// otherwise seeded Monte Carlo with the reported standard error.
template <class F>
ExpectationResult expect(const NoiseModel& noise, F&& phi, const ExpectationOptions& opts = {}) {
    if (noise.is_none()) return {phi(0.0), 0.0, false};
    if (noise.has_density()) {
        const double v =
            integrate_real_line([&](double x) { return phi(x) * noise.density(x); },
                                opts.quad_tol);
        return {v, 0.0, false};
    }
    RngStream rng = RngStream::keyed(opts.mc_seed, StreamTag::expectation, 0);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < opts.mc_draws; ++i) {
        const double v = phi(noise.sample(rng));
        sum += v;
        sum_sq += v * v;
    }
    const double n = static_cast<double>(opts.mc_draws);
    const double mean = sum / n;
    const double var = std::max(0.0, sum_sq / n - mean * mean);
    return {mean, std::sqrt(var / n), true};
}

// Fisher information of the location parameter by quadrature of (p')^2 / p;
// falls back to the closed form when no density is available.
inline double fisher_information(const NoiseModel& noise, double tol = kQuadTol) {
    if (!noise.has_density()) return noise.fisher_information();
    return integrate_even(
        [&](double x) {
            const double p = noise.density(x);
            if (p < 1e-300) return 0.0;  // tail underflow; integrand -> 0 there
            const double dp = noise.density_deriv(x);
            return dp * dp / p;
        },
        tol);
}

// Scalar functionals of a (receive map, noise) pair that drive the analytic
// performance formulas.
struct NoiseFunctionals {
    double e_f_squared = 0.0;  // E[f^2(n)]
    double e_f_prime = 0.0;    // E[f'(n)]  (= g'(0))
    double ratio = 0.0;        // E[f^2] / (E[f'])^2
    double fisher_info = 0.0;  // J
    double sup_var = 0.0;      // sup_x var[f(x+n)]
    bool via_monte_carlo = false;
    double mc_se_f_squared = 0.0;
    double mc_se_f_prime = 0.0;
};

namespace detail {

// var[f(x+n)] = E[f^2(x+n)] - g(x)^2 at a single x, via quadrature.
inline double var_f_shift_quad(const NoiseModel& noise, const ReceiveMap& f, double x,
                               double tol) {
    const double m1 =
        integrate_real_line([&](double u) { return f(x + u) * noise.density(u); }, tol);
    const double m2 =
        integrate_real_line([&](double u) { return f(x + u) * f(x + u) * noise.density(u); },
                            tol);
    return std::max(0.0, m2 - m1 * m1);
}

inline double sup_var_bounded(const NoiseModel& noise, const ReceiveMap& f,
                              const ExpectationOptions& opts) {
    // Symmetric grid on [-50, 50]; for saturating odd f the supremum sits in
    // the steep region near the origin and var -> 0 as x -> +-inf.
    double best = 0.0;
    if (noise.has_density()) {
        const int points = 2001;
        for (int i = 0; i < points; ++i) {
            const double x = -50.0 + 100.0 * i / (points - 1);
            best = std::max(best, var_f_shift_quad(noise, f, x, opts.quad_tol));
        }
        return best;
    }
    // Monte Carlo fallback: common draws shared across the (coarser) grid.
    const int points = 201;
    const std::size_t draws = std::min<std::size_t>(opts.mc_draws, 100'000);
    std::vector<double> n(draws);
    RngStream rng = RngStream::keyed(opts.mc_seed, StreamTag::expectation, 1);
    for (auto& v : n) v = noise.sample(rng);
    for (int i = 0; i < points; ++i) {
        const double x = -50.0 + 100.0 * i / (points - 1);
        double s = 0.0, s2 = 0.0;
        for (double u : n) {
            const double v = f(x + u);
            s += v;
            s2 += v * v;
        }
        const double mean = s / static_cast<double>(draws);
        best = std::max(best, s2 / static_cast<double>(draws) - mean * mean);
    }
    return best;
}

}  // namespace detail

// Compute E[f^2(n)], E[f'(n)], their ratio, Fisher information and
// sup_x var[f(x+n)]. For the identity (unbounded) baseline the moments come
// from the noise variance in closed form and require it to be finite.
inline NoiseFunctionals functionals(const NoiseModel& noise, const ReceiveMap& f,
                                    const ExpectationOptions& opts = {}) {
    if (noise.is_none()) throw param_error("functionals undefined for noise 'none'");
    NoiseFunctionals out;
    try {
        out.fisher_info = fisher_information(noise, opts.quad_tol);
    } catch (const capability_error&) {
        // general alpha-stable: no density and no closed form
        out.fisher_info = std::numeric_limits<double>::quiet_NaN();
    }
    if (!f.bounded()) {
        const double var = noise.variance();
        if (!std::isfinite(var))
            throw numeric_error("E[f^2(n)] diverges: identity receive map with "
                                "infinite-variance noise " +
                                noise.describe());
        const double amp = f.amplitude();
        out.e_f_squared = amp * amp * var;
        out.e_f_prime = amp;
        out.sup_var = amp * amp * var;  // var[f(x+n)] is constant in x
    } else {
        const auto ef2 = expect(noise, [&](double u) { return f(u) * f(u); }, opts);
        const auto efp = expect(noise, [&](double u) { return f.deriv(u); }, opts);
        out.e_f_squared = ef2.value;
        out.e_f_prime = efp.value;
        out.via_monte_carlo = ef2.via_monte_carlo;
        out.mc_se_f_squared = ef2.standard_error;
        out.mc_se_f_prime = efp.standard_error;
        out.sup_var = detail::sup_var_bounded(noise, f, opts);
    }
    if (!(out.e_f_prime > 0.0) || !std::isfinite(out.e_f_squared))
        throw numeric_error("degenerate functionals for f=" + f.formula() + ", noise=" +
                            noise.describe());
    out.ratio = out.e_f_squared / (out.e_f_prime * out.e_f_prime);
    return out;
}

// Noise-averaged receive map g(x) = E_n[f(x+n)]; odd, strictly increasing,
// g(0) = 0, with g'(0) = E[f'(n)]. Monte Carlo fallback reuses one cached
// draw set so g stays a deterministic, smooth function of x.
class SmoothedMap {
public:
    SmoothedMap(ReceiveMap f, NoiseModel noise, ExpectationOptions opts = {})
        : f_(f), noise_(noise), opts_(opts) {
        if (noise_.is_none()) return;
        if (!noise_.has_density()) {
            std::vector<double> d(opts_.mc_draws);
            RngStream rng = RngStream::keyed(opts_.mc_seed, StreamTag::expectation, 2);
            for (auto& v : d) v = noise_.sample(rng);
            draws_ = std::make_shared<const std::vector<double>>(std::move(d));
        }
    }

    double operator()(double x) const {
        if (noise_.is_none()) return f_(x);
        if (noise_.has_density())
            return integrate_real_line(
                [&](double u) { return f_(x + u) * noise_.density(u); }, opts_.quad_tol);
        double s = 0.0;
        for (double u : *draws_) s += f_(x + u);
        return s / static_cast<double>(draws_->size());
    }

    double g_prime_zero() const {
        if (noise_.is_none()) return f_.deriv(0.0);
        return expect(noise_, [&](double u) { return f_.deriv(u); }, opts_).value;
    }

    const ReceiveMap& receive_map() const { return f_; }
    const NoiseModel& noise() const { return noise_; }

private:
    ReceiveMap f_;
    NoiseModel noise_;
    ExpectationOptions opts_;
    std::shared_ptr<const std::vector<double>> draws_;
};

}  // namespace rcon
