#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

#include "rcon/common.hpp"

namespace rcon {

inline constexpr double kQuadTol = 1e-10;

namespace detail {
using GaussKronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
inline constexpr unsigned kMaxQuadDepth = 15;
}  // namespace detail

// Adaptive Gauss-Kronrod over (-inf, inf); the endpoints are handled by the
// library's tail transform.
template <class F>
double integrate_real_line(F&& f, double tol = kQuadTol) {
    double err = 0.0;
    const double v = detail::GaussKronrod::integrate(
        f, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
        detail::kMaxQuadDepth, tol, &err);
    if (!std::isfinite(v)) throw numeric_error("quadrature over the real line diverged");
    return v;
}

// For even integrands: 2 * integral over (0, inf). Keeps kinked densities
// (Laplace at 0) away from interior quadrature nodes.
template <class F>
double integrate_even(F&& f, double tol = kQuadTol) {
    double err = 0.0;
    const double v = detail::GaussKronrod::integrate(
        f, 0.0, std::numeric_limits<double>::infinity(), detail::kMaxQuadDepth, tol, &err);
    if (!std::isfinite(v)) throw numeric_error("quadrature over the half line diverged");
    return 2.0 * v;
}

}  // namespace rcon
