#pragma once

#include <cmath>
#include <string>

#include "rcon/common.hpp"
#include "rcon/rng.hpp"

namespace rcon {

enum class NoiseKind { none, gaussian, laplacian, cauchy, alpha_stable };

inline std::string to_string(NoiseKind k) {
    switch (k) {
        case NoiseKind::none: return "none";
        case NoiseKind::gaussian: return "gaussian";
        case NoiseKind::laplacian: return "laplacian";
        case NoiseKind::cauchy: return "cauchy";
        case NoiseKind::alpha_stable: return "alpha_stable";
    }
    return "?";
}

// Symmetric zero-median noise family. Every kind satisfies the zero-median
// symmetry assumption; alpha_stable is restricted to the symmetric case
// (skew 0) with 0 < alpha <= 2.
class NoiseModel {
public:
    static NoiseModel none() { return NoiseModel(NoiseKind::none, 0.0, 0.0); }

    static NoiseModel gaussian(double sigma) {
        require_positive(sigma, "sigma");
        return NoiseModel(NoiseKind::gaussian, sigma, 0.0);
    }

    static NoiseModel laplacian(double b) {
        require_positive(b, "b");
        return NoiseModel(NoiseKind::laplacian, b, 0.0);
    }

    static NoiseModel cauchy(double gamma) {
        require_positive(gamma, "gamma");
        return NoiseModel(NoiseKind::cauchy, gamma, 0.0);
    }

    static NoiseModel alpha_stable(double alpha, double c) {
        if (!(alpha > 0.0) || alpha > 2.0)
            throw param_error("alpha_stable requires 0 < alpha <= 2");
        require_positive(c, "c");
        return NoiseModel(NoiseKind::alpha_stable, alpha, c);
    }

    // One i.i.d. draw. Gaussian uses Box-Muller, symmetric stable the
    // standard Chambers-Mallows-Stuck polar construction; each call consumes
    // a fixed number of uniforms from the stream.
    double sample(RngStream& rng) const {
        switch (kind_) {
            case NoiseKind::none: return 0.0;
            case NoiseKind::gaussian: {
                const double u1 = rng.uniform01();
                const double u2 = rng.uniform01();
                return p1_ * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
            }
            case NoiseKind::laplacian: {
                const double v = rng.uniform01() - 0.5;
                const double mag = -std::log(1.0 - 2.0 * std::fabs(v));
                return v < 0 ? -p1_ * mag : p1_ * mag;
            }
            case NoiseKind::cauchy: return p1_ * std::tan(kPi * (rng.uniform01() - 0.5));
            case NoiseKind::alpha_stable: {
                const double u = kPi * (rng.uniform01() - 0.5);  // uniform(-pi/2, pi/2)
                const double w = -std::log(rng.uniform01());     // Exp(1)
                const double alpha = p1_;
                if (alpha == 1.0) return p2_ * std::tan(u);
                const double s = std::sin(alpha * u) /
                                     std::pow(std::cos(u), 1.0 / alpha) *
                                 std::pow(std::cos(u - alpha * u) / w, (1.0 - alpha) / alpha);
                return p2_ * s;
            }
        }
        return 0.0;
    }

    // Closed-form densities exist for gaussian/laplacian/cauchy and for the
    // stable special cases alpha = 1 (Cauchy) and alpha = 2 (Gaussian).
    bool has_density() const {
        switch (kind_) {
            case NoiseKind::gaussian:
            case NoiseKind::laplacian:
            case NoiseKind::cauchy: return true;
            case NoiseKind::alpha_stable: return p1_ == 1.0 || p1_ == 2.0;
            case NoiseKind::none: return false;
        }
        return false;
    }

    double density(double x) const {
        switch (kind_) {
            case NoiseKind::gaussian: return gaussian_pdf(x, p1_);
            case NoiseKind::laplacian: return std::exp(-std::fabs(x) / p1_) / (2.0 * p1_);
            case NoiseKind::cauchy: return cauchy_pdf(x, p1_);
            case NoiseKind::alpha_stable:
                if (p1_ == 2.0) return gaussian_pdf(x, std::sqrt(2.0) * p2_);
                if (p1_ == 1.0) return cauchy_pdf(x, p2_);
                throw capability_error("alpha_stable density unavailable for alpha=" +
                                       fmt_double(p1_) + "; use Monte Carlo");
            case NoiseKind::none: break;
        }
        throw capability_error("no density for noise kind " + to_string(kind_));
    }

    double density_deriv(double x) const {
        switch (kind_) {
            case NoiseKind::gaussian: return -x / (p1_ * p1_) * density(x);
            case NoiseKind::laplacian:
                return (x < 0 ? 1.0 : -1.0) / p1_ * density(x);
            case NoiseKind::cauchy: {
                const double g2 = p1_ * p1_;
                return -2.0 * x / (g2 + x * x) * density(x);
            }
            case NoiseKind::alpha_stable:
                if (p1_ == 2.0) return reduced().density_deriv(x);
                if (p1_ == 1.0) return reduced().density_deriv(x);
                throw capability_error("alpha_stable density unavailable");
            case NoiseKind::none: break;
        }
        throw capability_error("no density for noise kind " + to_string(kind_));
    }

    // Fisher information of the location parameter, closed forms.
    double fisher_information() const {
        switch (kind_) {
            case NoiseKind::gaussian: return 1.0 / (p1_ * p1_);
            case NoiseKind::laplacian: return 1.0 / (p1_ * p1_);
            case NoiseKind::cauchy: return 1.0 / (2.0 * p1_ * p1_);
            case NoiseKind::alpha_stable:
                if (p1_ == 2.0 || p1_ == 1.0) return reduced().fisher_information();
                throw capability_error("no closed-form Fisher information for alpha=" +
                                       fmt_double(p1_));
            case NoiseKind::none: break;
        }
        throw capability_error("no Fisher information for noise kind " + to_string(kind_));
    }

    // Variance; infinite for heavy-tailed kinds.
    double variance() const {
        switch (kind_) {
            case NoiseKind::none: return 0.0;
            case NoiseKind::gaussian: return p1_ * p1_;
            case NoiseKind::laplacian: return 2.0 * p1_ * p1_;
            case NoiseKind::cauchy: return kInf;
            case NoiseKind::alpha_stable: return p1_ == 2.0 ? 2.0 * p2_ * p2_ : kInf;
        }
        return kInf;
    }

    NoiseKind kind() const { return kind_; }
    double p1() const { return p1_; }
    double p2() const { return p2_; }
    bool is_none() const { return kind_ == NoiseKind::none; }

    std::string describe() const {
        switch (kind_) {
            case NoiseKind::none: return "none";
            case NoiseKind::gaussian: return "gaussian(sigma=" + fmt_double(p1_) + ")";
            case NoiseKind::laplacian: return "laplacian(b=" + fmt_double(p1_) + ")";
            case NoiseKind::cauchy: return "cauchy(gamma=" + fmt_double(p1_) + ")";
            case NoiseKind::alpha_stable:
                return "alpha_stable(alpha=" + fmt_double(p1_) + ",c=" + fmt_double(p2_) + ")";
        }
        return "?";
    }

private:
    NoiseModel(NoiseKind k, double p1, double p2) : kind_(k), p1_(p1), p2_(p2) {}

    // The stable special cases reduce to named kinds.
    NoiseModel reduced() const {
        if (kind_ == NoiseKind::alpha_stable && p1_ == 2.0)
            return gaussian(std::sqrt(2.0) * p2_);
        if (kind_ == NoiseKind::alpha_stable && p1_ == 1.0) return cauchy(p2_);
        return *this;
    }

    static double gaussian_pdf(double x, double sigma) {
        const double z = x / sigma;
        return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * kPi));
    }

    static double cauchy_pdf(double x, double gamma) {
        return gamma / (kPi * (gamma * gamma + x * x));
    }

    static void require_positive(double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw param_error(std::string("noise parameter ") + name +
                              " must be positive and finite");
    }

    NoiseKind kind_;
    double p1_;  // sigma | b | gamma | alpha
    double p2_;  // stable scale c
};

}  // namespace rcon
