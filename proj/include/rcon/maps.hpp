#pragma once

#include <cmath>
#include <string>

#include "rcon/common.hpp"

namespace rcon {

enum class TransmitKind { identity, scaled_atan, tanh_scaled, linear_clip };
enum class ReceiveKind { identity, tanh_scaled, rational, scaled_atan };

inline std::string to_string(TransmitKind k) {
    switch (k) {
        case TransmitKind::identity: return "identity";
        case TransmitKind::scaled_atan: return "scaled_atan";
        case TransmitKind::tanh_scaled: return "tanh_scaled";
        case TransmitKind::linear_clip: return "linear_clip";
    }
    return "?";
}

inline std::string to_string(ReceiveKind k) {
    switch (k) {
        case ReceiveKind::identity: return "identity";
        case ReceiveKind::tanh_scaled: return "tanh_scaled";
        case ReceiveKind::rational: return "rational";
        case ReceiveKind::scaled_atan: return "scaled_atan";
    }
    return "?";
}

// Power-constraining transmit map h. Bounded kinds satisfy sup_x h(x)^2 = rho
// (the per-sensor transmit power). Derivatives are exact closed forms.
class TransmitMap {
public:
    static TransmitMap identity() { return TransmitMap(TransmitKind::identity, 0.0, 0.0); }

    // sqrt(rho) * (2/pi) * atan((pi/2) * s * x)
    static TransmitMap scaled_atan(double rho, double s) {
        require_positive(rho, "rho");
        require_positive(s, "s");
        return TransmitMap(TransmitKind::scaled_atan, rho, s);
    }

    // sqrt(rho) * tanh(s * x)
    static TransmitMap tanh_scaled(double rho, double s) {
        require_positive(rho, "rho");
        require_positive(s, "s");
        return TransmitMap(TransmitKind::tanh_scaled, rho, s);
    }

    // clamp(x, -sqrt(rho), sqrt(rho)). Not strictly increasing beyond the
    // knee; h'(x) = 0 there, and analysis that needs h'(theta0) > 0 rejects
    // such operating points.
    static TransmitMap linear_clip(double rho) {
        require_positive(rho, "rho");
        return TransmitMap(TransmitKind::linear_clip, rho, 0.0);
    }

    double operator()(double x) const {
        switch (kind_) {
            case TransmitKind::identity: return x;
            case TransmitKind::scaled_atan:
                return sqrt_rho_ * (2.0 / kPi) * std::atan((kPi / 2.0) * s_ * x);
            case TransmitKind::tanh_scaled: return sqrt_rho_ * std::tanh(s_ * x);
            case TransmitKind::linear_clip:
                return x < -sqrt_rho_ ? -sqrt_rho_ : (x > sqrt_rho_ ? sqrt_rho_ : x);
        }
        return 0.0;
    }

    double deriv(double x) const {
        switch (kind_) {
            case TransmitKind::identity: return 1.0;
            case TransmitKind::scaled_atan: {
                const double u = (kPi / 2.0) * s_ * x;
                return sqrt_rho_ * s_ / (1.0 + u * u);
            }
            case TransmitKind::tanh_scaled: {
                const double t = std::tanh(s_ * x);
                return sqrt_rho_ * s_ * (1.0 - t * t);
            }
            case TransmitKind::linear_clip: return std::fabs(x) < sqrt_rho_ ? 1.0 : 0.0;
        }
        return 0.0;
    }

    // sup_x h(x)^2; infinite for the identity map.
    double power() const { return kind_ == TransmitKind::identity ? kInf : rho_; }

    // c such that 0 < h'(x) <= c everywhere h' is positive.
    double deriv_bound() const {
        switch (kind_) {
            case TransmitKind::identity: return 1.0;
            case TransmitKind::scaled_atan:
            case TransmitKind::tanh_scaled: return sqrt_rho_ * s_;
            case TransmitKind::linear_clip: return 1.0;
        }
        return 0.0;
    }

    TransmitKind kind() const { return kind_; }
    double rho() const { return rho_; }
    double slope() const { return s_; }

    std::string formula() const {
        switch (kind_) {
            case TransmitKind::identity: return "x";
            case TransmitKind::scaled_atan:
                return "sqrt(" + fmt_double(rho_) + ")*(2/pi)*atan((pi/2)*" + fmt_double(s_) +
                       "*x)";
            case TransmitKind::tanh_scaled:
                return "sqrt(" + fmt_double(rho_) + ")*tanh(" + fmt_double(s_) + "*x)";
            case TransmitKind::linear_clip:
                return "clamp(x, +-sqrt(" + fmt_double(rho_) + "))";
        }
        return "?";
    }

private:
    TransmitMap(TransmitKind k, double rho, double s)
        : kind_(k), rho_(rho), s_(s), sqrt_rho_(rho > 0 ? std::sqrt(rho) : 0.0) {}

    static void require_positive(double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw param_error(std::string("transmit map parameter ") + name +
                              " must be positive and finite");
    }

    TransmitKind kind_;
    double rho_;
    double s_;
    double sqrt_rho_;
};

// Soft-limiting receive map f: odd, strictly increasing, bounded for every
// non-identity kind. The outer amplitude makes f -> kappa*f a closed
// operation (it is how the scaled-function experiments are expressed).
class ReceiveMap {
public:
    static ReceiveMap identity() { return ReceiveMap(ReceiveKind::identity, 0.0, 1.0); }

    // tanh(s*x)
    static ReceiveMap tanh_scaled(double s) {
        require_positive(s, "s");
        return ReceiveMap(ReceiveKind::tanh_scaled, s, 1.0);
    }

    // s*x / (1 + |s*x|)
    static ReceiveMap rational(double s) {
        require_positive(s, "s");
        return ReceiveMap(ReceiveKind::rational, s, 1.0);
    }

    // amplitude * atan(s*x)
    static ReceiveMap scaled_atan(double amplitude, double s) {
        require_positive(amplitude, "amplitude");
        require_positive(s, "s");
        return ReceiveMap(ReceiveKind::scaled_atan, s, amplitude);
    }

    double operator()(double x) const {
        switch (kind_) {
            case ReceiveKind::identity: return amp_ * x;
            case ReceiveKind::tanh_scaled: return amp_ * std::tanh(s_ * x);
            case ReceiveKind::rational: {
                const double u = s_ * x;
                return amp_ * u / (1.0 + std::fabs(u));
            }
            case ReceiveKind::scaled_atan: return amp_ * std::atan(s_ * x);
        }
        return 0.0;
    }

    double deriv(double x) const {
        switch (kind_) {
            case ReceiveKind::identity: return amp_;
            case ReceiveKind::tanh_scaled: {
                const double t = std::tanh(s_ * x);
                return amp_ * s_ * (1.0 - t * t);
            }
            case ReceiveKind::rational: {
                const double d = 1.0 + std::fabs(s_ * x);
                return amp_ * s_ / (d * d);
            }
            case ReceiveKind::scaled_atan: {
                const double u = s_ * x;
                return amp_ * s_ / (1.0 + u * u);
            }
        }
        return 0.0;
    }

    // F_max = sup_x |f(x)|; infinite for the identity baseline.
    double bound() const {
        switch (kind_) {
            case ReceiveKind::identity: return kInf;
            case ReceiveKind::tanh_scaled:
            case ReceiveKind::rational: return amp_;
            case ReceiveKind::scaled_atan: return amp_ * kPi / 2.0;
        }
        return kInf;
    }

    bool bounded() const { return kind_ != ReceiveKind::identity; }

    ReceiveMap scaled(double kappa) const {
        require_positive(kappa, "kappa");
        ReceiveMap m = *this;
        m.amp_ *= kappa;
        return m;
    }

    ReceiveKind kind() const { return kind_; }
    double slope() const { return s_; }
    double amplitude() const { return amp_; }

    std::string formula() const {
        std::string pre = amp_ == 1.0 ? "" : fmt_double(amp_) + "*";
        switch (kind_) {
            case ReceiveKind::identity: return pre.empty() ? "x" : pre + "x";
            case ReceiveKind::tanh_scaled: return pre + "tanh(" + fmt_double(s_) + "*x)";
            case ReceiveKind::rational:
                return pre + "(" + fmt_double(s_) + "*x/(1+|" + fmt_double(s_) + "*x|))";
            case ReceiveKind::scaled_atan: return pre + "atan(" + fmt_double(s_) + "*x)";
        }
        return "?";
    }

private:
    ReceiveMap(ReceiveKind k, double s, double amp) : kind_(k), s_(s), amp_(amp) {}

    static void require_positive(double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw param_error(std::string("receive map parameter ") + name +
                              " must be positive and finite");
    }

    ReceiveKind kind_;
    double s_;
    double amp_;
};

}  // namespace rcon
