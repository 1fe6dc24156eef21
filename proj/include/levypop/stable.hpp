#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "levypop/errors.hpp"
#include "levypop/rng.hpp"

namespace levypop {

/// Parameters of the stable law S_alpha(scale, skew, shift).
struct StableParams {
    double alpha = 1.0;
    double skew = 0.0;
    double scale = 1.0;
    double shift = 0.0;

    void validate() const {
        detail::require(alpha > 0.0 && alpha < 2.0,
                        "stable: alpha must lie in (0, 2), got " + std::to_string(alpha));
        detail::require(skew >= -1.0 && skew <= 1.0, "stable: skew must lie in [-1, 1]");
        detail::require(scale >= 0.0 && std::isfinite(scale), "stable: scale must be finite and >= 0");
        detail::require(std::isfinite(shift), "stable: shift must be finite");
    }
};

namespace detail {

inline void require_alpha(double alpha) {
    require(alpha > 0.0 && alpha < 2.0, "stable: alpha must lie in (0, 2), got " + std::to_string(alpha));
}

/// Chambers-Mallows-Stuck draw from S_alpha(1, 0, 0).
template <class Rng>
double cms_symmetric(double alpha, Rng& rng) {
    constexpr double half_pi = std::numbers::pi / 2.0;
    const double v = rng.uniform(-half_pi, half_pi);
    if (alpha == 1.0) {
        return std::tan(v);
    }
    const double w = rng.exponential();
    const double av = alpha * v;
    return std::sin(av) / std::pow(std::cos(v), 1.0 / alpha) *
           std::pow(std::cos(v - av) / w, (1.0 - alpha) / alpha);
}

}  // namespace detail

/// One variate from S_alpha(scale, 0, shift). Only the symmetric law is supported.
template <class Rng>
double sample_standard_stable(const StableParams& params, Rng& rng) {
    params.validate();
    detail::require(params.skew == 0.0, "stable: only symmetric laws (skew = 0) are supported");
    if (params.scale == 0.0) return params.shift;
    return params.scale * detail::cms_symmetric(params.alpha, rng) + params.shift;
}

/// Increment of a standard symmetric alpha-stable motion over a span dt,
/// i.e. a draw from S_alpha(dt^(1/alpha), 0, 0).
template <class Rng>
double stable_increment(double alpha, double dt, Rng& rng) {
    detail::require_alpha(alpha);
    detail::require(dt > 0.0 && std::isfinite(dt), "stable_increment: dt must be > 0");
    return std::pow(dt, 1.0 / alpha) * detail::cms_symmetric(alpha, rng);
}

/// Same law as stable_increment, with the scale dt^(1/alpha) precomputed by the caller.
template <class Rng>
double scaled_stable(double alpha, double scale, Rng& rng) {
    return scale * detail::cms_symmetric(alpha, rng);
}

/// Normalization constant of the symmetric alpha-stable Levy measure:
/// c(alpha) = alpha Gamma((1+alpha)/2) / (2^(1-alpha) sqrt(pi) Gamma(1-alpha/2)).
inline double c_alpha(double alpha) {
    detail::require_alpha(alpha);
    return alpha * std::tgamma((1.0 + alpha) / 2.0) /
           (std::pow(2.0, 1.0 - alpha) * std::sqrt(std::numbers::pi) * std::tgamma(1.0 - alpha / 2.0));
}

/// Density of the Levy measure, c(alpha) |u|^(-1-alpha).
inline double levy_measure_density(double alpha, double u) {
    detail::require_alpha(alpha);
    if (u == 0.0) throw SingularityError("levy_measure_density: the measure density diverges at u = 0");
    return c_alpha(alpha) / std::pow(std::abs(u), 1.0 + alpha);
}

/// Closed-form mass of the Levy measure on {lo <= |u| <= hi}, 0 < lo < hi <= inf.
inline double levy_measure_mass(double alpha, double lo, double hi) {
    detail::require_alpha(alpha);
    detail::require(lo > 0.0 && hi > lo, "levy_measure_mass: need 0 < lo < hi");
    const double upper = std::isinf(hi) ? 0.0 : std::pow(hi, -alpha);
    return 2.0 * c_alpha(alpha) / alpha * (std::pow(lo, -alpha) - upper);
}

/// Characteristic exponent psi(u) with E[exp(i u L_1)] = exp(psi(u)) for the
/// symmetric law: psi(u) = -(scale |u|)^alpha + i u shift.
inline std::complex<double> characteristic_exponent(const StableParams& params, double u) {
    params.validate();
    detail::require(params.skew == 0.0, "characteristic_exponent: only symmetric laws are supported");
    const double re = -std::pow(params.scale, params.alpha) * std::pow(std::abs(u), params.alpha);
    return {re, u * params.shift};
}

}  // namespace levypop
