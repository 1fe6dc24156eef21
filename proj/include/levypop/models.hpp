#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <variant>

#include "levypop/errors.hpp"

namespace levypop {

/// Growth model dX = X(-p + q e^{-sX}) dt + sigma X dB + epsilon X dL.
struct GrowthParams {
    double p = 1.0;        ///< death rate
    double q = 2.0;        ///< birth rate at small population
    double s = 1.0;        ///< per-capita adult mortality
    double sigma = 0.0;    ///< Gaussian noise intensity
    double epsilon = 0.0;  ///< Levy noise intensity

    [[nodiscard]] double mu() const noexcept { return q / p; }

    /// Positive equilibrium ln(mu)/s (negative when mu < 1).
    [[nodiscard]] double x2() const noexcept { return std::log(mu()) / s; }

    void validate() const {
        detail::require(p > 0.0 && std::isfinite(p), "growth: p must be > 0");
        detail::require(q > 0.0 && std::isfinite(q), "growth: q must be > 0");
        detail::require(s > 0.0 && std::isfinite(s), "growth: s must be > 0");
        detail::require(sigma >= 0.0 && std::isfinite(sigma), "growth: sigma must be >= 0");
        detail::require(epsilon >= 0.0 && std::isfinite(epsilon), "growth: epsilon must be >= 0");
    }
};

/// Logistic model with sigmoidal state-dependent carrying capacity M(X).
struct LogisticParams {
    double s = 0.2;          ///< intrinsic growth rate
    double k1 = 0.8;         ///< lower capacity bound
    double k2 = 1.2;         ///< upper capacity bound
    double beta_sens = 0.0;  ///< capacity sensitivity
    double sigma = 0.0;
    double epsilon = 0.0;

    [[nodiscard]] double phi() const noexcept { return 0.5 * (k1 + k2); }
    [[nodiscard]] double beta_c() const noexcept { return 4.0 / (k2 - k1); }

    void validate() const {
        detail::require(s > 0.0 && std::isfinite(s), "logistic: s must be > 0");
        detail::require(k1 > 0.0 && k2 > k1 && std::isfinite(k2), "logistic: need 0 < k1 < k2");
        detail::require(beta_sens >= 0.0 && std::isfinite(beta_sens), "logistic: beta_sens must be >= 0");
        detail::require(sigma >= 0.0 && std::isfinite(sigma), "logistic: sigma must be >= 0");
        detail::require(epsilon >= 0.0 && std::isfinite(epsilon), "logistic: epsilon must be >= 0");
    }
};

using ModelParams = std::variant<GrowthParams, LogisticParams>;

/// Coefficient triple of dX = f1 dt + f2 dB + f3 dL^alpha.
struct ModelCoefficients {
    std::function<double(double)> f1;
    std::function<double(double)> f2;
    std::function<double(double)> f3;
    double sigma = 0.0;
    double epsilon = 0.0;
    double domain_hint = 1.0;  ///< suggested upper end of the state grid
    std::string name;
};

inline double growth_drift(double x, const GrowthParams& gp) {
    return x * (-gp.p + gp.q * std::exp(-gp.s * x));
}

inline double carrying_capacity(double x, const LogisticParams& lp) {
    return lp.k1 + (lp.k2 - lp.k1) / (1.0 + std::exp(-lp.beta_sens * (x - lp.phi())));
}

inline double logistic_drift(double x, const LogisticParams& lp) {
    return lp.s * x * (1.0 - x / carrying_capacity(x, lp));
}

inline ModelCoefficients make_coefficients(const GrowthParams& gp) {
    gp.validate();
    ModelCoefficients c;
    c.f1 = [gp](double x) { return growth_drift(x, gp); };
    c.f2 = [sigma = gp.sigma](double x) { return sigma * x; };
    c.f3 = [eps = gp.epsilon](double x) { return eps * x; };
    c.sigma = gp.sigma;
    c.epsilon = gp.epsilon;
    // 5 X2 when a positive equilibrium exists; otherwise fall back to 5/s.
    c.domain_hint = gp.mu() > 1.0 ? 5.0 * gp.x2() : 5.0 / gp.s;
    c.name = "growth";
    return c;
}

inline ModelCoefficients make_coefficients(const LogisticParams& lp) {
    lp.validate();
    ModelCoefficients c;
    c.f1 = [lp](double x) { return logistic_drift(x, lp); };
    c.f2 = [sigma = lp.sigma](double x) { return sigma * x; };
    c.f3 = [eps = lp.epsilon](double x) { return eps * x; };
    c.sigma = lp.sigma;
    c.epsilon = lp.epsilon;
    c.domain_hint = 2.0 * lp.k2;
    c.name = "logistic";
    return c;
}

inline ModelCoefficients make_coefficients(const ModelParams& mp) {
    return std::visit([](const auto& p) { return make_coefficients(p); }, mp);
}

}  // namespace levypop
