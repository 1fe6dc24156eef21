#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "levypop/errors.hpp"
#include "levypop/grid.hpp"
#include "levypop/models.hpp"
#include "levypop/stable.hpp"

namespace levypop {

/// How the jump coefficient enters the non-local term.
enum class JumpForm {
    /// int [ |f3(x+z)|^a P(x+z) - |f3(x)|^a P(x) ] nu(dz); adjoint of the generator.
    adjoint,
    /// Same integral multiplied once more by |eps x|^a, as the equation is sometimes printed.
    outer_factor,
};

struct SolverConfig {
    double dt = 0.0;                ///< 0 selects 0.9 x the stability bound
    double t_end = 50.0;
    double jump_truncation = 0.0;   ///< L; 0 selects the grid span
    double stationarity_tol = 1e-6;
    double init_center = 0.5;
    double init_sharpness = 40.0;   ///< P(x,0) ~ exp(-sharpness (x - center)^2)
    JumpForm jump_form = JumpForm::adjoint;

    void validate() const {
        detail::require(dt >= 0.0 && std::isfinite(dt), "solver: dt must be >= 0");
        detail::require(t_end > 0.0 && std::isfinite(t_end), "solver: t_end must be > 0");
        detail::require(jump_truncation >= 0.0, "solver: jump_truncation must be >= 0");
        detail::require(stationarity_tol >= 0.0, "solver: stationarity_tol must be >= 0");
        detail::require(init_sharpness > 0.0, "solver: init_sharpness must be > 0");
    }
};

namespace detail {

inline constexpr std::array<double, 8> kGaussNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
inline constexpr std::array<double, 8> kGaussWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066515924329, 0.3626837833783620,
    0.3626837833783620, 0.3137066515924329, 0.2223810344533745, 0.1012285362903763};

template <class F>
double gauss_legendre(F&& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double s = 0.0;
    for (std::size_t i = 0; i < kGaussNodes.size(); ++i) s += kGaussWeights[i] * f(mid + half * kGaussNodes[i]);
    return s * half;
}

}  // namespace detail

/// Closed-form stationary density of the Gaussian-only equation,
/// P(x) = C exp( int 2 f1 / f2^2 ) / f2^2(x), normalized on the grid.
inline DensityField stationary_gaussian_closed_form(const ModelCoefficients& coeffs, const Grid& grid) {
    grid.validate();
    detail::require(coeffs.epsilon == 0.0, "closed form: requires epsilon = 0 (no jump noise)");
    const std::vector<double> x = grid.nodes();
    for (double xi : x) {
        const double f2 = coeffs.f2(xi);
        detail::require(std::isfinite(f2) && f2 != 0.0, "closed form: f2 must be nonzero on the grid (sigma > 0)");
    }
    auto integrand = [&](double r) {
        const double f2 = coeffs.f2(r);
        return 2.0 * coeffs.f1(r) / (f2 * f2);
    };
    std::vector<double> logp(x.size());
    double exponent = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i > 0) exponent += detail::gauss_legendre(integrand, x[i - 1], x[i]);
        const double f2 = coeffs.f2(x[i]);
        logp[i] = exponent - std::log(f2 * f2);
    }
    const double top = *std::max_element(logp.begin(), logp.end());
    DensityField d{grid, std::vector<double>(x.size()), std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < x.size(); ++i) d.values[i] = std::exp(logp[i] - top);
    d.normalize();
    return d;
}

/// Discrete right-hand side of the (possibly non-local) Fokker-Planck equation
/// on a cell-centred grid with zero exterior density.
///
/// Local terms use a conservative centred flux form; boundary faces only let
/// probability leave. The jump integral is symmetrized in z and integrated as
/// int_0^L E(z) z^{1-a} dz with E(z) = [g(x+z) + g(x-z) - 2g(x)] / z^2, E
/// interpolated linearly between the nodes z_k = k dx. On (0, dx) E is held
/// at E(dx), which is the second-order Taylor correction for the removed
/// singular cell. Mass beyond |z| > L lands outside the grid and is removed
/// at the exact rate 2 c(a) / (a L^a).
class FpeOperator {
public:
    FpeOperator(const ModelCoefficients& coeffs, double alpha, const Grid& grid, const SolverConfig& cfg)
        : grid_(grid), alpha_(alpha), form_(cfg.jump_form) {
        grid.validate();
        cfg.validate();
        detail::require_alpha(alpha);
        const std::size_t n = grid.n_cells;
        const double h = grid.dx();
        x_ = grid.nodes();
        drift_.resize(n);
        diff_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            drift_[i] = coeffs.f1(x_[i]);
            const double f2 = coeffs.f2(x_[i]);
            diff_[i] = f2 * f2;
        }
        drift_lo_ = coeffs.f1(grid.x_min);
        drift_hi_ = coeffs.f1(grid.x_max);

        if (coeffs.epsilon != 0.0) {
            has_jumps_ = true;
            const double span = grid.x_max - grid.x_min;
            const double L = cfg.jump_truncation > 0.0 ? cfg.jump_truncation : span;
            if (L < span * (1.0 - 1e-12)) throw ConfigError("solver: jump_truncation must be >= x_max - x_min");
            const auto k_max = static_cast<std::size_t>(std::llround(L / h));
            const double l_eff = static_cast<double>(k_max) * h;
            const double c = c_alpha(alpha);

            weights_.assign(k_max + 1, 0.0);
            // Scaled by h: z = u h, so every interval is [j, j+1] in u.
            const double a = alpha;
            auto pw = [a](double u) { return std::pow(u, 1.0 - a); };
            for (std::size_t k = 1; k <= k_max; ++k) {
                const double uk = static_cast<double>(k);
                double w = 0.0;
                if (k >= 2) w += detail::gauss_legendre([&](double u) { return (u - (uk - 1.0)) * pw(u); }, uk - 1.0, uk);
                if (k < k_max) w += detail::gauss_legendre([&](double u) { return ((uk + 1.0) - u) * pw(u); }, uk, uk + 1.0);
                if (k == 1) w += 1.0 / (2.0 - a);  // int_0^1 u^{1-a} du
                weights_[k] = c * std::pow(h, -a) * w / (uk * uk);
            }
            tail_rate_ = 2.0 * c / (a * std::pow(l_eff, a));
            double sum = 0.0;
            for (std::size_t k = 1; k <= k_max; ++k) sum += weights_[k];
            diag_ = 2.0 * sum + tail_rate_;

            jump_coef_.resize(n);
            for (std::size_t i = 0; i < n; ++i) jump_coef_[i] = std::pow(std::abs(coeffs.f3(x_[i])), a);
            outer_.assign(n, 1.0);
            if (form_ == JumpForm::outer_factor)
                for (std::size_t i = 0; i < n; ++i) outer_[i] = jump_coef_[i];
        }
    }

    [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
    [[nodiscard]] bool has_jumps() const noexcept { return has_jumps_; }
    [[nodiscard]] const std::vector<double>& jump_weights() const noexcept { return weights_; }
    [[nodiscard]] double tail_rate() const noexcept { return tail_rate_; }

    /// dP/dt at every node.
    void apply(const std::vector<double>& p, std::vector<double>& out) const {
        const std::size_t n = p.size();
        const double h = grid_.dx();
        out.assign(n, 0.0);

        // Local part: flux F_{i+1/2}, dP_i/dt = -(F_{i+1/2} - F_{i-1/2}) / h.
        flux_.resize(n + 1);
        {
            const double adv = drift_lo_ < 0.0 ? drift_lo_ * p[0] : 0.0;
            flux_[0] = adv - 0.5 * diff_[0] * p[0] / h;
        }
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double adv = 0.5 * (drift_[i] * p[i] + drift_[i + 1] * p[i + 1]);
            const double dif = -0.5 * (diff_[i + 1] * p[i + 1] - diff_[i] * p[i]) / h;
            flux_[i + 1] = adv + dif;
        }
        {
            const double adv = drift_hi_ > 0.0 ? drift_hi_ * p[n - 1] : 0.0;
            flux_[n] = adv + 0.5 * diff_[n - 1] * p[n - 1] / h;
        }
        for (std::size_t i = 0; i < n; ++i) out[i] = -(flux_[i + 1] - flux_[i]) / h;

        if (!has_jumps_) return;
        g_.resize(n);
        jump_.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) g_[i] = jump_coef_[i] * p[i];
        const std::size_t k_max = weights_.size() - 1;
        for (std::size_t k = 1; k <= std::min(k_max, n - 1); ++k) {
            const double w = weights_[k];
            double* jp = jump_.data();
            const double* gp = g_.data();
            for (std::size_t i = 0; i + k < n; ++i) {
                jp[i] += w * gp[i + k];
                jp[i + k] += w * gp[i];
            }
        }
        for (std::size_t i = 0; i < n; ++i) out[i] += outer_[i] * (jump_[i] - diag_ * g_[i]);
    }

    /// Largest explicit-Euler step that keeps every frozen-coefficient Fourier
    /// mode inside the unit disc, further capped by 0.5 dx^2 / max f2^2 and
    /// 0.5 / max jump diagonal. Returns +inf when the operator is identically zero.
    [[nodiscard]] double stability_bound() const {
        const std::size_t n = x_.size();
        const double h = grid_.dx();
        double bound = std::numeric_limits<double>::infinity();

        const double max_diff = *std::max_element(diff_.begin(), diff_.end());
        if (max_diff > 0.0) bound = std::min(bound, 0.5 * h * h / max_diff);

        constexpr std::size_t kModes = 128;
        std::vector<double> symbol(kModes + 1, 0.0);
        std::vector<double> theta(kModes + 1);
        for (std::size_t m = 1; m <= kModes; ++m) theta[m] = std::numbers::pi * static_cast<double>(m) / kModes;
        double max_jump_diag = 0.0;
        if (has_jumps_) {
            for (std::size_t m = 1; m <= kModes; ++m) {
                double s = tail_rate_;
                for (std::size_t k = 1; k < weights_.size(); ++k)
                    s += 2.0 * weights_[k] * (1.0 - std::cos(static_cast<double>(k) * theta[m]));
                symbol[m] = s;
            }
            for (std::size_t i = 0; i < n; ++i)
                max_jump_diag = std::max(max_jump_diag, outer_[i] * jump_coef_[i] * diag_);
            if (max_jump_diag > 0.0) bound = std::min(bound, 0.5 / max_jump_diag);
        }

        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t m = 1; m <= kModes; ++m) {
                const double a = (has_jumps_ ? outer_[i] * jump_coef_[i] * symbol[m] : 0.0) +
                                 diff_[i] * (1.0 - std::cos(theta[m])) / (h * h);
                const double b = drift_[i] * std::sin(theta[m]) / h;
                if (a == 0.0 && b == 0.0) continue;
                bound = std::min(bound, 2.0 * a / (a * a + b * b));
            }
        }
        return bound;
    }

private:
    Grid grid_;
    double alpha_;
    JumpForm form_;
    bool has_jumps_ = false;
    std::vector<double> x_, drift_, diff_, jump_coef_, outer_, weights_;
    double drift_lo_ = 0.0, drift_hi_ = 0.0;
    double tail_rate_ = 0.0, diag_ = 0.0;
    mutable std::vector<double> flux_, g_, jump_;
};

/// One evaluation of dP/dt for a density field.
inline DensityField apply_nonlocal_generator_adjoint(const DensityField& p, const ModelCoefficients& coeffs,
                                                     double alpha, const SolverConfig& cfg) {
    FpeOperator op(coeffs, alpha, p.grid, cfg);
    DensityField rate{p.grid, {}, p.time};
    op.apply(p.values, rate.values);
    return rate;
}

struct FpeResult {
    DensityField density;           ///< renormalized to unit mass
    double retained_mass = 1.0;     ///< raw mass left at the final time
    double max_clipped_fraction = 0.0;  ///< largest per-step clipped mass relative to the current mass
    double residual = 0.0;          ///< last ||P(t+dt) - P(t)||_1 / dt on normalized fields
    double dt = 0.0;
    std::size_t steps = 0;
    bool converged = false;         ///< stopped on the stationarity tolerance before t_end
};

/// Snapshot hook: called with the normalized field and the raw retained mass.
using FpeObserver = std::function<void(const DensityField&, double)>;

inline DensityField initial_density(const Grid& grid, const SolverConfig& cfg) {
    DensityField d{grid, std::vector<double>(grid.n_cells), 0.0};
    const double amp = std::sqrt(cfg.init_sharpness / std::numbers::pi);
    for (std::size_t i = 0; i < grid.n_cells; ++i) {
        const double dx = grid.node(i) - cfg.init_center;
        d.values[i] = amp * std::exp(-cfg.init_sharpness * dx * dx);
    }
    d.normalize();
    return d;
}

/// Explicit Euler time stepping from the Gaussian bump at init_center until
/// t_end or until the normalized residual drops below stationarity_tol.
inline FpeResult evolve_fpe(const ModelCoefficients& coeffs, double alpha, const Grid& grid, const SolverConfig& cfg,
                            const FpeObserver& observer = {}, double snapshot_every = 0.0) {
    cfg.validate();
    FpeOperator op(coeffs, alpha, grid, cfg);
    const double bound = op.stability_bound();
    double dt = cfg.dt;
    if (dt == 0.0) {
        dt = std::isfinite(bound) ? 0.9 * bound : cfg.t_end;
    } else if (dt > bound) {
        throw ConfigError("solver: dt = " + std::to_string(dt) + " exceeds the explicit stability bound " +
                          std::to_string(bound));
    }
    if (!(dt > 0.0)) throw ConfigError("solver: explicit scheme is unstable for this operator (no dissipation)");
    dt = std::min(dt, cfg.t_end);

    FpeResult res;
    res.dt = dt;
    DensityField field = initial_density(grid, cfg);
    std::vector<double>& p = field.values;
    std::vector<double> rate;
    std::vector<double> next(p.size());
    const double h = grid.dx();
    const auto n_steps = static_cast<std::size_t>(std::ceil(cfg.t_end / dt - 1e-9));
    double next_snapshot = snapshot_every;
    if (observer) observer(field, 1.0);

    for (std::size_t k = 0; k < n_steps; ++k) {
        const double step = std::min(dt, cfg.t_end - field.time);
        op.apply(p, rate);
        double clipped = 0.0;
        double mass = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            double v = p[i] + step * rate[i];
            if (!std::isfinite(v)) throw NumericalError("solver: non-finite density", k);
            if (v < 0.0) {
                clipped -= v;
                v = 0.0;
            }
            next[i] = v;
            mass += v;
        }
        mass *= h;
        if (!(mass > 0.0)) throw NumericalError("solver: density lost all mass", k);
        res.max_clipped_fraction = std::max(res.max_clipped_fraction, clipped * h / (mass + clipped * h));
        res.retained_mass *= mass;  // p carries unit mass at the start of every step

        double diff = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            next[i] /= mass;
            diff += std::abs(next[i] - p[i]);
        }
        p.swap(next);
        field.time = k + 1 == n_steps ? cfg.t_end : field.time + step;
        res.residual = diff * h / step;
        res.steps = k + 1;

        if (observer && snapshot_every > 0.0 && field.time + 1e-12 >= next_snapshot) {
            observer(field, res.retained_mass);
            next_snapshot += snapshot_every;
        }
        if (res.residual < cfg.stationarity_tol) {
            res.converged = true;
            break;
        }
    }
    res.density = std::move(field);
    return res;
}

}  // namespace levypop
