#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "levypop/errors.hpp"
#include "levypop/grid.hpp"
#include "levypop/models.hpp"
#include "levypop/rng.hpp"
#include "levypop/stable.hpp"

namespace levypop {

enum class Scheme { euler_maruyama };

struct PathConfig {
    double t_end = 50.0;
    double dt = 1e-3;
    double x0 = 0.5;
    double alpha = 1.0;           ///< stability index of the jump noise
    double x0_std = 0.0;          ///< >0 draws x0 from N(x0, x0_std^2), clipped to x > 0
    std::size_t record_stride = 1;
    Scheme scheme = Scheme::euler_maruyama;

    /// |X| beyond this raises NumericalError instead of propagating inf.
    static constexpr double kOverflow = 1e12;

    void validate() const {
        detail::require(t_end > 0.0 && std::isfinite(t_end), "path: t_end must be > 0");
        detail::require(dt > 0.0 && dt < t_end, "path: need 0 < dt < t_end");
        detail::require(x0 > 0.0 && std::isfinite(x0), "path: x0 must be > 0");
        detail::require(alpha > 0.0 && alpha < 2.0, "path: alpha must lie in (0, 2)");
        detail::require(x0_std >= 0.0, "path: x0_std must be >= 0");
        detail::require(record_stride >= 1, "path: record_stride must be >= 1");
    }

    [[nodiscard]] std::size_t n_steps() const {
        return static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    }
};

struct SamplePath {
    std::vector<double> times;
    std::vector<double> states;
    std::optional<double> extinct_at;
};

struct Ensemble {
    PathConfig config;
    std::vector<double> terminal_states;
    std::vector<double> extinct_at;  ///< NaN for paths that survived
    std::size_t extinction_count = 0;
};

namespace detail {

/// Stepper shared by the path, ensemble and conditioned-ensemble drivers.
class EulerMaruyama {
public:
    EulerMaruyama(const ModelCoefficients& coeffs, const PathConfig& cfg)
        : c_(coeffs), cfg_(cfg), n_(cfg.n_steps()) {
        jump_scale_ = std::pow(cfg.dt, 1.0 / cfg.alpha);
        sqrt_dt_ = std::sqrt(cfg.dt);
    }

    [[nodiscard]] std::size_t n_steps() const noexcept { return n_; }

    [[nodiscard]] double step_size(std::size_t k) const noexcept {
        return k + 1 < n_ ? cfg_.dt : cfg_.t_end - cfg_.dt * static_cast<double>(n_ - 1);
    }

    double initial_state(RngStream& rng) const {
        if (cfg_.x0_std == 0.0) return cfg_.x0;
        double x = 0.0;
        do x = cfg_.x0 + cfg_.x0_std * rng.normal();
        while (x <= 0.0);
        return x;
    }

    /// X_{k+1} from X_k. Draws a normal only when sigma > 0 and a stable
    /// increment only when epsilon > 0.
    double advance(double x, std::size_t k, RngStream& rng, std::size_t path = NumericalError::npos) const {
        const double h = step_size(k);
        const bool full = h == cfg_.dt;
        double next = x + c_.f1(x) * h;
        if (c_.sigma != 0.0) next += c_.f2(x) * (full ? sqrt_dt_ : std::sqrt(h)) * rng.normal();
        if (c_.epsilon != 0.0)
            next += c_.f3(x) * (full ? scaled_stable(cfg_.alpha, jump_scale_, rng) : stable_increment(cfg_.alpha, h, rng));
        if (!std::isfinite(next) || std::abs(next) > PathConfig::kOverflow)
            throw NumericalError("simulator: state overflow", k, path);
        return next;
    }

private:
    const ModelCoefficients& c_;
    PathConfig cfg_;
    std::size_t n_;
    double jump_scale_ = 1.0;
    double sqrt_dt_ = 1.0;
};

}  // namespace detail

/// Euler-Maruyama sample path with absorption at X = 0.
inline SamplePath simulate_path(const ModelCoefficients& coeffs, const PathConfig& cfg, RngStream rng) {
    cfg.validate();
    detail::EulerMaruyama em(coeffs, cfg);
    const std::size_t n = em.n_steps();

    SamplePath path;
    path.times.reserve(n / cfg.record_stride + 2);
    path.states.reserve(n / cfg.record_stride + 2);
    double x = em.initial_state(rng);
    double t = 0.0;
    path.times.push_back(t);
    path.states.push_back(x);
    for (std::size_t k = 0; k < n; ++k) {
        if (x > 0.0) {
            x = em.advance(x, k, rng);
            if (x <= 0.0) {
                x = 0.0;
                path.extinct_at = t + em.step_size(k);
            }
        }
        t = k + 1 < n ? cfg.dt * static_cast<double>(k + 1) : cfg.t_end;
        if ((k + 1) % cfg.record_stride == 0 || k + 1 == n) {
            path.times.push_back(t);
            path.states.push_back(x);
        }
    }
    return path;
}

/// n_paths independent paths; path i uses base_rng.derive(i), so the result
/// does not depend on evaluation order.
inline Ensemble simulate_ensemble(const ModelCoefficients& coeffs, const PathConfig& cfg, std::size_t n_paths,
                                  const RngStream& base_rng) {
    cfg.validate();
    detail::require(n_paths >= 1, "ensemble: n_paths must be >= 1");
    detail::EulerMaruyama em(coeffs, cfg);
    const std::size_t n = em.n_steps();

    Ensemble ens;
    ens.config = cfg;
    ens.terminal_states.resize(n_paths);
    ens.extinct_at.assign(n_paths, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < n_paths; ++i) {
        RngStream rng = base_rng.derive(i);
        double x = em.initial_state(rng);
        for (std::size_t k = 0; k < n && x > 0.0; ++k) {
            x = em.advance(x, k, rng, i);
            if (x <= 0.0) {
                x = 0.0;
                ens.extinct_at[i] = k + 1 < n ? cfg.dt * static_cast<double>(k + 1) : cfg.t_end;
            }
        }
        ens.terminal_states[i] = x;
        if (x == 0.0) ++ens.extinction_count;
    }
    return ens;
}

/// Particle approximation of the law conditioned on staying inside
/// (lower, upper]: particles leaving the domain are killed and replaced by a
/// copy of a uniformly chosen survivor (Fleming-Viot resampling). This is
/// the Monte Carlo counterpart of a Fokker-Planck solve with zero exterior
/// density followed by renormalization.
///
/// extinction_count holds the total number of kill events.
inline Ensemble simulate_conditioned_ensemble(const ModelCoefficients& coeffs, const PathConfig& cfg,
                                              std::size_t n_particles, const RngStream& base_rng, double lower,
                                              double upper) {
    cfg.validate();
    detail::require(n_particles >= 1, "conditioned ensemble: need at least one particle");
    detail::require(upper > lower && cfg.x0 > lower && cfg.x0 <= upper,
                    "conditioned ensemble: x0 must lie inside (lower, upper]");
    detail::EulerMaruyama em(coeffs, cfg);
    const std::size_t n = em.n_steps();

    std::vector<RngStream> streams;
    streams.reserve(n_particles);
    std::vector<double> x(n_particles);
    for (std::size_t i = 0; i < n_particles; ++i) {
        streams.push_back(base_rng.derive(i));
        double x0 = 0.0;
        do x0 = em.initial_state(streams[i]);
        while (!(x0 > lower && x0 <= upper));
        x[i] = x0;
    }
    RngStream resampler = base_rng.derive(std::numeric_limits<std::uint64_t>::max());

    Ensemble ens;
    ens.config = cfg;
    std::vector<std::size_t> dead;
    std::vector<std::size_t> alive;
    for (std::size_t k = 0; k < n; ++k) {
        dead.clear();
        for (std::size_t i = 0; i < n_particles; ++i) {
            const double next = em.advance(x[i], k, streams[i], i);
            if (next > lower && next <= upper) {
                x[i] = next;
            } else {
                dead.push_back(i);
            }
        }
        if (dead.empty()) continue;
        if (dead.size() == n_particles) throw EmptyDensityError("conditioned ensemble: every particle left the domain");
        ens.extinction_count += dead.size();
        alive.clear();
        std::size_t d = 0;
        for (std::size_t i = 0; i < n_particles; ++i) {
            if (d < dead.size() && dead[d] == i) {
                ++d;
            } else {
                alive.push_back(i);
            }
        }
        for (std::size_t i : dead) x[i] = x[alive[resampler.below(alive.size())]];
    }
    ens.terminal_states = std::move(x);
    ens.extinct_at.assign(n_particles, std::numeric_limits<double>::quiet_NaN());
    return ens;
}

/// Normalized histogram of samples over the grid cells; samples outside the
/// grid are dropped before normalization.
inline DensityField histogram_density(std::span<const double> samples, const Grid& grid) {
    grid.validate();
    DensityField d{grid, std::vector<double>(grid.n_cells, 0.0), 0.0};
    std::size_t inside = 0;
    for (double v : samples) {
        const std::size_t c = grid.cell_of(v);
        if (c == grid.n_cells) continue;
        d.values[c] += 1.0;
        ++inside;
    }
    if (inside == 0) throw EmptyDensityError("histogram: no samples inside the grid");
    const double w = 1.0 / (static_cast<double>(inside) * grid.dx());
    for (double& v : d.values) v *= w;
    return d;
}

enum class DensityVariant { surviving_only, all_paths };

inline DensityField empirical_density(const Ensemble& ens, const Grid& grid,
                                      DensityVariant variant = DensityVariant::surviving_only) {
    detail::require(!ens.terminal_states.empty(), "empirical_density: empty ensemble");
    DensityField d;
    if (variant == DensityVariant::all_paths) {
        d = histogram_density(ens.terminal_states, grid);
    } else {
        std::vector<double> alive;
        alive.reserve(ens.terminal_states.size());
        for (double v : ens.terminal_states)
            if (v > 0.0) alive.push_back(v);
        if (alive.empty()) throw EmptyDensityError("empirical_density: every path is extinct");
        d = histogram_density(alive, grid);
    }
    d.time = ens.config.t_end;
    return d;
}

}  // namespace levypop
