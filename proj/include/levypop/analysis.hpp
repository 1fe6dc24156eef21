#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "levypop/errors.hpp"
#include "levypop/models.hpp"

namespace levypop {

enum class Stability { stable, unstable, degenerate };

inline std::string_view to_string(Stability s) {
    switch (s) {
        case Stability::stable: return "stable";
        case Stability::unstable: return "unstable";
        case Stability::degenerate: return "degenerate";
    }
    return "?";
}

/// Tolerance on F' below which an equilibrium is labelled degenerate.
inline constexpr double kClassificationTol = 1e-9;

inline Stability classify(double derivative, double tol = kClassificationTol) {
    if (derivative < -tol) return Stability::stable;
    if (derivative > tol) return Stability::unstable;
    return Stability::degenerate;
}

struct Equilibrium {
    double location = 0.0;
    double derivative = 0.0;
    Stability classification = Stability::degenerate;
    bool admissible = true;  ///< false for states below 0 (plotted, not biological)
};

struct BifurcationBranch {
    std::string label;
    std::vector<double> locations;
    std::vector<Stability> classes;
    std::vector<bool> admissible;
};

struct BifurcationDiagram {
    std::string parameter_name;
    std::vector<double> parameter_values;
    std::vector<BifurcationBranch> branches;
};

struct PotentialCurve {
    std::vector<double> grid;
    std::vector<double> values;
};

/// Linear dynamics u' = A u of a perturbation around X = phi in the logistic model.
struct Linearization {
    double coefficient_A = 0.0;
    double beta_c = 0.0;
    double u0 = 0.0;

    [[nodiscard]] double at(double t) const { return u0 * std::exp(coefficient_A * t); }
};

namespace detail {

inline Equilibrium make_equilibrium(double x, double fprime, bool admissible = true) {
    return {x, fprime, classify(fprime), admissible};
}

template <class F>
double central_derivative(F&& f, double x) {
    const double h = 1e-5 * std::max(1.0, std::abs(x));
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline void require_sorted_nonneg(std::span<const double> grid) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        require(grid[i] >= 0.0, "potential: grid must be nonnegative");
        if (i > 0) require(grid[i] > grid[i - 1], "potential: grid must be strictly increasing");
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Growth model: transcritical bifurcation at mu = q/p = 1.
// ---------------------------------------------------------------------------

/// Admissible equilibria: X1 = 0 always, X2 = ln(mu)/s when mu > 1.
inline std::vector<Equilibrium> growth_equilibria(const GrowthParams& gp) {
    gp.validate();
    std::vector<Equilibrium> out;
    out.push_back(detail::make_equilibrium(0.0, gp.q - gp.p));
    const double mu = gp.mu();
    if (mu != 1.0) {
        const double x2 = std::log(mu) / gp.s;
        if (x2 > 0.0) out.push_back(detail::make_equilibrium(x2, -gp.p * std::log(mu)));
    }
    return out;
}

/// Two-branch diagram over mu in [mu_lo, mu_hi], varying q with p held fixed.
/// The X2 branch is kept for mu < 1 and flagged non-admissible there.
inline BifurcationDiagram transcritical_diagram(const GrowthParams& tmpl, double mu_lo, double mu_hi,
                                                std::size_t n) {
    tmpl.validate();
    detail::require(mu_lo > 0.0 && mu_hi > mu_lo, "transcritical_diagram: need 0 < mu_lo < mu_hi");
    detail::require(n >= 2, "transcritical_diagram: need at least 2 samples");

    BifurcationDiagram d;
    d.parameter_name = "mu";
    BifurcationBranch b1{"X1", {}, {}, {}};
    BifurcationBranch b2{"X2", {}, {}, {}};
    for (std::size_t i = 0; i < n; ++i) {
        const double mu = mu_lo + (mu_hi - mu_lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        d.parameter_values.push_back(mu);
        const double q = mu * tmpl.p;
        b1.locations.push_back(0.0);
        b1.classes.push_back(classify(q - tmpl.p));
        b1.admissible.push_back(true);
        const double lnmu = std::log(mu);
        b2.locations.push_back(lnmu / tmpl.s);
        b2.classes.push_back(classify(-tmpl.p * lnmu));
        b2.admissible.push_back(lnmu >= 0.0);
    }
    d.branches = {std::move(b1), std::move(b2)};
    return d;
}

/// Parameter of the normal form X' = lambda X - X^2.
inline double normal_form_lambda(const GrowthParams& gp) {
    detail::require(gp.s * gp.q > 0.0, "normal_form_lambda: need s q > 0");
    return (gp.q - gp.p) / std::sqrt(gp.s * gp.q);
}

/// U(X) = (p/2) X^2 + (q/s) e^{-sX} (X + 1/s), so that -U' is the drift.
inline PotentialCurve growth_potential(std::span<const double> grid, const GrowthParams& gp) {
    gp.validate();
    detail::require_sorted_nonneg(grid);
    PotentialCurve pc{{grid.begin(), grid.end()}, {}};
    pc.values.reserve(grid.size());
    for (double x : grid)
        pc.values.push_back(0.5 * gp.p * x * x + gp.q / gp.s * std::exp(-gp.s * x) * (x + 1.0 / gp.s));
    return pc;
}

// ---------------------------------------------------------------------------
// Logistic model with state-dependent capacity.
// ---------------------------------------------------------------------------

inline std::vector<Equilibrium> logistic_equilibria(const LogisticParams& lp) {
    lp.validate();
    auto f = [&lp](double x) { return logistic_drift(x, lp); };
    return {detail::make_equilibrium(0.0, detail::central_derivative(f, 0.0)),
            detail::make_equilibrium(lp.phi(), detail::central_derivative(f, lp.phi()))};
}

inline double beta_critical(const LogisticParams& lp) {
    detail::require(lp.k2 > lp.k1, "beta_critical: need k2 > k1");
    return 4.0 / (lp.k2 - lp.k1);
}

inline Linearization linearize(const LogisticParams& lp, double u0) {
    const double bc = beta_critical(lp);
    return {-lp.s * (1.0 - lp.beta_sens / bc), bc, u0};
}

/// u(t) = u0 exp(A t), A = -s (1 - beta / beta_c).
inline double linearized_solution(const LogisticParams& lp, double u0, double t) {
    detail::require(t >= 0.0, "linearized_solution: t must be >= 0");
    return linearize(lp, u0).at(t);
}

/// Equilibria {0, phi} as beta_sens sweeps a list of values.
inline BifurcationDiagram logistic_beta_diagram(const LogisticParams& tmpl, std::span<const double> betas) {
    detail::require(!betas.empty(), "logistic_beta_diagram: empty parameter list");
    BifurcationDiagram d;
    d.parameter_name = "beta_sens";
    BifurcationBranch b1{"X1", {}, {}, {}};
    BifurcationBranch b2{"X2", {}, {}, {}};
    for (double beta : betas) {
        LogisticParams lp = tmpl;
        lp.beta_sens = beta;
        const auto eq = logistic_equilibria(lp);
        d.parameter_values.push_back(beta);
        b1.locations.push_back(eq[0].location);
        b1.classes.push_back(eq[0].classification);
        b1.admissible.push_back(true);
        b2.locations.push_back(eq[1].location);
        b2.classes.push_back(eq[1].classification);
        b2.admissible.push_back(true);
    }
    d.branches = {std::move(b1), std::move(b2)};
    return d;
}

/// U(X) = -int s X (1 - X/M(X)) dX by cumulative trapezoid, anchored at U(grid[0]) = 0.
inline PotentialCurve logistic_potential(std::span<const double> grid, const LogisticParams& lp) {
    lp.validate();
    detail::require_sorted_nonneg(grid);
    PotentialCurve pc{{grid.begin(), grid.end()}, std::vector<double>(grid.size(), 0.0)};
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double h = grid[i] - grid[i - 1];
        pc.values[i] = pc.values[i - 1] - 0.5 * h * (logistic_drift(grid[i - 1], lp) + logistic_drift(grid[i], lp));
    }
    return pc;
}

}  // namespace levypop
