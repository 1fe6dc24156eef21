#pragma once

#include <map>
#include <string>
#include <vector>

#include "commands.hpp"

namespace levypop::cli {

struct Recipe {
    const char* id;
    const char* summary;
    std::vector<std::pair<const char*, const char*>> baked;  ///< key, value pairs fixed by the figure
};

/// Figure recipes. Baked keys override the config file and flags.
inline const std::vector<Recipe>& recipes() {
    static const std::vector<Recipe> r = {
        {"fig1", "Brownian and alpha = 1.9 stable sample paths",
         {{"noise.alpha", "1.9"}, {"path.t_end", "1"}, {"path.dt", "0.001"}}},
        {"fig2", "growth model phase lines, transcritical diagram, potentials",
         {{"model.kind", "growth"}, {"model.p", "1"}, {"model.s", "1"}, {"analysis.mu_lo", "0.25"},
          {"analysis.mu_hi", "3"}, {"analysis.x_max", "2"}}},
        {"fig3", "growth model sample path, Gaussian noise only",
         {{"model.kind", "growth"}, {"model.p", "1"}, {"model.q", "2"}, {"model.s", "0.8"}, {"noise.sigma", "0.1"},
          {"noise.epsilon", "0"}, {"path.x0", "1"}}},
        {"fig4a", "growth densities versus mu",
         {{"model.kind", "growth"}, {"model.p", "1"}, {"model.s", "1"}, {"noise.alpha", "1"},
          {"noise.epsilon", "0.1"}, {"noise.sigma", "0"}, {"sweep.parameter", "mu"},
          {"sweep.values", "1.5,2,2.5,3"}}},
        {"fig4b", "growth densities versus alpha",
         {{"model.kind", "growth"}, {"model.p", "1"}, {"model.q", "2"}, {"model.s", "1"},
          {"noise.epsilon", "0.2"}, {"noise.sigma", "0"}, {"sweep.parameter", "alpha"},
          {"sweep.values", "0.5,1,1.5"}}},
        {"fig4c", "growth densities versus epsilon",
         {{"model.kind", "growth"}, {"model.p", "1"}, {"model.q", "2"}, {"model.s", "1"}, {"noise.alpha", "1"},
          {"noise.sigma", "0"}, {"sweep.parameter", "epsilon"}, {"sweep.values", "0.1,0.2,0.3,0.5,0.7,1"}}},
        {"fig4d", "growth densities versus s",
         {{"model.kind", "growth"}, {"model.p", "1"}, {"model.q", "2"}, {"noise.alpha", "1.5"},
          {"noise.epsilon", "0.2"}, {"noise.sigma", "0"}, {"sweep.parameter", "s"}, {"sweep.values", "0.5,1,1.5,2"}}},
        {"fig5", "carrying capacity and logistic phase lines versus beta",
         {{"model.kind", "logistic"}, {"model.s", "0.2"}, {"model.k1", "0.8"}, {"model.k2", "1.2"},
          {"analysis.betas", "0,5,10,15"}, {"analysis.x_max", "2"}}},
        {"fig6", "logistic phase line, potential and equilibria",
         {{"model.kind", "logistic"}, {"model.s", "0.2"}, {"model.k1", "0.8"}, {"model.k2", "1.2"},
          {"analysis.betas", "0,5,10,15"}, {"analysis.x_max", "2"}}},
        {"fig7", "linearized perturbation around phi in the three beta regimes",
         {{"model.kind", "logistic"}, {"model.s", "0.2"}, {"model.k1", "0.8"}, {"model.k2", "1.2"}}},
        {"fig8", "logistic sample path, Gaussian noise only",
         {{"model.kind", "logistic"}, {"model.s", "0.5"}, {"model.k1", "0.8"}, {"model.k2", "1.2"},
          {"model.beta", "5"}, {"noise.epsilon", "0"}, {"noise.sigma", "0.1"}}},
        {"fig9a", "logistic densities versus beta",
         {{"model.kind", "logistic"}, {"model.s", "0.1"}, {"noise.alpha", "1"}, {"noise.epsilon", "1"},
          {"noise.sigma", "0"}, {"sweep.parameter", "beta"}, {"sweep.values", "0,5,10,15"}}},
        {"fig9b", "logistic densities versus alpha",
         {{"model.kind", "logistic"}, {"model.s", "0.1"}, {"model.beta", "8"}, {"noise.epsilon", "1"},
          {"noise.sigma", "0"}, {"sweep.parameter", "alpha"}, {"sweep.values", "0.5,1,1.5"}}},
        {"fig9c", "logistic densities versus epsilon",
         {{"model.kind", "logistic"}, {"model.s", "0.1"}, {"model.beta", "8"}, {"noise.alpha", "1"},
          {"noise.sigma", "0"}, {"sweep.parameter", "epsilon"}, {"sweep.values", "0.3,0.5,0.7,1"}}},
        {"fig9d", "logistic densities versus s",
         {{"model.kind", "logistic"}, {"model.beta", "8"}, {"noise.alpha", "1"}, {"noise.epsilon", "0.3"},
          {"noise.sigma", "0"}, {"sweep.parameter", "s"}, {"sweep.values", "0.1,0.2,0.3,0.4"}}},
    };
    return r;
}

inline const Recipe& find_recipe(const std::string& id) {
    for (const auto& r : recipes())
        if (id == r.id) return r;
    throw ConfigError("reproduce-figure: unknown figure '" + id + "'");
}

inline void bake(RunConfig& cfg, const Recipe& r) {
    for (const auto& [k, v] : r.baked) cfg.set(k, v);
}

namespace detail_fig {

inline void write_paths_fig1(Context& ctx) {
    const PathConfig pc = ctx.cfg.path();
    const std::size_t n = pc.n_steps();
    RngStream rb(ctx.cfg.seed(), 0);
    RngStream rl(ctx.cfg.seed(), 1);
    const double alpha = ctx.cfg.alpha();
    CsvTable t({"t", "B", "L"});
    t.meta(ctx.meta);
    double b = 0.0;
    double l = 0.0;
    t.row({0.0, b, l});
    for (std::size_t k = 0; k < n; ++k) {
        const double h = k + 1 < n ? pc.dt : pc.t_end - pc.dt * static_cast<double>(n - 1);
        b += std::sqrt(h) * rb.normal();
        l += stable_increment(alpha, h, rl);
        t.row({k + 1 < n ? pc.dt * static_cast<double>(k + 1) : pc.t_end, b, l});
    }
    ctx.out.write(ctx.stem + ".csv", t);
}

/// x, then one drift column and one potential column per family member.
template <class Params, class Vary>
void phase_family(Context& ctx, const std::string& file, const std::string& label, const std::vector<double>& values,
                  Params base, Vary vary) {
    const auto x = analysis_grid(ctx.cfg);
    std::vector<std::string> cols{"x"};
    for (double v : values) cols.push_back("f1_" + label + "=" + fmt(v));
    for (double v : values) cols.push_back("U_" + label + "=" + fmt(v));
    std::vector<std::vector<double>> f(values.size()), u(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) {
        Params p = base;
        vary(p, values[j]);
        const auto c = make_coefficients(p);
        for (double xi : x) f[j].push_back(c.f1(xi));
        if constexpr (std::is_same_v<Params, GrowthParams>) u[j] = growth_potential(x, p).values;
        else u[j] = logistic_potential(x, p).values;
    }
    CsvTable t(cols);
    t.meta(ctx.meta);
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::vector<double> row{x[i]};
        for (const auto& col : f) row.push_back(col[i]);
        for (const auto& col : u) row.push_back(col[i]);
        t.row(row);
    }
    ctx.out.write(file, t);
}

}  // namespace detail_fig

inline void run_recipe(Context& ctx, const Recipe& r) {
    const std::string id = r.id;
    if (id == "fig1") {
        detail_fig::write_paths_fig1(ctx);
    } else if (id == "fig2") {
        const auto gp = std::get<GrowthParams>(ctx.cfg.model());
        detail_fig::phase_family(ctx, ctx.stem + "_phase.csv", "mu", {0.5, 1.0, 1.5, 2.0}, gp,
                                 [](GrowthParams& p, double mu) { p.q = mu * p.p; });
        Context sub{ctx.cfg, ctx.out, ctx.stem + "_diagram", ctx.meta};
        diagram_cmd(sub);
    } else if (id == "fig3" || id == "fig8") {
        simulate_path_cmd(ctx);
    } else if (id == "fig5") {
        const auto lp = std::get<LogisticParams>(ctx.cfg.model());
        const auto betas = ctx.cfg.list("analysis.betas");
        const auto x = analysis_grid(ctx.cfg);
        std::vector<std::string> cols{"x"};
        for (double b : betas) cols.push_back("M_beta=" + fmt(b));
        for (double b : betas) cols.push_back("f1_beta=" + fmt(b));
        CsvTable t(cols);
        t.meta(ctx.meta);
        for (double xi : x) {
            std::vector<double> row{xi};
            for (double b : betas) {
                LogisticParams p = lp;
                p.beta_sens = b;
                row.push_back(carrying_capacity(xi, p));
            }
            for (double b : betas) {
                LogisticParams p = lp;
                p.beta_sens = b;
                row.push_back(logistic_drift(xi, p));
            }
            t.row(row);
        }
        ctx.out.write(ctx.stem + ".csv", t);
    } else if (id == "fig6") {
        const auto lp = std::get<LogisticParams>(ctx.cfg.model());
        detail_fig::phase_family(ctx, ctx.stem + "_phase.csv", "beta", ctx.cfg.list("analysis.betas"), lp,
                                 [](LogisticParams& p, double b) { p.beta_sens = b; });
        Context sub{ctx.cfg, ctx.out, ctx.stem + "_diagram", ctx.meta};
        diagram_cmd(sub);
    } else if (id == "fig7") {
        auto lp = std::get<LogisticParams>(ctx.cfg.model());
        const char* panel[] = {"a", "b", "c"};
        const double betas[] = {0.001, 10.0, 20.0};
        const double u0s[] = {0.5, 0.7, 0.9, 1.0};
        for (int j = 0; j < 3; ++j) {
            lp.beta_sens = betas[j];
            const Linearization lin = linearize(lp, 1.0);
            CsvTable t({"t", "u0=0.5", "u0=0.7", "u0=0.9", "u0=1"});
            t.meta(ctx.meta)
                .meta("beta", betas[j])
                .meta("beta_c", lin.beta_c)
                .meta("coefficient_A", lin.coefficient_A);
            for (int i = 0; i <= 100; ++i) {
                const double tt = 0.1 * i;
                std::vector<double> row{tt};
                for (double u0 : u0s) row.push_back(linearized_solution(lp, u0, tt));
                t.row(row);
            }
            ctx.out.write(ctx.stem + panel[j] + ".csv", t);
        }
    } else {
        sweep_cmd(ctx);
    }
}

}  // namespace levypop::cli
