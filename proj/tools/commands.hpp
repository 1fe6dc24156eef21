#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "artifacts.hpp"
#include "run_config.hpp"

namespace levypop::cli {

using MetaBlock = std::vector<std::pair<std::string, std::string>>;

/// Everything a command needs: resolved config, output sink, file stem and
/// the metadata block shared by all of its CSV files.
struct Context {
    const RunConfig& cfg;
    ArtifactWriter& out;
    std::string stem;
    MetaBlock meta;
};

/// Metadata copied into every CSV: the resolved config minus the output section.
inline MetaBlock run_meta(const RunConfig& cfg, const std::string& subcommand, const std::string& target) {
    MetaBlock m{{"subcommand", subcommand}};
    if (!target.empty()) m.emplace_back("target", target);
    for (const auto& k : key_table()) {
        const std::string key = k.key;
        if (key.rfind("output.", 0) == 0) continue;
        m.emplace_back(key, cfg.str(key));
    }
    return m;
}

inline std::string stability_label(Stability s) { return std::string(to_string(s)); }

inline CsvTable density_table(const Context& ctx, const DensityField& d) {
    CsvTable t({"x", "P"});
    t.meta(ctx.meta).meta("time", d.time);
    for (std::size_t i = 0; i < d.values.size(); ++i) t.row({d.grid.node(i), d.values[i]});
    return t;
}

inline void add_fpe_meta(CsvTable& t, const FpeResult& r) {
    t.meta("retained_mass", r.retained_mass)
        .meta("residual", r.residual)
        .meta("max_clipped_fraction", r.max_clipped_fraction)
        .meta("fpe_dt", r.dt)
        .meta("steps", static_cast<double>(r.steps))
        .meta("converged", r.converged ? "true" : "false");
}

// ---------------------------------------------------------------------------

inline void simulate_path_cmd(Context& ctx) {
    const auto coeffs = make_coefficients(ctx.cfg.model());
    const auto path = simulate_path(coeffs, ctx.cfg.path(), RngStream(ctx.cfg.seed(), 0));
    CsvTable t({"t", "x"});
    t.meta(ctx.meta).meta("extinct_at", path.extinct_at ? fmt(*path.extinct_at) : "none");
    for (std::size_t i = 0; i < path.times.size(); ++i) t.row({path.times[i], path.states[i]});
    ctx.out.write(ctx.stem + ".csv", t);
}

inline void simulate_ensemble_cmd(Context& ctx) {
    const auto coeffs = make_coefficients(ctx.cfg.model());
    const auto pc = ctx.cfg.path();
    const Grid grid = ctx.cfg.grid(coeffs.domain_hint);
    const std::size_t n = ctx.cfg.count("path.n_paths");
    const RngStream base(ctx.cfg.seed(), 0);
    const bool conditioned = ctx.cfg.flag("path.conditioned");
    const Ensemble ens = conditioned ? simulate_conditioned_ensemble(coeffs, pc, n, base, grid.x_min, grid.x_max)
                                     : simulate_ensemble(coeffs, pc, n, base);

    CsvTable terminal({"path", "x_T", "extinct_at"});
    terminal.meta(ctx.meta).meta("extinction_count", static_cast<double>(ens.extinction_count));
    for (std::size_t i = 0; i < n; ++i)
        terminal.row({fmt(static_cast<double>(i)), fmt(ens.terminal_states[i]),
                      std::isnan(ens.extinct_at[i]) ? std::string("none") : fmt(ens.extinct_at[i])});
    ctx.out.write(ctx.stem + "_terminal.csv", terminal);

    CsvTable dens = density_table(ctx, empirical_density(ens, grid));
    dens.meta("extinction_count", static_cast<double>(ens.extinction_count));
    ctx.out.write(ctx.stem + "_density.csv", dens);
}

inline void solve_fpe_cmd(Context& ctx) {
    const auto coeffs = make_coefficients(ctx.cfg.model());
    const Grid grid = ctx.cfg.grid(coeffs.domain_hint);
    const double every = ctx.cfg.num("solver.snapshot_every");
    std::size_t snap = 0;
    FpeObserver observer;
    if (every > 0.0) {
        observer = [&](const DensityField& d, double mass) {
            CsvTable t = density_table(ctx, d);
            t.meta("retained_mass", mass);
            ctx.out.write(ctx.stem + "_snap" + std::to_string(snap++) + ".csv", t);
        };
    }
    const FpeResult r = evolve_fpe(coeffs, ctx.cfg.alpha(), grid, ctx.cfg.solver(), observer, every);
    CsvTable t = density_table(ctx, r.density);
    add_fpe_meta(t, r);
    ctx.out.write(ctx.stem + ".csv", t);
}

inline void stationary_gaussian_cmd(Context& ctx) {
    const auto coeffs = make_coefficients(ctx.cfg.model());
    const Grid grid = ctx.cfg.grid(coeffs.domain_hint);
    ctx.out.write(ctx.stem + ".csv", density_table(ctx, stationary_gaussian_closed_form(coeffs, grid)));
}

inline void equilibria_cmd(Context& ctx) {
    const ModelParams m = ctx.cfg.model();
    const auto eqs = std::visit(
        [](const auto& p) {
            if constexpr (std::is_same_v<std::decay_t<decltype(p)>, GrowthParams>) return growth_equilibria(p);
            else return logistic_equilibria(p);
        },
        m);
    CsvTable t({"location", "derivative", "stability", "admissible"});
    t.meta(ctx.meta);
    if (const auto* gp = std::get_if<GrowthParams>(&m))
        t.meta("normal_form_lambda", normal_form_lambda(*gp));
    for (const auto& e : eqs)
        t.row({fmt(e.location), fmt(e.derivative), stability_label(e.classification), e.admissible ? "true" : "false"});
    ctx.out.write(ctx.stem + ".csv", t);
}

inline void diagram_cmd(Context& ctx) {
    const ModelParams m = ctx.cfg.model();
    BifurcationDiagram d;
    if (const auto* gp = std::get_if<GrowthParams>(&m)) {
        d = transcritical_diagram(*gp, ctx.cfg.num("analysis.mu_lo"), ctx.cfg.num("analysis.mu_hi"),
                                  ctx.cfg.count("analysis.n_points"));
    } else {
        const auto betas = ctx.cfg.list("analysis.betas");
        d = logistic_beta_diagram(std::get<LogisticParams>(m), betas);
    }
    CsvTable t({d.parameter_name, "branch", "location", "stability", "admissible"});
    t.meta(ctx.meta);
    for (const auto& b : d.branches)
        for (std::size_t i = 0; i < d.parameter_values.size(); ++i)
            t.row({fmt(d.parameter_values[i]), b.label, fmt(b.locations[i]), stability_label(b.classes[i]),
                   b.admissible[i] ? "true" : "false"});
    ctx.out.write(ctx.stem + ".csv", t);
}

inline std::vector<double> analysis_grid(const RunConfig& cfg) {
    const std::size_t n = cfg.count("analysis.n_points_x");
    const double hi = cfg.num("analysis.x_max");
    detail::require(n >= 2 && hi > 0.0, "potential: need analysis.n_points_x >= 2 and analysis.x_max > 0");
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = hi * static_cast<double>(i) / static_cast<double>(n - 1);
    return x;
}

inline void potential_cmd(Context& ctx) {
    const auto x = analysis_grid(ctx.cfg);
    const ModelParams m = ctx.cfg.model();
    const auto coeffs = make_coefficients(m);
    const PotentialCurve u = std::visit(
        [&](const auto& p) {
            if constexpr (std::is_same_v<std::decay_t<decltype(p)>, GrowthParams>) return growth_potential(x, p);
            else return logistic_potential(x, p);
        },
        m);
    CsvTable t({"x", "f1", "U"});
    t.meta(ctx.meta);
    for (std::size_t i = 0; i < x.size(); ++i) t.row({x[i], coeffs.f1(x[i]), u.values[i]});
    ctx.out.write(ctx.stem + ".csv", t);
}

inline void sweep_cmd(Context& ctx) {
    SweepSpec spec;
    spec.model = ctx.cfg.model();
    spec.alpha = ctx.cfg.alpha();
    spec.parameter = ctx.cfg.str("sweep.parameter");
    spec.values = ctx.cfg.list("sweep.values");
    if (spec.parameter.empty()) throw ConfigError("config: sweep.parameter is required");
    if (spec.values.empty()) throw ConfigError("config: sweep.values is required");
    spec.n_cells = ctx.cfg.count("grid.n_cells");
    spec.x_max = ctx.cfg.num("grid.x_max");
    spec.solver = ctx.cfg.solver();
    spec.classifier = ctx.cfg.classifier();

    std::size_t idx = 0;
    const auto records = sweep_parameter(spec, [&](double v, const FpeResult& r) {
        const std::string name = ctx.stem + "_" + std::to_string(idx++) + ".csv";
        CsvTable t = density_table(ctx, r.density);
        t.meta("sweep_value", v);
        add_fpe_meta(t, r);
        ctx.out.write(name, t);
        return name;
    });

    CsvTable summary({"parameter", "value", "class_label", "mode_count", "mode_location", "peak_height",
                      "retained_mass", "density_file", "error"});
    summary.meta(ctx.meta);
    if (records.size() >= 2) {
        try {
            if (const auto tr = locate_transition(records))
                summary.meta("transition", fmt(tr->lower) + ".." + fmt(tr->upper) + " " +
                                               std::string(to_string(tr->from)) + "->" +
                                               std::string(to_string(tr->to)));
            else
                summary.meta("transition", "none");
        } catch (const DomainError&) {
            summary.meta("transition", "insufficient data");
        }
    }
    for (const auto& r : records) {
        if (r.ok()) {
            const auto& c = *r.classification;
            summary.row({r.parameter_name, fmt(r.parameter_value), std::string(to_string(c.class_label)),
                         fmt(static_cast<double>(c.modes.size())), fmt(c.mode_location), fmt(c.peak_height),
                         fmt(r.retained_mass), r.density_ref, ""});
        } else {
            std::string err = r.error;
            for (char& ch : err)
                if (ch == ',' || ch == '\n') ch = ';';
            summary.row({r.parameter_name, fmt(r.parameter_value), "failed", "", "", "", "", "", err});
        }
    }
    ctx.out.write(ctx.stem + ".csv", summary);
}

}  // namespace levypop::cli
