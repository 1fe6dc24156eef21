#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "levypop/errors.hpp"
#include "levypop/fpe.hpp"
#include "levypop/grid.hpp"
#include "levypop/models.hpp"

namespace levypop {

enum class ShapeClass { peaked_unimodal, flat, multimodal };

inline std::string_view to_string(ShapeClass c) {
    switch (c) {
        case ShapeClass::peaked_unimodal: return "peaked-unimodal";
        case ShapeClass::flat: return "flat";
        case ShapeClass::multimodal: return "multimodal";
    }
    return "?";
}

struct Mode {
    double location = 0.0;
    double height = 0.0;
    double prominence = 0.0;
};

struct ClassifierConfig {
    double prominence_threshold = 0.05;  ///< modes need prominence >= this x max(P)
    double flat_prominence = 0.05;       ///< flat when the best prominence is below this x max(P)
    double plateau_level = 0.9;          ///< plateau = cells with P >= this x max(P)
    double plateau_fraction = 0.25;      ///< flat when the plateau covers more than this share of the grid
};

struct ShapeClassification {
    std::vector<Mode> modes;  ///< sorted by location
    ShapeClass class_label = ShapeClass::flat;
    double peak_height = 0.0;
    double mode_location = 0.0;
    double plateau_width = 0.0;
};

/// Topographic prominence of the local maxima of a sampled density, plus a
/// shape label.
inline ShapeClassification find_modes(const DensityField& p, const ClassifierConfig& cfg = {}) {
    const auto& v = p.values;
    const std::size_t n = v.size();
    detail::require(n >= 3, "find_modes: need at least 3 samples");
    const auto top_it = std::max_element(v.begin(), v.end());
    const double top = *top_it;
    if (!(top > 0.0)) throw EmptyDensityError("find_modes: density is identically zero");

    ShapeClassification out;
    out.peak_height = top;
    out.mode_location = p.grid.node(static_cast<std::size_t>(top_it - v.begin()));

    // Local maxima away from the array ends; flat tops count once at their lower middle.
    std::vector<std::size_t> peaks;
    for (std::size_t i = 1; i + 1 < n;) {
        if (v[i] > v[i - 1]) {
            std::size_t r = i;
            while (r + 1 < n && v[r + 1] == v[i]) ++r;
            if (r + 1 < n && v[r + 1] < v[i]) peaks.push_back((i + r) / 2);
            i = r + 1;
        } else {
            ++i;
        }
    }

    double best_prominence = 0.0;
    for (std::size_t pk : peaks) {
        const double h = v[pk];
        double left_min = h;
        for (std::size_t j = pk; j-- > 0;) {
            if (v[j] > h) break;
            left_min = std::min(left_min, v[j]);
        }
        double right_min = h;
        for (std::size_t j = pk + 1; j < n; ++j) {
            if (v[j] > h) break;
            right_min = std::min(right_min, v[j]);
        }
        const double prom = h - std::max(left_min, right_min);
        best_prominence = std::max(best_prominence, prom);
        if (prom >= cfg.prominence_threshold * top) out.modes.push_back({p.grid.node(pk), h, prom});
    }

    std::size_t plateau = 0;
    for (double x : v)
        if (x >= cfg.plateau_level * top) ++plateau;
    out.plateau_width = static_cast<double>(plateau) * p.grid.dx();
    const double span = p.grid.x_max - p.grid.x_min;

    if (!out.modes.empty()) {
        // Heights equal to within rounding count as ties; the smallest location wins.
        double best = 0.0;
        for (const Mode& m : out.modes) best = std::max(best, m.height);
        for (const Mode& m : out.modes) {
            if (m.height >= best * (1.0 - 1e-12)) {
                out.mode_location = m.location;
                break;
            }
        }
    }

    if (out.modes.empty() || best_prominence < cfg.flat_prominence * top ||
        out.plateau_width > cfg.plateau_fraction * span) {
        out.class_label = ShapeClass::flat;
    } else if (out.modes.size() >= 2) {
        out.class_label = ShapeClass::multimodal;
    } else {
        out.class_label = ShapeClass::peaked_unimodal;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Parameter sweeps.
// ---------------------------------------------------------------------------

struct SweepRecord {
    std::string parameter_name;
    double parameter_value = 0.0;
    std::optional<ShapeClassification> classification;  ///< empty when the solve failed
    std::string density_ref;
    std::string error;
    double retained_mass = 0.0;

    [[nodiscard]] bool ok() const noexcept { return classification.has_value(); }
};

struct SweepSpec {
    ModelParams model;
    double alpha = 1.0;
    std::string parameter;  ///< mu | alpha | epsilon | sigma | s | beta_sens
    std::vector<double> values;
    std::size_t n_cells = 256;
    double x_max = 0.0;  ///< 0 selects the largest domain hint over the sweep
    SolverConfig solver;
    ClassifierConfig classifier;
};

/// Model and stability index for one sweep point.
inline std::pair<ModelParams, double> apply_sweep_value(const SweepSpec& spec, double value) {
    ModelParams m = spec.model;
    double alpha = spec.alpha;
    const std::string& name = spec.parameter;
    bool known = true;
    std::visit(
        [&](auto& p) {
            using T = std::decay_t<decltype(p)>;
            if (name == "alpha") alpha = value;
            else if (name == "epsilon") p.epsilon = value;
            else if (name == "sigma") p.sigma = value;
            else if (name == "s") p.s = value;
            else if constexpr (std::is_same_v<T, GrowthParams>) {
                if (name == "mu") p.q = value * p.p;
                else known = false;
            } else {
                if (name == "beta_sens" || name == "beta") p.beta_sens = value;
                else known = false;
            }
        },
        m);
    if (!known) throw DomainError("sweep: unknown parameter '" + name + "' for this model");
    return {m, alpha};
}

/// Density sink: receives the parameter value, the solver result, and returns
/// the reference (e.g. file name) stored in the record.
using SweepSink = std::function<std::string(double, const FpeResult&)>;

inline std::vector<SweepRecord> sweep_parameter(const SweepSpec& spec, const SweepSink& sink = {}) {
    detail::require(!spec.values.empty(), "sweep: no parameter values");
    detail::require(std::is_sorted(spec.values.begin(), spec.values.end()), "sweep: values must be ascending");

    double x_max = spec.x_max;
    if (x_max <= 0.0) {
        for (double v : spec.values) {
            const auto [m, a] = apply_sweep_value(spec, v);
            x_max = std::max(x_max, make_coefficients(m).domain_hint);
        }
    }
    const Grid grid{0.0, x_max, spec.n_cells};

    std::vector<SweepRecord> out;
    out.reserve(spec.values.size());
    for (double v : spec.values) {
        SweepRecord rec;
        rec.parameter_name = spec.parameter;
        rec.parameter_value = v;
        try {
            const auto [m, a] = apply_sweep_value(spec, v);
            const FpeResult res = evolve_fpe(make_coefficients(m), a, grid, spec.solver);
            rec.classification = find_modes(res.density, spec.classifier);
            rec.retained_mass = res.retained_mass;
            if (sink) rec.density_ref = sink(v, res);
        } catch (const std::exception& e) {
            rec.classification.reset();
            rec.error = e.what();
        }
        out.push_back(std::move(rec));
    }
    return out;
}

struct Transition {
    double lower = 0.0;
    double upper = 0.0;
    ShapeClass from = ShapeClass::peaked_unimodal;
    ShapeClass to = ShapeClass::flat;
};

/// First adjacent pair of successful records whose shape labels differ.
inline std::optional<Transition> locate_transition(const std::vector<SweepRecord>& records) {
    std::vector<const SweepRecord*> good;
    for (const auto& r : records)
        if (r.ok()) good.push_back(&r);
    detail::require(good.size() >= 2, "locate_transition: need at least two successful records");
    for (std::size_t i = 0; i + 1 < good.size(); ++i) {
        const auto a = good[i]->classification->class_label;
        const auto b = good[i + 1]->classification->class_label;
        if (a != b) return Transition{good[i]->parameter_value, good[i + 1]->parameter_value, a, b};
    }
    return std::nullopt;
}

}  // namespace levypop
