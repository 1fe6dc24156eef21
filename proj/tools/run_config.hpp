#pragma once

#include <cstdlib>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "levypop/levypop.hpp"

namespace levypop::cli {

struct KeySpec {
    const char* key;  ///< section.name
    const char* fallback;
    const char* help;
};

/// Every configurable key. Order here is the order of the resolved config.
inline const std::vector<KeySpec>& key_table() {
    static const std::vector<KeySpec> keys = {
        {"run.seed", "42", "root seed of the random streams"},
        {"model.kind", "growth", "growth | logistic"},
        {"model.p", "1", "growth: death rate"},
        {"model.q", "2", "growth: birth rate"},
        {"model.s", "", "growth: adult mortality; logistic: growth rate (empty = model default)"},
        {"model.k1", "0.8", "logistic: lower capacity"},
        {"model.k2", "1.2", "logistic: upper capacity"},
        {"model.beta", "0", "logistic: capacity sensitivity"},
        {"noise.alpha", "1", "stability index in (0, 2)"},
        {"noise.sigma", "0", "Gaussian noise intensity"},
        {"noise.epsilon", "0", "Levy noise intensity"},
        {"path.t_end", "50", "simulation horizon"},
        {"path.dt", "0.001", "Euler-Maruyama step"},
        {"path.x0", "0.5", "initial state"},
        {"path.x0_std", "0", "spread of a Gaussian initial state"},
        {"path.record_stride", "10", "record every n-th step"},
        {"path.n_paths", "1000", "ensemble size"},
        {"path.conditioned", "false", "replace killed particles by survivors (Fleming-Viot)"},
        {"grid.x_min", "0", "left end of the state grid"},
        {"grid.x_max", "0", "right end of the state grid (0 = model hint)"},
        {"grid.n_cells", "256", "number of cells"},
        {"solver.dt", "0", "FPE step (0 = 0.9 x stability bound)"},
        {"solver.t_end", "50", "FPE horizon"},
        {"solver.jump_truncation", "0", "jump truncation L (0 = grid span)"},
        {"solver.stationarity_tol", "1e-6", "stop when ||dP/dt||_1 falls below this"},
        {"solver.init_center", "0.5", "centre of the initial bump"},
        {"solver.init_sharpness", "40", "P(x,0) ~ exp(-sharpness (x - centre)^2)"},
        {"solver.jump_form", "adjoint", "adjoint | outer_factor"},
        {"solver.snapshot_every", "0", "write a density snapshot every this much time (0 = off)"},
        {"analysis.mu_lo", "0.25", "diagram: smallest mu"},
        {"analysis.mu_hi", "3", "diagram: largest mu"},
        {"analysis.n_points", "111", "diagram: number of parameter values"},
        {"analysis.betas", "0,5,10,15", "logistic diagram: beta values"},
        {"analysis.x_max", "2", "potential: right end of the curve"},
        {"analysis.n_points_x", "401", "potential: number of nodes"},
        {"sweep.parameter", "", "mu | alpha | epsilon | sigma | s | beta"},
        {"sweep.values", "", "comma-separated ascending values"},
        {"classify.prominence_threshold", "0.05", "modes need this share of max P as prominence"},
        {"classify.flat_prominence", "0.05", "flat below this best prominence"},
        {"classify.plateau_level", "0.9", "plateau = cells at or above this share of max P"},
        {"classify.plateau_fraction", "0.25", "flat when the plateau exceeds this share of the grid"},
        {"output.dir", "", "output directory (empty = $LEVYPOP_OUT or ./out)"},
        {"output.name", "", "file stem (empty = subcommand or figure id)"},
    };
    return keys;
}

/// Resolved key/value configuration: table defaults < config file < flags.
class RunConfig {
public:
    RunConfig() {
        for (const auto& k : key_table()) values_[k.key] = k.fallback;
    }

    /// Merge an INI file. The [manifest] section written next to outputs is skipped,
    /// so a manifest is itself a valid config.
    void load_file(const std::string& path) {
        boost::property_tree::ptree tree;
        try {
            boost::property_tree::ini_parser::read_ini(path, tree);
        } catch (const boost::property_tree::ini_parser_error& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        for (const auto& [section, body] : tree) {
            if (section == "manifest") continue;
            if (body.empty()) throw ConfigError("config: key '" + section + "' outside a section");
            for (const auto& [name, leaf] : body) set(section + "." + name, leaf.data());
        }
    }

    void set(const std::string& key, const std::string& value) {
        if (!values_.contains(key)) throw ConfigError("config: unknown key '" + key + "'");
        values_[key] = value;
    }

    [[nodiscard]] const std::string& str(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) throw ConfigError("config: unknown key '" + key + "'");
        return it->second;
    }

    [[nodiscard]] double num(const std::string& key) const {
        const std::string& v = str(key);
        char* end = nullptr;
        const double d = std::strtod(v.c_str(), &end);
        if (v.empty() || end != v.c_str() + v.size())
            throw ConfigError("config: " + key + " = '" + v + "' is not a number");
        return d;
    }

    [[nodiscard]] std::size_t count(const std::string& key) const {
        const double d = num(key);
        if (d < 0.0 || d != static_cast<double>(static_cast<std::size_t>(d)))
            throw ConfigError("config: " + key + " must be a non-negative integer");
        return static_cast<std::size_t>(d);
    }

    [[nodiscard]] std::uint64_t seed() const {
        const std::string& v = str("run.seed");
        char* end = nullptr;
        const unsigned long long s = std::strtoull(v.c_str(), &end, 10);
        if (v.empty() || end != v.c_str() + v.size() || v.front() == '-')
            throw ConfigError("config: run.seed must be a non-negative integer");
        return s;
    }

    [[nodiscard]] bool flag(const std::string& key) const {
        const std::string& v = str(key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw ConfigError("config: " + key + " must be true or false");
    }

    [[nodiscard]] std::vector<double> list(const std::string& key) const {
        std::vector<double> out;
        std::stringstream ss(str(key));
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto b = item.find_first_not_of(" \t");
            const auto e = item.find_last_not_of(" \t");
            if (b == std::string::npos) continue;
            item = item.substr(b, e - b + 1);
            char* end = nullptr;
            const double d = std::strtod(item.c_str(), &end);
            if (end != item.c_str() + item.size()) throw ConfigError("config: " + key + " has a non-numeric entry");
            out.push_back(d);
        }
        return out;
    }

    /// INI text of the resolved configuration, optionally excluding one section.
    [[nodiscard]] std::string to_ini(std::string_view skip_section = {}) const {
        std::ostringstream os;
        std::string current;
        for (const auto& k : key_table()) {
            const std::string key = k.key;
            const auto dot = key.find('.');
            const std::string section = key.substr(0, dot);
            if (section == skip_section) continue;
            if (section != current) {
                if (!current.empty()) os << '\n';
                os << '[' << section << "]\n";
                current = section;
            }
            os << key.substr(dot + 1) << " = " << values_.at(key) << '\n';
        }
        return os.str();
    }

    // -- typed views ------------------------------------------------------

    [[nodiscard]] ModelParams model() const {
        const std::string& kind = str("model.kind");
        const bool has_s = !str("model.s").empty();
        if (kind == "growth") {
            GrowthParams gp;
            gp.p = num("model.p");
            gp.q = num("model.q");
            if (has_s) gp.s = num("model.s");
            gp.sigma = num("noise.sigma");
            gp.epsilon = num("noise.epsilon");
            return gp;
        }
        if (kind == "logistic") {
            LogisticParams lp;
            if (has_s) lp.s = num("model.s");
            lp.k1 = num("model.k1");
            lp.k2 = num("model.k2");
            lp.beta_sens = num("model.beta");
            lp.sigma = num("noise.sigma");
            lp.epsilon = num("noise.epsilon");
            return lp;
        }
        throw ConfigError("config: model.kind must be growth or logistic, got '" + kind + "'");
    }

    /// Write the model-dependent defaults back so the resolved config is explicit.
    void resolve_model_defaults() {
        if (!str("model.s").empty()) return;
        std::ostringstream os;
        os.precision(17);
        std::visit([&](const auto& p) { os << p.s; }, model());
        values_["model.s"] = os.str();
    }

    [[nodiscard]] double alpha() const { return num("noise.alpha"); }

    [[nodiscard]] PathConfig path() const {
        PathConfig pc;
        pc.t_end = num("path.t_end");
        pc.dt = num("path.dt");
        pc.x0 = num("path.x0");
        pc.x0_std = num("path.x0_std");
        pc.alpha = alpha();
        pc.record_stride = count("path.record_stride");
        pc.validate();
        return pc;
    }

    [[nodiscard]] Grid grid(double hint) const {
        double x_max = num("grid.x_max");
        if (x_max == 0.0) x_max = hint;
        Grid g{num("grid.x_min"), x_max, count("grid.n_cells")};
        g.validate();
        return g;
    }

    [[nodiscard]] SolverConfig solver() const {
        SolverConfig sc;
        sc.dt = num("solver.dt");
        sc.t_end = num("solver.t_end");
        sc.jump_truncation = num("solver.jump_truncation");
        sc.stationarity_tol = num("solver.stationarity_tol");
        sc.init_center = num("solver.init_center");
        sc.init_sharpness = num("solver.init_sharpness");
        const std::string& form = str("solver.jump_form");
        if (form == "adjoint") sc.jump_form = JumpForm::adjoint;
        else if (form == "outer_factor") sc.jump_form = JumpForm::outer_factor;
        else throw ConfigError("config: solver.jump_form must be adjoint or outer_factor");
        return sc;
    }

    [[nodiscard]] ClassifierConfig classifier() const {
        return {num("classify.prominence_threshold"), num("classify.flat_prominence"),
                num("classify.plateau_level"), num("classify.plateau_fraction")};
    }

    [[nodiscard]] std::string output_dir() const {
        const std::string& d = str("output.dir");
        if (!d.empty()) return d;
        if (const char* env = std::getenv("LEVYPOP_OUT"); env && *env) return env;
        return "out";
    }

private:
    std::map<std::string, std::string> values_;
};

}  // namespace levypop::cli
