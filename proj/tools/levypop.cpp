#include <cstdio>
#include <exception>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <boost/property_tree/ptree.hpp>

#include "commands.hpp"
#include "figures.hpp"

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kConfig = 2, kNumerical = 3, kPrecondition = 4, kIo = 5 };

int fail(int code, const char* kind, const std::string& msg) {
    std::fprintf(stderr, "levypop: error [%s]: %s\n", kind, msg.c_str());
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace levypop;
    using namespace levypop::cli;

    CLI::App app{"Population SDEs with Gaussian and alpha-stable Levy noise", "levypop"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "INI config file (a manifest also works)")->check(CLI::ExistingFile);

    std::vector<std::pair<std::string, std::string>> overrides;
    for (const auto& k : key_table()) {
        const std::string key = k.key;
        app.add_option_function<std::string>(
               "--" + key, [&overrides, key](const std::string& v) { overrides.emplace_back(key, v); }, k.help)
            ->group("Config keys");
    }

    const std::map<std::string, std::string> descriptions = {
        {"simulate-path", "one Euler-Maruyama sample path"},
        {"simulate-ensemble", "terminal states and histogram density of an ensemble"},
        {"solve-fpe", "time-evolve the Fokker-Planck equation to stationarity"},
        {"stationary-gaussian", "closed-form stationary density (epsilon = 0)"},
        {"equilibria", "deterministic equilibria and their stability"},
        {"diagram", "bifurcation diagram"},
        {"potential", "drift and potential on a grid"},
        {"sweep", "P-bifurcation parameter sweep"},
        {"reproduce-figure", "run a baked figure recipe"},
    };
    std::string figure;
    for (const auto& [name, desc] : descriptions) {
        auto* sub = app.add_subcommand(name, desc);
        sub->fallthrough();
        if (name == "reproduce-figure") {
            std::vector<std::string> ids;
            for (const auto& r : recipes()) ids.emplace_back(r.id);
            sub->add_option("figure", figure, "figure id")->required()->check(CLI::IsMember(ids));
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    const std::string subcommand = app.get_subcommands().front()->get_name();

    try {
        RunConfig cfg;
        if (!config_path.empty()) cfg.load_file(config_path);
        for (const auto& [k, v] : overrides) cfg.set(k, v);
        const Recipe* recipe = nullptr;
        if (subcommand == "reproduce-figure") {
            recipe = &find_recipe(figure);
            bake(cfg, *recipe);
        }
        cfg.resolve_model_defaults();

        // Validate everything the run may touch before any output is written.
        (void)make_coefficients(cfg.model());
        (void)cfg.seed();
        detail::require_alpha(cfg.alpha());

        std::string stem = cfg.str("output.name");
        if (stem.empty()) stem = recipe ? figure : subcommand;
        ArtifactWriter out(cfg.output_dir());
        Context ctx{cfg, out, stem, run_meta(cfg, subcommand, recipe ? figure : "")};

        if (recipe) run_recipe(ctx, *recipe);
        else if (subcommand == "simulate-path") simulate_path_cmd(ctx);
        else if (subcommand == "simulate-ensemble") simulate_ensemble_cmd(ctx);
        else if (subcommand == "solve-fpe") solve_fpe_cmd(ctx);
        else if (subcommand == "stationary-gaussian") stationary_gaussian_cmd(ctx);
        else if (subcommand == "equilibria") equilibria_cmd(ctx);
        else if (subcommand == "diagram") diagram_cmd(ctx);
        else if (subcommand == "potential") potential_cmd(ctx);
        else if (subcommand == "sweep") sweep_cmd(ctx);

        out.write_manifest(stem, cfg.to_ini(), subcommand, recipe ? figure : "");
        for (const auto& [file, hash] : out.artifacts())
            std::printf("%s  %s\n", hash.c_str(), (out.dir() / file).string().c_str());
        return kOk;
    } catch (const ConfigError& e) {
        return fail(kConfig, "config", e.what());
    } catch (const boost::property_tree::ptree_error& e) {
        return fail(kConfig, "config", e.what());
    } catch (const NumericalError& e) {
        return fail(kNumerical, "numerical", e.what());
    } catch (const EmptyDensityError& e) {
        return fail(kNumerical, "numerical", e.what());
    } catch (const std::invalid_argument& e) {
        return fail(kPrecondition, "precondition", e.what());
    } catch (const std::exception& e) {
        return fail(kIo, "io", e.what());
    }
}
