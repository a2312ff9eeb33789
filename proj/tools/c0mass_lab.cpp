#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acceptance/suite.hpp"
#include "c0mass/parallel.hpp"
#include "c0mass/scenario.hpp"

namespace {

struct Sub {
    CLI::App* app = nullptr;
    std::map<std::string, std::string> values;
    std::string config, out;
    int dim = 0;
    unsigned seed = 1;
    bool delta_report = false;
};

// flag names follow the config keys; help text is the short description
const std::map<std::string, std::vector<std::pair<std::string, std::string>>>& flag_table() {
    static const std::map<std::string, std::vector<std::pair<std::string, std::string>>> t = {
        {"mass",
         {{"metric", "metric spec, e.g. schwarzschild{m=1}"},
          {"r", "radii, comma separated"},
          {"phi", "bump support a,b"},
          {"quad-radial", "radial Gauss-Legendre points"},
          {"quad-sph", "sphere rule degree"},
          {"normalization", "standard | unit | custom:<c>"}}},
        {"testfn",
         {{"phi", "bump support a,b"},
          {"theta", "horizon"},
          {"cells", "lattice cells on [.5, 1.5]"},
          {"stride", "output every k-th face"}}},
        {"flow",
         {{"metric", "metric spec"},
          {"grid", "points per axis"},
          {"radial", "radial cells (selects the radial solver)"},
          {"T", "final time"},
          {"dt", "time step, 0 for the stable default"},
          {"L", "half-width of the box or radial extent"},
          {"order", "stencil order, 2 or 4"},
          {"eps", "amplitude factor on h"},
          {"snapshot", "save the final grid here"},
          {"beta", "run the beta-weak probe with this beta"},
          {"kappa0", "probe lower bound"}}},
        {"distortion",
         {{"metric", "metric spec"},
          {"r", "radii"},
          {"eta", "horizon decay exponent"},
          {"radial", "radial cells"},
          {"phi", "bump support a,b"},
          {"T", "unused by the radial path"}}},
        {"monotonicity",
         {{"metric", "metric spec"},
          {"r", "radii"},
          {"r2", "r' values"},
          {"eta", "horizon decay exponent"},
          {"tau", "decay rate"},
          {"phi", "bump support a,b"},
          {"radial", "radial cells"}}},
        {"finiteness",
         {{"metric", "metric spec"}, {"r", "radii r_k"}, {"eta", "horizon decay exponent"}, {"radial", "radial cells"}}},
        {"glue", {{"map", "map spec"}, {"r", "scale"}, {"samples", "rows written"}}},
    };
    return t;
}

int run_sub(const std::string& name, const Sub& sub) {
    c0m::Scenario s;
    for (const auto& [k, v] : sub.values) {
        s.params[k] = v;
        s.line_of[k] = 0;
    }
    if (sub.dim > 0) s.params["dim"] = std::to_string(sub.dim);
    s.params["seed"] = std::to_string(sub.seed);
    if (!sub.out.empty()) s.params["out"] = sub.out;
    if (name == "glue") s.params["delta-report"] = sub.delta_report ? "true" : "false";
    s.params["scenario"] = name;
    if (!sub.config.empty()) c0m::parse_config_file(sub.config, s);
    if (s.get("scenario", name) != name)
        throw c0m::ConfigError("config scenario '" + s.get("scenario", "") + "' does not match subcommand '" + name + "'");
    c0m::validate(s);
    if (s.out.empty()) throw c0m::ConfigError("missing required key 'out'");
    return c0m::run_scenario(s, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
    c0m::configure_threads();
    CLI::App app{"c0mass-lab: local mass, flow and chart experiments"};
    app.require_subcommand(1);

    std::map<std::string, Sub> subs;
    for (const auto& name : c0m::scenario_names()) {
        Sub& sub = subs[name];
        sub.app = app.add_subcommand(name);
        sub.app->add_option("--config", sub.config, "key = value file; its entries override flags");
        sub.app->add_option("--dim", sub.dim, "dimension n in [3, 5]");
        sub.app->add_option("--seed", sub.seed, "seed for sampled diagnostics");
        sub.app->add_option("--out", sub.out, "output CSV; a .manifest is written next to it");
        for (const auto& [key, help] : flag_table().at(name)) sub.app->add_option("--" + key, sub.values[key], help);
        if (name == "glue") sub.app->add_flag("--delta-report", sub.delta_report, "report the sup pullback deviation");
    }
    std::string filter;
    auto* acc = app.add_subcommand("accept", "run the acceptance suite");
    acc->add_option("filter", filter, "glob over criterion ids, e.g. mass.*");

    CLI11_PARSE(app, argc, argv);

    if (acc->parsed()) {
        auto res = c0m::acceptance::run_acceptance(filter, std::cout);
        for (const auto& r : res)
            if (!r.pass) return 1;
        return res.empty() ? 1 : 0;
    }
    for (auto& [name, sub] : subs) {
        if (!sub.app->parsed()) continue;
        // drop flags left unset so that defaults stay with the scenario
        for (auto it = sub.values.begin(); it != sub.values.end();)
            it = sub.app->get_option("--" + it->first)->count() == 0 ? sub.values.erase(it) : std::next(it);
        try {
            return run_sub(name, sub);
        } catch (const c0m::ConfigError& e) {
            std::cerr << "c0mass-lab " << name << ": configuration error: " << e.what() << "\n";
            return 2;
        } catch (const std::exception& e) {
            std::cerr << "c0mass-lab " << name << ": " << e.what() << "\n";
            return 3;
        }
    }
    return 1;
}
