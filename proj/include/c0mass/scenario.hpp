#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "c0mass/charts.hpp"
#include "c0mass/geometry.hpp"

namespace c0m {

// Config grammar, one entry per line:
//   # comment
//   key = value
// Lists are comma separated. `scenario` and `dim` are required.
struct Scenario {
    std::string name;
    int dim = 0;
    unsigned seed = 1;
    std::string out;
    std::map<std::string, std::string> params;
    std::map<std::string, int> line_of;   // config line for each key, 0 for flags

    bool has(const std::string& k) const { return params.count(k) > 0; }
    std::string get(const std::string& k, const std::string& dflt) const;
    double num(const std::string& k, double dflt) const;
    int integer(const std::string& k, int dflt) const;
    std::vector<double> list(const std::string& k, const std::vector<double>& dflt) const;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

const std::vector<std::string>& scenario_names();

// merges into `base`, later keys win
void parse_config(std::istream& in, Scenario& base);
void parse_config_file(const std::string& path, Scenario& base);
// fills name/dim/seed/out from params and checks every parameter before compute
void validate(Scenario& s);

// metric specs: flat, schwarzschild{m}, schwarzschild-lo{m}, powerlaw{c,tau},
// conformal{c,tau}, radial{a,b,tau}, grid{file}
FieldPtr parse_metric(const std::string& spec, int n);
// map specs: isometry{seed,shift}, perturbed-isometry{seed,shift,eps,bump},
// synthetic-transition{tau,c}
SmoothMap parse_map(const std::string& spec, int n);

// runs one scenario, writes `out` and `out`.manifest; returns the exit status
int run_scenario(const Scenario& s, std::ostream& log);

std::string fmt17(double v);

}  // namespace c0m
