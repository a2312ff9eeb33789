#include "c0mass/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

#include "c0mass/experiments.hpp"
#include "c0mass/flow_diagnostics.hpp"
#include "c0mass/grid_flow.hpp"
#include "c0mass/mass.hpp"
#include "c0mass/radial_flow.hpp"
#include "c0mass/testfn.hpp"

namespace c0m {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_top(const std::string& s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char ch : s) {
        if (ch == '{') ++depth;
        if (ch == '}') --depth;
        if (ch == sep && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(trim(cur));
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("parameter '" + key + "': expected a number, got '" + v + "'");
    }
}

const std::map<std::string, std::set<std::string>>& allowed_keys() {
    static const std::map<std::string, std::set<std::string>> k = {
        {"mass", {"metric", "r", "phi", "quad-radial", "quad-sph", "normalization"}},
        {"testfn", {"phi", "theta", "cells", "stride"}},
        {"flow", {"metric", "grid", "radial", "T", "dt", "L", "order", "eps", "snapshot", "beta", "kappa0"}},
        {"distortion", {"metric", "r", "eta", "radial", "phi", "T"}},
        {"monotonicity", {"metric", "r", "r2", "eta", "tau", "phi", "radial"}},
        {"finiteness", {"metric", "r", "eta", "radial"}},
        {"glue", {"map", "r", "delta-report", "samples"}},
    };
    return k;
}

struct Spec {
    std::string name;
    std::map<std::string, double> args;
    std::string text;
};

Spec parse_spec(const std::string& s) {
    Spec sp;
    auto b = s.find('{');
    if (b == std::string::npos) {
        sp.name = trim(s);
        return sp;
    }
    if (s.back() != '}') throw ConfigError("malformed spec '" + s + "'");
    sp.name = trim(s.substr(0, b));
    sp.text = s.substr(b + 1, s.size() - b - 2);
    if (sp.name == "grid") return sp;
    for (const auto& kv : split_top(sp.text, ',')) {
        if (kv.empty()) continue;
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("spec '" + s + "': expected key=value, got '" + kv + "'");
        sp.args[trim(kv.substr(0, eq))] = to_double(kv, trim(kv.substr(eq + 1)));
    }
    return sp;
}

double arg(const Spec& sp, const std::string& k, double dflt) {
    auto it = sp.args.find(k);
    return it == sp.args.end() ? dflt : it->second;
}

BumpProfile parse_phi(const Scenario& s) {
    auto v = s.list("phi", {0.95, 1.05});
    if (v.size() != 2) throw ConfigError("phi: expected 'a,b'");
    if (!(v[0] > 0.9 && v[0] < v[1] && v[1] < 1.1))
        throw ConfigError("phi: support (a,b) must satisfy .9 < a < b < 1.1");
    return make_bump(v[0], v[1]);
}

// decay rate of the metric spec where one is declared
double declared_tau(const std::string& spec, int n) {
    Spec sp = parse_spec(spec);
    if (sp.name == "schwarzschild" || sp.name == "schwarzschild-lo") return n - 2.0;
    if (sp.name == "powerlaw" || sp.name == "conformal" || sp.name == "radial") return arg(sp, "tau", 1.0);
    if (sp.name == "flat") return std::numeric_limits<double>::infinity();
    return std::nan("");
}

class Output {
public:
    Output(const Scenario& s, std::vector<std::string> header) : s_(s) {
        if (!s.out.empty()) {
            f_.open(s.out);
            if (!f_) throw Error("cannot open output '" + s.out + "'");
        }
        line(header);
    }
    void line(const std::vector<std::string>& cells) {
        std::ostream& o = f_.is_open() ? static_cast<std::ostream&>(f_) : std::cout;
        for (std::size_t i = 0; i < cells.size(); ++i) o << (i ? "," : "") << cells[i];
        o << "\n";
    }
    void row(const std::vector<double>& v) {
        std::vector<std::string> c;
        for (double x : v) c.push_back(fmt17(x));
        line(c);
    }
    void measured(const std::string& k, double v) { measured_.emplace_back(k, fmt17(v)); }
    void measured(const std::string& k, const std::string& v) { measured_.emplace_back(k, v); }
    void finish() {
        if (s_.out.empty()) return;
        f_.close();
        std::ofstream m(s_.out + ".manifest");
        m << "scenario = " << s_.name << "\n";
        m << "dim = " << s_.dim << "\n";
        m << "seed = " << s_.seed << "\n";
        m << "threads = " << thread_count() << "\n";
        for (const auto& [k, v] : s_.params)
            if (k != "scenario" && k != "dim" && k != "seed") m << k << " = " << v << "\n";
        for (const auto& [k, v] : measured_) m << "measured." << k << " = " << v << "\n";
    }

private:
    const Scenario& s_;
    std::ofstream f_;
    std::vector<std::pair<std::string, std::string>> measured_;
};

int run_mass(const Scenario& s, std::ostream&) {
    FieldPtr g = parse_metric(s.get("metric", "flat"), s.dim);
    BumpProfile phi = parse_phi(s);
    MassOptions opt;
    opt.radial_order = s.integer("quad-radial", 32);
    opt.sphere_degree = s.integer("quad-sph", 23);
    opt.norm = parse_normalization(s.get("normalization", "standard"), opt.custom_constant);
    Output out(s, {"r[length]", "raw_volume[length^(n-2)]", "raw_boundary[length^(n-2)]",
                   "unnormalized[length^(n-2)]", "normalized[length^(n-2)]"});
    for (double r : s.list("r", {20.0})) {
        MassReport m = c0_local_mass(*g, phi, r, opt);
        out.row({r, m.raw_volume, m.raw_boundary, m.unnormalized, m.normalized});
        out.measured("constant", m.constant);
    }
    out.measured("phi", phi.id());
    out.finish();
    return 0;
}

int run_testfn(const Scenario& s, std::ostream&) {
    BumpProfile phi = parse_phi(s);
    LatticeSpec ls;
    ls.cells = s.integer("cells", 2048);
    double theta = s.num("theta", 0.5 * theta_bar(phi, s.dim));
    TestFunctionFlow f = evolve_testfn(phi, theta, s.dim, ls);
    int stride = s.integer("stride", 16);
    Output out(s, {"t[length^2/r^2]", "ell[length/r]", "phi[1]", "dphi[r/length]"});
    for (std::size_t k = 0; k < f.times.size(); ++k)
        for (std::size_t j = 0; j < f.faces.size(); j += stride)
            out.row({f.times[k], f.faces[j], f.at(f.faces[j], static_cast<int>(k)),
                     f.d_at(f.faces[j], static_cast<int>(k))});
    out.measured("theta", theta);
    out.measured("theta_bar", theta_bar(phi, s.dim));
    out.measured("dt", f.dt);
    out.measured("max_residual", f.max_residual);
    out.measured("min_value", f.min_value);
    out.measured("boundary_constant", boundary_constant(f));
    out.finish();
    return 0;
}

int run_flow(const Scenario& s, std::ostream& log) {
    FieldPtr g = make_amplified(parse_metric(s.get("metric", "flat"), s.dim), s.num("eps", 1.0));
    const double T = s.num("T", 0.1);
    Output out(s, {"t[length^2]", "diag_name", "value"});
    if (s.has("radial")) {
        auto rad = radialize(g);
        double L = s.num("L", 6.0);
        RadialState st = RadialState::from_field(*rad, s.integer("radial", 512), 0.0, L, InnerBoundary::Regular);
        RadialSolveOptions so;
        for (int k = 1; k <= 10; ++k) so.output_times.push_back(T * k / 10.0);
        double eps0 = st.sup_norm();
        out.line({fmt17(0.0), "sup_h", fmt17(eps0)});
        auto states = radial_rdtf_solve(st, so);
        for (const auto& x : states) out.line({fmt17(x.t), "sup_h", fmt17(x.sup_norm())});
        out.measured("eps0", eps0);
    } else {
        GridState init = GridState::from_field(*g, s.integer("grid", 32), s.num("L", 4.0));
        GridSolveOptions go;
        go.T = T;
        go.dt = s.num("dt", 0.0);
        go.order = s.integer("order", 4);
        for (int k = 1; k <= 10; ++k) go.diag_times.push_back(T * k / 10.0);
        GridTrajectory tr = rdtf_solve(init, go);
        for (std::size_t k = 0; k < tr.diag_t.size(); ++k) {
            out.line({fmt17(tr.diag_t[k]), "sup_h", fmt17(tr.diag_sup_h[k])});
            out.line({fmt17(tr.diag_t[k]), "grad_sqrt_t_over_eps0", fmt17(tr.diag_grad_scaled[k])});
        }
        out.measured("eps0", tr.eps0);
        out.measured("steps", tr.steps);
        if (s.has("snapshot")) tr.snapshots.back().to_field()->save(s.get("snapshot", ""));
        if (s.has("beta")) {
            BetaProbeOptions bo;
            bo.beta = s.num("beta", 0.25);
            bo.kappa0 = s.num("kappa0", 0.0);
            BetaWeakProbe p = beta_weak_probe(*g, Vec::Zero(s.dim), bo);
            for (std::size_t i = 0; i < p.C.size(); ++i)
                for (std::size_t k = 0; k < p.t.size(); ++k)
                    out.line({fmt17(p.t[k]), "inf_R_C=" + fmt17(p.C[i]), fmt17(p.inf[i][k])});
            out.measured("beta_probe_pass", p.pass ? "true" : "false");
            out.measured("beta_probe_margin", p.margin);
        }
    }
    log << "flow: done\n";
    out.finish();
    return 0;
}

int run_distortion(const Scenario& s, std::ostream&) {
    FieldPtr g = parse_metric(s.get("metric", "schwarzschild-lo{m=1}"), s.dim);
    auto rad = radialize(g);
    BumpProfile phi = parse_phi(s);
    double eta = s.num("eta", 0.1);
    auto radii = s.list("r", {30.0});
    double tb = theta_bar(phi, s.dim);
    double r_ref = *std::min_element(radii.begin(), radii.end());
    CoupledOptions co;
    co.N = s.integer("radial", 1536);
    Output out(s, {"t[length^2]", "diag_name", "value"});
    for (double r : radii) {
        double theta = horizon(r, eta, 0.9 * tb, r_ref);
        TestFunctionFlow f = evolve_testfn(phi, theta, s.dim);
        CoupledTrajectory tr = coupled_mass_trajectory(*rad, f, r, co);
        for (std::size_t k = 0; k < tr.t.size(); ++k)
            out.line({fmt17(tr.t[k]), "mass_r=" + fmt17(r), fmt17(tr.masses[k].unnormalized)});
        out.measured("total_variation_r=" + fmt17(r), tr.total_variation);
        out.measured("theta_r=" + fmt17(r), theta);
    }
    out.finish();
    return 0;
}

int run_monotonicity(const Scenario& s, std::ostream&) {
    FieldPtr g = parse_metric(s.get("metric", "schwarzschild-lo{m=1}"), s.dim);
    BumpProfile phi = parse_phi(s);
    MonotonicityOptions mo;
    mo.eta = s.num("eta", 0.5);
    mo.tau = s.num("tau", declared_tau(s.get("metric", "schwarzschild-lo{m=1}"), s.dim));
    mo.N = s.integer("radial", mo.N);
    Output out(s, {"r[length]", "r_prime[length]", "dM[length^(n-2)]", "fitted_c[length^(-eta)]"});
    for (double r : s.list("r", {20.0})) {
        std::vector<double> rp = s.list("r2", {1.1 * r / 0.9 * (1 + 1e-9), 2 * r, 5 * r, 10 * r});
        MonotonicityResult res = monotonicity_experiment(g, r, rp, phi, mo);
        for (std::size_t k = 0; k < res.r_prime.size(); ++k)
            out.row({r, res.r_prime[k], res.dM[k], res.fitted_c});
        out.measured("fitted_c_r=" + fmt17(r), res.fitted_c);
        out.measured("power", res.power);
    }
    out.finish();
    return 0;
}

int run_finiteness(const Scenario& s, std::ostream&) {
    FieldPtr g = parse_metric(s.get("metric", "schwarzschild-lo{m=1}"), s.dim);
    FinitenessOptions fo;
    fo.eta = s.num("eta", 0.5);
    fo.N = s.integer("radial", fo.N);
    FinitenessResult res = finiteness_experiment(g, s.list("r", {40.0, 80.0, 160.0}), fo);
    Output out(s, {"r_k[length]", "r_prime[length]", "integral_R[length^(n-2)]"});
    for (std::size_t k = 0; k < res.r_k.size(); ++k)
        for (std::size_t j = 0; j < res.integrals[k].size(); ++j)
            out.row({res.r_k[k], 1.1 / 0.9 * res.r_k[k] * fo.rprime_factors[j], res.integrals[k][j]});
    out.measured("bounded_decreasing", res.bounded_decreasing ? "true" : "false");
    out.measured("growth_flagged", res.growth_flagged ? "true" : "false");
    out.finish();
    return 0;
}

int run_glue(const Scenario& s, std::ostream&) {
    SmoothMap F = parse_map(s.get("map", "isometry{seed=1,shift=0}"), s.dim);
    double r = s.num("r", 1.0);
    int samples = s.integer("samples", 200);
    GluedMap G = glue_to_isometry(F, r, s.get("delta-report", "true") == "true" ? 400 : 0, s.seed);
    std::vector<std::string> head;
    const int n = s.dim;
    for (const char* p : {"x", "F", "Ftilde"})
        for (int i = 0; i < n; ++i) head.push_back(std::string(p) + std::to_string(i) + "[length]");
    head.push_back("pullback_deviation[1]");
    Output out(s, head);
    for (const Vec& x : halton_annulus(n, 0.0, 11.0 * r, samples, static_cast<int>(s.seed))) {
        std::vector<double> row;
        Vec fx = F(x), gx = G.map(x);
        for (int i = 0; i < n; ++i) row.push_back(x(i));
        for (int i = 0; i < n; ++i) row.push_back(fx(i));
        for (int i = 0; i < n; ++i) row.push_back(gx(i));
        row.push_back(pullback_deviation(G.map, {x}));
        out.row(row);
    }
    out.measured("sup_pullback_deviation", G.sup_pullback_deviation);
    out.finish();
    return 0;
}

}  // namespace

std::string Scenario::get(const std::string& k, const std::string& dflt) const {
    auto it = params.find(k);
    return it == params.end() ? dflt : it->second;
}

double Scenario::num(const std::string& k, double dflt) const {
    return has(k) ? to_double(k, get(k, "")) : dflt;
}

int Scenario::integer(const std::string& k, int dflt) const {
    if (!has(k)) return dflt;
    double v = num(k, dflt);
    if (v != std::floor(v)) throw ConfigError("parameter '" + k + "': expected an integer");
    return static_cast<int>(v);
}

std::vector<double> Scenario::list(const std::string& k, const std::vector<double>& dflt) const {
    if (!has(k)) return dflt;
    std::vector<double> out;
    for (const auto& p : split_top(get(k, ""), ',')) out.push_back(to_double(k, p));
    return out;
}

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> v = {"mass",         "testfn",     "flow", "distortion",
                                               "monotonicity", "finiteness", "glue"};
    return v;
}

void parse_config(std::istream& in, Scenario& base) {
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(no) + ": expected 'key = value'");
        std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
        if (k.empty()) throw ConfigError("line " + std::to_string(no) + ": empty key");
        if (v.empty()) throw ConfigError("line " + std::to_string(no) + ": empty value for '" + k + "'");
        base.params[k] = v;
        base.line_of[k] = no;
    }
}

void parse_config_file(const std::string& path, Scenario& base) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config '" + path + "'");
    parse_config(f, base);
}

void validate(Scenario& s) {
    auto where = [&](const std::string& k) {
        auto it = s.line_of.find(k);
        return (it != s.line_of.end() && it->second > 0) ? "line " + std::to_string(it->second) + ": " : "";
    };
    if (!s.has("scenario")) throw ConfigError("missing required key 'scenario'");
    s.name = s.get("scenario", "");
    const auto& allowed = allowed_keys();
    if (!allowed.count(s.name)) throw ConfigError(where("scenario") + "unknown scenario '" + s.name + "'");
    if (!s.has("dim")) throw ConfigError("missing required key 'dim'");
    s.dim = s.integer("dim", 0);
    if (s.dim < 3 || s.dim > kMaxDim) throw ConfigError(where("dim") + "dim must lie in [3, 5]");
    s.seed = static_cast<unsigned>(s.integer("seed", 1));
    s.out = s.get("out", "");
    for (const auto& [k, v] : s.params) {
        if (k == "scenario" || k == "dim" || k == "seed" || k == "out") continue;
        if (!allowed.at(s.name).count(k))
            throw ConfigError(where(k) + "key '" + k + "' is not a parameter of scenario '" + s.name + "'");
    }
    auto positive = [&](const std::string& k) {
        if (s.has(k))
            for (double v : s.list(k, {}))
                if (!(v > 0.0)) throw ConfigError(where(k) + "'" + k + "' must be positive");
    };
    for (const char* k : {"r", "r2", "T", "L", "theta", "eta", "grid", "radial", "cells", "samples", "stride",
                          "quad-radial", "quad-sph", "eps"})
        positive(k);
    if (s.has("dt") && s.num("dt", 0.0) < 0.0) throw ConfigError(where("dt") + "'dt' must be nonnegative");
    if (s.has("phi")) parse_phi(s);
    if (s.has("normalization")) {
        double c = 1.0;
        try {
            parse_normalization(s.get("normalization", ""), c);
        } catch (const Error& e) {
            throw ConfigError(where("normalization") + e.what());
        }
    }
    if (s.has("metric")) {
        try {
            parse_metric(s.get("metric", ""), s.dim);
        } catch (const Error& e) {
            throw ConfigError(where("metric") + e.what());
        }
    }
    if (s.has("map")) {
        try {
            parse_map(s.get("map", ""), s.dim);
        } catch (const Error& e) {
            throw ConfigError(where("map") + e.what());
        }
    }
    if (s.name == "testfn" && s.has("theta")) {
        BumpProfile phi = parse_phi(s);
        if (s.num("theta", 0.0) > theta_bar(phi, s.dim))
            throw ConfigError(where("theta") + "theta exceeds the admissible horizon d_{a,b}^2/(2n) = " +
                              fmt17(theta_bar(phi, s.dim)));
    }
    if (s.name == "monotonicity") {
        double tau = s.has("tau") ? s.num("tau", 0.0) : declared_tau(s.get("metric", "schwarzschild-lo{m=1}"), s.dim);
        if (!(tau > 0.5 * (s.dim - 2)))
            throw ConfigError(where(s.has("tau") ? "tau" : "metric") +
                              "decay rate violates the condition tau > (n-2)/2 (tau = " + fmt17(tau) + ")");
        for (double r : s.list("r", {20.0}))
            for (double rp : s.list("r2", {}))
                if (rp < 1.1 * r / 0.9 || rp > 10.0 * r)
                    throw ConfigError(where("r2") + "r' must lie in [1.1 r/.9, 10 r]");
    }
    if (s.name == "flow" && s.has("grid") && s.has("radial"))
        throw ConfigError(where("radial") + "choose one of 'grid' and 'radial'");
    if (s.name == "flow" && s.has("beta")) {
        double b = s.num("beta", 0.0);
        if (!(b > 0.0 && b < 0.5)) throw ConfigError(where("beta") + "beta must lie in (0, 1/2)");
    }
    if (s.name == "glue" && !s.has("map")) throw ConfigError("missing required key 'map'");
}

FieldPtr parse_metric(const std::string& spec, int n) {
    Spec sp = parse_spec(spec);
    if (sp.name == "flat") return make_flat(n);
    if (sp.name == "schwarzschild") return make_schwarzschild_isotropic(n, arg(sp, "m", 1.0));
    if (sp.name == "schwarzschild-lo") return make_schwarzschild_leading(n, arg(sp, "m", 1.0));
    if (sp.name == "powerlaw") {
        double tau = arg(sp, "tau", 1.0);
        if (!(tau > 0.0)) throw ConfigError("powerlaw: tau must be positive");
        return make_power_decay(n, arg(sp, "c", 0.1), tau);
    }
    if (sp.name == "conformal") {
        double c = arg(sp, "c", 0.5), tau = arg(sp, "tau", 1.0);
        return make_conformal(
            n, [c, tau](const Vec& x) { return c * std::pow(1.0 + x.squaredNorm(), -0.5 * tau); }, spec);
    }
    if (sp.name == "radial") {
        double a = arg(sp, "a", 0.5), b = arg(sp, "b", 0.25), tau = arg(sp, "tau", 1.0);
        return make_radial(
            n, [a, tau](double l) { return a * std::pow(1.0 + l * l, -0.5 * tau); },
            [b, tau](double l) { return b * std::pow(1.0 + l * l, -0.5 * tau); }, spec);
    }
    if (sp.name == "grid") {
        auto g = GridField::load(trim(sp.text));
        if (g->dim() != n) throw ConfigError("grid file dimension does not match dim");
        return g;
    }
    throw ConfigError("unknown metric '" + sp.name + "'");
}

SmoothMap parse_map(const std::string& spec, int n) {
    Spec sp = parse_spec(spec);
    if (sp.name == "isometry" || sp.name == "perturbed-isometry") {
        EuclideanIsometry L;
        L.O = random_rotation(n, static_cast<unsigned>(arg(sp, "seed", 1)));
        L.v = Vec::Constant(n, arg(sp, "shift", 0.0) / std::sqrt(double(n)));
        if (sp.name == "isometry") return L.as_map();
        double eps = arg(sp, "eps", 1e-3), R = arg(sp, "bump", 0.5);
        SmoothMap m;
        m.n = n;
        m.name = spec;
        // L(x + eps b(|x|/R) e_1), b supported in the unit ball
        m.f = [L, eps, R, n](const Vec& x) {
            double s = x.norm() / R;
            double b = s < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s * s)) : 0.0;
            return L(x + eps * b * unit_vector(n, 0));
        };
        return m;
    }
    if (sp.name == "synthetic-transition") {
        double tau = arg(sp, "tau", 1.0), c = arg(sp, "c", 0.01);
        SmoothMap m;
        m.n = n;
        m.name = spec;
        // radial stretch x (1 + c (1 + |x|^2)^{-tau/2})
        m.f = [tau, c](const Vec& x) { return (x * (1.0 + c * std::pow(1.0 + x.squaredNorm(), -0.5 * tau))).eval(); };
        return m;
    }
    throw ConfigError("unknown map '" + sp.name + "'");
}

int run_scenario(const Scenario& s, std::ostream& log) {
    if (s.name == "mass") return run_mass(s, log);
    if (s.name == "testfn") return run_testfn(s, log);
    if (s.name == "flow") return run_flow(s, log);
    if (s.name == "distortion") return run_distortion(s, log);
    if (s.name == "monotonicity") return run_monotonicity(s, log);
    if (s.name == "finiteness") return run_finiteness(s, log);
    if (s.name == "glue") return run_glue(s, log);
    throw ConfigError("unknown scenario '" + s.name + "'");
}

}  // namespace c0m
