#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "c0mass/types.hpp"

namespace c0m {

enum class DomainKind { Full, Annulus, BallComplement };

struct Domain {
    DomainKind kind = DomainKind::Full;
    double r_in = 0.0;
    double r_out = std::numeric_limits<double>::infinity();

    static Domain full() { return {}; }
    static Domain annulus(double a, double b) { return {DomainKind::Annulus, a, b}; }
    static Domain ball_complement(double r) {
        return {DomainKind::BallComplement, r, std::numeric_limits<double>::infinity()};
    }
    bool contains_radius(double l) const;
    bool contains(const Vec& x) const { return contains_radius(x.norm()); }
};

enum class EvaluatorKind { ClosedForm, RadialProfile, Grid };

struct DerivativeStencil {
    enum class Fallback { OneSided, Error };
    int order = 4;              // 2 or 4
    double spacing = 0.0;       // absolute step; 0 selects rel_spacing * max(1, |x|)
    double rel_spacing = 1e-2;
    Fallback fallback = Fallback::OneSided;

    double step_at(const Vec& x) const;
};

// Finite-difference weights (Fornberg) for derivative order m at z=0 over the
// given integer offsets; multiply by step^-m.
std::vector<double> fd_weights(int m, const std::vector<double>& offsets);

class MetricField {
public:
    MetricField(int n, Domain dom, std::string name)
        : n_(n), dom_(dom), name_(std::move(name)) {}
    virtual ~MetricField() = default;

    int dim() const { return n_; }
    const Domain& domain() const { return dom_; }
    const std::string& name() const { return name_; }

    virtual EvaluatorKind kind() const = 0;
    // h = g - delta at x, no validation
    virtual Mat h(const Vec& x) const = 0;
    virtual Jet jet(const Vec& x, const DerivativeStencil& st, int max_order = 2) const;

protected:
    int n_;
    Domain dom_;
    std::string name_;
};

using FieldPtr = std::shared_ptr<const MetricField>;
using HFunction = std::function<Mat(const Vec&)>;
using ScalarFn = std::function<double(double)>;

// nested central differences of an arbitrary h(x), one-sided near the domain edge
Jet fd_jet(int n, const HFunction& hfun, const Vec& x, const DerivativeStencil& st,
           const Domain& dom, int max_order);

// exact chain rule for h = beta*delta + alpha * (x/|x|)(x/|x|)^T
Jet radial_jet(int n, const Vec& x, double alpha, double dalpha, double ddalpha,
               double beta, double dbeta, double ddbeta);

class ClosedFormField : public MetricField {
public:
    ClosedFormField(int n, Domain dom, std::string name, HFunction h)
        : MetricField(n, dom, std::move(name)), h_(std::move(h)) {}
    EvaluatorKind kind() const override { return EvaluatorKind::ClosedForm; }
    Mat h(const Vec& x) const override { return h_(x); }

private:
    HFunction h_;
};

// g = a dr^2 + b l^2 g_S, stored through A = a - 1 and B = b - 1
class RadialProfileField : public MetricField {
public:
    RadialProfileField(int n, Domain dom, std::string name, ScalarFn A, ScalarFn B)
        : MetricField(n, dom, std::move(name)), A_(std::move(A)), B_(std::move(B)) {}
    EvaluatorKind kind() const override { return EvaluatorKind::RadialProfile; }
    Mat h(const Vec& x) const override;
    Jet jet(const Vec& x, const DerivativeStencil& st, int max_order = 2) const override;
    double A(double l) const { return A_(l); }
    double B(double l) const { return B_(l); }

private:
    ScalarFn A_, B_;
};

// Samples of the n(n+1)/2 components on a uniform box lattice.
class GridField : public MetricField {
public:
    GridField(int n, int points, double lo, double spacing, std::vector<std::vector<double>> comps,
              std::string name = "grid");
    EvaluatorKind kind() const override { return EvaluatorKind::Grid; }
    Mat h(const Vec& x) const override;
    Jet jet(const Vec& x, const DerivativeStencil& st, int max_order = 2) const override;
    Jet node_jet(const std::vector<int>& idx, int order, DerivativeStencil::Fallback fb) const;

    int points() const { return N_; }
    double lo() const { return lo_; }
    double spacing() const { return dx_; }
    const std::vector<std::vector<double>>& components() const { return comps_; }
    double sample(int comp, const std::vector<int>& idx) const;

    void save(const std::string& path) const;
    static std::shared_ptr<GridField> load(const std::string& path);

private:
    int N_;
    double lo_, dx_;
    std::vector<std::vector<double>> comps_;
};

int component_index(int n, int i, int j);
int component_count(int n);

// closed-form families
FieldPtr make_flat(int n);
FieldPtr make_schwarzschild_leading(int n, double m);    // h = 2m|x|^{2-n} delta
FieldPtr make_schwarzschild_isotropic(int n, double m);  // (1 + m/(2|x|^{n-2}))^{4/(n-2)} delta
FieldPtr make_power_decay(int n, double c, double tau);  // h = c |x|^{-tau} delta
// g = e^{2f} delta
FieldPtr make_conformal(int n, std::function<double(const Vec&)> f, std::string name);
FieldPtr make_radial(int n, ScalarFn A, ScalarFn B, std::string name, Domain dom = Domain::full());
FieldPtr make_constant(int n, const Mat& h);
// (O^*g)(x) = O^T g(Ox) O
FieldPtr make_rotated(FieldPtr g, const Mat& O);
// (T^*g)(x) = g(x + v)
FieldPtr make_translated(FieldPtr g, const Vec& v);
FieldPtr make_scaled_pullback(FieldPtr g, double lambda);  // x -> lambda x
FieldPtr make_sum(FieldPtr a, FieldPtr b);
FieldPtr make_amplified(FieldPtr g, double s);             // h -> s h

// validated evaluation
Mat eval_metric(const MetricField& f, const Vec& x);
// lazy positive-definiteness audit at the given points, throws on failure
void check_positive_definite(const MetricField& f, const std::vector<Vec>& pts);

// Christoffel symbols: G[k](i,j) = Gamma^k_ij
std::array<Mat, kMaxDim> christoffels(const Jet& j);
std::array<Mat, kMaxDim> christoffels(const MetricField& f, const Vec& x,
                                      const DerivativeStencil& st = {});

struct ScalarSplit {
    double linear = 0.0;
    double quadratic = 0.0;  // Q^R
    double bound_ratio = 0.0;  // |Q^R| / (|h||d2h| + |dh|^2)
};

double scalar_curvature(const Jet& j);
ScalarSplit scalar_curvature_split(const Jet& j);
double scalar_curvature(const MetricField& f, const Vec& x, const DerivativeStencil& st = {});
ScalarSplit scalar_curvature_split(const MetricField& f, const Vec& x,
                                   const DerivativeStencil& st = {});

}  // namespace c0m
