#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "c0mass/geometry.hpp"
#include "c0mass/parallel.hpp"
#include "c0mass/quadrature.hpp"
#include "c0mass/testfn.hpp"

namespace c0m {

enum class Normalization { Standard, Unit, Custom };

struct MassOptions {
    int radial_order = 32;
    int sphere_degree = 23;
    Normalization norm = Normalization::Standard;
    double custom_constant = 1.0;
    std::optional<Mat> rotation;   // rotate the spherical rule by O
    DerivativeStencil stencil{};
    Exec exec = Exec::Parallel;
};

struct MassReport {
    double raw_volume = 0.0;
    double raw_boundary = 0.0;
    double unnormalized = 0.0;
    double normalized = 0.0;
    double constant = 0.0;
    double r = 0.0;
    std::string phi_id;
};

double normalization_constant(int n, const MassOptions& opt);
Normalization parse_normalization(const std::string& s, double& custom);

// unnormalized surface integral of (d_i h_ij - d_j h_ii) nu^j over S(r)
double local_mass_c2(const MetricField& g, double r, const MassOptions& opt = {});

MassReport c0_local_mass(const MetricField& g, const RadialWeight& phi, double r,
                         const MassOptions& opt = {});
MassReport c0_local_mass(const MetricField& g, const BumpProfile& phi, double r,
                         const MassOptions& opt = {});

double weighted_average_mass(const MetricField& g, const RadialWeight& phi, double r,
                             const MassOptions& opt = {});

struct AdmLimit {
    std::vector<double> radii;
    std::vector<MassReport> reports;
    std::vector<double> increments;     // of the unnormalized values
    std::vector<double> corrected;      // increments minus the fitted correction series
    double correction_c = 0.0;
    double correction_power = 0.0;
    bool divergent = false;
    bool converged = false;
    double limit_unnormalized = 0.0;    // +inf when divergent
    double limit_normalized = 0.0;
};

// phi_for_radius supplies the terminal-time weight phi_{theta(r)}(., 0) per radius
AdmLimit adm_limit_extract(const MetricField& g,
                           const std::function<RadialWeight(double)>& phi_for_radius,
                           const std::vector<double>& radii, double eta, double tau,
                           const MassOptions& opt = {});

}  // namespace c0m
