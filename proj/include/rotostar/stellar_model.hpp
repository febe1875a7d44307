#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rotostar/eos.hpp"
#include "rotostar/numerics.hpp"
#include "rotostar/polytrope.hpp"

namespace rotostar {

// Which discriminant formula to evaluate; see README for the unit discussion.
enum class DiscriminantForm { Entropy, Literal };

// Local equilibrium state. Vector components are (r, theta) in spherical coordinates, theta polar.
struct ModelPoint {
    double rho = 0.0, P = 0.0, Upsilon = 0.0, Phi = 0.0;
    double dUps_drho = 0.0;  // dUpsilon/drho, equals gamma P / rho^2 when isentropic
    Eigen::Vector2d grad_rho = Eigen::Vector2d::Zero();
    Eigen::Vector2d grad_P = Eigen::Vector2d::Zero();
    Eigen::Vector2d grad_Ups = Eigen::Vector2d::Zero();
    Eigen::Vector2d grad_Phi = Eigen::Vector2d::Zero();
    double A = 0.0;   // Schwarzschild discriminant
    double N2 = 0.0;  // squared buoyancy frequency
    bool inside = false;
};

// Equilibrium tables on a (radius x zeta) product grid.
struct FieldTables {
    std::vector<double> r;
    std::vector<double> zeta;
    Mat rho, P, Upsilon, Phi, A, N2;
};

struct StellarModel {
    EquationOfState eos;
    double rho_O = 1.0;
    double G = 1.0;
    double Upsilon_O = 0.0;
    double rho_scale = 0.0;  // isentropic density at Upsilon_O; g = rho / rho_scale in the shape equation
    double a_scale = 0.0;
    bool isentropic = true;
    bool spherical = true;
    RotationProfile rotation;
    DiscriminantForm discriminant = DiscriminantForm::Entropy;

    std::shared_ptr<const LaneEmdenSolution> le;
    std::shared_ptr<const DistortedSolution> distorted;
    // Dimensionless potential K[g] on the distorted mesh (rotating case).
    Mat K_table;
    // Spherical enclosed mass m(r) and potential on a fine radial table (Hermite).
    std::vector<double> mass_r, mass_m, mass_dm, phi_tab;

    FieldTables tables;

    // Inputs kept so the model can be rebuilt from a saved directory.
    double le_tol = 1e-12;
    DistortedOptions build_opts;

    double radius(double zeta = 0.0) const;
    double radius_slope(double zeta = 0.0) const;  // dR/dzeta
    double R_equator() const { return radius(0.0); }
    double R_max() const;
    double enclosed_mass(double r) const;
    double total_mass() const { return enclosed_mass(radius()); }
    ModelPoint sample(double r, double zeta, bool with_potential = true) const;
    double Phi_center() const;
    // -(gamma P / rho^2) bounds and nu_* = inf gamma P / rho^2 on the support (spherical)
    double nu_star() const;
};

StellarModel build_spherical_model(const EquationOfState& eos, double rho_O, double G,
                                   const std::vector<double>& r_table = {}, double le_tol = 1e-12);

StellarModel build_rotating_model(const EquationOfState& eos, double rho_O, double G,
                                  const RotationProfile& rotation, const DistortedOptions& opts = {},
                                  const std::vector<double>& r_table = {},
                                  const std::vector<double>& zeta_table = {});

// Shape scales shared by both builders.
struct ModelScales {
    double Upsilon_O, rho_scale, a_scale;
};
ModelScales model_scales(const EquationOfState& eos, double rho_O, double G);

// Fill model.tables on the given grid.
void tabulate(StellarModel& model, const std::vector<double>& r, const std::vector<double>& zeta);

// Hydrostatic residual max |grad P / rho + grad Phi - grad B| / |grad P / rho| at interior table nodes.
double hydrostatic_residual(const StellarModel& model);
// Bernoulli residual max |Upsilon + Phi - B - (Upsilon_O + Phi(O))| / Upsilon_O at interior nodes.
double bernoulli_residual(const StellarModel& model);

struct DiscriminantFields {
    Mat A, N2;
};
DiscriminantFields discriminant_and_buoyancy(const StellarModel& model);

// Per-ray sampled profile used by the admissibility checks.
struct RayProfile {
    double zeta = 0.0;
    double R = 0.0;
    std::vector<double> r, rho, P, drho_dr, dP_dr;
};

struct AdmissibilityItem {
    std::string name;
    bool pass = false;
    double witness = 0.0;
    std::string note;
};

struct AdmissibilityReport {
    std::vector<AdmissibilityItem> items;
    double fitted_C = 0.0;
    double boundary_slope = 0.0;    // inward slope of rho^(gamma-1) at the equator
    double reference_slope = 0.0;   // rho_scale^(gamma-1) Upsilon_O |theta'(xi1)| / (Upsilon_O a) style scaling
    bool all_pass() const;
};

AdmissibilityReport check_admissible(const StellarModel& model, int rays = 5, int samples = 200);
AdmissibilityReport check_admissible_profiles(const std::vector<RayProfile>& rays, double gamma,
                                              const EquationOfState* eos = nullptr);

}  // namespace rotostar
