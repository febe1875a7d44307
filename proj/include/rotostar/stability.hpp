#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rotostar/numerics.hpp"
#include "rotostar/operators.hpp"
#include "rotostar/stellar_model.hpp"

namespace rotostar {

// inf over (0, R) of -(3 gamma - 4) Upsilon'(r) / r, spherical models.
double delta_star(const StellarModel& model, int samples = 4000);

// Smallest value of int (1/rho)|psi'|^2 r^2 / int |psi|^2 r^2 over psi(R) = 0.
// Solved in the variable u = -psi'/rho, so the 1/rho weight never appears in a quadrature.
double mu0_estimate(const StellarModel& model, int n = 48);
double mu0_estimate_profile(const std::function<double(double)>& rho, double R, int n = 48);

// Quadratic forms of the seminorms on the velocity space of a spherical set: n(u)^2 = u^H N u.
struct SeminormGrams {
    CMat n1, n10, n2;
    Mat g_n1, g_n10;  // the same forms acting on g = div(rho u)
    double mu0 = 0.0, mu1 = 0.0;
    std::vector<int> channels;  // degrees resolved by the grid
};
SeminormGrams seminorm_grams(const StellarModel& model, const DiscreteOperatorSet& set, double mu0);

enum class SeminormKind { N1, N10, N2 };
double seminorm_eval(SeminormKind kind, const SeminormGrams& grams, const CVec& u);

// int rho |u^r_00|^2 r^2 dr from the radial velocity channel; equals the l = 0 part of n1^2 in the continuum.
double radial_channel_energy(const DiscreteOperatorSet& set, const CVec& u);
// The l = 0 part of n1^2 from the potential channel.
double n1_radial_term(const DiscreteOperatorSet& set, const CVec& u);

struct PD2Result {
    double delta_claim = 0.0;
    double min_quotient = 0.0;  // min of u^H L u / u^H N u over u in range(N)
    int range_dim = 0;
    bool pass = false;
};
PD2Result check_PD2(const DiscreteOperatorSet& set, const CMat& N, double delta_claim, double tol = 1e-8);

struct KStarResult {
    std::vector<int> ell;
    std::vector<double> k_dim, k_nondim;
    double k_star = 0.0, k_star_nondim = 0.0;
    double nu_star = 0.0, C_bound = 0.0;
    bool tail_decreasing = false;
};
// Per-degree suprema of 4 pi G int K[g] g* / int (gamma P / rho^2)|g|^2 on n radial Gauss nodes.
KStarResult compute_k_star(const StellarModel& model, int lmax, int n = 48, bool require_tail = true);

struct ACondition {
    bool pass = false;
    bool sign_ok = false;     // A <= 0 everywhere
    double eps_fitted = 0.0;  // smallest eps with -eps |grad rho| / rho <= A
    std::vector<int> witnesses;
};
ACondition check_A_condition(const DiscreteOperatorSet& set, double eps);

// Counts sampled u violating u^H L u >= (1 - eps) u^H G_seminorm u - 4 pi G (gravity term).
int cowling_bound_violations(const DiscreteOperatorSet& set, double eps, int samples, unsigned seed);

struct Q1Report {
    int ell = 1;
    std::vector<double> S, Q1S_W, Q1S_w;
    double Q1_extrapolated = 0.0;
    double Q1_full = 0.0;  // with the exterior tail
    double scale = 0.0;    // int |grad^(1) w|^2 r^2
    bool pass = false;
};
// Channel potential of g (degree ell) on a grid reaching the largest S; S values are multiples of R.
Q1Report check_Q1_positivity(const StellarModel& model, int ell, const std::function<double(double)>& g,
                             const std::vector<double>& S_over_R, int cells_per_R = 400, double tol = 1e-8);
// Same quadratic form applied to a given w sampled on r_k = k h, k = 1..K (w(0) = 0), exterior tail ~ r^-(l+1).
double Q1_form(const StellarModel& model, const std::vector<double>& r, const std::vector<double>& w, double h,
               int tail_ell);

struct StabilityReport {
    double delta_star = 0.0, mu0 = 0.0, mu1 = 0.0;
    double nu_star = 0.0, C_bound = 0.0;
    KStarResult kstar;
    double pd1_min_quotient = 0.0;
    bool pd1_pass = false;
    std::vector<std::pair<std::string, PD2Result>> pd2;
    double epsilon_A = 0.0;
    BoundConstants bounds;
    std::vector<std::string> notes;
};
// Spherical models get every constant; rotating ones get the form bounds and PD1 only.
StabilityReport build_stability_report(const StellarModel& model, const DiscreteOperatorSet& set, int lmax,
                                       int kstar_n = 48, int mu0_n = 48);

}  // namespace rotostar
