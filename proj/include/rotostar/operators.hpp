#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "rotostar/numerics.hpp"
#include "rotostar/stellar_model.hpp"

namespace rotostar {

struct AxisymOptions {
    int n_s = 12;
    int n_zeta = 8;
    int m = 0;
    bool cowling = false;
    // Allow weights gamma P / rho^2 that are not integrable up to the surface.
    bool allow_singular_weight = false;
};

// Nodes of the mapped grid r = R(zeta) s; node p = j * n_s + i.
struct AxisymGrid {
    int n_s = 0, n_zeta = 0;
    std::vector<double> s, s_w, zeta, zeta_w, R, dR;
    std::vector<double> r, sin_t, weight;  // weight = 2 pi w_j W_i R_j^3 s_i^2
    int size() const { return n_s * n_zeta; }
    int node(int j, int i) const { return j * n_s + i; }
};

// Equilibrium data at the grid nodes.
struct NodeFields {
    Vec rho, P, gPrho2, A, grad_rho_norm, n_r, n_t, dUps_drho;
};

struct DiscreteOperatorSet {
    AxisymGrid grid;
    NodeFields fields;
    int m = 0;
    bool cowling = false;
    double G = 1.0, rho_O = 1.0, Omega = 0.0;
    std::string model_id;

    CMat M, L, B, G_seminorm;
    CMat D;      // div(rho u) at nodes, N x 3N
    Mat C;       // n . u at nodes, N x 3N
    Mat Gram;    // gravity Gram: conj(g)^T Gram g ~ int K[g] conj(g) dx
    Vec W1, Wc, W3;

    int dim() const { return static_cast<int>(M.rows()); }
};

AxisymGrid build_axisym_grid(const StellarModel& model, int n_s, int n_zeta);
NodeFields sample_node_fields(const StellarModel& model, const AxisymGrid& grid);

// div(rho u) in conservative mapped form; integral over the ball vanishes exactly.
CMat divergence_operator(const AxisymGrid& grid, const Vec& rho, int m);

// Gram matrix of int K[g] conj(g) dx by channel product integration (channels l = |m| .. |m|+n_zeta-1).
Mat gravity_gram(const AxisymGrid& grid, int m);

DiscreteOperatorSet assemble_axisym_set(const StellarModel& model, const AxisymOptions& opts);

// Nodewise evaluation of the form; equals v^H L u.
std::complex<double> evaluate_Q0(const DiscreteOperatorSet& set, const CVec& u, const CVec& v);
// Gravity term int K[g] conj(g) dx for g = div(rho u).
double gravity_term(const DiscreteOperatorSet& set, const CVec& u);

struct BoundConstants {
    double kappa1 = 0.0, kappa2 = 0.0, a = 0.0, lower_bound = 0.0;
    double m_star_discrete = 0.0, mu_min = 0.0, beta = 0.0;
};

BoundConstants compute_bounds(const StellarModel& model, const DiscreteOperatorSet& set);

// M^{-1/2} X M^{-1/2} for diagonal positive M.
CMat mass_scaled(const CMat& M, const CMat& X);

// Divergence-free test field built from a discrete stream function.
CVec divergence_free_field(const DiscreteOperatorSet& set, unsigned seed = 1);

// Radial l = 0 form on global Gauss-Legendre nodes in (0, R).
enum class GradientCoefficient { Pressure, Density };
struct RadialForm {
    std::vector<double> r, w;
    Mat K, Mass;
    Vec potential;  // -(3 gamma - 4) Upsilon' / r at nodes
};
RadialForm assemble_radial_ss(const StellarModel& model, int n, GradientCoefficient coef = GradientCoefficient::Pressure);

// Finite-difference channel form on r_k = k h, k = k0..K, over [0, r_inf].
struct QlmForm {
    int ell = 0;
    double h = 0.0, r_inf = 0.0;
    std::vector<double> r, V;
    Mat Grad;   // Psi^T Grad Psi = int |grad^(l) Psi|^2 r^2 dr (with exterior tail)
    Mat Lap;    // discrete Delta^(l) = -V^{-1} Grad
    Vec comp;   // V * dUpsilon/drho inside the support, 0 outside
    Vec drho_dUps_V;  // V * drho/dUpsilon inside the support
    Mat Q;      // Lap^T diag(comp) Lap - 4 pi G Grad
};
QlmForm assemble_Qlm(const StellarModel& model, int ell, int K, double r_inf_factor = 3.0);
// Q value for g sampled on the form's nodes, with a doubled-truncation check.
double Qlm_value(const StellarModel& model, int ell, const std::function<double(double)>& g, int K,
                 double r_inf_factor = 3.0, double tol = 1e-6);

}  // namespace rotostar
