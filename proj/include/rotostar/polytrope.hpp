#pragma once

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "rotostar/numerics.hpp"

namespace rotostar {

struct PolytropicIndex {
    double gamma = 5.0 / 3.0;
    double n = 1.5;

    static PolytropicIndex from_gamma(double gamma);
    // Accepts the analytic test indices n = 0 and n = 1 as well.
    static PolytropicIndex from_n(double n);
};

struct LaneEmdenOptions {
    double xi_max = 1.0e3;
    double max_step = 0.02;
    double series_start = 1.0e-3;
    // Right-hand side h(theta) of -(xi^2 theta')'/xi^2 = h(theta); default (theta v 0)^n.
    std::function<double(double)> source;
};

struct LaneEmdenSolution {
    PolytropicIndex index;
    std::vector<double> xi;
    std::vector<double> theta;
    std::vector<double> dtheta;
    double xi1 = 0.0;
    double dtheta_at_xi1 = 0.0;
    double tol = 0.0;
    bool custom_source = false;
    std::function<double(double)> source;
};

LaneEmdenSolution solve_lane_emden(const PolytropicIndex& index, double tol,
                                   const LaneEmdenOptions& opts = {});

// Value and radial derivative; beyond xi1 the vacuum continuation xi1 theta1' (1 - xi1/xi).
double eval_theta(const LaneEmdenSolution& sol, double xi);
double eval_dtheta(const LaneEmdenSolution& sol, double xi);
double eval_d2theta(const LaneEmdenSolution& sol, double xi);

// Differential rotation omega_b(varpi) = sum c_k varpi^k for varpi < cutoff, zero beyond.
struct RotationProfile {
    double Omega = 0.0;
    std::vector<double> omega_coeffs;
    double omega_cutoff = 0.0;
    double b_amplitude_norm = 0.0;

    double omega_b(double varpi) const;
    bool is_rigid() const { return omega_coeffs.empty(); }
    bool is_static() const { return Omega == 0.0 && omega_coeffs.empty(); }
};

// Sampled centrifugal function b(varpi_hat) = B(a varpi_hat) / Upsilon_O with exact slope.
struct BFunction {
    std::vector<double> x;
    std::vector<double> value;
    std::vector<double> slope;
    double norm1 = 0.0;
    double operator()(double varpi_hat) const;
    double derivative(double varpi_hat) const;
    bool zero() const { return norm1 == 0.0; }
};

// Unnormalized rotation integral B(varpi) = int_0^varpi (Omega + omega_b)^2 s ds.
double rotation_integral(const RotationProfile& profile, double varpi);

BFunction build_b_function(const RotationProfile& profile, double Upsilon_O, double a_scale,
                           double varpi_hat_max, double beta0 = 0.5, int samples = 2001);

struct DistortedOptions {
    int n_xi = 200;
    int n_zeta = 32;
    int panel_order = 8;
    double tol = 1.0e-10;
    int max_iter = 400;
    double relaxation = 1.0;
    int fine_points = 8;
};

struct DistortedSolution {
    PolytropicIndex index;
    BFunction b_fn;
    PanelMesh mesh;
    std::vector<double> zeta;
    std::vector<double> zeta_w;
    Mat Theta;  // rows: radial node, cols: zeta node
    std::vector<double> Xi1;
    double Xi0 = 0.0;
    double xi1_spherical = 0.0;
    int iterations = 0;
    double residual = 0.0;
    double tol = 0.0;
    double Upsilon_O = 1.0;

    double xi_max() const { return mesh.nodes.back(); }
};

using Lambda2Fn = std::function<double(double)>;

DistortedSolution solve_distorted(const PolytropicIndex& index, const BFunction& b_fn,
                                  const Lambda2Fn& lambda2, double Upsilon_O,
                                  const DistortedOptions& opts = {});

// Fixed-point map applied once; used for defect checks at a different quadrature order.
Mat distorted_map(const DistortedSolution& sol, const Lambda2Fn& lambda2, int fine_points);

// K[g] at the mesh nodes for the converged Theta, g = (Theta v 0)^n (1 + Lambda2).
Mat distorted_potential(const DistortedSolution& sol, const Lambda2Fn& lambda2, int fine_points);

std::vector<double> boundary_curve(const DistortedSolution& sol);

// Interpolate a (radial node x zeta node) table; returns {value, d/dxi, d/dzeta}. Inside the mesh only.
std::array<double, 3> interp_table(const DistortedSolution& sol, const Mat& table, double xi, double zeta);

double eval_theta(const DistortedSolution& sol, double xi, double zeta);
// Returns {Theta, dTheta/dxi, dTheta/dzeta}.
std::array<double, 3> eval_theta_grad(const DistortedSolution& sol, double xi, double zeta);
double boundary_at(const DistortedSolution& sol, double zeta);
double boundary_slope_at(const DistortedSolution& sol, double zeta);

}  // namespace rotostar
