#pragma once

#include <functional>
#include <vector>

#include "rotostar/numerics.hpp"

namespace rotostar {

// Azimuthal integral of 1/|x - x'| over the relative angle.
double kernel_K(double r, double zeta, double r2, double zeta2, double tol = 1e-13);

// Truncated multipole series of kernel_K, sum_l 2 pi r_<^l / r_>^(l+1) P_l P_l.
double kernel_K_series(double r, double zeta, double r2, double zeta2, int lmax);

struct LegendreBasis {
    int lmax = 0;
    std::vector<double> zeta;
    std::vector<double> w;
    Mat P;  // (lmax+1) x nodes

    static LegendreBasis build(int n_nodes);
    int size() const { return static_cast<int>(zeta.size()); }
};

// Channels f_l(r) of an axisymmetric field f(r, zeta) = sum_l f_l(r) P_l(zeta).
struct RadialField {
    std::vector<double> r;
    Mat values;  // (lmax+1) x nr
};

// field: nr x n_zeta samples on the basis nodes.
RadialField legendre_decompose(const std::vector<double>& r, const Mat& field, const LegendreBasis& basis);
Mat legendre_reconstruct(const RadialField& channels, const LegendreBasis& basis);

// k_l(r, s) = r_<^l / r_>^(l+1)
inline double multipole_kernel(int ell, double r, double s) {
    const double lo = r < s ? r : s, hi = r < s ? s : r;
    double v = 1.0 / hi;
    const double q = lo / hi;
    for (int k = 0; k < ell; ++k) v *= q;
    return v;
}

// H_l[g](r) = (1/(2l+1)) int_0^R k_l(r, s) g(s) s^2 ds by adaptive quadrature.
double hankel_integral(const std::function<double(double)>& g, int ell, double R, double r,
                       double tol = 1e-14);

// Product-integration matrix T[t][i] = int_0^1 k_l(rho_t, s) L_i(s) s^2 ds for the Lagrange basis
// of `nodes` in (0, 1). Targets rho_t may lie outside [0, 1].
Mat hankel_matrix(const std::vector<double>& nodes, int ell, const std::vector<double>& targets);

// Channel potential Psi = -H_l[g] for g sampled at R * nodes (nodes in (0,1)), evaluated at radii r_eval.
Vec hankel_potential(const std::vector<double>& nodes, double R, const Vec& g, int ell,
                     const std::vector<double>& r_eval);

// Per-interval quadrature of a ray: points s and weights already multiplied by the density.
struct RayQuadrature {
    std::vector<std::vector<double>> s;
    std::vector<std::vector<double>> wg;
};

RayQuadrature ray_quadrature_smooth(const PanelMesh& mesh, const double* values, const QuadRule& rule);

// K[g] = (1/4 pi) int g / |x - x'| at (mesh node, zeta node) from per-ray quadratures.
Mat potential_from_rays(const std::vector<double>& r_nodes, const LegendreBasis& basis,
                        const std::vector<RayQuadrature>& rays);

// K[g] for g sampled at (mesh nodes x basis nodes); g must vanish near the end of the mesh.
Mat solve_potential_axisym(const Mat& g, const PanelMesh& mesh, const LegendreBasis& basis,
                           int fine_points = 8);

}  // namespace rotostar
