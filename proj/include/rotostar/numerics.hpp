#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace rotostar {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

struct QuadRule {
    std::vector<double> x;
    std::vector<double> w;
    std::size_t size() const { return x.size(); }
};

// Reference rules live on [-1, 1].
QuadRule gauss_legendre(int n);
QuadRule gauss_lobatto(int n);
// Weight (1-x)^alpha (1+x)^beta.
QuadRule gauss_jacobi(int n, double alpha, double beta);
QuadRule map_rule(const QuadRule& ref, double a, double b);

double legendre_p(int l, double x);
// Rows l = m .. m+count-1 of the [-1,1]-orthonormal associated Legendre functions.
Mat assoc_legendre_table(int m, int count, const std::vector<double>& x);
Vec assoc_legendre_column(int m, int count, double x);

std::vector<double> barycentric_weights(const std::vector<double>& nodes);
// Lagrange basis values l_k(x) for the given nodes.
Vec lagrange_basis(const std::vector<double>& nodes, const std::vector<double>& bw, double x);
Vec lagrange_basis_deriv(const std::vector<double>& nodes, const std::vector<double>& bw, double x);
Mat differentiation_matrix(const std::vector<double>& nodes);
// Derivative at `nodes` of the interpolant through (nodes, f) and (zeros, 0).
Mat augmented_differentiation(const std::vector<double>& nodes, const std::vector<double>& zeros);
Mat interpolation_matrix(const std::vector<double>& nodes, const std::vector<double>& targets);

// Adaptive Gauss-Kronrod (7/15).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-13, double rel_tol = 1e-13, int max_depth = 60);

double brent_root(const std::function<double(double)>& f, double a, double b, double tol = 1e-14,
                  int max_iter = 200);

// Orthonormal basis of {x : c^T x = 0}.
Mat null_space_of_row(const Vec& c);

// Composite Gauss-Lobatto panels on [0, r_max].
struct PanelMesh {
    int order = 8;
    std::vector<double> nodes;
    std::vector<double> breaks;
    std::vector<double> ref_bw;
    std::vector<double> ref_x;

    static PanelMesh build(double r_max, int n_target, int order);
    int panel_of(double r) const;
    int n_panels() const { return static_cast<int>(breaks.size()) - 1; }
    // Interpolate nodal values (stride 1) at r inside the mesh.
    double interp(const double* values, double r) const;
    double interp_deriv(const double* values, double r) const;
};

}  // namespace rotostar
