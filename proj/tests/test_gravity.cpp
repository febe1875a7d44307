#include "doctest.h"

#include <cmath>
#include <random>

#include "rotostar/gravity.hpp"
#include "rotostar/numerics.hpp"

using namespace rotostar;

TEST_CASE("azimuthal kernel matches the multipole series") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        const double r = 0.2 + u(rng), ratio = 0.8 * u(rng);
        const double z1 = 2.0 * u(rng) - 1.0, z2 = 2.0 * u(rng) - 1.0;
        const double a = kernel_K(r, z1, ratio * r, z2), b = kernel_K_series(r, z1, ratio * r, z2, 100);
        worst = std::max(worst, std::abs(a - b) / std::abs(b));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("degree-0 potential of the uniform ball") {
    // H_0[1](r) = R^2/2 - r^2/6 inside.
    const double R = 1.7;
    for (double r : {0.0, 0.4, 1.1, 1.7}) {
        const double h = hankel_integral([](double) { return 1.0; }, 0, R, r);
        CHECK(h == doctest::Approx(R * R / 2.0 - r * r / 6.0).epsilon(1e-12));
    }
    // outside: M / (4 pi r) with M = 4 pi R^3 / 3
    CHECK(hankel_integral([](double) { return 1.0; }, 0, R, 3.0) == doctest::Approx(R * R * R / 9.0).epsilon(1e-12));
}

TEST_CASE("product-integration matrix agrees with adaptive quadrature") {
    const QuadRule q = map_rule(gauss_legendre(14), 0.0, 1.0);
    auto g = [](double s) { return 1.0 - 2.0 * s * s + 0.5 * std::pow(s, 5); };
    Vec gv(14);
    for (int i = 0; i < 14; ++i) gv(i) = g(q.x[i]);
    const std::vector<double> t{0.05, 0.5, 0.93, 1.0, 1.6};
    for (int ell : {0, 1, 2, 5}) {
        const Mat T = hankel_matrix(q.x, ell, t);
        const Vec v = T * gv;
        for (std::size_t k = 0; k < t.size(); ++k) {
            const double ref = (2 * ell + 1) * hankel_integral(g, ell, 1.0, t[k]);
            CHECK(v(k) == doctest::Approx(ref).epsilon(1e-11));
        }
    }
}

TEST_CASE("channel potential is minus the scaled integral") {
    const QuadRule q = map_rule(gauss_legendre(12), 0.0, 1.0);
    const double R = 2.0;
    Vec g(12);
    for (int i = 0; i < 12; ++i) g(i) = q.x[i] * q.x[i];
    const Vec psi = hankel_potential(q.x, R, g, 2, {0.7, 2.0, 3.0});
    auto gr = [R](double r) { return (r / R) * (r / R); };
    CHECK(psi(0) == doctest::Approx(-hankel_integral(gr, 2, R, 0.7)).epsilon(1e-11));
    CHECK(psi(2) == doctest::Approx(-hankel_integral(gr, 2, R, 3.0)).epsilon(1e-11));
}

TEST_CASE("axisymmetric solver reproduces a spherical potential") {
    const double R = 1.3;
    auto gf = [R](double r) { return r < R ? std::pow(1.0 - r * r / (R * R), 2) : 0.0; };
    const PanelMesh mesh = PanelMesh::build(2.0 * R, 96, 8);
    const LegendreBasis basis = LegendreBasis::build(8);
    Mat g(mesh.nodes.size(), basis.size());
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) g.row(i).setConstant(gf(mesh.nodes[i]));
    const Mat K = solve_potential_axisym(g, mesh, basis);
    double worst = 0.0;
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        const double ref = hankel_integral(gf, 0, R, mesh.nodes[i]);
        for (int j = 0; j < basis.size(); ++j) worst = std::max(worst, std::abs(K(i, j) - ref));
    }
    CHECK(worst <= 1e-10);
}
