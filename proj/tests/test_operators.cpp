#include "doctest.h"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "rotostar/eos.hpp"
#include "rotostar/errors.hpp"
#include "rotostar/operators.hpp"
#include "rotostar/stability.hpp"

using namespace rotostar;

namespace {

const StellarModel& sph() {
    static const StellarModel m = build_spherical_model(build_eos(1.0, 5.0 / 3.0, 1.0, {}), 1.0, 1.0);
    return m;
}

const DiscreteOperatorSet& sph_set() {
    static const DiscreteOperatorSet s = [] {
        AxisymOptions o;
        o.n_s = 10;
        o.n_zeta = 6;
        return assemble_axisym_set(sph(), o);
    }();
    return s;
}

double rel_herm(const CMat& X) { return (X - X.adjoint()).norm() / X.norm(); }

}  // namespace

TEST_CASE("structure of the assembled matrices") {
    const DiscreteOperatorSet& s = sph_set();
    CHECK(rel_herm(s.L) <= 1e-10);
    CHECK(s.B.cwiseAbs().maxCoeff() == 0.0);
    CHECK(rel_herm(s.M) == 0.0);
    CHECK(s.M.diagonal().real().minCoeff() > 0.0);
}

TEST_CASE("gravity Gram of the constant field equals the uniform-ball energy") {
    const DiscreteOperatorSet& s = sph_set();
    const Vec one = Vec::Ones(s.grid.size());
    const double R = sph().radius();
    CHECK(one.dot(s.Gram * one) == doctest::Approx(8.0 * M_PI * std::pow(R, 5) / 15.0).epsilon(1e-12));
}

TEST_CASE("nodewise form agrees with the matrix") {
    const DiscreteOperatorSet& s = sph_set();
    const CVec u = CVec::Random(s.dim()), v = CVec::Random(s.dim());
    const std::complex<double> a = evaluate_Q0(s, u, v), b = v.dot(s.L * u);
    CHECK(std::abs(a - b) <= 1e-10 * std::abs(b));
}

TEST_CASE("divergence of the constructed field vanishes and the divergence integrates to zero") {
    const DiscreteOperatorSet& s = sph_set();
    const CVec u = divergence_free_field(s, 3);
    CHECK((s.D * u).norm() <= 1e-10 * u.norm());
    const CVec w = CVec::Random(s.dim());
    const CVec g = s.D * w;
    std::complex<double> total = 0.0;
    for (int p = 0; p < s.grid.size(); ++p) total += s.grid.weight[p] * g(p);
    CHECK(std::abs(total) <= 1e-10 * g.norm());
}

TEST_CASE("gravity term is bounded by 4 pi rho_O |u|^2") {
    const DiscreteOperatorSet& s = sph_set();
    for (int k = 0; k < 10; ++k) {
        const CVec u = CVec::Random(s.dim());
        const double grav = 4.0 * M_PI * gravity_term(s, u);
        CHECK(grav >= 0.0);
        CHECK(grav <= 4.0 * M_PI * s.rho_O * u.dot(s.M * u).real());
    }
}

TEST_CASE("discrete lower bound on the spectrum of (M, L)") {
    for (double slope : {0.0, 0.05}) {
        const StellarModel m = build_spherical_model(build_eos(1.0, 5.0 / 3.0, 1.0, slope ? std::vector<double>{slope} : std::vector<double>{}), 1.0, 1.0);
        AxisymOptions o;
        o.n_s = 8;
        o.n_zeta = 6;
        const DiscreteOperatorSet s = assemble_axisym_set(m, o);
        const BoundConstants b = compute_bounds(m, s);
        CHECK(b.mu_min >= -b.lower_bound - 1e-8 * std::max(1.0, std::abs(b.mu_min)));
    }
}

TEST_CASE("rotating set: Coriolis matrix is skew with norm 2 Omega") {
    DistortedOptions d;
    d.n_xi = 80;
    d.n_zeta = 12;
    RotationProfile rp;
    rp.Omega = 0.05;
    const StellarModel m = build_rotating_model(build_eos(1.0, 5.0 / 3.0, 1.0, {}), 1.0, 1.0, rp, d);
    for (int mm : {0, 1}) {
        AxisymOptions o;
        o.n_s = 8;
        o.n_zeta = 6;
        o.m = mm;
        const DiscreteOperatorSet s = assemble_axisym_set(m, o);
        CHECK((s.B + s.B.adjoint()).cwiseAbs().maxCoeff() <= 1e-13);
        CHECK(rel_herm(s.L) <= 1e-10);
        const BoundConstants b = compute_bounds(m, s);
        CHECK(b.beta == doctest::Approx(0.1).epsilon(1e-12));
    }
}

TEST_CASE("radial form is coercive above delta*") {
    const double ds = delta_star(sph());
    for (GradientCoefficient c : {GradientCoefficient::Pressure, GradientCoefficient::Density}) {
        const RadialForm f = assemble_radial_ss(sph(), 32, c);
        Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(f.K, f.Mass, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues()(0) >= ds);
    }
}

TEST_CASE("weights that are not integrable at the surface are refused") {
    const StellarModel m = build_spherical_model(build_eos(1.0, 1.4, 1.0, {}), 1.0, 1.0);
    AxisymOptions o;
    o.n_s = 6;
    o.n_zeta = 4;
    CHECK_THROWS_AS(assemble_axisym_set(m, o), UnresolvedBoundaryWeight);
}

TEST_CASE("degree-1 channel: the enthalpy gradient is annihilated") {
    // -Delta^(1) w - 4 pi G (drho/dUpsilon) w = 0 for w = Upsilon' inside the star.
    const QlmForm f = assemble_Qlm(sph(), 1, 600, 1.5);
    const int n = static_cast<int>(f.r.size());
    const double R = sph().radius();
    Vec w(n);
    for (int i = 0; i < n; ++i) w(i) = f.r[i] < R ? sph().sample(f.r[i], 0.0, false).grad_Ups(0) : 0.0;
    const Vec res = f.Grad * w - 4.0 * M_PI * f.drho_dUps_V.cwiseProduct(w);
    // the first few nodes carry the low-order closure at the origin
    double worst = 0.0;
    const Vec lhs = f.Grad * w;
    for (int i = 0; i < n; ++i) {
        if (f.r[i] < 0.1 * R || f.r[i] > 0.8 * R) continue;
        worst = std::max(worst, std::abs(res(i)) / std::abs(lhs(i)));
    }
    CHECK(worst <= 1e-3);
}
