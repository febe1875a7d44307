#include "doctest.h"

#include <cmath>

#include "rotostar/eos.hpp"
#include "rotostar/errors.hpp"
#include "rotostar/evolution.hpp"
#include "rotostar/pencil.hpp"

using namespace rotostar;

TEST_CASE("unit oscillator follows cos t") {
    CMat M = CMat::Identity(1, 1), B = CMat::Zero(1, 1), L = CMat::Identity(1, 1);
    CVec x0(1), v0(1);
    x0 << 1.0;
    v0 << 0.0;
    EvolutionOptions o;
    o.dt = 1e-3;
    o.T = 1.0;
    const EvolutionTrajectory tr = integrate(M, B, L, 0.0, x0, v0, nullptr, o);
    // second order: error ~ dt^2 / 12
    CHECK(std::abs(tr.xi_final(0).real() - std::cos(1.0)) <= 1e-6);
    CHECK(conserved_energy_check(tr) <= 1e-12);
    o.scheme = TimeScheme::Trapezoidal;
    const EvolutionTrajectory t2 = integrate(M, B, L, 0.0, x0, v0, nullptr, o);
    CHECK(std::abs(t2.xi_final(0) - tr.xi_final(0)) <= 1e-14);
}

TEST_CASE("energy drift on an operator set over 1000 steps") {
    const StellarModel m = build_spherical_model(build_eos(1.0, 5.0 / 3.0, 1.0, {}), 1.0, 1.0);
    AxisymOptions ao;
    ao.n_s = 8;
    ao.n_zeta = 6;
    ao.m = 2;
    const DiscreteOperatorSet s = assemble_axisym_set(m, ao);
    const CVec x0 = CVec::Random(s.dim()), v0 = CVec::Random(s.dim());
    EvolutionOptions o;
    o.dt = 1e-2;
    o.T = 10.0;
    const EvolutionTrajectory tr = integrate(s, 0.0, x0, v0, nullptr, o);
    CHECK(tr.times.size() == 1001);
    CHECK(conserved_energy_check(tr) <= 1e-9);
}

TEST_CASE("forced gyroscopic run stays under the exponential envelope") {
    DistortedOptions d;
    d.n_xi = 80;
    d.n_zeta = 12;
    RotationProfile rp;
    rp.Omega = 0.05;
    const StellarModel m = build_rotating_model(build_eos(1.0, 5.0 / 3.0, 1.0, {}), 1.0, 1.0, rp, d);
    AxisymOptions ao;
    ao.n_s = 8;
    ao.n_zeta = 6;
    ao.m = 1;
    const DiscreteOperatorSet s = assemble_axisym_set(m, ao);
    double m_star = 0.0, beta = 0.0;
    pencil_bounds(s.M, s.B, s.L, m_star, beta);
    const CVec x0 = CVec::Random(s.dim()), v0 = CVec::Random(s.dim()), shape = CVec::Random(s.dim());
    EvolutionOptions o;
    o.dt = 5e-3;
    o.T = 5.0;
    const EvolutionTrajectory tr =
        integrate(s, m_star, x0, v0, [&](double t) { return CVec(std::cos(3.0 * t) * shape); }, o);
    const EnergyEstimateReport er = check_energy_estimate(tr, m_star, beta);
    CHECK(er.violations == 0);
    CHECK(er.kappa == doctest::Approx(1.0 + m_star + beta));
    CHECK_THROWS_AS(conserved_energy_check(tr), NotHomogeneous);
}

TEST_CASE("singular step matrix is reported") {
    CMat M = CMat::Zero(2, 2), B = CMat::Zero(2, 2), L = CMat::Zero(2, 2);
    EvolutionOptions o;
    CHECK_THROWS_AS(integrate(M, B, L, 0.0, CVec::Zero(2), CVec::Zero(2), nullptr, o), FactorizationFailure);
}

TEST_CASE("parcel dichotomy") {
    const ParcelState osc = parcel_oscillator(2.0, 0.3, -0.1, 1e-2, 20.0);
    const double a0 = osc.amplitude.front();
    double worst = 0.0;
    for (double a : osc.amplitude) worst = std::max(worst, std::abs(a - a0));
    CHECK(worst <= 1e-12 * a0);
    const ParcelState un = parcel_oscillator(-0.49, 0.01, 0.0, 1e-2, 30.0);
    const double rate = fit_growth_rate(un.t, un.amplitude, un.t.size() / 2);
    CHECK(rate == doctest::Approx(0.7).epsilon(1e-6));
    const ParcelState flat = parcel_oscillator(0.0, 1.0, 0.5, 0.1, 2.0);
    CHECK(flat.X.back() == doctest::Approx(2.0));
    CHECK(classify_parcel(1.0) == ParcelClass::Oscillatory);
    CHECK(classify_parcel(-1.0) == ParcelClass::Unstable);
    CHECK(classify_parcel(0.0) == ParcelClass::Neutral);
}
