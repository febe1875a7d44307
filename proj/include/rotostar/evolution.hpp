#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rotostar/numerics.hpp"
#include "rotostar/operators.hpp"

namespace rotostar {

enum class TimeScheme { ImplicitMidpoint, Trapezoidal };

// f(t) as a field; the discrete system is M xi'' + B xi' + L xi = M f.
using Forcing = std::function<CVec(double)>;

struct EvolutionOptions {
    double dt = 1e-2;
    double T = 1.0;
    TimeScheme scheme = TimeScheme::ImplicitMidpoint;
    bool store_states = false;
};

struct EvolutionTrajectory {
    std::vector<double> times;
    std::vector<CVec> xi, v;          // filled when store_states
    std::vector<double> E_semigroup;  // (1 + a)|xi|_M^2 + xi^H L xi + |v|_M^2
    std::vector<double> E_physical;   // |v|_M^2 + xi^H L xi
    std::vector<double> xi_norm, v_norm;
    std::vector<double> forcing_norm;  // |f|_M at half steps, one per step
    CVec xi_final, v_final;
    double a = 0.0;
    double dt = 0.0;
    bool homogeneous = true;
    TimeScheme scheme = TimeScheme::ImplicitMidpoint;
};

EvolutionTrajectory integrate(const CMat& M, const CMat& B, const CMat& L, double a, const CVec& xi0,
                              const CVec& v0, const Forcing& f, const EvolutionOptions& opts);
EvolutionTrajectory integrate(const DiscreteOperatorSet& set, double a, const CVec& xi0, const CVec& v0,
                              const Forcing& f, const EvolutionOptions& opts);

struct EnergyEstimateReport {
    double kappa = 0.0;
    double max_ratio = 0.0;  // max sqrt(E(t)) / bound(t)
    int violations = 0;
    std::vector<double> bound;  // right-hand side per time
    bool pass = true;
};
// sqrt E(t) <= e^{kappa t} sqrt E(0) + int_0^t e^{kappa (t-s)} |f(s)| ds with kappa = 1 + a + beta.
EnergyEstimateReport check_energy_estimate(const EvolutionTrajectory& traj, double a, double beta);

// max |E_physical(t) - E_physical(0)| / (|v0|_M^2 + |xi0^H L xi0|).
double conserved_energy_check(const EvolutionTrajectory& traj);

struct ParcelState {
    double N2 = 0.0, X0 = 0.0, V0 = 0.0, x_ref = 0.0;
    std::vector<double> t, X, V;
    // sqrt((X - x_ref)^2 + (V / N)^2), constant when N2 > 0
    std::vector<double> amplitude;
};
// Closed form of X'' = -N2 (X - x_ref).
ParcelState parcel_oscillator(double N2, double X0, double V0, double dt, double T, double x_ref = 0.0);

// Least-squares slope of log|y| against t over samples with index >= first.
double fit_growth_rate(const std::vector<double>& t, const std::vector<double>& y, std::size_t first = 0);

enum class ParcelClass { Oscillatory, Neutral, Unstable };
ParcelClass classify_parcel(double N2);

}  // namespace rotostar
