#include "rotostar/eos.hpp"

#include <cmath>

#include "rotostar/errors.hpp"
#include "rotostar/numerics.hpp"

namespace rotostar {

bool EquationOfState::isentropic() const {
    for (std::size_t k = 1; k < sigma.size(); ++k)
        if (sigma[k] != 0.0) return false;
    return true;
}

double EquationOfState::Sigma(double u) const {
    double acc = 0.0;
    for (std::size_t k = sigma.size(); k-- > 0;) acc = acc * u + sigma[k];
    return acc;
}

double EquationOfState::dSigma(double u) const {
    double acc = 0.0;
    for (std::size_t k = sigma.size(); k-- > 1;) acc = acc * u + k * sigma[k];
    return acc;
}

double EquationOfState::pdp(double u) const { return gamma + (gamma - 1.0) / C_V * u * dSigma(u); }

double EquationOfState::fP(double rho) const {
    if (rho <= 0.0) return 0.0;
    return std::pow(rho, gamma) * std::exp(Sigma(std::pow(rho, gamma - 1.0)) / C_V);
}

double EquationOfState::fUpsilon(double rho) const {
    if (rho <= 0.0) return 0.0;
    const double u = std::pow(rho, gamma - 1.0);
    if (isentropic()) return gamma * A * u / (gamma - 1.0);
    // In the variable u the integrand is smooth down to the vacuum.
    auto f = [this](double v) { return pdp(v) * std::exp(Sigma(v) / C_V) / (gamma - 1.0); };
    return integrate(f, 0.0, u, 1e-300, 1e-15);
}

double EquationOfState::frho(double Upsilon) const {
    if (Upsilon <= 0.0) return 0.0;
    if (isentropic()) return rho_isentropic(Upsilon);
    // Monotone in u because pdp > 0.
    double hi = (gamma - 1.0) * Upsilon / (gamma * A);
    auto g = [&](double u) { return fUpsilon(std::pow(u, n())) - Upsilon; };
    double lo = 0.0;
    for (int guard = 0; g(hi) < 0.0; ++guard) {
        if (guard > 200) throw RootBracketFailure("cannot bracket inverse enthalpy");
        lo = hi;
        hi *= 2.0;
    }
    const double u = brent_root(g, lo, hi, 1e-16 * hi);
    return std::pow(u, n());
}

double EquationOfState::dUpsilon_drho(double rho) const {
    if (rho <= 0.0) return 0.0;
    const double u = std::pow(rho, gamma - 1.0);
    return fP(rho) / (rho * rho) * pdp(u);
}

double EquationOfState::rho_isentropic(double Upsilon) const {
    if (Upsilon <= 0.0) return 0.0;
    return std::pow((gamma - 1.0) / (gamma * A) * Upsilon, n());
}

double EquationOfState::lambda2(double Upsilon) const {
    if (Upsilon <= 0.0 || isentropic()) return 0.0;
    return frho(Upsilon) / rho_isentropic(Upsilon) - 1.0;
}

EquationOfState build_eos(double A, double gamma, double C_V, const std::vector<double>& slope_coeffs,
                          double u_max, int samples) {
    if (!(A > 0.0) || !(C_V > 0.0)) throw InconsistentInputs("A and C_V must be positive");
    if (!(gamma > 1.0 && gamma < 2.0)) throw InconsistentInputs("gamma must lie in (1, 2)");
    EquationOfState eos;
    eos.gamma = gamma;
    eos.C_V = C_V;
    eos.A = A;
    eos.sigma.push_back(C_V * std::log(A));
    for (double c : slope_coeffs) eos.sigma.push_back(c);
    for (int k = 1; k <= samples; ++k) {
        const double u = u_max * k / samples;
        if (!(eos.pdp(u) > 0.0))
            throw PDPViolation("gamma + ((gamma-1)/C_V) u Sigma'(u) <= 0 at u = " + std::to_string(u));
    }
    return eos;
}

}  // namespace rotostar
