#pragma once

#include <vector>

namespace rotostar {

// P = rho^gamma exp(Sigma(upsilon)/C_V) with upsilon = rho^(gamma-1) and Sigma a polynomial.
struct EquationOfState {
    double gamma = 5.0 / 3.0;
    double C_V = 1.0;
    double A = 1.0;
    std::vector<double> sigma;  // Sigma(u) = sum sigma[k] u^k, sigma[0] = C_V ln A

    double n() const { return 1.0 / (gamma - 1.0); }
    bool isentropic() const;
    double Sigma(double u) const;
    double dSigma(double u) const;
    // gamma + ((gamma-1)/C_V) u Sigma'(u)
    double pdp(double u) const;

    double fP(double rho) const;
    double fUpsilon(double rho) const;
    double frho(double Upsilon) const;
    // dUpsilon/drho = fP'(rho)/rho
    double dUpsilon_drho(double rho) const;
    // f^rho(Upsilon) / (((gamma-1)/(gamma A))^n Upsilon^n) - 1
    double lambda2(double Upsilon) const;
    // Isentropic density at the given enthalpy, ((gamma-1)/(gamma A))^n Upsilon^n.
    double rho_isentropic(double Upsilon) const;
};

// Sigma(u) = C_V ln A + sum_k>=1 slope_coeffs[k-1] u^k. Checks the pDP condition on (0, u_max].
EquationOfState build_eos(double A, double gamma, double C_V, const std::vector<double>& slope_coeffs,
                          double u_max = 1.0, int samples = 400);

}  // namespace rotostar
