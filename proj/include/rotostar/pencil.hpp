#pragma once

#include <complex>
#include <string>
#include <vector>

#include "rotostar/numerics.hpp"
#include "rotostar/operators.hpp"

namespace rotostar {

using cplx = std::complex<double>;

// Scalar data of an eigenpair with ||xi||_M = 1: a = xi^H M xi, b = -i xi^H B xi, c = xi^H L xi.
struct EigenDiagnostics {
    double a = 0.0;
    cplx b, c;
    double quad_residual = 0.0;    // |a l^2 + i b l + c| / max(|a l^2|, |b l|, |c|, 1)
    double pencil_residual = 0.0;  // ||(l^2 M + l B + L) xi|| / ((|l|^2 |M| + |l| |B| + |L|) ||xi||)
};

struct PencilSpectrum {
    std::vector<cplx> eigenvalues;
    CMat vectors;  // columns xi_k, M-normalized; empty unless requested
    std::vector<EigenDiagnostics> diagnostics;
    double m_star = 0.0, beta = 0.0;
    std::string linearization;
    double kernel_cutoff = 0.0;  // hermitian path only
    double spectral_radius() const;
};

// Pencil data in an M-orthonormal basis: M = C C^H, Lt = C^-1 L C^-H, Bt = C^-1 B C^-H.
struct ReducedPencil {
    CMat Lt, Bt;
    CMat Cinv_h;  // C^-H, maps reduced vectors back
};
ReducedPencil reduce_pencil(const CMat& M, const CMat& B, const CMat& L);

// First-order pair E U = lambda F U with U = (y, lambda y / s). F = I here; s scales the second block.
struct CompanionPair {
    CMat E, F;
    double s = 1.0;
    std::string kind;
};
CompanionPair linearize_companion(const CMat& M, const CMat& B, const CMat& L);
CompanionPair linearize_companion(const DiscreteOperatorSet& set);

struct SpectrumOptions {
    bool vectors = false;
    bool force_companion = false;  // bypass the hermitian path when B = 0
    // Pairs whose scalar identity residual exceeds this get inverse iteration at the computed lambda.
    double refine_above = 1e-10;
    int refine_steps = 2;
};
PencilSpectrum compute_spectrum(const CMat& M, const CMat& B, const CMat& L, const SpectrumOptions& opts = {});
PencilSpectrum compute_spectrum(const DiscreteOperatorSet& set, const SpectrumOptions& opts = {});

// m_* = max(0, -min eig(M, L)) and beta = |M^-1/2 B M^-1/2|_2.
void pencil_bounds(const CMat& M, const CMat& B, const CMat& L, double& m_star, double& beta);

EigenDiagnostics eigen_diagnostics(const CMat& M, const CMat& B, const CMat& L, cplx lambda, const CVec& xi,
                                   double tol = 1e-8);

struct SymmetryReport {
    double defect = 0.0;
    int worst = -1;
    bool pass = false;
    std::vector<int> partner;
};
// Pair each lambda with some -conj(lambda'); exact assignment for small spectra, greedy beyond.
SymmetryReport check_iR_symmetry(const std::vector<cplx>& eigenvalues, double tol, int exact_limit = 400);

struct InclusionReport {
    std::vector<int> violators;
    double max_excess = 0.0;
    bool pass = true;
};
InclusionReport check_inclusion_S(const std::vector<cplx>& eigenvalues, double m_star, double beta, double tol);

struct ResolventProbe {
    cplx lambda;
    double sigma_min = 0.0, distance = 0.0, lower_bound = 0.0;
    bool pass = false;  // 1/sigma_min >= 1/(d (2|lambda| + beta + d))
};
std::vector<ResolventProbe> resolvent_probe(const CMat& M, const CMat& B, const CMat& L,
                                            const PencilSpectrum& spec, const std::vector<cplx>& lambdas);
// Real-axis window beyond which no eigenvalue lies: beta/2 + sqrt(beta^2/4 + m_*).
double real_axis_window(double m_star, double beta);

}  // namespace rotostar
