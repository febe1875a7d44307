#include "rotostar/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <Eigen/LU>
#include <lapacke.h>

#include "rotostar/errors.hpp"

namespace rotostar {

namespace {

double inf_norm(const CMat& A) { return A.size() ? A.cwiseAbs().rowwise().sum().maxCoeff() : 0.0; }

bool is_diagonal(const CMat& A) {
    for (Eigen::Index j = 0; j < A.cols(); ++j)
        for (Eigen::Index i = 0; i < A.rows(); ++i)
            if (i != j && A(i, j) != 0.0) return false;
    return true;
}

// Hermitian eigen-decomposition via zheevd; A is overwritten with eigenvectors when wanted.
Vec hermitian_eigen(CMat& A, bool vectors) {
    const lapack_int n = static_cast<lapack_int>(A.rows());
    Vec w(n);
    if (n == 0) return w;
    const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n, A.data(), n, w.data());
    if (info != 0) throw EigensolverFailure("zheevd failed with info " + std::to_string(info));
    return w;
}

void general_eigen(CMat& A, CVec& w, CMat* vr) {
    const lapack_int n = static_cast<lapack_int>(A.rows());
    w.resize(n);
    if (vr) vr->resize(n, n);
    cplx dummy;
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', vr ? 'V' : 'N', n, A.data(), n, w.data(), &dummy, 1,
                                          vr ? vr->data() : &dummy, vr ? n : 1);
    if (info != 0) throw EigensolverFailure("zgeev failed with info " + std::to_string(info));
}

// O(n^3) assignment minimizing total cost (rows to columns).
std::vector<int> hungarian(const Mat& cost) {
    const int n = static_cast<int>(cost.rows());
    const double INF = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), INF);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = INF;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> match(n);
    for (int j = 1; j <= n; ++j) match[p[j] - 1] = j - 1;
    return match;
}

}  // namespace

double PencilSpectrum::spectral_radius() const {
    double r = 0.0;
    for (const cplx& l : eigenvalues) r = std::max(r, std::abs(l));
    return r;
}

ReducedPencil reduce_pencil(const CMat& M, const CMat& B, const CMat& L) {
    const Eigen::Index n = M.rows();
    if (M.cols() != n || B.rows() != n || L.rows() != n) throw GridMismatch("pencil blocks differ in size");
    ReducedPencil r;
    if (is_diagonal(M)) {
        Vec d(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!(M(i, i).real() > 0.0)) throw SingularMass("mass matrix has a nonpositive diagonal entry");
            d(i) = 1.0 / std::sqrt(M(i, i).real());
        }
        r.Lt = d.asDiagonal() * L * d.asDiagonal();
        r.Bt = d.asDiagonal() * B * d.asDiagonal();
        r.Cinv_h = d.cast<cplx>().asDiagonal();
        return r;
    }
    Eigen::LLT<CMat> llt(M);
    if (llt.info() != Eigen::Success) throw SingularMass("mass matrix is not positive definite");
    const CMat Cinv = llt.matrixL().solve(CMat::Identity(n, n));
    r.Lt = Cinv * L * Cinv.adjoint();
    r.Bt = Cinv * B * Cinv.adjoint();
    r.Cinv_h = Cinv.adjoint();
    return r;
}

CompanionPair linearize_companion(const CMat& M, const CMat& B, const CMat& L) {
    const ReducedPencil r = reduce_pencil(M, B, L);
    const Eigen::Index n = r.Lt.rows();
    CompanionPair c;
    c.s = std::sqrt(std::max(inf_norm(r.Lt), 1e-300));
    if (!(c.s > 1e-150)) c.s = 1.0;
    c.E = CMat::Zero(2 * n, 2 * n);
    c.E.topRightCorner(n, n) = c.s * CMat::Identity(n, n);
    c.E.bottomLeftCorner(n, n) = -r.Lt / c.s;
    c.E.bottomRightCorner(n, n) = -r.Bt;
    c.F = CMat::Identity(2 * n, 2 * n);
    c.kind = "second-companion, M-orthonormal basis, second block scaled by sqrt|L|";
    return c;
}

CompanionPair linearize_companion(const DiscreteOperatorSet& set) { return linearize_companion(set.M, set.B, set.L); }

void pencil_bounds(const CMat& M, const CMat& B, const CMat& L, double& m_star, double& beta) {
    const ReducedPencil r = reduce_pencil(M, B, L);
    CMat Lt = 0.5 * (r.Lt + r.Lt.adjoint());
    const Vec mu = hermitian_eigen(Lt, false);
    m_star = mu.size() ? std::max(0.0, -mu(0)) : 0.0;
    beta = 0.0;
    if (r.Bt.cwiseAbs().maxCoeff() > 0.0) {
        CMat H = cplx(0.0, 1.0) * r.Bt;
        H = (0.5 * (H + H.adjoint())).eval();
        beta = hermitian_eigen(H, false).cwiseAbs().maxCoeff();
    }
}

EigenDiagnostics eigen_diagnostics(const CMat& M, const CMat& B, const CMat& L, cplx lambda, const CVec& xi,
                                   double tol) {
    EigenDiagnostics d;
    const CVec Mx = M * xi, Bx = B * xi, Lx = L * xi;
    d.a = xi.dot(Mx).real();
    d.b = cplx(0.0, -1.0) * xi.dot(Bx);
    d.c = xi.dot(Lx);
    const cplx I(0.0, 1.0);
    const cplx q = d.a * lambda * lambda + I * d.b * lambda + d.c;
    d.quad_residual =
        std::abs(q) / std::max({std::abs(d.a * lambda * lambda), std::abs(d.b * lambda), std::abs(d.c), 1.0});
    const double denom = (std::norm(lambda) * inf_norm(M) + std::abs(lambda) * inf_norm(B) + inf_norm(L)) * xi.norm();
    d.pencil_residual = (lambda * lambda * Mx + lambda * Bx + Lx).norm() / std::max(denom, 1e-300);
    if (d.pencil_residual > tol) throw NotAnEigenpair("pencil residual " + std::to_string(d.pencil_residual));
    return d;
}

PencilSpectrum compute_spectrum(const CMat& M, const CMat& B, const CMat& L, const SpectrumOptions& opts) {
    PencilSpectrum sp;
    pencil_bounds(M, B, L, sp.m_star, sp.beta);
    const ReducedPencil r = reduce_pencil(M, B, L);
    const Eigen::Index n = r.Lt.rows();
    const bool gyro = r.Bt.size() && r.Bt.cwiseAbs().maxCoeff() > 0.0;
    CMat Y;  // reduced eigenvectors, one column per eigenvalue

    if (!gyro && !opts.force_companion) {
        // lambda^2 = -mu for mu in sigma(Lt); each mu gives the pair +-sqrt(-mu).
        sp.linearization = "hermitian: lambda = +-sqrt(-mu), mu in sigma(M, L)";
        CMat H = 0.5 * (r.Lt + r.Lt.adjoint());
        const Vec mu = hermitian_eigen(H, opts.vectors);
        // Numerical kernel: |mu| below the usual rank cutoff n eps max|mu| is taken as 0.
        const double cut = n ? n * std::numeric_limits<double>::epsilon() * mu.cwiseAbs().maxCoeff() : 0.0;
        sp.kernel_cutoff = cut;
        sp.eigenvalues.reserve(2 * n);
        for (Eigen::Index k = 0; k < n; ++k) {
            const cplx root = std::abs(mu(k)) <= cut ? cplx(0.0) : std::sqrt(cplx(-mu(k), 0.0));
            sp.eigenvalues.push_back(root);
            sp.eigenvalues.push_back(-root);
        }
        if (opts.vectors) {
            Y.resize(n, 2 * n);
            for (Eigen::Index k = 0; k < n; ++k) Y.col(2 * k) = Y.col(2 * k + 1) = H.col(k);
        }
    } else {
        CompanionPair c = linearize_companion(M, B, L);
        sp.linearization = c.kind;
        CVec w;
        CMat V;
        general_eigen(c.E, w, opts.vectors ? &V : nullptr);
        sp.eigenvalues.assign(w.data(), w.data() + w.size());
        if (opts.vectors) {
            // U = (y, lambda y / s): read y from whichever block carries it with less amplification.
            Y.resize(n, V.cols());
            for (Eigen::Index k = 0; k < V.cols(); ++k) {
                if (std::abs(w(k)) <= c.s)
                    Y.col(k) = V.col(k).head(n);
                else
                    Y.col(k) = (c.s / w(k)) * V.col(k).tail(n);
                const double nk = Y.col(k).norm();
                if (nk > 0.0) Y.col(k) /= nk;
            }
        }
    }

    std::vector<int> order(sp.eigenvalues.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const cplx& x = sp.eigenvalues[a];
        const cplx& y = sp.eigenvalues[b];
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    std::vector<cplx> sorted(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) sorted[k] = sp.eigenvalues[order[k]];
    sp.eigenvalues = std::move(sorted);

    if (opts.vectors) {
        sp.vectors.resize(n, Y.cols());
        for (std::size_t k = 0; k < order.size(); ++k) sp.vectors.col(k) = r.Cinv_h * Y.col(order[k]);
        const CMat MX = M * sp.vectors, BX = B * sp.vectors, LX = L * sp.vectors;
        const double nM = inf_norm(M), nB = inf_norm(B), nL = inf_norm(L);
        const cplx I(0.0, 1.0);
        // M-normalize column k of X and fill its diagnostics from the products MX, BX, LX.
        auto diagnose = [&](CVec& x, const CVec& Mx, const CVec& Bx, const CVec& Lx, cplx lam) {
            EigenDiagnostics d;
            const double s = 1.0 / std::sqrt(x.dot(Mx).real());
            x *= s;
            d.a = 1.0;
            d.b = -I * x.dot(Bx) * s;
            d.c = x.dot(Lx) * s;
            const cplx q = lam * lam + I * d.b * lam + d.c;
            d.quad_residual = std::abs(q) / std::max({std::abs(lam * lam), std::abs(d.b * lam), std::abs(d.c), 1.0});
            const double denom = (std::norm(lam) * nM + std::abs(lam) * nB + nL) * x.norm();
            d.pencil_residual = ((lam * lam * Mx + lam * Bx + Lx) * s).norm() / denom;
            return d;
        };
        sp.diagnostics.resize(order.size());
        for (std::size_t k = 0; k < order.size(); ++k) {
            CVec x = sp.vectors.col(k);
            sp.diagnostics[k] = diagnose(x, MX.col(k), BX.col(k), LX.col(k), sp.eigenvalues[k]);
            sp.vectors.col(k) = x;
        }
        // Near-kernel modes: the computed vector is backward stable, yet c = xi^H L xi picks up
        // |error|^2 |L|. Inverse iteration at the fixed lambda removes the large-L components.
        if (gyro || opts.force_companion)
            for (std::size_t k = 0; k < order.size(); ++k) {
                if (!(sp.diagnostics[k].quad_residual > opts.refine_above)) continue;
                const cplx lam = sp.eigenvalues[k];
                const CMat P = lam * lam * CMat::Identity(n, n) + lam * r.Bt + r.Lt;
                const Eigen::PartialPivLU<CMat> lu(P);
                CVec y = Y.col(order[k]);
                EigenDiagnostics best = sp.diagnostics[k];
                for (int it = 0; it < opts.refine_steps; ++it) {
                    y = lu.solve(y);
                    y /= y.norm();
                    CVec x = r.Cinv_h * y;
                    const EigenDiagnostics d = diagnose(x, M * x, B * x, L * x, lam);
                    if (!std::isfinite(d.quad_residual) || d.quad_residual >= best.quad_residual) break;
                    best = d;
                    sp.vectors.col(k) = x;
                }
                sp.diagnostics[k] = best;
            }
    }
    return sp;
}

PencilSpectrum compute_spectrum(const DiscreteOperatorSet& set, const SpectrumOptions& opts) {
    return compute_spectrum(set.M, set.B, set.L, opts);
}

SymmetryReport check_iR_symmetry(const std::vector<cplx>& ev, double tol, int exact_limit) {
    SymmetryReport rep;
    const int n = static_cast<int>(ev.size());
    rep.partner.assign(n, -1);
    if (n == 0) {
        rep.pass = true;
        return rep;
    }
    if (n <= exact_limit) {
        Mat cost(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) cost(i, j) = std::abs(ev[i] + std::conj(ev[j]));
        rep.partner = hungarian(cost);
    } else {
        // Closest pairs first.
        std::vector<std::pair<double, int>> best(n);
        for (int i = 0; i < n; ++i) {
            double b = INFINITY;
            for (int j = 0; j < n; ++j) b = std::min(b, std::abs(ev[i] + std::conj(ev[j])));
            best[i] = {b, i};
        }
        std::sort(best.begin(), best.end());
        std::vector<char> used(n, 0);
        for (const auto& [unused, i] : best) {
            int arg = -1;
            double b = INFINITY;
            for (int j = 0; j < n; ++j) {
                if (used[j]) continue;
                const double c = std::abs(ev[i] + std::conj(ev[j]));
                if (c < b) {
                    b = c;
                    arg = j;
                }
            }
            used[arg] = 1;
            rep.partner[i] = arg;
        }
    }
    for (int i = 0; i < n; ++i) {
        const double d = std::abs(ev[i] + std::conj(ev[rep.partner[i]]));
        if (d > rep.defect) {
            rep.defect = d;
            rep.worst = i;
        }
    }
    rep.pass = rep.defect <= tol;
    return rep;
}

InclusionReport check_inclusion_S(const std::vector<cplx>& ev, double m_star, double beta, double tol) {
    InclusionReport rep;
    const double rad = std::sqrt(std::max(0.0, m_star));
    for (std::size_t k = 0; k < ev.size(); ++k) {
        const cplx& l = ev[k];
        const double axis = std::abs(l.real());
        const double box = std::max(std::abs(l) - rad, std::abs(l.imag()) - 0.5 * beta);
        const double excess = std::min(axis, box);
        if (axis <= tol || box <= tol) continue;
        rep.violators.push_back(static_cast<int>(k));
        rep.max_excess = std::max(rep.max_excess, excess);
    }
    rep.pass = rep.violators.empty();
    return rep;
}

double real_axis_window(double m_star, double beta) { return 0.5 * beta + std::sqrt(0.25 * beta * beta + m_star); }

std::vector<ResolventProbe> resolvent_probe(const CMat& M, const CMat& B, const CMat& L, const PencilSpectrum& spec,
                                            const std::vector<cplx>& lambdas) {
    const ReducedPencil r = reduce_pencil(M, B, L);
    const Eigen::Index n = r.Lt.rows();
    std::vector<ResolventProbe> out;
    for (const cplx& lam : lambdas) {
        ResolventProbe p;
        p.lambda = lam;
        const CMat P = lam * lam * CMat::Identity(n, n) + lam * r.Bt + r.Lt;
        Eigen::BDCSVD<CMat> svd(P);
        p.sigma_min = svd.singularValues()(n - 1);
        p.distance = INFINITY;
        for (const cplx& e : spec.eigenvalues) p.distance = std::min(p.distance, std::abs(lam - e));
        const double d = p.distance;
        p.lower_bound = d > 0.0 ? 1.0 / (d * (2.0 * std::abs(lam) + spec.beta + d)) : INFINITY;
        p.pass = p.sigma_min == 0.0 || 1.0 / p.sigma_min >= p.lower_bound * (1.0 - 1e-10);
        out.push_back(p);
    }
    return out;
}

}  // namespace rotostar
