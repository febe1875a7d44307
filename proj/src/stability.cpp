#include "rotostar/stability.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "rotostar/errors.hpp"
#include "rotostar/gravity.hpp"
#include "rotostar/polytrope.hpp"

namespace rotostar {

namespace {

void require_spherical(const StellarModel& model, const char* what) {
    if (!model.spherical) throw InconsistentInputs(std::string(what) + " needs a spherical model");
}

// Largest eigenvalue of the symmetric pencil (A, diag(d)) with d > 0.
double max_general_eig(const Mat& A, const Vec& d) {
    const Vec is = d.cwiseSqrt().cwiseInverse();
    const Mat S = is.asDiagonal() * (0.5 * (A + A.transpose())) * is.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Mat> es(S, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

double max_general_eig(const Mat& A, const Mat& Bm) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(0.5 * (A + A.transpose()), 0.5 * (Bm + Bm.transpose()),
                                                    Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
    if (es.info() != Eigen::Success) throw EigensolverFailure("generalized symmetric eigensolver failed");
    return es.eigenvalues().maxCoeff();
}

// C(i, k) = int_0^{s_i} L_k(t) t^2 dt for the Lagrange basis on s.
Mat cumulative_moment(const std::vector<double>& s) {
    const int n = static_cast<int>(s.size());
    const QuadRule ref = gauss_legendre(n + 2);
    Mat C = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const QuadRule q = map_rule(ref, 0.0, s[i]);
        const Mat I = interpolation_matrix(s, q.x);
        for (std::size_t p = 0; p < q.size(); ++p) C.row(i) += q.w[p] * q.x[p] * q.x[p] * I.row(p);
    }
    return C;
}

}  // namespace

double delta_star(const StellarModel& model, int samples) {
    require_spherical(model, "delta_star");
    const double R = model.radius(), gamma = model.eos.gamma;
    double best = INFINITY;
    for (int k = 1; k <= samples; ++k) {
        const double r = R * (k == samples ? 1.0 - 1e-12 : static_cast<double>(k) / samples);
        const ModelPoint p = model.sample(r, 0.0, false);
        best = std::min(best, -(3.0 * gamma - 4.0) * p.grad_Ups(0) / r);
    }
    return best;
}

double mu0_estimate_profile(const std::function<double(double)>& rho, double R, int n) {
    if (!(R > 0.0) || n < 2) throw InconsistentInputs("mu0 needs R > 0 and n >= 2");
    const QuadRule q = map_rule(gauss_legendre(n), 0.0, R);
    const QuadRule fine_ref = gauss_legendre(std::max(160, 3 * n));
    const std::vector<double> bw = barycentric_weights(q.x);
    // J(i, k) = int_{r_i}^R rho l_k ds, so psi(r_i) = (J u)_i and psi(R) = 0.
    Mat J = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const QuadRule f = map_rule(fine_ref, q.x[i], R);
        for (std::size_t p = 0; p < f.size(); ++p) J.row(i) += f.w[p] * rho(f.x[p]) * lagrange_basis(q.x, bw, f.x[p]).transpose();
    }
    Vec wr2(n), stiff(n);
    for (int i = 0; i < n; ++i) {
        wr2(i) = q.w[i] * q.x[i] * q.x[i];
        stiff(i) = wr2(i) * rho(q.x[i]);
        if (!(stiff(i) > 0.0)) throw NonPositive("density must be positive at the quadrature nodes");
    }
    const Mat mass = J.transpose() * wr2.asDiagonal() * J;
    const double top = max_general_eig(mass, stiff);
    if (!(top > 0.0)) throw NonPositive("mu0 estimate is not positive");
    const double mu0 = 1.0 / top;
    if (!(mu0 > 0.0) || !std::isfinite(mu0)) throw NonPositive("mu0 estimate is not positive");
    return mu0;
}

double mu0_estimate(const StellarModel& model, int n) {
    require_spherical(model, "mu0_estimate");
    return mu0_estimate_profile([&](double r) { return model.sample(r, 0.0, false).rho; }, model.radius(), n);
}

SeminormGrams seminorm_grams(const StellarModel& model, const DiscreteOperatorSet& set, double mu0) {
    if (!model.spherical) throw MissingChannels("potential channels are built for spherical sets only");
    const AxisymGrid& g = set.grid;
    const int ns = g.n_s, nz = g.n_zeta, N = g.size(), am = std::abs(set.m);
    const double R = g.R[0];
    SeminormGrams out;
    out.mu0 = mu0;
    out.mu1 = std::min(mu0, 4.0 / (R * R));
    const Mat Pbar = assoc_legendre_table(am, nz, g.zeta);
    std::vector<double> targets = g.s;
    targets.push_back(1.0);
    out.g_n1 = Mat::Zero(N, N);
    out.g_n10 = Mat::Zero(N, N);
    Vec sw_s2(ns), inv_rho(ns);
    for (int i = 0; i < ns; ++i) {
        sw_s2(i) = g.s_w[i] * g.s[i] * g.s[i];
        inv_rho(i) = 1.0 / set.fields.rho(g.node(0, i));
    }
    for (int k = 0; k < nz; ++k) {
        const int ell = am + k;
        if (ell == 1) continue;
        out.channels.push_back(ell);
        // A: channel values g_l(s_i) from nodal g.
        Mat A = Mat::Zero(ns, N);
        for (int j = 0; j < nz; ++j)
            for (int i = 0; i < ns; ++i) A(i, g.node(j, i)) = std::sqrt(2.0 * M_PI) * g.zeta_w[j] * Pbar(k, j);
        // Psi at s nodes and at the surface.
        const Mat T = hankel_matrix(g.s, ell, targets);
        const Mat Psi = (-R * R / (2 * ell + 1)) * T * A;
        const Mat Pin = Psi.topRows(ns);
        const Mat Psurf = Psi.bottomRows(1);
        const Mat inner_r2 = R * R * R * Pin.transpose() * sw_s2.asDiagonal() * Pin;
        out.g_n10 += out.mu1 * inner_r2;
        if (ell == 0) {
            // Psi' = (R / s^2) int_0^s g t^2 dt.
            Mat dPsi = cumulative_moment(g.s) * A;
            for (int i = 0; i < ns; ++i) dPsi.row(i) *= R / (g.s[i] * g.s[i]);
            Vec wt(ns);
            for (int i = 0; i < ns; ++i) wt(i) = R * R * R * sw_s2(i) * inv_rho(i);
            out.g_n1 += dPsi.transpose() * wt.asDiagonal() * dPsi;
        } else {
            Vec wt(ns);
            for (int i = 0; i < ns; ++i) wt(i) = R * g.s_w[i];
            const double c = ell * (ell + 1) - 2.0;
            out.g_n1 += c * (Pin.transpose() * wt.asDiagonal() * Pin +
                             (R / (2 * ell + 1)) * Psurf.transpose() * Psurf);
        }
    }
    out.g_n1 = 0.5 * (out.g_n1 + out.g_n1.transpose());
    out.g_n10 = 0.5 * (out.g_n10 + out.g_n10.transpose());
    const CMat Dh = set.D.adjoint();
    out.n1 = Dh * out.g_n1.cast<std::complex<double>>() * set.D;
    out.n10 = Dh * out.g_n10.cast<std::complex<double>>() * set.D;
    out.n2 = set.G_seminorm;
    return out;
}

double seminorm_eval(SeminormKind kind, const SeminormGrams& grams, const CVec& u) {
    const CMat& N = kind == SeminormKind::N1 ? grams.n1 : kind == SeminormKind::N10 ? grams.n10 : grams.n2;
    if (N.rows() != u.size()) throw MissingChannels("seminorm Gram does not match the field size");
    return std::sqrt(std::max(0.0, u.dot(N * u).real()));
}

double radial_channel_energy(const DiscreteOperatorSet& set, const CVec& u) {
    if (set.m != 0) return 0.0;
    const AxisymGrid& g = set.grid;
    const int ns = g.n_s;
    const double R = g.R[0];
    double total = 0.0;
    for (int i = 0; i < ns; ++i) {
        std::complex<double> c = 0.0;
        // Y_00 = 1 / sqrt(4 pi); u^r is the first component block.
        for (int j = 0; j < g.n_zeta; ++j) c += std::sqrt(M_PI) * g.zeta_w[j] * u(g.node(j, i));
        total += R * R * R * g.s_w[i] * g.s[i] * g.s[i] * set.fields.rho(g.node(0, i)) * std::norm(c);
    }
    return total;
}

double n1_radial_term(const DiscreteOperatorSet& set, const CVec& u) {
    if (set.m != 0) return 0.0;
    const AxisymGrid& g = set.grid;
    const int ns = g.n_s;
    const double R = g.R[0];
    const CVec gv = set.D * u;
    CVec g00 = CVec::Zero(ns);
    for (int i = 0; i < ns; ++i)
        for (int j = 0; j < g.n_zeta; ++j) g00(i) += std::sqrt(M_PI) * g.zeta_w[j] * gv(g.node(j, i));
    const CVec I = cumulative_moment(g.s).cast<std::complex<double>>() * g00;
    double total = 0.0;
    for (int i = 0; i < ns; ++i) {
        const std::complex<double> d = R * I(i) / (g.s[i] * g.s[i]);
        total += R * R * R * g.s_w[i] * g.s[i] * g.s[i] * std::norm(d) / set.fields.rho(g.node(0, i));
    }
    return total;
}

PD2Result check_PD2(const DiscreteOperatorSet& set, const CMat& N, double delta_claim, double tol) {
    const int n = set.dim();
    if (N.rows() != n || N.cols() != n) throw GridMismatch("seminorm Gram does not match the operator size");
    PD2Result res;
    res.delta_claim = delta_claim;
    const Vec m = set.M.diagonal().real();
    const Vec is = m.cwiseSqrt().cwiseInverse();
    const CMat Nh = is.asDiagonal() * (0.5 * (N + N.adjoint())) * is.asDiagonal();
    const CMat Lh = is.asDiagonal() * (0.5 * (set.L + set.L.adjoint())) * is.asDiagonal();
    Eigen::SelfAdjointEigenSolver<CMat> en(Nh);
    const Vec lam = en.eigenvalues();
    const double top = lam.maxCoeff();
    if (!(top > 0.0)) {
        res.pass = true;  // zero seminorm: nothing to control
        return res;
    }
    std::vector<int> keep;
    for (int k = 0; k < n; ++k)
        if (lam(k) > 1e-10 * top) keep.push_back(k);
    res.range_dim = static_cast<int>(keep.size());
    CMat Z(n, res.range_dim);
    for (int c = 0; c < res.range_dim; ++c) Z.col(c) = en.eigenvectors().col(keep[c]) / std::sqrt(lam(keep[c]));
    const CMat Q = Z.adjoint() * Lh * Z;
    Eigen::SelfAdjointEigenSolver<CMat> eq(0.5 * (Q + Q.adjoint()), Eigen::EigenvaluesOnly);
    res.min_quotient = eq.eigenvalues().minCoeff();
    const double scale = std::max({std::abs(delta_claim), std::abs(res.min_quotient), 1.0});
    res.pass = res.min_quotient >= delta_claim - tol * scale;
    return res;
}

KStarResult compute_k_star(const StellarModel& model, int lmax, int n, bool require_tail) {
    require_spherical(model, "compute_k_star");
    if (lmax < 0) throw InconsistentInputs("lmax must be nonnegative");
    const double R = model.radius(), G = model.G, gamma = model.eos.gamma;
    const QuadRule q = map_rule(gauss_legendre(n), 0.0, 1.0);
    const LaneEmdenSolution& le = *model.le;
    const double xi1 = le.xi1;
    const double p = (2.0 - gamma) / (gamma - 1.0);
    Vec c(n), den_dim(n), den_nd(n);
    for (int i = 0; i < n; ++i) {
        const double s = q.x[i];
        c(i) = q.w[i] * s * s;
        const ModelPoint mp = model.sample(R * s, 0.0, false);
        den_dim(i) = R * R * R * c(i) * gamma * mp.P / (mp.rho * mp.rho);
        den_nd(i) = xi1 * xi1 * xi1 * c(i) * (gamma - 1.0) * std::pow(eval_theta(le, xi1 * s), -p);
    }
    const Mat Z0 = null_space_of_row(c);
    KStarResult out;
    out.nu_star = model.nu_star();
    out.C_bound = std::sqrt(2.0 / 3.0) * R * R / out.nu_star;
    for (int ell = 0; ell <= lmax; ++ell) {
        const Mat T = hankel_matrix(q.x, ell, q.x);
        const Mat form = c.asDiagonal() * T;  // g^T form g ~ int H[g] g s^2 ds / scale
        const Mat num_dim = (4.0 * M_PI * G * std::pow(R, 5) / (2 * ell + 1)) * form;
        const Mat num_nd = (std::pow(xi1, 5) / (2 * ell + 1)) * form;
        double kd, kn;
        if (ell == 0) {
            kd = max_general_eig(Z0.transpose() * num_dim * Z0, Mat(Z0.transpose() * den_dim.asDiagonal() * Z0));
            kn = max_general_eig(Z0.transpose() * num_nd * Z0, Mat(Z0.transpose() * den_nd.asDiagonal() * Z0));
        } else {
            kd = max_general_eig(num_dim, den_dim);
            kn = max_general_eig(num_nd, den_nd);
        }
        out.ell.push_back(ell);
        out.k_dim.push_back(std::max(0.0, kd));
        out.k_nondim.push_back(std::max(0.0, kn));
    }
    out.k_star = *std::max_element(out.k_dim.begin(), out.k_dim.end());
    out.k_star_nondim = *std::max_element(out.k_nondim.begin(), out.k_nondim.end());
    const int L = static_cast<int>(out.k_dim.size());
    out.tail_decreasing = L >= 3 && out.k_dim[L - 1] < out.k_dim[L - 2] && out.k_dim[L - 2] < out.k_dim[L - 3];
    if (require_tail && !out.tail_decreasing)
        throw TailNotDecaying("per-degree suprema do not decrease over the last three degrees; raise lmax");
    return out;
}

ACondition check_A_condition(const DiscreteOperatorSet& set, double eps) {
    ACondition out;
    out.sign_ok = true;
    const NodeFields& f = set.fields;
    for (int p = 0; p < f.A.size(); ++p) {
        if (!(f.rho(p) > 0.0)) continue;
        const double A = f.A(p), gr = f.grad_rho_norm(p) / f.rho(p);
        bool bad = false;
        if (A > 0.0) {
            out.sign_ok = false;
            bad = true;
        }
        if (gr > 0.0) out.eps_fitted = std::max(out.eps_fitted, -A / gr);
        else if (A < 0.0) out.eps_fitted = INFINITY;
        if (A < -eps * gr) bad = true;
        if (bad) out.witnesses.push_back(p);
    }
    out.pass = out.witnesses.empty();
    return out;
}

int cowling_bound_violations(const DiscreteOperatorSet& set, double eps, int samples, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    int bad = 0;
    const int n = set.dim();
    for (int k = 0; k < samples; ++k) {
        CVec u(n);
        for (int i = 0; i < n; ++i) u(i) = {nd(rng), nd(rng)};
        const double lhs = u.dot(set.L * u).real();
        const double grav = set.cowling ? 0.0 : gravity_term(set, u);
        const double rhs = (1.0 - eps) * u.dot(set.G_seminorm * u).real() - 4.0 * M_PI * set.G * grav;
        if (lhs < rhs - 1e-10 * std::max(std::abs(lhs), std::abs(rhs))) ++bad;
    }
    return bad;
}

double Q1_form(const StellarModel& model, const std::vector<double>& r, const std::vector<double>& w, double h,
               int tail_ell) {
    require_spherical(model, "Q1_form");
    const int K = static_cast<int>(r.size());
    if (K < 2 || static_cast<int>(w.size()) != K) throw GridMismatch("Q1 samples must match the grid");
    const double R = model.radius();
    const QlmForm f = assemble_Qlm(model, 1, K, K * h / R);
    Mat Gr = f.Grad;
    Gr(K - 1, K - 1) -= 2.0 * f.r_inf;
    if (tail_ell >= 0) {
        const double l = tail_ell;
        Gr(K - 1, K - 1) += ((l + 1) * (l + 1) + 2.0) / (2 * l + 1) * f.r_inf;
    }
    const Vec wv = Eigen::Map<const Vec>(w.data(), K);
    return wv.dot(Gr * wv) - 4.0 * M_PI * model.G * wv.dot(f.drho_dUps_V.cwiseProduct(wv));
}

Q1Report check_Q1_positivity(const StellarModel& model, int ell, const std::function<double(double)>& g,
                             const std::vector<double>& S_over_R, int cells_per_R, double tol) {
    require_spherical(model, "check_Q1_positivity");
    if (ell < 1) throw InconsistentInputs("the l = 1 form needs a channel with l >= 1");
    if (S_over_R.empty()) throw InconsistentInputs("need at least one truncation radius");
    const double R = model.radius();
    const double Smax = *std::max_element(S_over_R.begin(), S_over_R.end());
    const int K = static_cast<int>(std::llround(Smax * cells_per_R));
    const QlmForm big = assemble_Qlm(model, ell, K, Smax);
    const int n = static_cast<int>(big.r.size());
    Vec gv(n);
    for (int i = 0; i < n; ++i) gv(i) = big.r[i] < R ? g(big.r[i]) : 0.0;
    const Vec psi = big.Grad.ldlt().solve(-(Eigen::Map<const Vec>(big.V.data(), n).asDiagonal() * gv));
    double C = 0.0;
    for (int i = 0; i < n; ++i) C += big.V[i] * gv(i) * std::pow(big.r[i], ell);
    C /= (2 * ell + 1);

    Q1Report rep;
    rep.ell = ell;
    const double h = big.h;
    std::vector<double> xs, ys;
    for (double sr : S_over_R) {
        const int kS = static_cast<int>(std::llround(sr * cells_per_R));
        const double S = kS * h;
        std::vector<double> r(kS), w(kS), W(kS);
        for (int k = 0; k < kS; ++k) {
            r[k] = big.r[k];
            w[k] = psi(k);
            W[k] = psi(k) + C * std::pow(S, -ell - 1) * std::pow(r[k] / S, ell);
        }
        // Truncated form on [0, S]: no exterior tail.
        rep.S.push_back(S);
        rep.Q1S_W.push_back(Q1_form(model, r, W, h, -1));
        rep.Q1S_w.push_back(Q1_form(model, r, w, h, -1));
        xs.push_back(1.0 / S);
        ys.push_back(rep.Q1S_w.back());
    }
    if (xs.size() == 1) {
        rep.Q1_extrapolated = ys[0];
    } else {
        // Least-squares line in 1/S.
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double m = static_cast<double>(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
        }
        const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        rep.Q1_extrapolated = (sy - slope * sx) / m;
    }
    std::vector<double> rr(big.r.begin(), big.r.end()), ww(psi.data(), psi.data() + n);
    rep.Q1_full = Q1_form(model, rr, ww, h, ell);
    const QlmForm grad1 = assemble_Qlm(model, 1, K, Smax);
    rep.scale = psi.dot(grad1.Grad * psi);
    const double floor = tol * std::max(rep.scale, 1e-300);
    rep.pass = rep.Q1_extrapolated >= -floor && rep.Q1_full >= -floor;
    for (double v : rep.Q1S_W) rep.pass = rep.pass && v >= -floor;
    return rep;
}

StabilityReport build_stability_report(const StellarModel& model, const DiscreteOperatorSet& set, int lmax,
                                       int kstar_n, int mu0_n) {
    StabilityReport rep;
    rep.bounds = compute_bounds(model, set);
    const PD2Result pd1 = check_PD2(set, set.M, 0.0, 1e-10);
    rep.pd1_min_quotient = pd1.min_quotient;
    rep.pd1_pass = pd1.pass;
    rep.epsilon_A = check_A_condition(set, INFINITY).eps_fitted;
    if (!model.spherical) {
        rep.notes.push_back("rotating model: radial constants and seminorm channels need a spherical background");
        return rep;
    }
    rep.delta_star = delta_star(model);
    rep.mu0 = mu0_estimate(model, mu0_n);
    const double R = model.radius();
    rep.mu1 = std::min(rep.mu0, 4.0 / (R * R));
    rep.kstar = compute_k_star(model, lmax, kstar_n, false);
    if (!rep.kstar.tail_decreasing) rep.notes.push_back("k* tail not decreasing; raise lmax");
    rep.nu_star = rep.kstar.nu_star;
    rep.C_bound = rep.kstar.C_bound;
    const SeminormGrams g = seminorm_grams(model, set, rep.mu0);
    const double dG = std::min(rep.delta_star, model.G);
    rep.pd2.emplace_back("n1 (4 pi min(delta*, G))", check_PD2(set, g.n1, 4.0 * M_PI * dG, 1e-6));
    rep.pd2.emplace_back("n1 (min(delta*, G))", check_PD2(set, g.n1, dG, 1e-6));
    rep.pd2.emplace_back("n10 (4 pi min(delta*, G))", check_PD2(set, g.n10, 4.0 * M_PI * dG, 1e-6));
    if (set.cowling && std::isfinite(rep.epsilon_A) && rep.epsilon_A < 1.0)
        rep.pd2.emplace_back("n2 cowling (1 - eps)", check_PD2(set, g.n2, 1.0 - rep.epsilon_A, 1e-8));
    return rep;
}

}  // namespace rotostar
