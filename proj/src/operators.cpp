#include "rotostar/operators.hpp"

#include <cmath>
#include <map>
#include <random>

#include <Eigen/Eigenvalues>

#include "rotostar/errors.hpp"
#include "rotostar/gravity.hpp"

namespace rotostar {

using cd = std::complex<double>;

AxisymGrid build_axisym_grid(const StellarModel& model, int n_s, int n_zeta) {
    AxisymGrid g;
    g.n_s = n_s;
    g.n_zeta = n_zeta;
    const QuadRule qs = map_rule(gauss_legendre(n_s), 0.0, 1.0);
    const QuadRule qz = gauss_legendre(n_zeta);
    g.s = qs.x;
    g.s_w = qs.w;
    g.zeta = qz.x;
    g.zeta_w = qz.w;
    for (int j = 0; j < n_zeta; ++j) {
        g.R.push_back(model.radius(g.zeta[j]));
        g.dR.push_back(model.radius_slope(g.zeta[j]));
    }
    // Exact equatorial symmetry of the boundary samples.
    for (int j = 0; j < n_zeta / 2; ++j) {
        const double R = 0.5 * (g.R[j] + g.R[n_zeta - 1 - j]);
        const double dR = 0.5 * (g.dR[j] - g.dR[n_zeta - 1 - j]);
        g.R[j] = g.R[n_zeta - 1 - j] = R;
        g.dR[j] = dR;
        g.dR[n_zeta - 1 - j] = -dR;
    }
    if (n_zeta % 2 == 1) g.dR[n_zeta / 2] = 0.0;
    for (int j = 0; j < n_zeta; ++j)
        for (int i = 0; i < n_s; ++i) {
            g.r.push_back(g.R[j] * g.s[i]);
            g.sin_t.push_back(std::sqrt(1.0 - g.zeta[j] * g.zeta[j]));
            g.weight.push_back(2.0 * M_PI * g.zeta_w[j] * g.s_w[i] * std::pow(g.R[j], 3) * g.s[i] * g.s[i]);
        }
    return g;
}

NodeFields sample_node_fields(const StellarModel& model, const AxisymGrid& grid) {
    const int N = grid.size();
    NodeFields f;
    for (Vec* v : {&f.rho, &f.P, &f.gPrho2, &f.A, &f.grad_rho_norm, &f.n_r, &f.n_t, &f.dUps_drho}) v->resize(N);
    for (int j = 0; j < grid.n_zeta; ++j)
        for (int i = 0; i < grid.n_s; ++i) {
            const int p = grid.node(j, i);
            const ModelPoint pt = model.sample(grid.r[p], grid.zeta[j], false);
            if (!pt.inside || !(pt.rho > 0.0)) throw MeshTooCoarse("grid node outside the support");
            f.rho(p) = pt.rho;
            f.P(p) = pt.P;
            f.gPrho2(p) = model.eos.gamma * pt.P / (pt.rho * pt.rho);
            f.A(p) = pt.A;
            const double gn = pt.grad_rho.norm();
            f.grad_rho_norm(p) = gn;
            f.n_r(p) = gn > 0.0 ? pt.grad_rho(0) / gn : 0.0;
            f.n_t(p) = gn > 0.0 ? pt.grad_rho(1) / gn : 0.0;
            f.dUps_drho(p) = pt.dUps_drho;
        }
    return f;
}

CMat divergence_operator(const AxisymGrid& g, const Vec& rho, int m) {
    const int ns = g.n_s, nz = g.n_zeta, N = g.size();
    const Mat Ds = augmented_differentiation(g.s, {0.0, 1.0});
    const Mat Dz = augmented_differentiation(g.zeta, {-1.0, 1.0});
    CMat D = CMat::Zero(N, 3 * N);
    for (int j = 0; j < nz; ++j) {
        const double R = g.R[j], dR = g.dR[j], st = g.sin_t[g.node(j, 0)];
        for (int i = 0; i < ns; ++i) {
            const int p = g.node(j, i);
            const double invJ = 1.0 / (R * R * R * g.s[i] * g.s[i]);
            // d/ds of F^s along the ray
            for (int k = 0; k < ns; ++k) {
                const int q = g.node(j, k);
                const double sk2 = g.s[k] * g.s[k];
                D(p, q) += invJ * Ds(i, k) * R * R * sk2 * rho(q);
                D(p, N + q) += invJ * Ds(i, k) * R * dR * sk2 * st * rho(q);
            }
            // d/dzeta of F^zeta at fixed s
            for (int k = 0; k < nz; ++k) {
                const int q = g.node(k, i);
                const double Rk = g.R[k];
                D(p, N + q) += invJ * Dz(j, k) * (-Rk * Rk * g.s[i] * g.sin_t[q] * rho(q));
            }
            if (m != 0) D(p, 2 * N + p) += cd(0.0, m * rho(p) / (g.r[p] * st));
        }
    }
    return D;
}

Mat gravity_gram(const AxisymGrid& g, int m) {
    const int ns = g.n_s, nz = g.n_zeta, N = g.size();
    const int am = std::abs(m);
    const Mat Pbar = assoc_legendre_table(am, nz, g.zeta);
    Mat Gram = Mat::Zero(N, N);
    for (int k = 0; k < nz; ++k) {
        const int ell = am + k;
        std::map<double, Mat> cache;
        for (int jp = 0; jp < nz; ++jp)
            for (int j = 0; j < nz; ++j) {
                const double ratio = g.R[jp] / g.R[j];
                auto it = cache.find(ratio);
                if (it == cache.end()) {
                    std::vector<double> targets(ns);
                    for (int i = 0; i < ns; ++i) targets[i] = g.s[i] * ratio;
                    it = cache.emplace(ratio, hankel_matrix(g.s, ell, targets)).first;
                }
                const Mat& T = it->second;
                const double ang = 2.0 * M_PI / (2 * ell + 1) * g.zeta_w[jp] * Pbar(k, jp) * g.zeta_w[j] * Pbar(k, j) *
                                   std::pow(g.R[jp], 3) * g.R[j] * g.R[j];
                for (int ip = 0; ip < ns; ++ip) {
                    const double wo = ang * g.s_w[ip] * g.s[ip] * g.s[ip];
                    for (int i = 0; i < ns; ++i) Gram(g.node(jp, ip), g.node(j, i)) += wo * T(ip, i);
                }
            }
    }
    return 0.5 * (Gram + Gram.transpose());
}

DiscreteOperatorSet assemble_axisym_set(const StellarModel& model, const AxisymOptions& opts) {
    const double gamma = model.eos.gamma;
    if ((2.0 - gamma) / (gamma - 1.0) >= 1.0 && !opts.allow_singular_weight)
        throw UnresolvedBoundaryWeight("gamma P / rho^2 is not integrable up to the surface for this gamma");
    DiscreteOperatorSet set;
    set.grid = build_axisym_grid(model, opts.n_s, opts.n_zeta);
    set.fields = sample_node_fields(model, set.grid);
    set.m = opts.m;
    set.cowling = opts.cowling;
    set.G = model.G;
    set.rho_O = model.rho_O;
    set.Omega = model.rotation.Omega;
    const AxisymGrid& g = set.grid;
    const NodeFields& f = set.fields;
    const int N = g.size();
    const Vec w = Eigen::Map<const Vec>(g.weight.data(), N);

    set.D = divergence_operator(g, f.rho, opts.m);
    set.C = Mat::Zero(N, 3 * N);
    for (int p = 0; p < N; ++p) {
        set.C(p, p) = f.n_r(p);
        set.C(p, N + p) = f.n_t(p);
    }
    set.W1 = w.cwiseProduct(f.gPrho2);
    set.Wc = w.cwiseProduct(f.gPrho2).cwiseProduct(f.rho).cwiseProduct(f.A);
    set.W3 = set.Wc.cwiseProduct(f.grad_rho_norm);

    const CMat WD = set.W1.asDiagonal() * set.D;
    set.G_seminorm = set.D.adjoint() * WD;
    set.G_seminorm = 0.5 * (set.G_seminorm + set.G_seminorm.adjoint()).eval();
    CMat L = set.G_seminorm;
    if (f.A.cwiseAbs().maxCoeff() > 0.0) {
        const CMat CtWcD = set.C.transpose().cast<cd>() * (set.Wc.asDiagonal() * set.D);
        L += CtWcD + CtWcD.adjoint();
        L -= (set.C.transpose() * set.W3.asDiagonal() * set.C).cast<cd>();
    }
    if (!opts.cowling) {
        set.Gram = gravity_gram(g, opts.m);
        L -= 4.0 * M_PI * model.G * (set.D.adjoint() * (set.Gram.cast<cd>() * set.D));
    }
    set.L = 0.5 * (L + L.adjoint());

    Vec mass(3 * N);
    for (int c = 0; c < 3; ++c) mass.segment(c * N, N) = w.cwiseProduct(f.rho);
    set.M = mass.cast<cd>().asDiagonal();

    set.B = CMat::Zero(3 * N, 3 * N);
    const double Om = model.rotation.Omega;
    if (Om != 0.0) {
        for (int j = 0; j < g.n_zeta; ++j)
            for (int i = 0; i < g.n_s; ++i) {
                const int p = g.node(j, i);
                const double st = g.sin_t[p], ct = g.zeta[j], mp = mass(p);
                set.B(p, 2 * N + p) = -2.0 * Om * st * mp;
                set.B(N + p, 2 * N + p) = -2.0 * Om * ct * mp;
                set.B(2 * N + p, p) = 2.0 * Om * st * mp;
                set.B(2 * N + p, N + p) = 2.0 * Om * ct * mp;
            }
    }
    return set;
}

std::complex<double> evaluate_Q0(const DiscreteOperatorSet& set, const CVec& u, const CVec& v) {
    const int N = set.grid.size();
    const CVec gu = set.D * u, gv = set.D * v;
    cd acc = 0.0;
    for (int p = 0; p < N; ++p) {
        const cd cu = set.fields.n_r(p) * u(p) + set.fields.n_t(p) * u(N + p);
        const cd cv = set.fields.n_r(p) * v(p) + set.fields.n_t(p) * v(N + p);
        acc += set.W1(p) * gu(p) * std::conj(gv(p));
        acc += set.Wc(p) * (cu * std::conj(gv(p)) + gu(p) * std::conj(cv));
        acc -= set.W3(p) * cu * std::conj(cv);
    }
    if (!set.cowling) {
        cd grav = 0.0;
        for (int p = 0; p < N; ++p) {
            cd row = 0.0;
            for (int q = 0; q < N; ++q) row += set.Gram(p, q) * gu(q);
            grav += std::conj(gv(p)) * row;
        }
        acc -= 4.0 * M_PI * set.G * grav;
    }
    return acc;
}

double gravity_term(const DiscreteOperatorSet& set, const CVec& u) {
    const CVec g = set.D * u;
    const Mat Gram = set.Gram.size() ? set.Gram : gravity_gram(set.grid, set.m);
    return (g.adjoint() * Gram.cast<cd>() * g)(0, 0).real();
}

CMat mass_scaled(const CMat& M, const CMat& X) {
    const Vec d = M.diagonal().real().cwiseSqrt().cwiseInverse();
    return d.asDiagonal() * X * d.asDiagonal();
}

BoundConstants compute_bounds(const StellarModel& model, const DiscreteOperatorSet& set) {
    BoundConstants b;
    const NodeFields& f = set.fields;
    const double gamma = model.eos.gamma;
    double k1 = 0.0, k2 = 0.0;
    for (int p = 0; p < f.rho.size(); ++p) {
        k1 = std::max(k1, std::abs(f.A(p)) * std::sqrt(gamma * f.P(p) / f.rho(p)));
        k2 = std::max(k2, gamma * f.P(p) * std::abs(f.A(p)) * f.grad_rho_norm(p) / (f.rho(p) * f.rho(p)));
    }
    // Safety factor on node suprema.
    b.kappa1 = 1.05 * k1;
    b.kappa2 = 1.05 * k2;
    const double grav = 4.0 * M_PI * model.G * model.rho_O;
    b.a = 2.0 * b.kappa1 * b.kappa1 + b.kappa2 + grav;
    b.lower_bound = b.kappa1 * b.kappa1 / 4.0 + b.kappa2 + grav;
    Eigen::SelfAdjointEigenSolver<CMat> es(mass_scaled(set.M, set.L), Eigen::EigenvaluesOnly);
    b.mu_min = es.eigenvalues()(0);
    b.m_star_discrete = std::max(0.0, -b.mu_min);
    if (set.Omega != 0.0) {
        const CMat Bt = mass_scaled(set.M, set.B);
        Eigen::SelfAdjointEigenSolver<CMat> eb(cd(0.0, 1.0) * Bt, Eigen::EigenvaluesOnly);
        b.beta = eb.eigenvalues().cwiseAbs().maxCoeff();
    }
    return b;
}

CVec divergence_free_field(const DiscreteOperatorSet& set, unsigned seed) {
    const AxisymGrid& g = set.grid;
    const int ns = g.n_s, nz = g.n_zeta, N = g.size();
    const Mat Ds = augmented_differentiation(g.s, {0.0, 1.0});
    const Mat Dz = augmented_differentiation(g.zeta, {-1.0, 1.0});
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    Mat chi(nz, ns);
    for (int j = 0; j < nz; ++j)
        for (int i = 0; i < ns; ++i) {
            const int p = g.node(j, i);
            chi(j, i) = set.fields.rho(p) * set.fields.rho(p) * std::pow(g.s[i], 3) * (1.0 - g.zeta[j] * g.zeta[j]) *
                        (1.0 + 0.3 * U(rng));
        }
    // F^s = d chi / dzeta, F^zeta = -d chi / ds; the two mixed derivatives cancel exactly.
    const Mat Fs = Dz * chi;
    const Mat Fz = -(chi * Ds.transpose());
    CVec u = CVec::Zero(3 * N);
    for (int j = 0; j < nz; ++j)
        for (int i = 0; i < ns; ++i) {
            const int p = g.node(j, i);
            const double R = g.R[j], s = g.s[i], st = g.sin_t[p], rho = set.fields.rho(p);
            const double ut = -Fz(j, i) / (R * R * s * st * rho);
            const double ur = (Fs(j, i) - R * g.dR[j] * s * s * st * rho * ut) / (R * R * s * s * rho);
            u(p) = ur;
            u(N + p) = ut;
            if (set.m == 0) u(2 * N + p) = U(rng);
        }
    return u;
}

RadialForm assemble_radial_ss(const StellarModel& model, int n, GradientCoefficient coef) {
    if (!model.spherical) throw InconsistentInputs("radial form needs a spherical model");
    const double R = model.radius();
    const double gamma = model.eos.gamma;
    const QuadRule q = map_rule(gauss_legendre(n), 0.0, R);
    RadialForm f;
    f.r = q.x;
    f.w = q.w;
    Vec stiff(n), mass(n);
    f.potential.resize(n);
    double quad = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = q.x[i];
        const ModelPoint p = model.sample(r, 0.0, false);
        const double r4 = std::pow(r, 4);
        stiff(i) = q.w[i] * gamma * (coef == GradientCoefficient::Pressure ? p.P : p.rho) * r4;
        mass(i) = q.w[i] * p.rho * r4;
        f.potential(i) = -(3.0 * gamma - 4.0) * p.grad_Ups(0) / r;
        quad += mass(i);
    }
    const double exact = integrate([&](double r) { return model.sample(r, 0.0, false).rho * std::pow(r, 4); }, 0.0,
                                   R, 1e-300, 1e-12);
    if (std::abs(quad - exact) > 1e-5 * exact) throw MeshTooCoarse("weight rho r^4 unresolved by the radial nodes");
    const Mat D = differentiation_matrix(q.x);
    f.K = D.transpose() * stiff.asDiagonal() * D;
    f.K += Vec(mass.cwiseProduct(f.potential)).asDiagonal();
    f.K = 0.5 * (f.K + f.K.transpose()).eval();
    f.Mass = mass.asDiagonal();
    return f;
}

QlmForm assemble_Qlm(const StellarModel& model, int ell, int K, double r_inf_factor) {
    if (!model.spherical) throw InconsistentInputs("channel form needs a spherical model");
    if (ell < 0) throw InconsistentInputs("ell must be nonnegative");
    QlmForm f;
    f.ell = ell;
    const double R = model.radius();
    f.r_inf = r_inf_factor * R;
    f.h = f.r_inf / K;
    const double h = f.h;
    const int k0 = ell == 0 ? 0 : 1;
    const int n = K - k0 + 1;
    f.r.resize(n);
    f.V.resize(n);
    for (int k = k0; k <= K; ++k) {
        const double lo = k == 0 ? 0.0 : (k - 0.5) * h;
        const double hi = k == K ? K * h : (k + 0.5) * h;
        f.r[k - k0] = k * h;
        f.V[k - k0] = (hi * hi * hi - lo * lo * lo) / 3.0;
    }
    f.Grad = Mat::Zero(n, n);
    for (int k = 0; k < K; ++k) {
        const double c = std::pow((k + 0.5) * h, 2) / h;
        const int a = k - k0, b = k + 1 - k0;
        if (a >= 0) {
            f.Grad(a, a) += c;
            f.Grad(a, b) -= c;
            f.Grad(b, a) -= c;
        }
        f.Grad(b, b) += c;
    }
    for (int idx = 0; idx < n; ++idx)
        if (f.r[idx] > 0.0) f.Grad(idx, idx) += ell * (ell + 1) * f.V[idx] / (f.r[idx] * f.r[idx]);
    // Exterior r^-(l+1) continuation.
    f.Grad(n - 1, n - 1) += (ell + 1) * f.r_inf;
    f.Lap = -(Eigen::Map<const Vec>(f.V.data(), n).cwiseInverse().asDiagonal() * f.Grad);
    f.comp = Vec::Zero(n);
    f.drho_dUps_V = Vec::Zero(n);
    for (int idx = 0; idx < n; ++idx) {
        if (f.r[idx] >= R) continue;
        const ModelPoint p = model.sample(f.r[idx], 0.0, false);
        if (!(p.rho > 0.0)) continue;
        f.comp(idx) = f.V[idx] * p.dUps_drho;
        f.drho_dUps_V(idx) = f.V[idx] / p.dUps_drho;
    }
    f.Q = f.Lap.transpose() * f.comp.asDiagonal() * f.Lap - 4.0 * M_PI * model.G * f.Grad;
    return f;
}

double Qlm_value(const StellarModel& model, int ell, const std::function<double(double)>& g, int K,
                 double r_inf_factor, double tol) {
    auto eval = [&](int KK, double factor) {
        const QlmForm f = assemble_Qlm(model, ell, KK, factor);
        const int n = static_cast<int>(f.r.size());
        Vec gv(n);
        for (int i = 0; i < n; ++i) gv(i) = f.r[i] < model.radius() ? g(f.r[i]) : 0.0;
        const Vec rhs = -(Eigen::Map<const Vec>(f.V.data(), n).asDiagonal() * gv);
        const Vec psi = f.Grad.ldlt().solve(rhs);
        return psi.dot(f.Q * psi);
    };
    const double q1 = eval(K, r_inf_factor);
    const double q2 = eval(2 * K, 2.0 * r_inf_factor);
    if (std::abs(q1 - q2) > tol * std::max(std::abs(q1), 1e-300))
        throw TruncationTooTight("channel form changes by " + std::to_string(std::abs(q1 - q2)) +
                                 " when the truncation radius doubles");
    return q1;
}

}  // namespace rotostar
