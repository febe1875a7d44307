#include "rotostar/gravity.hpp"

#include <cmath>

#include "rotostar/errors.hpp"

namespace rotostar {

double kernel_K(double r, double zeta, double r2, double zeta2, double tol) {
    const double s1 = std::sqrt(std::max(0.0, 1.0 - zeta * zeta));
    const double s2 = std::sqrt(std::max(0.0, 1.0 - zeta2 * zeta2));
    const double A = r * r + r2 * r2 - 2.0 * r * r2 * zeta * zeta2;
    const double B = 2.0 * r * r2 * s1 * s2;
    const double scale = r * r + r2 * r2;
    if (A - B <= 1e-28 * scale || scale == 0.0) throw SingularPoint("kernel evaluated on coincident points");
    auto f = [&](double phi) { return 1.0 / std::sqrt(A - B * std::cos(phi)); };
    // Symmetric about pi; the peak sits at phi = 0.
    return 2.0 * integrate(f, 0.0, M_PI, 1e-300, tol, 80);
}

double kernel_K_series(double r, double zeta, double r2, double zeta2, int lmax) {
    double acc = 0.0;
    for (int l = 0; l <= lmax; ++l)
        acc += 2.0 * M_PI * multipole_kernel(l, r, r2) * legendre_p(l, zeta) * legendre_p(l, zeta2);
    return acc;
}

LegendreBasis LegendreBasis::build(int n_nodes) {
    LegendreBasis b;
    const QuadRule q = gauss_legendre(n_nodes);
    b.zeta = q.x;
    b.w = q.w;
    b.lmax = n_nodes - 1;
    b.P.resize(b.lmax + 1, n_nodes);
    for (int j = 0; j < n_nodes; ++j)
        for (int l = 0; l <= b.lmax; ++l) b.P(l, j) = legendre_p(l, q.x[j]);
    return b;
}

RadialField legendre_decompose(const std::vector<double>& r, const Mat& field, const LegendreBasis& basis) {
    if (field.cols() != basis.size() || field.rows() != static_cast<Eigen::Index>(r.size()))
        throw GridMismatch("field shape does not match radial grid x Legendre nodes");
    RadialField out;
    out.r = r;
    Mat PW = basis.P;
    for (int l = 0; l <= basis.lmax; ++l)
        for (int j = 0; j < basis.size(); ++j) PW(l, j) *= 0.5 * (2 * l + 1) * basis.w[j];
    out.values = PW * field.transpose();
    return out;
}

Mat legendre_reconstruct(const RadialField& channels, const LegendreBasis& basis) {
    if (channels.values.rows() > basis.lmax + 1) throw GridMismatch("more channels than the basis resolves");
    const Eigen::Index L = channels.values.rows();
    return channels.values.transpose() * basis.P.topRows(L);
}

double hankel_integral(const std::function<double(double)>& g, int ell, double R, double r, double tol) {
    auto f = [&](double s) { return multipole_kernel(ell, r, s) * g(s) * s * s; };
    double acc;
    if (r > 0.0 && r < R)
        acc = integrate(f, 0.0, r, 1e-300, tol) + integrate(f, r, R, 1e-300, tol);
    else
        acc = integrate(f, 0.0, R, 1e-300, tol);
    return acc / (2 * ell + 1);
}

Mat hankel_matrix(const std::vector<double>& nodes, int ell, const std::vector<double>& targets) {
    const int n = static_cast<int>(nodes.size());
    const auto bw = barycentric_weights(nodes);
    const QuadRule inner = gauss_legendre((n + ell + 4) / 2 + 2);
    const QuadRule outer = gauss_legendre(n + 8);

    // Exterior moments int_0^1 s^(l+2) L_i ds.
    Vec moments = Vec::Zero(n);
    {
        const QuadRule q = map_rule(inner, 0.0, 1.0);
        const Mat I = interpolation_matrix(nodes, q.x);
        for (std::size_t k = 0; k < q.size(); ++k) moments += q.w[k] * std::pow(q.x[k], ell + 2) * I.row(k).transpose();
    }

    Mat T(targets.size(), n);
    std::vector<double> pts, wts;
    for (std::size_t t = 0; t < targets.size(); ++t) {
        const double rho = targets[t];
        if (rho >= 1.0) {
            T.row(t) = (std::pow(rho, -ell - 1) * moments).transpose();
            continue;
        }
        pts.clear();
        wts.clear();
        if (rho > 0.0) {
            const QuadRule q = map_rule(inner, 0.0, rho);
            for (std::size_t k = 0; k < q.size(); ++k) {
                pts.push_back(q.x[k]);
                wts.push_back(q.w[k] * multipole_kernel(ell, rho, q.x[k]) * q.x[k] * q.x[k]);
            }
        }
        // Geometric subintervals on [rho, 1] keep s^(1-l) well resolved.
        double a = rho;
        while (a < 1.0) {
            double b = (ell >= 2 && a > 0.0) ? std::min(1.0, 2.0 * a) : 1.0;
            if (b > 0.9 * 1.0 && b < 1.0) b = 1.0;
            const QuadRule q = map_rule(outer, a, b);
            for (std::size_t k = 0; k < q.size(); ++k) {
                pts.push_back(q.x[k]);
                wts.push_back(q.w[k] * multipole_kernel(ell, rho, q.x[k]) * q.x[k] * q.x[k]);
            }
            a = b;
        }
        const Mat I = interpolation_matrix(nodes, pts);
        T.row(t) = Eigen::Map<const Vec>(wts.data(), wts.size()).transpose() * I;
    }
    return T;
}

Vec hankel_potential(const std::vector<double>& nodes, double R, const Vec& g, int ell,
                     const std::vector<double>& r_eval) {
    std::vector<double> rho(r_eval.size());
    for (std::size_t k = 0; k < r_eval.size(); ++k) rho[k] = r_eval[k] / R;
    const Mat T = hankel_matrix(nodes, ell, rho);
    return -(R * R / (2 * ell + 1)) * (T * g);
}

RayQuadrature ray_quadrature_smooth(const PanelMesh& mesh, const double* values, const QuadRule& rule) {
    const std::size_t N = mesh.nodes.size();
    RayQuadrature rq;
    rq.s.resize(N - 1);
    rq.wg.resize(N - 1);
    for (std::size_t i = 0; i + 1 < N; ++i) {
        const QuadRule q = map_rule(rule, mesh.nodes[i], mesh.nodes[i + 1]);
        for (std::size_t k = 0; k < q.size(); ++k) {
            const double v = mesh.interp(values, q.x[k]);
            if (v == 0.0) continue;
            rq.s[i].push_back(q.x[k]);
            rq.wg[i].push_back(q.w[k] * v);
        }
    }
    return rq;
}

Mat potential_from_rays(const std::vector<double>& r, const LegendreBasis& basis,
                        const std::vector<RayQuadrature>& rays) {
    const int N = static_cast<int>(r.size());
    const int nz = basis.size();
    const int L = basis.lmax + 1;
    if (static_cast<int>(rays.size()) != nz) throw GridMismatch("one ray quadrature per Legendre node required");
    Mat K = Mat::Zero(L, N);
    std::vector<double> In(L), Out(L);
    Mat H(L, N);
    for (int j = 0; j < nz; ++j) {
        const RayQuadrature& rq = rays[j];
        std::fill(In.begin(), In.end(), 0.0);
        H.col(0).setZero();
        for (int i = 1; i < N; ++i) {
            const double ratio = r[i - 1] / r[i];
            double rp = ratio;
            for (int l = 0; l < L; ++l) {
                In[l] *= rp;
                rp *= ratio;
            }
            const auto& ss = rq.s[i - 1];
            const auto& ww = rq.wg[i - 1];
            for (std::size_t q = 0; q < ss.size(); ++q) {
                const double x = ss[q] / r[i];
                double p = x * ss[q] * ww[q];
                for (int l = 0; l < L; ++l) {
                    In[l] += p;
                    p *= x;
                }
            }
            for (int l = 0; l < L; ++l) H(l, i) = In[l];
        }
        std::fill(Out.begin(), Out.end(), 0.0);
        for (int i = N - 2; i >= 0; --i) {
            const double ratio = r[i] / r[i + 1];
            double rp = 1.0;
            for (int l = 0; l < L; ++l) {
                Out[l] *= rp;
                rp *= ratio;
            }
            const auto& ss = rq.s[i];
            const auto& ww = rq.wg[i];
            for (std::size_t q = 0; q < ss.size(); ++q) {
                const double y = r[i] / ss[q];
                double p = ss[q] * ww[q];
                for (int l = 0; l < L; ++l) {
                    Out[l] += p;
                    p *= y;
                }
            }
            for (int l = 0; l < L; ++l) H(l, i) += Out[l];
        }
        for (int l = 0; l < L; ++l) K.row(l) += 0.5 * basis.w[j] * basis.P(l, j) * H.row(l);
    }
    return K.transpose() * basis.P;
}

Mat solve_potential_axisym(const Mat& g, const PanelMesh& mesh, const LegendreBasis& basis, int fine_points) {
    if (g.rows() != static_cast<Eigen::Index>(mesh.nodes.size()) || g.cols() != basis.size())
        throw GridMismatch("density samples do not match mesh x Legendre nodes");
    const QuadRule rule = gauss_legendre(fine_points);
    std::vector<RayQuadrature> rays;
    rays.reserve(basis.size());
    for (int j = 0; j < basis.size(); ++j) rays.push_back(ray_quadrature_smooth(mesh, g.col(j).data(), rule));
    return potential_from_rays(mesh.nodes, basis, rays);
}

}  // namespace rotostar
