#include "rotostar/polytrope.hpp"

#include <algorithm>
#include <cmath>

#include "rotostar/errors.hpp"
#include "rotostar/gravity.hpp"

namespace rotostar {

PolytropicIndex PolytropicIndex::from_gamma(double gamma) {
    if (!(gamma > 1.0 && gamma < 2.0)) throw InconsistentInputs("gamma must lie in (1, 2)");
    return {gamma, 1.0 / (gamma - 1.0)};
}

PolytropicIndex PolytropicIndex::from_n(double n) {
    if (n < 0.0) throw InconsistentInputs("polytropic index must be nonnegative");
    return {n > 0.0 ? 1.0 + 1.0 / n : INFINITY, n};
}

namespace {

struct LeState {
    double th, dth;
};

LeState rhs(const std::function<double(double)>& h, double xi, const LeState& y) {
    return {y.dth, -h(y.th) - 2.0 * y.dth / xi};
}

LeState rk4(const std::function<double(double)>& h, double xi, const LeState& y, double dx) {
    const LeState k1 = rhs(h, xi, y);
    const LeState k2 = rhs(h, xi + 0.5 * dx, {y.th + 0.5 * dx * k1.th, y.dth + 0.5 * dx * k1.dth});
    const LeState k3 = rhs(h, xi + 0.5 * dx, {y.th + 0.5 * dx * k2.th, y.dth + 0.5 * dx * k2.dth});
    const LeState k4 = rhs(h, xi + dx, {y.th + dx * k3.th, y.dth + dx * k3.dth});
    return {y.th + dx / 6.0 * (k1.th + 2 * k2.th + 2 * k3.th + k4.th),
            y.dth + dx / 6.0 * (k1.dth + 2 * k2.dth + 2 * k3.dth + k4.dth)};
}

// One full step vs two half steps, Richardson-extrapolated.
LeState doubled_step(const std::function<double(double)>& h, double xi, const LeState& y, double dx,
                     double* err) {
    const LeState full = rk4(h, xi, y, dx);
    const LeState half = rk4(h, xi, y, 0.5 * dx);
    const LeState two = rk4(h, xi + 0.5 * dx, half, 0.5 * dx);
    if (err) *err = std::max(std::abs(two.th - full.th), std::abs(two.dth - full.dth)) / 15.0;
    return {two.th + (two.th - full.th) / 15.0, two.dth + (two.dth - full.dth) / 15.0};
}

}  // namespace

LaneEmdenSolution solve_lane_emden(const PolytropicIndex& index, double tol, const LaneEmdenOptions& opts) {
    if (!(tol > 0.0)) throw InconsistentInputs("tol must be positive");
    const double n = index.n;
    std::function<double(double)> h = opts.source;
    if (!h) {
        if (n == 0.0)
            h = [](double t) { return t > 0.0 ? 1.0 : 0.0; };
        else
            h = [n](double t) { return t > 0.0 ? std::pow(t, n) : 0.0; };
    }
    const double h1 = h(1.0);
    const double dh1 = (h(1.0 + 1e-6) - h(1.0 - 1e-6)) / 2e-6;

    LaneEmdenSolution sol;
    sol.index = index;
    sol.tol = tol;
    sol.custom_source = static_cast<bool>(opts.source);
    sol.source = h;
    sol.xi.push_back(0.0);
    sol.theta.push_back(1.0);
    sol.dtheta.push_back(0.0);

    double xi = opts.series_start;
    LeState y{1.0 - h1 * xi * xi / 6.0 + h1 * dh1 * std::pow(xi, 4) / 120.0,
              -h1 * xi / 3.0 + h1 * dh1 * std::pow(xi, 3) / 30.0};
    sol.xi.push_back(xi);
    sol.theta.push_back(y.th);
    sol.dtheta.push_back(y.dth);

    double dx = std::min(opts.max_step, 1e-2);
    while (true) {
        if (xi > opts.xi_max) throw NoZeroFound("theta stays positive up to xi_max");
        double err = 0.0;
        LeState next = doubled_step(h, xi, y, dx, &err);
        if (next.th <= 0.0) {
            // The source has a kink at theta = 0; stop exactly there instead of stepping across.
            auto f = [&](double s) { return s == 0.0 ? y.th : doubled_step(h, xi, y, s, nullptr).th; };
            const double s = brent_root(f, 0.0, dx, 1e-15 * std::max(1.0, xi));
            double err_s = 0.0;
            const LeState at = doubled_step(h, xi, y, s, &err_s);
            if (err_s > tol * std::max(s, 1e-300) && s > 1e-3 * dx) {
                dx *= 0.5;
                continue;
            }
            sol.xi1 = xi + s;
            sol.dtheta_at_xi1 = at.dth;
            sol.xi.push_back(sol.xi1);
            sol.theta.push_back(0.0);
            sol.dtheta.push_back(at.dth);
            break;
        }
        if (err > tol * dx) {
            dx *= std::max(0.2, 0.9 * std::pow(tol * dx / err, 0.2));
            if (dx < 1e-14 * std::max(1.0, xi)) throw NonConvergence("step size underflow");
            continue;
        }
        xi += dx;
        y = next;
        sol.xi.push_back(xi);
        sol.theta.push_back(y.th);
        sol.dtheta.push_back(y.dth);
        const double grow = err > 0.0 ? 0.9 * std::pow(tol * dx / err, 0.2) : 2.0;
        dx = std::min({dx * std::min(grow, 2.0), opts.max_step});
    }
    return sol;
}

namespace {

std::size_t find_interval(const std::vector<double>& x, double v) {
    auto it = std::upper_bound(x.begin(), x.end(), v);
    std::size_t i = static_cast<std::size_t>(it - x.begin());
    if (i == 0) return 0;
    return std::min(i - 1, x.size() - 2);
}

}  // namespace

double eval_theta(const LaneEmdenSolution& sol, double xi) {
    if (xi >= sol.xi1) return sol.xi1 * sol.dtheta_at_xi1 * (1.0 - sol.xi1 / xi);
    const std::size_t i = find_interval(sol.xi, xi);
    const double x0 = sol.xi[i], x1 = sol.xi[i + 1], h = x1 - x0;
    const double t = (xi - x0) / h;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
    return h00 * sol.theta[i] + h10 * h * sol.dtheta[i] + h01 * sol.theta[i + 1] + h11 * h * sol.dtheta[i + 1];
}

double eval_dtheta(const LaneEmdenSolution& sol, double xi) {
    if (xi >= sol.xi1) return sol.xi1 * sol.xi1 * sol.dtheta_at_xi1 / (xi * xi);
    const std::size_t i = find_interval(sol.xi, xi);
    const double x0 = sol.xi[i], x1 = sol.xi[i + 1], h = x1 - x0;
    const double t = (xi - x0) / h;
    const double d00 = 6 * t * t - 6 * t, d10 = 3 * t * t - 4 * t + 1;
    const double d01 = -6 * t * t + 6 * t, d11 = 3 * t * t - 2 * t;
    return (d00 * sol.theta[i] + d01 * sol.theta[i + 1]) / h + d10 * sol.dtheta[i] + d11 * sol.dtheta[i + 1];
}

double eval_d2theta(const LaneEmdenSolution& sol, double xi) {
    if (xi >= sol.xi1) return -2.0 * sol.xi1 * sol.xi1 * sol.dtheta_at_xi1 / (xi * xi * xi);
    const double hs = sol.source ? sol.source(eval_theta(sol, xi)) : std::pow(std::max(eval_theta(sol, xi), 0.0), sol.index.n);
    if (xi == 0.0) return -hs / 3.0;
    return -hs - 2.0 * eval_dtheta(sol, xi) / xi;
}

// ---------------------------------------------------------------------------
// Rotation

double RotationProfile::omega_b(double varpi) const {
    if (omega_coeffs.empty() || varpi >= omega_cutoff) return 0.0;
    double acc = 0.0;
    for (std::size_t k = omega_coeffs.size(); k-- > 0;) acc = acc * varpi + omega_coeffs[k];
    return acc;
}

double rotation_integral(const RotationProfile& profile, double varpi) {
    if (profile.is_rigid()) return 0.5 * profile.Omega * profile.Omega * varpi * varpi;
    auto f = [&](double s) {
        const double w = profile.Omega + profile.omega_b(s);
        return w * w * s;
    };
    if (varpi <= profile.omega_cutoff) return integrate(f, 0.0, varpi, 1e-15, 1e-14);
    return integrate(f, 0.0, profile.omega_cutoff, 1e-15, 1e-14) +
           0.5 * profile.Omega * profile.Omega * (varpi * varpi - profile.omega_cutoff * profile.omega_cutoff);
}

BFunction build_b_function(const RotationProfile& profile, double Upsilon_O, double a_scale,
                           double varpi_hat_max, double beta0, int samples) {
    if (!(Upsilon_O > 0.0) || !(a_scale > 0.0)) throw InconsistentInputs("Upsilon_O and a must be positive");
    BFunction b;
    b.x.resize(samples);
    b.value.resize(samples);
    b.slope.resize(samples);
    double sup_v = 0.0, sup_d = 0.0;
    double acc = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double x = varpi_hat_max * i / (samples - 1);
        b.x[i] = x;
        if (profile.is_rigid()) {
            acc = rotation_integral(profile, a_scale * x);
        } else if (i > 0) {
            auto f = [&](double s) {
                const double w = profile.Omega + profile.omega_b(s);
                return w * w * s;
            };
            double lo = a_scale * b.x[i - 1], hi = a_scale * x;
            const double c = profile.omega_cutoff;
            if (lo < c && c < hi)
                acc += integrate(f, lo, c, 1e-16, 1e-14) + integrate(f, c, hi, 1e-16, 1e-14);
            else
                acc += integrate(f, lo, hi, 1e-16, 1e-14);
        }
        const double w = profile.Omega + profile.omega_b(a_scale * x);
        b.value[i] = acc / Upsilon_O;
        b.slope[i] = a_scale * w * w * a_scale * x / Upsilon_O;
        sup_v = std::max(sup_v, std::abs(b.value[i]));
        sup_d = std::max(sup_d, std::abs(b.slope[i]));
    }
    b.norm1 = sup_v + sup_d;
    if (b.norm1 > beta0)
        throw AmplitudeTooLarge("rotation amplitude " + std::to_string(b.norm1) + " exceeds threshold " +
                                std::to_string(beta0));
    return b;
}

double BFunction::operator()(double xh) const {
    if (norm1 == 0.0 || x.empty()) return 0.0;
    const double hstep = x[1] - x[0];
    if (xh >= x.back()) return value.back() + slope.back() * (xh - x.back());
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(xh / hstep), x.size() - 2);
    const double t = (xh - x[i]) / hstep;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
    return h00 * value[i] + h10 * hstep * slope[i] + h01 * value[i + 1] + h11 * hstep * slope[i + 1];
}

double BFunction::derivative(double xh) const {
    if (norm1 == 0.0 || x.empty()) return 0.0;
    const double hstep = x[1] - x[0];
    if (xh >= x.back()) return slope.back();
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(xh / hstep), x.size() - 2);
    const double t = (xh - x[i]) / hstep;
    const double d00 = 6 * t * t - 6 * t, d10 = 3 * t * t - 4 * t + 1;
    const double d01 = -6 * t * t + 6 * t, d11 = 3 * t * t - 2 * t;
    return (d00 * value[i] + d01 * value[i + 1]) / hstep + d10 * slope[i] + d11 * slope[i + 1];
}

// ---------------------------------------------------------------------------
// Distorted Lane-Emden

namespace {

RayQuadrature ray_quadrature(const PanelMesh& mesh, const double* theta, double n,
                       const std::function<double(double)>& g_of_theta, const QuadRule& gl,
                       const QuadRule& gj) {
    const std::size_t N = mesh.nodes.size();
    RayQuadrature rq;
    rq.s.resize(N - 1);
    rq.wg.resize(N - 1);
    for (std::size_t i = 0; i + 1 < N; ++i) {
        const double a = mesh.nodes[i], b = mesh.nodes[i + 1];
        const double ta = theta[i], tb = theta[i + 1];
        if (ta <= 0.0 && tb <= 0.0) continue;
        if (ta > 0.0 && tb <= 0.0) {
            // Surface inside this interval: Jacobi weight (root - s)^n absorbs the vanishing density.
            auto f = [&](double r) { return mesh.interp(theta, r); };
            const double root = brent_root(f, a, b, 1e-15 * b);
            const QuadRule q = map_rule(gj, a, root);
            const double scale = std::pow(0.5 * (root - a), n);
            for (std::size_t k = 0; k < q.size(); ++k) {
                const double s = q.x[k];
                const double th = mesh.interp(theta, s);
                const double dist = root - s;
                const double gval = th > 0.0 ? g_of_theta(th) / std::pow(dist, n) : 0.0;
                rq.s[i].push_back(s);
                rq.wg[i].push_back(q.w[k] * scale * gval);
            }
            continue;
        }
        const QuadRule q = map_rule(gl, a, b);
        for (std::size_t k = 0; k < q.size(); ++k) {
            const double th = mesh.interp(theta, q.x[k]);
            rq.s[i].push_back(q.x[k]);
            rq.wg[i].push_back(q.w[k] * (th > 0.0 ? g_of_theta(th) : 0.0));
        }
    }
    return rq;
}

Mat axisym_potential(const PanelMesh& mesh, const Mat& Theta, double n,
                     const std::function<double(double)>& g_of_theta, int fine) {
    const LegendreBasis basis = LegendreBasis::build(static_cast<int>(Theta.cols()));
    const QuadRule gl = gauss_legendre(fine);
    // Weight (root - s)^n on [a, root]: Jacobi alpha = n on the right end.
    const QuadRule gj = gauss_jacobi(fine + 4, n, 0.0);
    std::vector<RayQuadrature> rays;
    for (int j = 0; j < basis.size(); ++j)
        rays.push_back(ray_quadrature(mesh, Theta.col(j).data(), n, g_of_theta, gl, gj));
    return potential_from_rays(mesh.nodes, basis, rays);
}

Mat apply_map(const PanelMesh& mesh, const std::vector<double>& zeta,
              const Mat& Theta, const BFunction& b, double n, const std::function<double(double)>& g_of_theta,
              int fine) {
    const Mat Kg = axisym_potential(mesh, Theta, n, g_of_theta, fine);
    const int N = static_cast<int>(mesh.nodes.size());
    const int nz = static_cast<int>(zeta.size());
    Mat out(N, nz);
    const double k0 = Kg(0, 0);
    for (int j = 0; j < nz; ++j) {
        const double st = std::sqrt(1.0 - zeta[j] * zeta[j]);
        for (int i = 0; i < N; ++i) out(i, j) = 1.0 + b(mesh.nodes[i] * st) + Kg(i, j) - k0;
    }
    // Equatorial symmetry: the map preserves evenness in zeta, enforce it against roundoff.
    for (int j = 0; j < nz / 2; ++j) {
        const Vec avg = 0.5 * (out.col(j) + out.col(nz - 1 - j));
        out.col(j) = avg;
        out.col(nz - 1 - j) = avg;
    }
    return out;
}

std::function<double(double)> make_source(double n, const Lambda2Fn& lambda2, double Upsilon_O) {
    if (lambda2)
        return [n, lambda2, Upsilon_O](double t) { return std::pow(t, n) * (1.0 + lambda2(Upsilon_O * t)); };
    return [n](double t) { return std::pow(t, n); };
}

}  // namespace

DistortedSolution solve_distorted(const PolytropicIndex& index, const BFunction& b_fn, const Lambda2Fn& lambda2,
                                  double Upsilon_O, const DistortedOptions& opts) {
    if (!(opts.tol > 0.0)) throw InconsistentInputs("tol must be positive");
    const double n = index.n;
    auto g_of_theta = make_source(n, lambda2, Upsilon_O);
    LaneEmdenOptions leo;
    leo.source = [g_of_theta](double t) { return t > 0.0 ? g_of_theta(t) : 0.0; };
    const LaneEmdenSolution le = solve_lane_emden(index, 1e-12, leo);

    DistortedSolution sol;
    sol.index = index;
    sol.b_fn = b_fn;
    sol.Upsilon_O = Upsilon_O;
    sol.tol = opts.tol;
    sol.xi1_spherical = le.xi1;
    sol.Xi0 = 4.0 * le.xi1;
    sol.mesh = PanelMesh::build(sol.Xi0, opts.n_xi, opts.panel_order);
    const QuadRule zq = gauss_legendre(opts.n_zeta);
    sol.zeta = zq.x;
    sol.zeta_w = zq.w;
    const int N = static_cast<int>(sol.mesh.nodes.size());
    const int nz = opts.n_zeta;

    Mat Theta(N, nz);
    for (int j = 0; j < nz; ++j) {
        const double st = std::sqrt(1.0 - sol.zeta[j] * sol.zeta[j]);
        for (int i = 0; i < N; ++i) {
            const double x = sol.mesh.nodes[i];
            Theta(i, j) = eval_theta(le, x) + b_fn(x * st);
        }
    }
    const double w = opts.relaxation;
    double defect = INFINITY;
    int it = 0;
    for (; it < opts.max_iter; ++it) {
        const Mat next = apply_map(sol.mesh, sol.zeta, Theta, b_fn, n, g_of_theta, opts.fine_points);
        defect = (next - Theta).cwiseAbs().maxCoeff();
        Theta = (1.0 - w) * Theta + w * next;
        for (int j = 0; j < nz; ++j)
            if (std::abs(Theta(0, j) - 1.0) > opts.tol) throw NegativeCenter("Theta at origin drifted from 1");
        if (!(defect == defect) || defect > 1e3) throw MaxIterExceeded("fixed-point iteration diverged");
        if (defect <= opts.tol) break;
    }
    if (defect > opts.tol) throw MaxIterExceeded("no convergence after " + std::to_string(opts.max_iter) + " steps");
    sol.Theta = Theta;
    sol.iterations = it + 1;
    sol.residual = defect;
    sol.Xi1 = boundary_curve(sol);
    return sol;
}

Mat distorted_map(const DistortedSolution& sol, const Lambda2Fn& lambda2, int fine_points) {
    auto g = make_source(sol.index.n, lambda2, sol.Upsilon_O);
    return apply_map(sol.mesh, sol.zeta, sol.Theta, sol.b_fn, sol.index.n, g, fine_points);
}

Mat distorted_potential(const DistortedSolution& sol, const Lambda2Fn& lambda2, int fine_points) {
    auto g = make_source(sol.index.n, lambda2, sol.Upsilon_O);
    return axisym_potential(sol.mesh, sol.Theta, sol.index.n, g, fine_points);
}

std::vector<double> boundary_curve(const DistortedSolution& sol) {
    const int N = static_cast<int>(sol.mesh.nodes.size());
    std::vector<double> out(sol.zeta.size());
    for (std::size_t j = 0; j < sol.zeta.size(); ++j) {
        const double* th = sol.Theta.col(j).data();
        int i = 1;
        while (i < N && th[i] > 0.0) ++i;
        if (i == N) throw RootBracketFailure("Theta keeps its sign along a ray");
        auto f = [&](double r) { return sol.mesh.interp(th, r); };
        out[j] = brent_root(f, sol.mesh.nodes[i - 1], sol.mesh.nodes[i], 1e-15 * sol.Xi0);
        if (out[j] >= 0.5 * sol.Xi0) throw RootBracketFailure("boundary beyond half the computational ball");
    }
    return out;
}

namespace {

double ray_value(const DistortedSolution& sol, int j, double xi, double* dxi) {
    const double* th = sol.Theta.col(j).data();
    const double X0 = sol.Xi0;
    if (xi <= X0) {
        if (dxi) *dxi = sol.mesh.interp_deriv(th, xi);
        return sol.mesh.interp(th, xi);
    }
    const double t0 = th[sol.mesh.nodes.size() - 1];
    double slope = sol.mesh.interp_deriv(th, X0);
    if (!(slope < 0.0)) slope = t0 / X0;
    if (dxi) *dxi = slope;
    return t0 + slope * (xi - X0);
}

const std::vector<double>& zeta_weights(const std::vector<double>& zeta) {
    static thread_local std::vector<double> cached_nodes;
    static thread_local std::vector<double> cached_bw;
    if (cached_nodes != zeta) {
        cached_nodes = zeta;
        cached_bw = barycentric_weights(zeta);
    }
    return cached_bw;
}

}  // namespace

std::array<double, 3> interp_table(const DistortedSolution& sol, const Mat& table, double xi, double zeta) {
    const int nz = static_cast<int>(sol.zeta.size());
    const double x = std::min(xi, sol.Xi0);
    Vec v(nz), d(nz);
    for (int j = 0; j < nz; ++j) {
        v(j) = sol.mesh.interp(table.col(j).data(), x);
        d(j) = sol.mesh.interp_deriv(table.col(j).data(), x);
    }
    const auto& bw = zeta_weights(sol.zeta);
    const Vec l = lagrange_basis(sol.zeta, bw, zeta);
    const Vec ld = lagrange_basis_deriv(sol.zeta, bw, zeta);
    return {l.dot(v), l.dot(d), ld.dot(v)};
}

std::array<double, 3> eval_theta_grad(const DistortedSolution& sol, double xi, double zeta) {
    const int nz = static_cast<int>(sol.zeta.size());
    Vec v(nz), d(nz);
    for (int j = 0; j < nz; ++j) v(j) = ray_value(sol, j, xi, &d(j));
    const auto& bw = zeta_weights(sol.zeta);
    const Vec l = lagrange_basis(sol.zeta, bw, zeta);
    const Vec ld = lagrange_basis_deriv(sol.zeta, bw, zeta);
    return {l.dot(v), l.dot(d), ld.dot(v)};
}

double eval_theta(const DistortedSolution& sol, double xi, double zeta) {
    if (xi == 0.0) return 1.0;
    return eval_theta_grad(sol, xi, zeta)[0];
}

double boundary_at(const DistortedSolution& sol, double zeta) {
    const auto& bw = zeta_weights(sol.zeta);
    const Vec l = lagrange_basis(sol.zeta, bw, zeta);
    return l.dot(Eigen::Map<const Vec>(sol.Xi1.data(), sol.Xi1.size()));
}

double boundary_slope_at(const DistortedSolution& sol, double zeta) {
    const auto& bw = zeta_weights(sol.zeta);
    const Vec l = lagrange_basis_deriv(sol.zeta, bw, zeta);
    return l.dot(Eigen::Map<const Vec>(sol.Xi1.data(), sol.Xi1.size()));
}

}  // namespace rotostar
