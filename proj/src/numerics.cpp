#include "rotostar/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "rotostar/errors.hpp"

namespace rotostar {

namespace {

// Golub-Welsch on a symmetric tridiagonal Jacobi matrix.
QuadRule golub_welsch(const Vec& diag, const Vec& off, double mu0) {
    const int n = static_cast<int>(diag.size());
    Mat J = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        J(i, i) = diag(i);
        if (i + 1 < n) J(i, i + 1) = J(i + 1, i) = off(i);
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(J);
    QuadRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        r.x[i] = es.eigenvalues()(i);
        const double v = es.eigenvectors()(0, i);
        r.w[i] = mu0 * v * v;
    }
    return r;
}

}  // namespace

QuadRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");
    QuadRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p1 = x, p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute derivative at the converged node.
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    if (n % 2 == 1) r.x[n / 2] = 0.0;
    return r;
}

QuadRule gauss_lobatto(int n) {
    if (n < 2) throw std::invalid_argument("gauss_lobatto: n < 2");
    QuadRule r;
    r.x.assign(n, 0.0);
    r.w.assign(n, 0.0);
    const int N = n - 1;
    for (int i = 0; i < n; ++i) {
        double x = -std::cos(M_PI * i / N);
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= N; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            // Newton on (1-x^2) P_N'(x) via the standard Lobatto iteration.
            const double dx = (x * p1 - p0) / (n * p1);
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= N; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        r.x[i] = x;
        r.w[i] = 2.0 / (N * n * p1 * p1);
    }
    r.x.front() = -1.0;
    r.x.back() = 1.0;
    return r;
}

QuadRule gauss_jacobi(int n, double alpha, double beta) {
    if (alpha <= -1.0 || beta <= -1.0) throw std::invalid_argument("gauss_jacobi: exponent <= -1");
    Vec d(n), e(std::max(n - 1, 0));
    const double ab = alpha + beta;
    for (int k = 0; k < n; ++k) {
        const double t = 2.0 * k + ab;
        if (k == 0)
            d(k) = (beta - alpha) / (ab + 2.0);
        else
            d(k) = (beta * beta - alpha * alpha) / (t * (t + 2.0));
    }
    for (int k = 1; k < n; ++k) {
        const double t = 2.0 * k + ab;
        double num = 4.0 * k * (k + alpha) * (k + beta) * (k + ab);
        double den = t * t * (t + 1.0) * (t - 1.0);
        e(k - 1) = std::sqrt(num / den);
    }
    const double mu0 = std::pow(2.0, ab + 1.0) * std::tgamma(alpha + 1.0) * std::tgamma(beta + 1.0) /
                       std::tgamma(ab + 2.0);
    return golub_welsch(d, e, mu0);
}

QuadRule map_rule(const QuadRule& ref, double a, double b) {
    QuadRule r;
    const double h = 0.5 * (b - a), c = 0.5 * (b + a);
    r.x.resize(ref.size());
    r.w.resize(ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
        r.x[i] = c + h * ref.x[i];
        r.w[i] = h * ref.w[i];
    }
    return r;
}

double legendre_p(int l, double x) {
    if (l == 0) return 1.0;
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= l; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

Vec assoc_legendre_column(int m, int count, double x) {
    Vec out(count);
    const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
    double pmm = std::sqrt(0.5);
    for (int k = 1; k <= m; ++k) pmm *= std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * s;
    if (count == 0) return out;
    out(0) = pmm;
    if (count == 1) return out;
    double pm1 = std::sqrt(2.0 * m + 3.0) * x * pmm;
    out(1) = pm1;
    double prev2 = pmm, prev1 = pm1;
    for (int i = 2; i < count; ++i) {
        const int l = m + i;
        const double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
        const double b = std::sqrt((double(l - 1) * (l - 1) - double(m) * m) /
                                   (4.0 * double(l - 1) * (l - 1) - 1.0));
        const double p = a * (x * prev1 - b * prev2);
        out(i) = p;
        prev2 = prev1;
        prev1 = p;
    }
    return out;
}

Mat assoc_legendre_table(int m, int count, const std::vector<double>& x) {
    Mat t(count, x.size());
    for (std::size_t j = 0; j < x.size(); ++j) t.col(j) = assoc_legendre_column(m, count, x[j]);
    return t;
}

std::vector<double> barycentric_weights(const std::vector<double>& nodes) {
    const std::size_t n = nodes.size();
    std::vector<double> w(n, 1.0);
    // Scale differences by the interval length to avoid overflow for many nodes.
    const double len = (nodes.back() - nodes.front()) / 4.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            if (k != i) w[i] /= (nodes[i] - nodes[k]) / len;
    return w;
}

Vec lagrange_basis(const std::vector<double>& nodes, const std::vector<double>& bw, double x) {
    const std::size_t n = nodes.size();
    Vec out = Vec::Zero(n);
    double denom = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double d = x - nodes[k];
        if (d == 0.0) {
            out(k) = 1.0;
            return out;
        }
        out(k) = bw[k] / d;
        denom += out(k);
    }
    return out / denom;
}

Vec lagrange_basis_deriv(const std::vector<double>& nodes, const std::vector<double>& bw, double x) {
    const std::size_t n = nodes.size();
    for (std::size_t k = 0; k < n; ++k) {
        if (x == nodes[k]) {
            Vec out = Vec::Zero(n);
            double diag = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == k) continue;
                out(j) = (bw[j] / bw[k]) / (nodes[k] - nodes[j]);
                diag -= out(j);
            }
            out(k) = diag;
            return out;
        }
    }
    // l_k(x) = (bw_k/(x-x_k)) / S(x), S = sum bw_j/(x-x_j).
    Vec a(n), ad(n);
    double S = 0.0, Sd = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double d = x - nodes[k];
        a(k) = bw[k] / d;
        ad(k) = -bw[k] / (d * d);
        S += a(k);
        Sd += ad(k);
    }
    return (ad * S - a * Sd) / (S * S);
}

Mat differentiation_matrix(const std::vector<double>& nodes) {
    const std::size_t n = nodes.size();
    const auto bw = barycentric_weights(nodes);
    Mat D = Mat::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double diag = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            D(i, j) = (bw[j] / bw[i]) / (nodes[i] - nodes[j]);
            diag -= D(i, j);
        }
        D(i, i) = diag;
    }
    return D;
}

Mat augmented_differentiation(const std::vector<double>& nodes, const std::vector<double>& zeros) {
    std::vector<double> all(nodes);
    all.insert(all.end(), zeros.begin(), zeros.end());
    std::vector<std::size_t> order(all.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return all[a] < all[b]; });
    std::vector<double> sorted(all.size());
    for (std::size_t i = 0; i < order.size(); ++i) sorted[i] = all[order[i]];
    const Mat Dfull = differentiation_matrix(sorted);
    std::vector<std::size_t> pos(all.size());
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    const std::size_t n = nodes.size();
    Mat D(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) D(i, j) = Dfull(pos[i], pos[j]);
    return D;
}

Mat interpolation_matrix(const std::vector<double>& nodes, const std::vector<double>& targets) {
    const auto bw = barycentric_weights(nodes);
    Mat E(targets.size(), nodes.size());
    for (std::size_t i = 0; i < targets.size(); ++i) E.row(i) = lagrange_basis(nodes, bw, targets[i]).transpose();
    return E;
}

namespace {

const double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
const double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

void gk15(const std::function<double(double)>& f, double a, double b, double& val, double& err) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double rk = fc * kWgk[7];
    double rg = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double f1 = f(c - dx), f2 = f(c + dx);
        rk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) rg += kWg[j / 2] * (f1 + f2);
    }
    val = rk * h;
    err = std::abs((rk - rg) * h);
}

double integrate_rec(const std::function<double(double)>& f, double a, double b, double whole, double err,
                     double target, int depth) {
    if (err <= target || depth <= 0 || b - a < 1e-15 * (std::abs(a) + std::abs(b) + 1e-300)) return whole;
    const double m = 0.5 * (a + b);
    double v1, e1, v2, e2;
    gk15(f, a, m, v1, e1);
    gk15(f, m, b, v2, e2);
    return integrate_rec(f, a, m, v1, e1, 0.5 * target, depth - 1) +
           integrate_rec(f, m, b, v2, e2, 0.5 * target, depth - 1);
}

}  // namespace

// Error budget is global: set once from the first estimate and split between halves.
double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol, double rel_tol,
                 int max_depth) {
    if (a == b) return 0.0;
    double v, e;
    gk15(f, a, b, v, e);
    return integrate_rec(f, a, b, v, e, std::max(abs_tol, rel_tol * std::abs(v)), max_depth);
}

double brent_root(const std::function<double(double)>& f, double a, double b, double tol, int max_iter) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0) == (fb > 0)) throw RootBracketFailure("brent_root: no sign change on bracket");
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < max_iter; ++it) {
        if ((fb > 0) == (fc > 0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
    }
    return b;
}

Mat null_space_of_row(const Vec& c) {
    const int n = static_cast<int>(c.size());
    Eigen::HouseholderQR<Mat> qr(c);
    Mat Q = qr.householderQ() * Mat::Identity(n, n);
    return Q.rightCols(n - 1);
}

// ---------------------------------------------------------------------------
// Panel mesh

PanelMesh PanelMesh::build(double r_max, int n_target, int order) {
    PanelMesh m;
    m.order = order;
    const int panels = std::max(1, static_cast<int>(std::lround(double(n_target - 1) / (order - 1))));
    const QuadRule lob = gauss_lobatto(order);
    m.ref_x = lob.x;
    m.ref_bw = barycentric_weights(lob.x);
    for (int p = 0; p <= panels; ++p) m.breaks.push_back(r_max * p / panels);
    m.nodes.push_back(0.0);
    for (int p = 0; p < panels; ++p) {
        const double a = m.breaks[p], b = m.breaks[p + 1];
        for (int k = 1; k < order; ++k) m.nodes.push_back(0.5 * (a + b) + 0.5 * (b - a) * lob.x[k]);
        m.nodes.back() = b;
    }
    return m;
}

int PanelMesh::panel_of(double r) const {
    const int np = n_panels();
    const double h = breaks.back() / np;
    return std::clamp(static_cast<int>(r / h), 0, np - 1);
}

double PanelMesh::interp(const double* values, double r) const {
    const int p = panel_of(r);
    const double a = breaks[p], b = breaks[p + 1];
    const double t = (2.0 * r - a - b) / (b - a);
    const Vec l = lagrange_basis(ref_x, ref_bw, t);
    const double* v = values + p * (order - 1);
    double acc = 0.0;
    for (int k = 0; k < order; ++k) acc += l(k) * v[k];
    return acc;
}

double PanelMesh::interp_deriv(const double* values, double r) const {
    const int p = panel_of(r);
    const double a = breaks[p], b = breaks[p + 1];
    const double t = (2.0 * r - a - b) / (b - a);
    const Vec l = lagrange_basis_deriv(ref_x, ref_bw, t);
    const double* v = values + p * (order - 1);
    double acc = 0.0;
    for (int k = 0; k < order; ++k) acc += l(k) * v[k];
    return acc * 2.0 / (b - a);
}

}  // namespace rotostar
