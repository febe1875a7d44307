#include "rotostar/stellar_model.hpp"

#include <algorithm>
#include <cmath>

#include "rotostar/errors.hpp"

namespace rotostar {

ModelScales model_scales(const EquationOfState& eos, double rho_O, double G) {
    if (!(rho_O > 0.0) || !(G > 0.0)) throw InconsistentInputs("rho_O and G must be positive");
    const double g = eos.gamma;
    ModelScales s;
    s.Upsilon_O = eos.fUpsilon(rho_O);
    s.rho_scale = eos.rho_isentropic(s.Upsilon_O);
    s.a_scale = std::pow(eos.A * g / (g - 1.0), 0.5 * eos.n()) *
                std::pow(s.Upsilon_O, -(2.0 - g) / (2.0 * (g - 1.0))) / std::sqrt(4.0 * M_PI * G);
    return s;
}

namespace {

std::function<double(double)> shape_source(const EquationOfState& eos, double Upsilon_O) {
    if (eos.isentropic()) return {};
    return [eos, Upsilon_O](double t) {
        if (t <= 0.0) return 0.0;
        return eos.frho(Upsilon_O * t) / eos.rho_isentropic(Upsilon_O);
    };
}

double density_at(const StellarModel& m, double theta) {
    if (theta <= 0.0) return 0.0;
    if (theta == 1.0) return m.rho_O;
    return m.eos.frho(m.Upsilon_O * theta);
}

constexpr int kMassPanels = 256;

void build_mass_table(StellarModel& m) {
    const double R = m.radius();
    const QuadRule q = gauss_legendre(16);
    m.mass_r.resize(kMassPanels + 1);
    m.mass_m.assign(kMassPanels + 1, 0.0);
    m.mass_dm.resize(kMassPanels + 1);
    for (int k = 0; k <= kMassPanels; ++k) m.mass_r[k] = R * k / kMassPanels;
    for (int k = 0; k < kMassPanels; ++k) {
        const QuadRule p = map_rule(q, m.mass_r[k], m.mass_r[k + 1]);
        double acc = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double rho = density_at(m, eval_theta(*m.le, p.x[i] / m.a_scale));
            acc += p.w[i] * rho * p.x[i] * p.x[i];
        }
        m.mass_m[k + 1] = m.mass_m[k] + 4.0 * M_PI * acc;
    }
    // Potential at panel breaks: Phi(R) = -G M / R, Phi' = G m / r^2.
    m.phi_tab.assign(kMassPanels + 1, 0.0);
    m.phi_tab[kMassPanels] = -m.G * m.mass_m[kMassPanels] / R;
    for (int k = kMassPanels - 1; k >= 0; --k) {
        const QuadRule p = map_rule(q, m.mass_r[k], m.mass_r[k + 1]);
        double acc = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) acc += p.w[i] * m.G * m.enclosed_mass(p.x[i]) / (p.x[i] * p.x[i]);
        m.phi_tab[k] = m.phi_tab[k + 1] - acc;
    }
}

}  // namespace

double StellarModel::radius(double zeta) const {
    if (spherical) return a_scale * le->xi1;
    return a_scale * boundary_at(*distorted, zeta);
}

double StellarModel::radius_slope(double zeta) const {
    if (spherical) return 0.0;
    return a_scale * boundary_slope_at(*distorted, zeta);
}

double StellarModel::R_max() const {
    if (spherical) return radius();
    return a_scale * *std::max_element(distorted->Xi1.begin(), distorted->Xi1.end());
}

double StellarModel::enclosed_mass(double r) const {
    if (!spherical) throw InconsistentInputs("enclosed mass table exists for spherical models only");
    const double R = radius();
    if (r >= R) return mass_m.back();
    if (r <= 0.0) return 0.0;
    const int k = std::min(static_cast<int>(r / R * kMassPanels), kMassPanels - 1);
    static const QuadRule q = gauss_legendre(16);
    const QuadRule p = map_rule(q, mass_r[k], r);
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double rho = density_at(*this, eval_theta(*le, p.x[i] / a_scale));
        acc += p.w[i] * rho * p.x[i] * p.x[i];
    }
    return mass_m[k] + 4.0 * M_PI * acc;
}

double StellarModel::Phi_center() const {
    if (spherical) return phi_tab.front();
    return -Upsilon_O * K_table(0, 0);
}

ModelPoint StellarModel::sample(double r, double zeta, bool with_potential) const {
    ModelPoint pt;
    const double xi = r / a_scale;
    const double sin_t = std::sqrt(std::max(0.0, 1.0 - zeta * zeta));
    double th, dth, dz = 0.0;
    if (spherical) {
        th = xi == 0.0 ? 1.0 : eval_theta(*le, xi);
        dth = xi == 0.0 ? 0.0 : eval_dtheta(*le, xi);
    } else {
        const auto v = eval_theta_grad(*distorted, xi, zeta);
        th = xi == 0.0 ? 1.0 : v[0];
        dth = v[1];
        dz = v[2];
    }
    pt.inside = th > 0.0;
    Eigen::Vector2d grad_theta(dth, xi > 0.0 ? -sin_t * dz / xi : 0.0);
    grad_theta *= Upsilon_O / a_scale;

    // Centrifugal potential gradient (Omega + omega_b)^2 varpi e_varpi.
    Eigen::Vector2d grad_B = Eigen::Vector2d::Zero();
    if (!rotation.is_static()) {
        const double varpi = r * sin_t;
        const double w = rotation.Omega + rotation.omega_b(varpi);
        grad_B = w * w * varpi * Eigen::Vector2d(sin_t, zeta);
    }

    if (spherical) {
        const double R = radius();
        if (r < R) {
            const int k = std::min(static_cast<int>(r / R * kMassPanels), kMassPanels - 1);
            const double m_r = enclosed_mass(r);
            if (with_potential) {
                // Phi(r) = Phi(r_{k+1}) - int_r^{r_{k+1}} G m / s^2
                static const QuadRule q = gauss_legendre(16);
                const QuadRule p = map_rule(q, r, mass_r[k + 1]);
                double acc = 0.0;
                for (std::size_t i = 0; i < p.size(); ++i)
                    acc += p.w[i] * G * enclosed_mass(p.x[i]) / (p.x[i] * p.x[i]);
                pt.Phi = phi_tab[k + 1] - acc;
            }
            pt.grad_Phi = Eigen::Vector2d(r > 0.0 ? G * m_r / (r * r) : 0.0, 0.0);
        } else {
            const double M = mass_m.back();
            pt.Phi = -G * M / r;
            pt.grad_Phi = Eigen::Vector2d(G * M / (r * r), 0.0);
        }
    } else {
        const auto k = interp_table(*distorted, K_table, xi, zeta);
        pt.Phi = -Upsilon_O * k[0];
        if (pt.inside) {
            // Bernoulli: grad Phi = -grad Upsilon + grad B on the support.
            pt.grad_Phi = -grad_theta + grad_B;
        } else {
            pt.grad_Phi = -Upsilon_O / a_scale * Eigen::Vector2d(k[1], xi > 0.0 ? -sin_t * k[2] / xi : 0.0);
        }
    }

    if (!pt.inside) return pt;
    pt.Upsilon = Upsilon_O * th;
    pt.grad_Ups = grad_theta;
    pt.rho = density_at(*this, th);
    pt.P = eos.fP(pt.rho);
    pt.dUps_drho = eos.dUpsilon_drho(pt.rho);
    pt.grad_rho = pt.grad_Ups / pt.dUps_drho;
    pt.grad_P = pt.rho * pt.grad_Ups;

    const double grho = pt.grad_rho.norm();
    if (isentropic || grho == 0.0) return pt;
    const double g = eos.gamma;
    const double u = std::pow(pt.rho, g - 1.0);
    const double grad_u = (g - 1.0) * u / pt.rho * grho;
    const double dS = eos.dSigma(u);
    pt.A = discriminant == DiscriminantForm::Entropy ? dS * grad_u / (g * eos.C_V)
                                                     : (g - 1.0) * u * dS * grad_u / (g * eos.C_V);
    pt.N2 = pt.A * pt.grad_Phi.dot(pt.grad_rho / grho);
    return pt;
}

double StellarModel::nu_star() const {
    double best = INFINITY;
    const int rays = spherical ? 1 : 9;
    for (int j = 0; j < rays; ++j) {
        const double zeta = rays == 1 ? 0.0 : -1.0 + 2.0 * j / (rays - 1);
        const double R = radius(zeta);
        for (int i = 0; i < 400; ++i) {
            const ModelPoint p = sample(R * i / 400.0, zeta);
            if (!p.inside || p.rho <= 0.0) continue;
            best = std::min(best, eos.gamma * p.P / (p.rho * p.rho));
        }
    }
    return best;
}

StellarModel build_spherical_model(const EquationOfState& eos, double rho_O, double G,
                                   const std::vector<double>& r_table, double le_tol) {
    StellarModel m;
    m.eos = eos;
    m.rho_O = rho_O;
    m.G = G;
    const ModelScales s = model_scales(eos, rho_O, G);
    m.Upsilon_O = s.Upsilon_O;
    m.rho_scale = s.rho_scale;
    m.a_scale = s.a_scale;
    m.isentropic = eos.isentropic();
    m.spherical = true;
    m.le_tol = le_tol;
    LaneEmdenOptions opts;
    opts.source = shape_source(eos, m.Upsilon_O);
    m.le = std::make_shared<LaneEmdenSolution>(solve_lane_emden(PolytropicIndex::from_gamma(eos.gamma), le_tol, opts));
    build_mass_table(m);
    std::vector<double> r = r_table;
    if (r.empty())
        for (int i = 0; i <= 64; ++i) r.push_back(m.radius() * i / 64.0);
    tabulate(m, r, {0.0});
    return m;
}

StellarModel build_rotating_model(const EquationOfState& eos, double rho_O, double G,
                                  const RotationProfile& rotation, const DistortedOptions& opts,
                                  const std::vector<double>& r_table, const std::vector<double>& zeta_table) {
    StellarModel m;
    m.eos = eos;
    m.rho_O = rho_O;
    m.G = G;
    const ModelScales s = model_scales(eos, rho_O, G);
    m.Upsilon_O = s.Upsilon_O;
    m.rho_scale = s.rho_scale;
    m.a_scale = s.a_scale;
    m.isentropic = eos.isentropic();
    m.spherical = false;
    m.rotation = rotation;
    m.build_opts = opts;

    const PolytropicIndex index = PolytropicIndex::from_gamma(eos.gamma);
    LaneEmdenOptions lo;
    lo.source = shape_source(eos, m.Upsilon_O);
    const LaneEmdenSolution le = solve_lane_emden(index, 1e-12, lo);
    const BFunction b = build_b_function(rotation, m.Upsilon_O, m.a_scale, 4.0 * le.xi1 * 1.01);
    Lambda2Fn lambda2;
    if (!eos.isentropic()) {
        const EquationOfState e = eos;
        lambda2 = [e](double U) { return e.lambda2(U); };
    }
    auto dist = std::make_shared<DistortedSolution>(solve_distorted(index, b, lambda2, m.Upsilon_O, opts));
    m.distorted = dist;
    m.K_table = distorted_potential(*dist, lambda2, 2 * opts.fine_points);

    std::vector<double> r = r_table, z = zeta_table;
    if (z.empty()) z = dist->zeta;
    if (r.empty())
        for (int i = 0; i <= 64; ++i) r.push_back(m.R_max() * i / 64.0);
    tabulate(m, r, z);
    return m;
}

void tabulate(StellarModel& m, const std::vector<double>& r, const std::vector<double>& zeta) {
    FieldTables& t = m.tables;
    t.r = r;
    t.zeta = zeta;
    const Eigen::Index nr = r.size(), nz = zeta.size();
    t.rho.resize(nr, nz);
    t.P.resize(nr, nz);
    t.Upsilon.resize(nr, nz);
    t.Phi.resize(nr, nz);
    t.A.resize(nr, nz);
    t.N2.resize(nr, nz);
    for (Eigen::Index i = 0; i < nr; ++i)
        for (Eigen::Index j = 0; j < nz; ++j) {
            const ModelPoint p = m.sample(r[i], zeta[j]);
            t.rho(i, j) = p.rho;
            t.P(i, j) = p.P;
            t.Upsilon(i, j) = p.Upsilon;
            t.Phi(i, j) = p.Phi;
            t.A(i, j) = p.A;
            t.N2(i, j) = p.N2;
        }
}

double hydrostatic_residual(const StellarModel& m) {
    double worst = 0.0;
    const int rays = m.spherical ? 1 : 7;
    for (int j = 0; j < rays; ++j) {
        const double zeta = rays == 1 ? 0.0 : -0.95 + 1.9 * j / (rays - 1);
        const double R = m.radius(zeta);
        for (int i = 1; i < 100; ++i) {
            const ModelPoint p = m.sample(R * i / 100.0, zeta);
            if (!p.inside) continue;
            Eigen::Vector2d grad_B = Eigen::Vector2d::Zero();
            if (!m.rotation.is_static()) {
                const double st = std::sqrt(1.0 - zeta * zeta), varpi = R * i / 100.0 * st;
                const double w = m.rotation.Omega + m.rotation.omega_b(varpi);
                grad_B = w * w * varpi * Eigen::Vector2d(st, zeta);
            }
            const Eigen::Vector2d res = p.grad_P / p.rho + p.grad_Phi - grad_B;
            const double scale = p.grad_P.norm() / p.rho + p.grad_Phi.norm();
            if (scale > 0.0) worst = std::max(worst, res.norm() / scale);
        }
    }
    return worst;
}

double bernoulli_residual(const StellarModel& m) {
    if (m.spherical) {
        double worst = 0.0;
        const double phi0 = m.Phi_center();
        for (int i = 1; i < 100; ++i) {
            const ModelPoint p = m.sample(m.radius() * i / 100.0, 0.0);
            worst = std::max(worst, std::abs(p.Upsilon + p.Phi - (m.Upsilon_O + phi0)) / m.Upsilon_O);
        }
        return worst;
    }
    // Evaluate on the mesh nodes so no interpolation enters.
    const DistortedSolution& d = *m.distorted;
    const double phi0 = -m.Upsilon_O * m.K_table(0, 0);
    double worst = 0.0;
    for (int i = 0; i < static_cast<int>(d.mesh.nodes.size()); ++i)
        for (int j = 0; j < static_cast<int>(d.zeta.size()); ++j) {
            if (d.Theta(i, j) <= 0.0) continue;
            const double r = d.mesh.nodes[i] * m.a_scale;
            const double varpi = r * std::sqrt(1.0 - d.zeta[j] * d.zeta[j]);
            const double Ups = m.Upsilon_O * d.Theta(i, j);
            const double Phi = -m.Upsilon_O * m.K_table(i, j);
            const double B = rotation_integral(m.rotation, varpi);
            worst = std::max(worst, std::abs(Ups + Phi - B - (m.Upsilon_O + phi0)) / m.Upsilon_O);
        }
    return worst;
}

DiscriminantFields discriminant_and_buoyancy(const StellarModel& m) {
    DiscriminantFields f;
    const auto& t = m.tables;
    f.A.resize(t.r.size(), t.zeta.size());
    f.N2.resize(t.r.size(), t.zeta.size());
    for (std::size_t i = 0; i < t.r.size(); ++i)
        for (std::size_t j = 0; j < t.zeta.size(); ++j) {
            const ModelPoint p = m.sample(t.r[i], t.zeta[j]);
            f.A(i, j) = p.A;
            f.N2(i, j) = p.N2;
        }
    return f;
}

bool AdmissibilityReport::all_pass() const {
    return std::all_of(items.begin(), items.end(), [](const AdmissibilityItem& i) { return i.pass; });
}

AdmissibilityReport check_admissible_profiles(const std::vector<RayProfile>& rays, double gamma,
                                              const EquationOfState* eos) {
    AdmissibilityReport rep;
    AdmissibilityItem support{"support", true, 0.0, "rho > 0 inside, rho = 0 outside"};
    AdmissibilityItem smooth{"smoothness", true, 0.0, "max second difference of rho^(gamma-1)"};
    AdmissibilityItem decrease{"strict_decrease", true, 0.0, "drho/dr < 0 and dP/dr < 0 on (0, R); fitted C"};
    AdmissibilityItem vacuum{"physical_vacuum", true, 0.0, "inward slope of rho^(gamma-1) at the surface"};
    AdmissibilityItem baro{"barotropic", true, 0.0, "P = f^P(rho)"};
    double C = 0.0;
    double min_slope = INFINITY, max_slope = 0.0;
    for (const RayProfile& ray : rays) {
        const std::size_t n = ray.r.size();
        std::vector<double> u(n);
        for (std::size_t i = 0; i < n; ++i) u[i] = ray.rho[i] > 0.0 ? std::pow(ray.rho[i], gamma - 1.0) : 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const bool in = ray.r[i] < ray.R;
            if (in != (ray.rho[i] > 0.0) && ray.r[i] != ray.R) {
                support.pass = false;
                support.witness = ray.r[i];
            }
            if (in && ray.r[i] > 0.0) {
                if (!(ray.drho_dr[i] < 0.0) || !(ray.dP_dr[i] < 0.0)) {
                    decrease.pass = false;
                    decrease.witness = ray.r[i];
                } else {
                    // Quantitative bound on rho^(gamma-1): d/dr <= -r / C.
                    const double du = (gamma - 1.0) * u[i] / ray.rho[i] * ray.drho_dr[i];
                    C = std::max(C, ray.r[i] / -du);
                }
            }
            if (eos && ray.rho[i] > 0.0) {
                const double rel = std::abs(ray.P[i] - eos->fP(ray.rho[i])) / eos->fP(ray.rho[i]);
                baro.witness = std::max(baro.witness, rel);
                if (rel > 1e-12) baro.pass = false;
            }
        }
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (!(ray.r[i + 1] < ray.R)) break;
            const double h1 = ray.r[i] - ray.r[i - 1], h2 = ray.r[i + 1] - ray.r[i];
            const double d2 = 2.0 * ((u[i + 1] - u[i]) / h2 - (u[i] - u[i - 1]) / h1) / (h1 + h2);
            smooth.witness = std::max(smooth.witness, std::abs(d2));
        }
        // Surface slope from the last two interior samples.
        std::size_t last = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (ray.r[i] < ray.R && ray.rho[i] > 0.0) last = i;
        const double slope = u[last] / (ray.R - ray.r[last]);
        min_slope = std::min(min_slope, slope);
        max_slope = std::max(max_slope, slope);
    }
    if (!std::isfinite(smooth.witness)) smooth.pass = false;
    decrease.witness = decrease.pass ? C : decrease.witness;
    vacuum.witness = min_slope;
    vacuum.pass = std::isfinite(max_slope) && min_slope > 0.0;
    rep.fitted_C = C;
    rep.boundary_slope = rays.empty() ? 0.0 : min_slope;
    rep.items = {support, smooth, decrease, vacuum, baro};
    return rep;
}

AdmissibilityReport check_admissible(const StellarModel& m, int n_rays, int samples) {
    std::vector<RayProfile> rays;
    const int nr = m.spherical ? 1 : n_rays;
    for (int j = 0; j < nr; ++j) {
        RayProfile ray;
        ray.zeta = nr == 1 ? 0.0 : -0.98 + 1.96 * j / (nr - 1);
        ray.R = m.radius(ray.zeta);
        // Samples just past the surface check the vacuum side as well.
        for (int i = 0; i <= samples + samples / 10; ++i) {
            const double r = ray.R * i / samples;
            if (i == samples) continue;
            const ModelPoint p = m.sample(r, ray.zeta);
            ray.r.push_back(r);
            ray.rho.push_back(p.rho);
            ray.P.push_back(p.P);
            ray.drho_dr.push_back(p.grad_rho(0));
            ray.dP_dr.push_back(p.grad_P(0));
        }
        rays.push_back(std::move(ray));
    }
    AdmissibilityReport rep = check_admissible_profiles(rays, m.eos.gamma, &m.eos);
    if (m.spherical) {
        const double g = m.eos.gamma;
        rep.reference_slope = (g - 1.0) / (g * m.eos.A) * m.Upsilon_O * std::abs(m.le->dtheta_at_xi1) / m.a_scale;
    }
    return rep;
}

}  // namespace rotostar
