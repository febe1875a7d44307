#include "rotostar/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <set>

#include <spdlog/spdlog.h>

#include "rotostar/errors.hpp"
#include "rotostar/eos.hpp"
#include "rotostar/evolution.hpp"
#include "rotostar/io.hpp"
#include "rotostar/operators.hpp"
#include "rotostar/pencil.hpp"
#include "rotostar/stability.hpp"
#include "rotostar/stellar_model.hpp"

namespace rotostar {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const std::vector<std::string> kTaskOrder{"equilibrium", "spectrum", "evolve", "stability", "kstar"};

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return it.key() == a; });
        if (!ok) throw ConfigError(path + "/" + it.key() + ": unknown key");
    }
}

double num(const json& j, const char* key, const std::string& path, double def, bool positive = false) {
    if (!j.contains(key)) return def;
    const json& v = j.at(key);
    if (!v.is_number()) throw ConfigError(path + "/" + key + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(path + "/" + key + ": must be finite");
    if (positive && !(x > 0.0)) throw ConfigError(path + "/" + key + ": must be positive");
    return x;
}

int integer(const json& j, const char* key, const std::string& path, int def, int min_value) {
    if (!j.contains(key)) return def;
    const json& v = j.at(key);
    if (!v.is_number_integer()) throw ConfigError(path + "/" + key + ": expected an integer");
    const int x = v.get<int>();
    if (x < min_value) throw ConfigError(path + "/" + key + ": must be at least " + std::to_string(min_value));
    return x;
}

std::vector<double> numbers(const json& j, const char* key, const std::string& path) {
    if (!j.contains(key)) return {};
    const json& v = j.at(key);
    if (!v.is_array()) throw ConfigError(path + "/" + key + ": expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) throw ConfigError(path + "/" + key + "/" + std::to_string(i) + ": expected a number");
        out.push_back(v[i].get<double>());
    }
    return out;
}

struct Check {
    std::string task, name;
    bool pass = false;
    double value = 0.0;
    std::string note;
};

json check_json(const Check& c) {
    json j{{"task", c.task}, {"name", c.name}, {"pass", c.pass}, {"value", c.value}};
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

CVec random_field(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    CVec u(n);
    for (int i = 0; i < n; ++i) u(i) = {nd(rng), nd(rng)};
    return u;
}

struct SpectrumArtifacts {
    int m = 0;
    std::vector<Check> checks;
    std::string file;
};

SpectrumArtifacts spectrum_task(const StellarModel& model, const ScenarioConfig& c, int m, const fs::path& out) {
    SpectrumArtifacts res;
    res.m = m;
    const DiscreteOperatorSet set = assemble_axisym_set(model, scenario_set_options(c, m));
    SpectrumOptions so;
    so.vectors = true;
    const PencilSpectrum sp = compute_spectrum(set, so);
    const double scale = std::max(1.0, sp.spectral_radius());
    const std::string tag = "spectrum m=" + std::to_string(m);
    const InclusionReport inc = check_inclusion_S(sp.eigenvalues, sp.m_star, sp.beta, c.inclusion_tol * scale);
    res.checks.push_back({tag, "eigenvalues inside S", inc.pass, static_cast<double>(inc.violators.size()),
                          "violators; tolerance scaled by the spectral radius"});
    const SymmetryReport sym = check_iR_symmetry(sp.eigenvalues, c.inclusion_tol * scale);
    res.checks.push_back({tag, "symmetry under lambda -> -conj(lambda)", sym.pass, sym.defect / scale,
                          "defect / spectral radius"});
    double worst_quad = 0.0, worst_re = 0.0;
    for (const auto& d : sp.diagnostics) worst_quad = std::max(worst_quad, d.quad_residual);
    for (const auto& l : sp.eigenvalues) worst_re = std::max(worst_re, std::abs(l.real()));
    res.checks.push_back({tag, "quadratic identity residual", worst_quad <= 1e-9, worst_quad, ""});
    if (model.rotation.is_static())
        res.checks.push_back({tag, "max |Re lambda| without rotation", worst_re <= 1e-8, worst_re,
                              "m = 0, 1 carry the discrete translation mode"});
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < sp.eigenvalues.size(); ++k) {
        const auto& d = sp.diagnostics[k];
        rows.push_back({sp.eigenvalues[k].real(), sp.eigenvalues[k].imag(), d.b.real(), d.c.real(), d.quad_residual});
    }
    const json meta{{"m", m},
                    {"m_star", sp.m_star},
                    {"beta", sp.beta},
                    {"sqrt_m_star", std::sqrt(sp.m_star)},
                    {"half_beta", 0.5 * sp.beta},
                    {"linearization", sp.linearization},
                    {"dim", set.dim()}};
    res.file = "spectrum_m" + std::to_string(m) + ".csv";
    write_csv((out / res.file).string(), {"re", "im", "b", "c", "quad_residual"}, rows, meta.dump());
    return res;
}

}  // namespace

ScenarioConfig parse_config(const json& j) {
    check_keys(j, "", {"eos", "star", "numerics", "tasks", "output", "seed"});
    ScenarioConfig c;
    if (j.contains("tasks")) {
        const json& t = j.at("tasks");
        if (!t.is_array()) throw ConfigError("/tasks: expected an array");
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (!t[i].is_string()) throw ConfigError("/tasks/" + std::to_string(i) + ": expected a string");
            const std::string name = t[i].get<std::string>();
            if (std::find(kTaskOrder.begin(), kTaskOrder.end(), name) == kTaskOrder.end())
                throw ConfigError("/tasks/" + std::to_string(i) + ": unknown task '" + name + "'");
            c.tasks.push_back(name);
        }
    }
    if (!c.tasks.empty()) {
        if (!j.contains("eos")) throw ConfigError("/eos: required when tasks are listed");
        if (!j.contains("star")) throw ConfigError("/star: required when tasks are listed");
    }
    if (j.contains("eos")) {
        const json& e = j.at("eos");
        check_keys(e, "/eos", {"gamma", "A", "C_V", "sigma_slope"});
        c.gamma = num(e, "gamma", "/eos", c.gamma);
        if (!(c.gamma > 6.0 / 5.0 && c.gamma < 2.0)) throw ConfigError("/eos/gamma: must lie in (6/5, 2)");
        c.A = num(e, "A", "/eos", c.A, true);
        c.C_V = num(e, "C_V", "/eos", c.C_V, true);
        c.sigma_slope = numbers(e, "sigma_slope", "/eos");
    }
    if (j.contains("star")) {
        const json& s = j.at("star");
        check_keys(s, "/star", {"rho_O", "G", "rotation"});
        c.rho_O = num(s, "rho_O", "/star", c.rho_O, true);
        c.G = num(s, "G", "/star", c.G, true);
        if (s.contains("rotation")) {
            const json& r = s.at("rotation");
            check_keys(r, "/star/rotation", {"Omega", "omega_coeffs", "omega_cutoff"});
            c.Omega = num(r, "Omega", "/star/rotation", 0.0);
            c.omega_coeffs = numbers(r, "omega_coeffs", "/star/rotation");
            c.omega_cutoff = num(r, "omega_cutoff", "/star/rotation", 0.0);
            if (!c.omega_coeffs.empty() && !(c.omega_cutoff > 0.0))
                throw ConfigError("/star/rotation/omega_cutoff: must be positive with omega_coeffs");
        }
    }
    if (j.contains("numerics")) {
        const json& n = j.at("numerics");
        const std::string p = "/numerics";
        check_keys(n, p, {"n_s", "n_zeta", "m", "cowling", "lmax", "radial_nodes", "dt", "T", "forcing",
                          "equilibrium", "table_points", "inclusion_tol", "kstar_gammas"});
        c.n_s = integer(n, "n_s", p, c.n_s, 2);
        c.n_zeta = integer(n, "n_zeta", p, c.n_zeta, 2);
        if (n.contains("m")) {
            const json& m = n.at("m");
            if (!m.is_array() || m.empty()) throw ConfigError(p + "/m: expected a nonempty array of integers");
            c.m_values.clear();
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (!m[i].is_number_integer()) throw ConfigError(p + "/m/" + std::to_string(i) + ": expected an integer");
                c.m_values.push_back(m[i].get<int>());
            }
        }
        if (n.contains("cowling")) {
            if (!n.at("cowling").is_boolean()) throw ConfigError(p + "/cowling: expected true or false");
            c.cowling = n.at("cowling").get<bool>();
        }
        c.lmax = integer(n, "lmax", p, c.lmax, 0);
        c.radial_nodes = integer(n, "radial_nodes", p, c.radial_nodes, 4);
        c.dt = num(n, "dt", p, c.dt, true);
        c.T = num(n, "T", p, c.T, true);
        c.forcing = num(n, "forcing", p, c.forcing);
        c.table_points = integer(n, "table_points", p, c.table_points, 2);
        c.inclusion_tol = num(n, "inclusion_tol", p, c.inclusion_tol, true);
        c.kstar_gammas = numbers(n, "kstar_gammas", p);
        for (std::size_t i = 0; i < c.kstar_gammas.size(); ++i)
            if (!(c.kstar_gammas[i] > 6.0 / 5.0 && c.kstar_gammas[i] < 2.0))
                throw ConfigError(p + "/kstar_gammas/" + std::to_string(i) + ": must lie in (6/5, 2)");
        if (n.contains("equilibrium")) {
            const json& q = n.at("equilibrium");
            check_keys(q, p + "/equilibrium", {"n_xi", "n_zeta", "tol"});
            c.eq_n_xi = integer(q, "n_xi", p + "/equilibrium", c.eq_n_xi, 8);
            c.eq_n_zeta = integer(q, "n_zeta", p + "/equilibrium", c.eq_n_zeta, 2);
            c.eq_tol = num(q, "tol", p + "/equilibrium", c.eq_tol, true);
        }
    }
    const bool rotating = c.Omega != 0.0 || !c.omega_coeffs.empty();
    if (rotating && std::find(c.tasks.begin(), c.tasks.end(), "kstar") != c.tasks.end())
        throw ConfigError("/tasks: kstar needs a non-rotating star");
    if (j.contains("output")) {
        if (!j.at("output").is_string()) throw ConfigError("/output: expected a string");
        c.output = j.at("output").get<std::string>();
    }
    if (j.contains("seed")) {
        const json& s = j.at("seed");
        if (!s.is_number_integer() || s.get<long long>() < 0) throw ConfigError("/seed: expected a nonnegative integer");
        c.seed = j.at("seed").get<unsigned long long>();
    }
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("IoFailure", "cannot read config " + path);
    json j;
    try {
        j = json::parse(is);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": not valid JSON (" + std::string(e.what()) + ")");
    }
    return parse_config(j);
}

json config_to_json(const ScenarioConfig& c) {
    json j;
    j["eos"] = {{"gamma", c.gamma}, {"A", c.A}, {"C_V", c.C_V}, {"sigma_slope", c.sigma_slope}};
    j["star"] = {{"rho_O", c.rho_O},
                 {"G", c.G},
                 {"rotation", {{"Omega", c.Omega}, {"omega_coeffs", c.omega_coeffs}, {"omega_cutoff", c.omega_cutoff}}}};
    j["numerics"] = {{"n_s", c.n_s},
                     {"n_zeta", c.n_zeta},
                     {"m", c.m_values},
                     {"cowling", c.cowling},
                     {"lmax", c.lmax},
                     {"radial_nodes", c.radial_nodes},
                     {"dt", c.dt},
                     {"T", c.T},
                     {"forcing", c.forcing},
                     {"equilibrium", {{"n_xi", c.eq_n_xi}, {"n_zeta", c.eq_n_zeta}, {"tol", c.eq_tol}}},
                     {"table_points", c.table_points},
                     {"inclusion_tol", c.inclusion_tol},
                     {"kstar_gammas", c.kstar_gammas}};
    j["tasks"] = c.tasks;
    j["output"] = c.output;
    j["seed"] = c.seed;
    return j;
}

StellarModel build_scenario_model(const ScenarioConfig& c) {
    const EquationOfState eos = build_eos(c.A, c.gamma, c.C_V, c.sigma_slope);
    if (c.Omega == 0.0 && c.omega_coeffs.empty()) return build_spherical_model(eos, c.rho_O, c.G);
    RotationProfile rp;
    rp.Omega = c.Omega;
    rp.omega_coeffs = c.omega_coeffs;
    rp.omega_cutoff = c.omega_cutoff;
    DistortedOptions o;
    o.n_xi = c.eq_n_xi;
    o.n_zeta = c.eq_n_zeta;
    o.tol = c.eq_tol;
    return build_rotating_model(eos, c.rho_O, c.G, rp, o);
}

AxisymOptions scenario_set_options(const ScenarioConfig& c, int m) {
    AxisymOptions o;
    o.n_s = c.n_s;
    o.n_zeta = c.n_zeta;
    o.m = m;
    o.cowling = c.cowling;
    return o;
}

PipelineResult run_pipeline(const ScenarioConfig& c, int jobs) {
    PipelineResult res;
    res.out_dir = c.output;
    const fs::path out(c.output);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw IoError("IoFailure", "cannot create " + c.output + ": " + ec.message());

    std::set<std::string> wanted(c.tasks.begin(), c.tasks.end());
    std::vector<Check> checks;
    json series = json::array();
    json summary;
    summary["tasks"] = json::array();
    std::mt19937_64 rng(c.seed);

    {
        std::ofstream os(out / "config.json");
        if (!os) throw IoError("IoFailure", "cannot write config.json in " + c.output);
        os << config_to_json(c).dump(2) << '\n';
    }

    const bool rotating = c.Omega != 0.0 || !c.omega_coeffs.empty();
    StellarModel model;
    bool have_model = false;
    auto need_model = [&] {
        if (have_model) return;
        spdlog::info("building equilibrium (gamma {}, Omega {})", c.gamma, c.Omega);
        model = build_scenario_model(c);
        std::vector<double> r(c.table_points);
        for (int i = 0; i < c.table_points; ++i) r[i] = model.R_max() * i / (c.table_points - 1);
        tabulate(model, r, model.tables.zeta);
        have_model = true;
    };

    for (const std::string& task : kTaskOrder) {
        if (!wanted.count(task)) continue;
        summary["tasks"].push_back(task);
        spdlog::info("task {}", task);
        if (task == "equilibrium") {
            need_model();
            save_model(model, (out / "model").string());
            const AdmissibilityReport adm = check_admissible(model);
            json a = json::array();
            for (const auto& it : adm.items) {
                a.push_back({{"name", it.name}, {"pass", it.pass}, {"witness", it.witness}, {"note", it.note}});
                checks.push_back({"equilibrium", "admissibility: " + it.name, it.pass, it.witness, ""});
            }
            std::ofstream os(out / "admissibility.json");
            os << json{{"items", a}, {"fitted_C", adm.fitted_C}, {"all_pass", adm.all_pass()}}.dump(2) << '\n';
            checks.push_back({"equilibrium", "hydrostatic residual", true, hydrostatic_residual(model), "reported"});
            std::vector<std::vector<double>> rows;
            if (!rotating) {
                const auto& le = *model.le;
                for (std::size_t i = 0; i < le.xi.size(); ++i) rows.push_back({le.xi[i], le.theta[i], le.dtheta[i]});
                write_csv((out / "theta.csv").string(), {"xi", "theta", "dtheta"}, rows);
                series.push_back({{"file", "theta.csv"}, {"x", "xi"}, {"y", {"theta"}}, {"title", "theta profile"}});
            } else {
                const auto& d = *model.distorted;
                for (double xi : d.mesh.nodes)
                    rows.push_back({xi, eval_theta(d, xi, 0.0), eval_theta(d, xi, 1.0)});
                write_csv((out / "theta.csv").string(), {"xi", "theta_equator", "theta_pole"}, rows);
                series.push_back({{"file", "theta.csv"},
                                  {"x", "xi"},
                                  {"y", {"theta_equator", "theta_pole"}},
                                  {"title", "distorted profile"}});
                std::vector<std::vector<double>> b;
                for (std::size_t j = 0; j < d.zeta.size(); ++j) b.push_back({d.zeta[j], d.Xi1[j]});
                write_csv((out / "boundary.csv").string(), {"zeta", "Xi1"}, b);
                series.push_back({{"file", "boundary.csv"}, {"x", "zeta"}, {"y", {"Xi1"}}, {"title", "boundary curve"}});
            }
        } else if (task == "spectrum") {
            need_model();
            std::vector<SpectrumArtifacts> parts(c.m_values.size());
            const std::size_t width = static_cast<std::size_t>(std::max(1, jobs));
            for (std::size_t start = 0; start < c.m_values.size(); start += width) {
                std::vector<std::future<SpectrumArtifacts>> fut;
                for (std::size_t k = start; k < std::min(c.m_values.size(), start + width); ++k)
                    fut.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred,
                                             [&, k] { return spectrum_task(model, c, c.m_values[k], out); }));
                for (std::size_t k = 0; k < fut.size(); ++k) parts[start + k] = fut[k].get();
            }
            for (const auto& p : parts) {
                checks.insert(checks.end(), p.checks.begin(), p.checks.end());
                series.push_back({{"file", p.file},
                                  {"x", "re"},
                                  {"y", {"im"}},
                                  {"scatter", true},
                                  {"title", "spectrum m=" + std::to_string(p.m)}});
            }
        } else if (task == "evolve") {
            need_model();
            const DiscreteOperatorSet set = assemble_axisym_set(model, scenario_set_options(c, c.m_values.front()));
            double m_star = 0.0, beta = 0.0;
            pencil_bounds(set.M, set.B, set.L, m_star, beta);
            const CVec xi0 = random_field(set.dim(), rng), v0 = random_field(set.dim(), rng);
            const CVec shape = random_field(set.dim(), rng);
            Forcing f;
            if (c.forcing != 0.0) f = [&](double t) { return CVec(c.forcing * std::sin(t) * shape); };
            EvolutionOptions eo;
            eo.dt = c.dt;
            eo.T = c.T;
            const EvolutionTrajectory tr = integrate(set, m_star, xi0, v0, f, eo);
            const EnergyEstimateReport er = check_energy_estimate(tr, m_star, beta);
            checks.push_back({"evolve", "energy estimate", er.pass, er.max_ratio, "max sqrt(E)/bound"});
            if (tr.homogeneous) {
                const double drift = conserved_energy_check(tr);
                checks.push_back({"evolve", "energy drift", drift <= 1e-9, drift, "relative"});
            }
            std::vector<std::vector<double>> rows;
            for (std::size_t i = 0; i < tr.times.size(); ++i)
                rows.push_back({tr.times[i], tr.E_semigroup[i], std::sqrt(std::max(0.0, tr.E_semigroup[i])),
                                er.bound[i], tr.E_physical[i]});
            const json meta{{"kappa", er.kappa}, {"a", m_star}, {"beta", beta}, {"dt", c.dt}, {"m", set.m}};
            write_csv((out / "energy.csv").string(), {"t", "E_semigroup", "sqrt_E", "envelope", "E_physical"}, rows,
                      meta.dump());
            series.push_back({{"file", "energy.csv"},
                              {"x", "t"},
                              {"y", {"sqrt_E", "envelope"}},
                              {"title", "energy against the exponential envelope"}});
        } else if (task == "stability") {
            need_model();
            const DiscreteOperatorSet set = assemble_axisym_set(model, scenario_set_options(c, c.m_values.front()));
            const StabilityReport sr = build_stability_report(model, set, c.lmax, c.radial_nodes, c.radial_nodes);
            json j;
            j["delta_star"] = sr.delta_star;
            j["mu0"] = sr.mu0;
            j["mu1"] = sr.mu1;
            j["nu_star"] = sr.nu_star;
            j["C_bound"] = sr.C_bound;
            j["k_star"] = sr.kstar.k_star;
            j["k_star_per_ell"] = sr.kstar.k_dim;
            j["pd1"] = {{"pass", sr.pd1_pass}, {"min_quotient", sr.pd1_min_quotient}};
            j["pd2"] = json::array();
            for (const auto& [name, r] : sr.pd2) {
                j["pd2"].push_back({{"seminorm", name},
                                    {"delta", r.delta_claim},
                                    {"min_quotient", r.min_quotient},
                                    {"range_dim", r.range_dim},
                                    {"pass", r.pass}});
                checks.push_back({"stability", "PD2 " + name, r.pass, r.min_quotient, ""});
            }
            j["epsilon_A"] = std::isfinite(sr.epsilon_A) ? json(sr.epsilon_A) : json("inf");
            j["bounds"] = {{"kappa1", sr.bounds.kappa1},
                           {"kappa2", sr.bounds.kappa2},
                           {"a", sr.bounds.a},
                           {"m_star", sr.bounds.m_star_discrete},
                           {"lower_bound", sr.bounds.lower_bound}};
            j["notes"] = sr.notes;
            j["units_note"] = "n1 mixes an r^2-weighted l = 0 term with unweighted l >= 2 terms";
            checks.push_back({"stability", "PD1 min Rayleigh quotient", sr.pd1_pass, sr.pd1_min_quotient,
                              "discrete l = 1 translation mode makes this slightly negative"});
            std::ofstream os(out / "stability.json");
            os << j.dump(2) << '\n';
        } else if (task == "kstar") {
            std::vector<double> gammas{c.gamma};
            for (double g : c.kstar_gammas)
                if (std::find(gammas.begin(), gammas.end(), g) == gammas.end()) gammas.push_back(g);
            std::vector<std::vector<double>> rows;
            json overall = json::array();
            for (double g : gammas) {
                const EquationOfState eos = build_eos(c.A, g, c.C_V, {});
                const StellarModel mk = build_spherical_model(eos, c.rho_O, c.G);
                const KStarResult k = compute_k_star(mk, c.lmax, c.radial_nodes, false);
                for (std::size_t i = 0; i < k.ell.size(); ++i)
                    rows.push_back({g, static_cast<double>(c.lmax), static_cast<double>(k.ell[i]), k.k_dim[i],
                                    k.k_nondim[i]});
                overall.push_back({{"gamma", g},
                                   {"k_star", k.k_star},
                                   {"k_star_nondim", k.k_star_nondim},
                                   {"C_bound", k.C_bound},
                                   {"tail_decreasing", k.tail_decreasing}});
                checks.push_back({"kstar", "tail decreasing at gamma " + std::to_string(g), k.tail_decreasing,
                                  k.k_star, "value is k*, reported only"});
            }
            write_csv((out / "kstar.csv").string(), {"gamma", "lmax", "ell", "k_dim", "k_nondim"}, rows,
                      json{{"overall", overall}}.dump());
            series.push_back({{"file", "kstar.csv"}, {"x", "ell"}, {"y", {"k_dim"}}, {"scatter", true},
                              {"title", "per-degree suprema"}});
        }
    }

    summary["checks"] = json::array();
    for (const auto& ch : checks) {
        summary["checks"].push_back(check_json(ch));
        if (!ch.pass) ++res.failed_checks;
    }
    summary["series"] = series;
    summary["seed"] = c.seed;
    {
        std::ofstream os(out / "summary.json");
        if (!os) throw IoError("IoFailure", "cannot write summary.json");
        os << summary.dump(2) << '\n';
    }
    emit_report(c.output, false);
    for (const auto& e : write_manifest(c.output)) res.files.push_back(e.path);
    res.files.push_back("manifest.json");
    return res;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return 2;
    if (dynamic_cast<const IoError*>(&e)) return 4;
    if (dynamic_cast<const std::filesystem::filesystem_error*>(&e)) return 4;
    return 3;
}

}  // namespace rotostar
