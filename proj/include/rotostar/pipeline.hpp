#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "rotostar/operators.hpp"
#include "rotostar/stellar_model.hpp"

namespace rotostar {

struct ScenarioConfig {
    // eos
    double gamma = 5.0 / 3.0, A = 1.0, C_V = 1.0;
    std::vector<double> sigma_slope;  // Sigma(u) = C_V ln A + sum_k sigma_slope[k-1] u^k
    // star
    double rho_O = 1.0, G = 1.0;
    double Omega = 0.0;
    std::vector<double> omega_coeffs;
    double omega_cutoff = 0.0;
    // numerics
    int n_s = 12, n_zeta = 8;
    std::vector<int> m_values{0};
    bool cowling = false;
    int lmax = 16, radial_nodes = 48;
    double dt = 1e-2, T = 1.0;
    double forcing = 0.0;  // amplitude of a smooth forcing in the evolve task
    int eq_n_xi = 200, eq_n_zeta = 32;
    double eq_tol = 1e-10;
    int table_points = 65;
    double inclusion_tol = 1e-8;
    std::vector<double> kstar_gammas;  // extra gammas for the k* sweep
    // run
    std::vector<std::string> tasks;
    std::string output = "out";
    unsigned long long seed = 1;
};

// Throws ConfigError with a JSON pointer to the offending entry.
ScenarioConfig parse_config(const nlohmann::json& j);
ScenarioConfig load_config(const std::string& path);
nlohmann::json config_to_json(const ScenarioConfig& c);

// Equilibrium and operator-set options described by a config (tables are left at their defaults).
StellarModel build_scenario_model(const ScenarioConfig& c);
AxisymOptions scenario_set_options(const ScenarioConfig& c, int m);

struct PipelineResult {
    std::string out_dir;
    std::vector<std::string> files;
    int failed_checks = 0;
};

// Runs the tasks in dependency order and writes summary.json, report.txt and manifest.json in the output directory.
// jobs > 1 runs the per-m spectra concurrently.
PipelineResult run_pipeline(const ScenarioConfig& config, int jobs = 1);

// Exit status for an exception escaping the pipeline: 2 config, 3 numerical, 4 I/O.
int exit_code_for(const std::exception& e);

}  // namespace rotostar
