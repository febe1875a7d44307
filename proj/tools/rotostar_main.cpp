#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "rotostar/errors.hpp"
#include "rotostar/io.hpp"
#include "rotostar/pipeline.hpp"
#include "rotostar/stellar_model.hpp"

using namespace rotostar;

namespace {

void configure_logging() {
    const char* env = std::getenv("ROTOSTAR_LOG");
    spdlog::set_level(spdlog::level::warn);
    if (env && *env) spdlog::set_level(spdlog::level::from_str(env));
}

}  // namespace

int main(int argc, char** argv) {
    configure_logging();
    CLI::App app{"rotostar: polytropic equilibria, oscillation spectra and stability constants"};
    app.require_subcommand(1);

    std::string config_path, out_dir, model_dir, artifact_dir;
    unsigned long long seed = 0;
    int jobs = 1;
    bool no_svg = false;

    auto* run = app.add_subcommand("run", "run a scenario config");
    run->add_option("config", config_path, "scenario JSON")->required();
    auto* out_opt = run->add_option("--out", out_dir, "output directory (overrides the config)");
    auto* seed_opt = run->add_option("--seed", seed, "seed for randomized fields (overrides the config)");
    run->add_option("--jobs", jobs, "concurrent per-m spectra")->check(CLI::PositiveNumber);

    auto* check = app.add_subcommand("check", "reload a saved model and rerun its checks");
    check->add_option("model-dir", model_dir, "directory holding model.csv")->required();

    auto* report = app.add_subcommand("report", "summarize an artifact directory");
    report->add_option("artifact-dir", artifact_dir, "output directory of a run")->required();
    report->add_flag("--no-svg", no_svg, "skip SVG renderings");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*run) {
            ScenarioConfig cfg = load_config(config_path);
            if (*out_opt) cfg.output = out_dir;
            if (*seed_opt) cfg.seed = seed;
            const PipelineResult r = run_pipeline(cfg, jobs);
            std::cout << "wrote " << r.files.size() << " files to " << r.out_dir << " (" << r.failed_checks
                      << " checks failed)\n";
            return 0;
        }
        if (*check) {
            const StellarModel m = load_model(model_dir);
            const AdmissibilityReport adm = check_admissible(m);
            for (const auto& it : adm.items)
                std::cout << (it.pass ? "PASS " : "FAIL ") << it.name << " " << it.witness << "\n";
            std::cout << "hydrostatic residual " << hydrostatic_residual(m) << "\n";
            return adm.all_pass() ? 0 : 3;
        }
        if (*report) {
            const ReportOutput r = emit_report(artifact_dir, !no_svg);
            for (const auto& l : r.lines) std::cout << l << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return 0;
}
