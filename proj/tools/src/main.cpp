#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "config.hpp"
#include "runner.hpp"
#include "skinlat/errors.hpp"
#include "skinlat/threads.hpp"

using namespace skinlat::cli;

namespace {

int configure_threads(int flag) {
    int n = 1;
    if (const char* env = std::getenv("SKINLAT_THREADS"); env && flag <= 0) {
        try {
            n = std::stoi(env);
        } catch (const std::exception&) {
            std::cerr << "error: SKINLAT_THREADS must be a positive integer\n";
            return kExitUsage;
        }
    }
    if (flag > 0) n = flag;
    if (n < 1) {
        std::cerr << "error: thread count must be >= 1\n";
        return kExitUsage;
    }
    skinlat::set_thread_count(n);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"skinlat: two-particle non-reciprocal lattice experiments"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    int threads = 0;
    bool seed_check = false;

    auto* run = app.add_subcommand("run", "Run an experiment config and write its artifacts");
    run->add_option("config", config_path, "Experiment config (JSON)")->required();
    run->add_option("--out", out_dir, "Output directory")->capture_default_str();
    run->add_option("--threads", threads, "Worker threads (overrides SKINLAT_THREADS)")->check(CLI::PositiveNumber);
    run->add_flag("--seed-check", seed_check, "Run twice and require byte-identical output");

    auto* validate = app.add_subcommand("validate", "Check a config without running it");
    validate->add_option("config", config_path, "Experiment config (JSON)")->required();

    app.add_subcommand("list-experiments", "Print the known experiment names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (app.got_subcommand("list-experiments")) {
        for (const auto& name : experiment_names()) std::cout << name << "\n";
        return kExitOk;
    }

    ExperimentConfig config;
    try {
        config = load_config(config_path);
    } catch (const ValidationError& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const skinlat::Error& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return kExitInvalid;
    }

    if (app.got_subcommand("validate")) {
        std::cout << "ok: " << config.experiment << " (" << config.name << ")\n";
        return kExitOk;
    }

    if (const int rc = configure_threads(threads); rc != kExitOk) return rc;
    try {
        const RunOutcome outcome = run_to_directory(config, out_dir, seed_check);
        if (outcome.exit_code != kExitOk) {
            std::cerr << (outcome.exit_code == kExitInvalid ? "invalid config: " : "computation failed: ")
                      << outcome.message << "\n";
            return outcome.exit_code;
        }
        std::cout << "wrote " << outcome.report["artifacts"].size() << " artifacts to " << out_dir << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitComputation;
    }
    return kExitOk;
}
