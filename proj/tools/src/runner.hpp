#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "skinlat/eig.hpp"

namespace skinlat::cli {

enum ExitCode { kExitOk = 0, kExitUsage = 1, kExitInvalid = 2, kExitComputation = 3 };

struct Artifact {
    std::string file;
    std::string bytes;
};

// Eigensolver contract as observed on one decomposition.
struct EigCheck {
    std::string label;
    Eigen::Index n = 0;
    double worst_residual = 0.0;
    double bound = 0.0;
    double trace_error = 0.0;
    double trace_bound = 0.0;
    bool hermitian = false;
    double max_imag = 0.0;  // largest |Im E| (only meaningful for Hermitian input)

    bool passed() const { return worst_residual <= bound && trace_error <= trace_bound && (!hermitian || max_imag == 0.0); }
};

struct RunResult {
    nlohmann::json summary;  // also written as <experiment>.json
    std::vector<Artifact> artifacts;
    std::vector<EigCheck> checks;
};

// Computes everything in memory; throws skinlat::Error on numerical failure.
RunResult run_experiment(const ExperimentConfig& config);

// Index of the state picked by a selection rule in a canonical-order solution.
Eigen::Index select_state(const EigenSolution& sol, const ModelParams& params, const Selection& s);

struct RunOutcome {
    int exit_code = kExitOk;
    std::string message;
    nlohmann::json report;
};

// Runs the experiment, writes artifacts and report.json into out_dir.
// With seed_check the experiment is computed twice and the artifacts must be
// byte-identical.
RunOutcome run_to_directory(const ExperimentConfig& config, const std::filesystem::path& out_dir, bool seed_check);

}  // namespace skinlat::cli
