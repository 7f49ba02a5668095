#pragma once

// Experiment runner: static Monte-Carlo convergence study and adaptive
// tracking study, with a fusion-center oracle for reference errors. Emits
// UTF-8 CSV; every byte is determined by (config, seed).

#include <string>
#include <vector>

#include "nsdasf/config.hpp"
#include "nsdasf/datagen.hpp"
#include "nsdasf/engine.hpp"
#include "nsdasf/problem.hpp"

namespace nsdasf::experiment {

// The global (fusion-center) problem as a composite instance: Z = stacked
// samples, F = identity for the shipped sparse-MWF instance.
CompositeProblem global_problem(const SignalBatch& batch, const ProblemInstance& inst);

struct OracleResult {
    Matrix solution;  // M x Q
    double residual = 0.0;
    SolveReport report;
};

// Tight central solve of the full M-dimensional problem.
OracleResult central_oracle(const SignalBatch& batch, const ProblemInstance& inst,
                            double tolerance = 1e-10, int max_iterations = 200000,
                            const Matrix* warm_start = nullptr);

// ||X - Xref||_F^2 / ||Xref||_F^2.
double relative_mse(const Matrix& x, const Matrix& reference);

struct StaticResult {
    // rel_mse_vs_oracle[run][iteration], iterations 0..T.
    std::vector<std::vector<double>> rel_mse_vs_oracle;
    // Rel-MSE achieved by re-running the oracle at the engine's solver
    // budget, one value per run.
    std::vector<double> oracle_budget_floor;
    std::vector<std::string> run_files;
    std::string aggregate_file;
};

StaticResult run_static(const ExperimentConfig& cfg);

struct TrackingRow {
    int iteration = 0;
    double t = 0.0;
    double w_true = 0.0;
    double proj_estimate = 0.0;
    double proj_oracle = 0.0;
    double rel_mse_vs_oracle = 0.0;
};

struct TrackingResult {
    std::vector<TrackingRow> rows;  // iterations 0..T
    std::string file;
};

TrackingResult run_tracking(const ExperimentConfig& cfg);

}  // namespace nsdasf::experiment
