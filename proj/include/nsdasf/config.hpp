#pragma once

// Flat sectioned key = value configuration for the experiment runner.
// Sections: [network], [problem], [solver], [experiment]. Unknown sections
// or keys are rejected.

#include <cstdint>
#include <iosfwd>
#include <string>

#include "nsdasf/solver.hpp"

namespace nsdasf {

enum class ExperimentKind { Static, Tracking, Custom };
enum class RunMode { Batch, Adaptive };

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::Static;

    // network
    int node_count = 10;        // K
    int channels_per_node = 10; // M_k
    int output_count = 1;       // Q

    // problem
    double lambda = 1.0;
    double noise_std = 0.31622776601683794;  // sqrt(0.1)

    // solver
    SolverOptions solver;

    // experiment
    int n_samples = 1000;  // N per window
    int runs = 20;         // Monte-Carlo runs (100 reproduces the full study)
    int iterations = 50;
    RunMode mode = RunMode::Batch;
    std::uint64_t seed = 1;
    bool cache_gamma = false;
    int bytes_per_scalar = 8;
    bool dump_trace = false;
    std::string output = "out";

    void validate() const;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

}  // namespace nsdasf
