#pragma once

// Distributed-iteration driver: round-robin over the updating node, one local solve per
// iteration. Batch mode reuses a single fixed window (for exact
// optimization-theoretic checks); adaptive mode consumes a fresh window
// per iteration.

#include <cstdint>
#include <functional>
#include <vector>

#include "nsdasf/netsim.hpp"
#include "nsdasf/problem.hpp"
#include "nsdasf/solver.hpp"

namespace nsdasf::dasf {

enum class Mode { Batch, Adaptive };

struct IterationRecord {
    int iteration = 0;       // index of the completed step (1-based)
    int updating_node = 0;
    double objective_before = 0.0;  // on this step's batch
    double objective_after = 0.0;
    long scalars_up = 0;
    long scalars_down = 0;
    SolveReport solver;
    bool rank_warning = false;
};

struct EngineOptions {
    bool cache_gamma = false;
    bool keep_trace = false;
};

class Engine {
public:
    // X^0 has seeded i.i.d. standard normal entries.
    Engine(ProblemInstance inst, SolverOptions solver_opts, std::uint64_t seed,
           EngineOptions opts = {});

    // Start from a given filter instead of a random one.
    Engine(ProblemInstance inst, SolverOptions solver_opts, FilterMatrix initial,
           EngineOptions opts = {});

    const FilterMatrix& filter() const { return net_.filter(); }
    const netsim::Network& network() const { return net_; }
    int iteration() const { return iteration_; }
    int updating_node() const { return q_; }

    // One distributed iteration on the given window. State is unchanged if
    // the local solve or the round protocol fails.
    IterationRecord step(const SignalBatch& batch);

    // T sequential steps; window_at(i) supplies window i (1-based). Batch
    // mode fetches window_at(1) once and reuses it.
    std::vector<IterationRecord> run(const std::function<SignalBatch(int)>& window_at, Mode mode,
                                     int iterations);

private:
    ProblemInstance inst_;
    SolverOptions solver_opts_;
    netsim::Network net_;
    int q_ = 0;
    int iteration_ = 0;
};

}  // namespace nsdasf::dasf
