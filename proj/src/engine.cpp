#include "nsdasf/engine.hpp"

#include <iostream>

#include "nsdasf/rng.hpp"

namespace nsdasf::dasf {

namespace {

FilterMatrix random_filter(const NetworkLayout& layout, std::uint64_t seed) {
    std::mt19937_64 rng(mix_seed(seed, 0));
    return FilterMatrix(gaussian_matrix(layout.total_channels(), layout.output_count(), rng),
                        layout);
}

// Smallest-to-largest singular value check per block; a nearly
// rank-deficient compressor loses reach in the parametrization.
bool any_block_rank_deficient(const FilterMatrix& x) {
    for (int k = 0; k < x.layout().node_count(); ++k) {
        Eigen::JacobiSVD<Matrix> svd(x.block(k));
        const auto& sv = svd.singularValues();
        if (sv(0) == 0.0 || sv(sv.size() - 1) <= 1e-10 * sv(0)) return true;
    }
    return false;
}

}  // namespace

Engine::Engine(ProblemInstance inst, SolverOptions solver_opts, std::uint64_t seed,
               EngineOptions opts)
    : Engine(inst, std::move(solver_opts), random_filter(inst.layout, seed), opts) {}

Engine::Engine(ProblemInstance inst, SolverOptions solver_opts, FilterMatrix initial,
               EngineOptions opts)
    : inst_(inst),
      solver_opts_(std::move(solver_opts)),
      net_(std::move(inst), std::move(initial), opts.cache_gamma, opts.keep_trace) {}

IterationRecord Engine::step(const SignalBatch& batch) {
    IterationRecord record;
    record.updating_node = q_;
    record.objective_before = objective(net_.filter(), batch, inst_);
    try {
        net_.load_window(batch);
        auto round = net_.deliver_round(q_);
        LocalProblem lp = assemble_local(q_, round.views, *round.raw_q, *round.desired, inst_);

        SolverOptions opts = solver_opts_;
        opts.warm_start = warm_start_point(lp, net_.filter());
        auto [solution, report] = solve(lp.composite, opts);
        record.solver = report;

        net_.broadcast_update(extract(solution, lp));
    } catch (...) {
        net_.abort_round();
        throw;
    }

    record.rank_warning = any_block_rank_deficient(net_.filter());
    if (record.rank_warning)
        std::cerr << "nsdasf: warning: rank-deficient block after iteration " << iteration_ + 1
                  << "\n";
    record.objective_after = objective(net_.filter(), batch, inst_);
    const auto& entry = net_.ledger().per_iteration.back();
    record.scalars_up = entry.scalars_up;
    record.scalars_down = entry.scalars_down;

    q_ = (q_ + 1) % inst_.layout.node_count();
    record.iteration = ++iteration_;
    return record;
}

std::vector<IterationRecord> Engine::run(const std::function<SignalBatch(int)>& window_at,
                                         Mode mode, int iterations) {
    if (iterations < 1) throw config_error("run: at least one iteration required");
    std::vector<IterationRecord> records;
    records.reserve(iterations);
    SignalBatch fixed;
    if (mode == Mode::Batch) fixed = window_at(1);
    for (int i = 1; i <= iterations; ++i)
        records.push_back(step(mode == Mode::Batch ? fixed : window_at(i)));
    return records;
}

}  // namespace nsdasf::dasf
