#include "nsdasf/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "nsdasf/rng.hpp"

namespace nsdasf::experiment {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::ofstream open_csv(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // fixed newlines on every platform
    if (!out) throw config_error("experiment: cannot write " + path);
    return out;
}

}  // namespace

CompositeProblem global_problem(const SignalBatch& batch, const ProblemInstance& inst) {
    batch.validate(inst.layout);
    CompositeProblem p;
    p.data_operator = batch.stacked();
    p.target = batch.desired;
    long width = 0;
    for (int k = 0; k < inst.layout.node_count(); ++k) width += inst.layout.regularizer_width(k);
    p.reg_operator = Matrix::Zero(inst.layout.total_channels(), width);
    long col = 0;
    for (int k = 0; k < inst.layout.node_count(); ++k) {
        p.reg_operator.block(inst.layout.row_offset(k), col, inst.layout.channels(k),
                             inst.layout.regularizer_width(k)) = inst.gamma_blocks[k];
        col += inst.layout.regularizer_width(k);
    }
    p.lambda = inst.lambda;
    return p;
}

OracleResult central_oracle(const SignalBatch& batch, const ProblemInstance& inst,
                            double tolerance, int max_iterations, const Matrix* warm_start) {
    CompositeProblem p = global_problem(batch, inst);
    SolverOptions opts;
    opts.tolerance = tolerance;
    opts.max_iterations = max_iterations;
    if (warm_start) opts.warm_start = *warm_start;
    OracleResult result;
    std::tie(result.solution, result.report) = solve(p, opts);
    result.residual = stationarity_residual(result.solution, p);
    return result;
}

double relative_mse(const Matrix& x, const Matrix& reference) {
    const double denom = reference.squaredNorm();
    if (denom == 0.0) throw degenerate_input_error("relative_mse: zero reference");
    return (x - reference).squaredNorm() / denom;
}

StaticResult run_static(const ExperimentConfig& cfg) {
    cfg.validate();
    const NetworkLayout layout =
        NetworkLayout::uniform(cfg.node_count, cfg.channels_per_node, cfg.output_count);
    const ProblemInstance inst = ProblemInstance::sparse_mwf(layout, cfg.lambda);
    std::filesystem::create_directories(cfg.output);

    StaticResult result;
    for (int run = 0; run < cfg.runs; ++run) {
        const std::uint64_t run_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(run) + 1);
        const auto scenario =
            datagen::make_static_scenario(layout, cfg.n_samples, run_seed, cfg.noise_std);
        const SignalBatch batch = datagen::sample_window(scenario, 1);
        const CompositeProblem global = global_problem(batch, inst);

        const OracleResult oracle = central_oracle(batch, inst);
        const double grad_scale =
            composite_gradient(global, oracle.solution).cwiseAbs().maxCoeff();
        const std::string errata =
            oracle.residual <= 1e-6 * (1.0 + grad_scale) ? "" : "oracle_residual";

        // Rel-MSE floor of a central solve at the engine's own budget.
        auto [budget_solution, budget_report] = solve(global, cfg.solver);
        result.oracle_budget_floor.push_back(relative_mse(budget_solution, oracle.solution));

        dasf::EngineOptions eng_opts;
        eng_opts.cache_gamma = cfg.cache_gamma;
        eng_opts.keep_trace = cfg.dump_trace && run == 0;
        dasf::Engine engine(inst, cfg.solver, run_seed, eng_opts);

        char name[64];
        std::snprintf(name, sizeof name, "run_%03d.csv", run);
        const std::string path = cfg.output + "/" + name;
        auto out = open_csv(path);
        out << "run,iteration,objective,rel_mse_vs_oracle,rel_mse_vs_generative,"
               "stationarity_residual,scalars_up,scalars_down,errata\n";

        std::vector<double> rel_traj;
        auto emit = [&](int iteration, double obj, long up, long down) {
            const Matrix& x = engine.filter().entries();
            const double rel_oracle = relative_mse(x, oracle.solution);
            rel_traj.push_back(rel_oracle);
            out << run << ',' << iteration << ',' << fmt(obj) << ',' << fmt(rel_oracle) << ','
                << fmt(relative_mse(x, scenario.ground_truth)) << ','
                << fmt(stationarity_residual(x, global)) << ',' << up << ',' << down << ','
                << errata << "\n";
        };
        emit(0, objective(engine.filter(), batch, inst), 0, 0);
        for (int i = 1; i <= cfg.iterations; ++i) {
            // Batch mode reuses window 1; adaptive mode draws window i fresh.
            const SignalBatch step_batch = cfg.mode == RunMode::Batch || i == 1
                                               ? batch
                                               : datagen::sample_window(scenario, i);
            const auto record = engine.step(step_batch);
            emit(i, record.objective_after, record.scalars_up, record.scalars_down);
        }
        result.rel_mse_vs_oracle.push_back(std::move(rel_traj));
        result.run_files.push_back(path);

        if (run == 0) {
            auto bw = open_csv(cfg.output + "/bandwidth.csv");
            bw << "iteration,scalars_up,scalars_down,bytes_up,bytes_down\n";
            for (const auto& e : engine.network().ledger().per_iteration)
                bw << e.iteration << ',' << e.scalars_up << ',' << e.scalars_down << ','
                   << e.scalars_up * cfg.bytes_per_scalar << ','
                   << e.scalars_down * cfg.bytes_per_scalar << "\n";
            if (eng_opts.keep_trace) {
                auto trace = open_csv(cfg.output + "/trace_run_000.csv");
                engine.network().write_trace(trace);
            }
        }
    }

    result.aggregate_file = cfg.output + "/aggregate.csv";
    auto agg = open_csv(result.aggregate_file);
    agg << "iteration,min,median,max\n";
    for (int i = 0; i <= cfg.iterations; ++i) {
        std::vector<double> column;
        column.reserve(cfg.runs);
        for (const auto& traj : result.rel_mse_vs_oracle) column.push_back(traj.at(i));
        const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
        agg << i << ',' << fmt(*lo) << ',' << fmt(median(column)) << ',' << fmt(*hi) << "\n";
    }
    return result;
}

TrackingResult run_tracking(const ExperimentConfig& cfg) {
    cfg.validate();
    const NetworkLayout layout =
        NetworkLayout::uniform(cfg.node_count, cfg.channels_per_node, cfg.output_count);
    const ProblemInstance inst = ProblemInstance::sparse_mwf(layout, cfg.lambda);
    std::filesystem::create_directories(cfg.output);

    const auto scenario =
        datagen::make_tracking_scenario(layout, cfg.n_samples, cfg.seed, cfg.noise_std);
    dasf::EngineOptions eng_opts;
    eng_opts.cache_gamma = cfg.cache_gamma;
    dasf::Engine engine(inst, cfg.solver, cfg.seed, eng_opts);

    TrackingResult result;
    result.file = cfg.output + "/tracking.csv";
    auto out = open_csv(result.file);
    out << "iteration,t_i,w_true,proj_estimate,proj_oracle,rel_mse_vs_oracle\n";

    Matrix oracle_warm;  // previous window's oracle, chained as warm start
    auto emit = [&](int i, const SignalBatch& batch) {
        const OracleResult oracle = central_oracle(
            batch, inst, 1e-10, 200000, oracle_warm.size() ? &oracle_warm : nullptr);
        oracle_warm = oracle.solution;
        TrackingRow row;
        row.iteration = i;
        row.t = i / 180.0;
        row.w_true = datagen::weight_at(i);
        row.proj_estimate = datagen::projection_coefficient(engine.filter().entries(),
                                                            scenario.anchor_a, scenario.anchor_b);
        row.proj_oracle =
            datagen::projection_coefficient(oracle.solution, scenario.anchor_a, scenario.anchor_b);
        row.rel_mse_vs_oracle = relative_mse(engine.filter().entries(), oracle.solution);
        out << row.iteration << ',' << fmt(row.t) << ',' << fmt(row.w_true) << ','
            << fmt(row.proj_estimate) << ',' << fmt(row.proj_oracle) << ','
            << fmt(row.rel_mse_vs_oracle) << "\n";
        result.rows.push_back(row);
    };

    emit(0, datagen::sample_window(scenario, 1));
    for (int i = 1; i <= cfg.iterations; ++i) {
        const SignalBatch batch = datagen::sample_window(scenario, i);
        engine.step(batch);
        emit(i, batch);
    }
    return result;
}

}  // namespace nsdasf::experiment
