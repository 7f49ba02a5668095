#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "nsdasf/experiment.hpp"
#include "nsdasf/rng.hpp"

using namespace nsdasf;
using namespace nsdasf::experiment;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

ExperimentConfig small_config(const std::string& out) {
    ExperimentConfig cfg;
    cfg.node_count = 3;
    cfg.channels_per_node = 3;
    cfg.output_count = 1;
    cfg.lambda = 0.5;
    cfg.n_samples = 60;
    cfg.runs = 2;
    cfg.iterations = 6;
    cfg.seed = 7;
    cfg.output = out;
    return cfg;
}

}  // namespace

TEST_CASE("central oracle") {
    auto layout = NetworkLayout::uniform(2, 3, 1);
    std::mt19937_64 rng(61);

    SignalBatch batch;
    batch.per_node_samples = {gaussian_matrix(3, 6, rng), gaussian_matrix(3, 6, rng)};
    batch.desired = gaussian_matrix(1, 6, rng);

    // lambda = 0 on a square system: the exact interpolating solution.
    auto inst0 = ProblemInstance::sparse_mwf(layout, 0.0);
    auto oracle0 = central_oracle(batch, inst0, 1e-13, 300000);
    const Matrix exact =
        batch.stacked().transpose().colPivHouseholderQr().solve(batch.desired.transpose());
    CHECK((oracle0.solution - exact).norm() <= 1e-6 * (1.0 + exact.norm()));

    // lambda above lambda_max: the zero solution, with zero residual.
    auto global0 = global_problem(batch, inst0);
    const double lambda_max =
        composite_gradient(global0, Matrix::Zero(6, 1)).cwiseAbs().maxCoeff();
    auto inst_big = ProblemInstance::sparse_mwf(layout, 1.05 * lambda_max);
    auto oracle_big = central_oracle(batch, inst_big, 1e-12, 100000);
    CHECK(oracle_big.solution.norm() <= 1e-8);

    // Self-check: the returned residual passes the quality gate.
    auto inst = ProblemInstance::sparse_mwf(layout, 0.3);
    auto oracle = central_oracle(batch, inst, 1e-12, 300000);
    auto global = global_problem(batch, inst);
    const double grad_scale = composite_gradient(global, oracle.solution).cwiseAbs().maxCoeff();
    CHECK(oracle.residual <= 1e-6 * (1.0 + grad_scale));
}

TEST_CASE("oracle solution beats 100 random probes") {
    auto layout = NetworkLayout::uniform(10, 10, 1);
    auto inst = ProblemInstance::sparse_mwf(layout, 1.0);
    auto scenario = datagen::make_static_scenario(layout, 1000, 62);
    auto batch = datagen::sample_window(scenario, 1);
    auto oracle = central_oracle(batch, inst);
    const double optimum =
        objective(FilterMatrix(oracle.solution, layout), batch, inst);
    std::mt19937_64 rng(63);
    for (int probe = 0; probe < 100; ++probe) {
        const Matrix candidate = gaussian_matrix(100, 1, rng);
        CHECK(optimum <= objective(FilterMatrix(candidate, layout), batch, inst));
    }
}

TEST_CASE("run_static: shapes, no-op run, determinism") {
    const std::string out_a = "test_out/static_a";
    const std::string out_b = "test_out/static_b";
    std::filesystem::remove_all("test_out");

    auto cfg = small_config(out_a);
    auto result = run_static(cfg);
    REQUIRE(result.rel_mse_vs_oracle.size() == 2);
    for (const auto& traj : result.rel_mse_vs_oracle)
        CHECK(traj.size() == static_cast<size_t>(cfg.iterations) + 1);

    // Aggregate file: header plus T+1 rows of 4 columns.
    std::ifstream agg(result.aggregate_file);
    REQUIRE(agg);
    std::string line;
    std::getline(agg, line);
    CHECK(line == "iteration,min,median,max");
    int rows = 0;
    while (std::getline(agg, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 3);
    }
    CHECK(rows == cfg.iterations + 1);

    // T = 0 with a single run: one iteration-0 row only.
    auto noop = small_config("test_out/noop");
    noop.runs = 1;
    noop.iterations = 0;
    auto noop_result = run_static(noop);
    std::ifstream run_file(noop_result.run_files.at(0));
    int data_rows = 0;
    std::getline(run_file, line);  // header
    while (std::getline(run_file, line)) ++data_rows;
    CHECK(data_rows == 1);

    // Same config and seed: byte-identical output.
    auto cfg_b = small_config(out_b);
    auto result_b = run_static(cfg_b);
    for (size_t i = 0; i < result.run_files.size(); ++i)
        CHECK(slurp(result.run_files[i]) == slurp(result_b.run_files[i]));
    CHECK(slurp(result.aggregate_file) == slurp(result_b.aggregate_file));
    std::filesystem::remove_all("test_out");
}

TEST_CASE("run_tracking: row schema and early oracle agreement") {
    ExperimentConfig cfg;
    cfg.node_count = 3;
    cfg.channels_per_node = 3;
    cfg.output_count = 1;
    cfg.lambda = 0.3;
    cfg.n_samples = 200;
    cfg.iterations = 12;
    cfg.mode = RunMode::Adaptive;
    cfg.experiment = ExperimentKind::Tracking;
    cfg.seed = 9;
    cfg.output = "test_out/tracking";
    std::filesystem::remove_all("test_out");

    auto result = run_tracking(cfg);
    REQUIRE(result.rows.size() == 13);
    CHECK(result.rows[0].iteration == 0);
    CHECK(result.rows[0].t == 0.0);
    CHECK(result.rows[0].w_true == 0.0);
    CHECK(result.rows[5].t == doctest::Approx(5.0 / 180.0));

    // Early on the solution moves slowly; the oracle projection stays near
    // the generative weight.
    for (int i = 1; i <= 12; ++i)
        CHECK(std::abs(result.rows[i].proj_oracle - result.rows[i].w_true) < 0.2);
    std::filesystem::remove_all("test_out");
}
