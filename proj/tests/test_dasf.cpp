#include <doctest.h>

#include <random>

#include "nsdasf/dasf.hpp"
#include "nsdasf/engine.hpp"
#include "nsdasf/experiment.hpp"
#include "nsdasf/rng.hpp"

using namespace nsdasf;
using nsdasf::dasf::assemble_local;
using nsdasf::dasf::apply_update;
using nsdasf::dasf::compress;
using nsdasf::dasf::extract;
using nsdasf::dasf::warm_start_point;

namespace {

SignalBatch random_batch(const NetworkLayout& layout, int n, std::mt19937_64& rng) {
    SignalBatch batch;
    for (int k = 0; k < layout.node_count(); ++k)
        batch.per_node_samples.push_back(gaussian_matrix(layout.channels(k), n, rng));
    batch.desired = gaussian_matrix(layout.output_count(), n, rng);
    return batch;
}

std::vector<dasf::CompressedView> all_views(const FilterMatrix& x, const SignalBatch& batch,
                                            const ProblemInstance& inst, int q) {
    std::vector<dasf::CompressedView> views;
    for (int k = 0; k < inst.layout.node_count(); ++k) {
        if (k == q) continue;
        views.push_back(compress(x.block(k), batch.per_node_samples[k], inst.gamma_blocks[k], k,
                                 batch.window_index));
    }
    return views;
}

// Expand a local solution to the network-wide filter: X_k = X_k^i G_k.
Matrix expand(const Matrix& local, const dasf::LocalProblem& lp, const FilterMatrix& x) {
    Matrix full(x.layout().total_channels(), x.layout().output_count());
    for (const auto& range : lp.block_layout) {
        auto rows = full.middleRows(x.layout().row_offset(range.node),
                                    x.layout().channels(range.node));
        if (range.raw)
            rows = local.middleRows(range.offset, range.rows);
        else
            rows = x.block(range.node) * local.middleRows(range.offset, range.rows);
    }
    return full;
}

}  // namespace

TEST_CASE("compress") {
    std::mt19937_64 rng(31);
    Matrix samples = gaussian_matrix(4, 9, rng);
    Matrix gamma = Matrix::Identity(4, 4);

    // Canonical basis column picks out the first channel.
    Matrix e1 = Matrix::Zero(4, 1);
    e1(0, 0) = 1.0;
    auto view = compress(e1, samples, gamma, 2, 5);
    CHECK(view.node == 2);
    CHECK(view.window_index == 5);
    CHECK((view.z_samples - samples.topRows(1)).norm() == 0.0);

    // Identity compressor passes everything through.
    auto full = compress(Matrix::Identity(4, 4), samples, gamma, 0, 1);
    CHECK((full.z_samples - samples).norm() == 0.0);
    CHECK((full.f_block - gamma).norm() == 0.0);

    // Random inputs equal the direct products.
    Matrix x = gaussian_matrix(4, 2, rng);
    auto random_view = compress(x, samples, gamma, 1, 1);
    CHECK((random_view.z_samples - x.transpose() * samples).norm() == 0.0);
    CHECK((random_view.f_block - x.transpose() * gamma).norm() == 0.0);

    CHECK_THROWS_AS(compress(gaussian_matrix(3, 1, rng), samples, gamma, 0, 1), config_error);
}

TEST_CASE("assemble_local dimensions and row order") {
    std::mt19937_64 rng(32);
    auto layout = NetworkLayout::uniform(3, 2, 1);
    auto inst = ProblemInstance::sparse_mwf(layout, 1.0);
    auto batch = random_batch(layout, 8, rng);
    batch.window_index = 1;
    FilterMatrix x(gaussian_matrix(6, 1, rng), layout);

    const int q = 1;
    auto views = all_views(x, batch, inst, q);
    auto lp = assemble_local(q, views, batch.per_node_samples[q], batch.desired, inst);
    CHECK(lp.reduced_dim() == 2 + 2);  // M_q + (K-1) Q
    // Row order: z_1; y_2 (2 rows); z_3.
    CHECK((lp.composite.data_operator.row(0) -
           x.block(0).transpose() * batch.per_node_samples[0]).norm() == 0.0);
    CHECK((lp.composite.data_operator.middleRows(1, 2) - batch.per_node_samples[1]).norm() == 0.0);
    CHECK((lp.composite.data_operator.row(3) -
           x.block(2).transpose() * batch.per_node_samples[2]).norm() == 0.0);

    // Reference-scale arithmetic: K=10, M_k=10, Q=1 gives a 19-dimensional
    // local problem against 100 centrally.
    auto big_layout = NetworkLayout::uniform(10, 10, 1);
    auto big_inst = ProblemInstance::sparse_mwf(big_layout, 1.0);
    auto big_batch = random_batch(big_layout, 20, rng);
    FilterMatrix big_x(gaussian_matrix(100, 1, rng), big_layout);
    auto big_lp = assemble_local(4, all_views(big_x, big_batch, big_inst, 4),
                                 big_batch.per_node_samples[4], big_batch.desired, big_inst);
    CHECK(big_lp.reduced_dim() == 19);
    CHECK(big_layout.total_channels() == 100);
}

TEST_CASE("assemble_local protocol errors") {
    std::mt19937_64 rng(33);
    auto layout = NetworkLayout::uniform(3, 2, 1);
    auto inst = ProblemInstance::sparse_mwf(layout, 1.0);
    auto batch = random_batch(layout, 8, rng);
    FilterMatrix x(gaussian_matrix(6, 1, rng), layout);
    auto views = all_views(x, batch, inst, 1);

    auto missing = views;
    missing.pop_back();
    CHECK_THROWS_AS(assemble_local(1, missing, batch.per_node_samples[1], batch.desired, inst),
                    protocol_error);

    auto duplicate = views;
    duplicate[1] = duplicate[0];
    CHECK_THROWS_AS(assemble_local(1, duplicate, batch.per_node_samples[1], batch.desired, inst),
                    protocol_error);

    auto stale = views;
    stale[1].window_index = 7;
    CHECK_THROWS_AS(assemble_local(1, stale, batch.per_node_samples[1], batch.desired, inst),
                    protocol_error);
}

TEST_CASE("extract and apply_update round trip") {
    std::mt19937_64 rng(34);
    auto layout = NetworkLayout::uniform(4, 3, 2);
    auto inst = ProblemInstance::sparse_mwf(layout, 0.5);
    auto batch = random_batch(layout, 10, rng);
    FilterMatrix x(gaussian_matrix(12, 2, rng), layout);
    const int q = 2;
    auto lp = assemble_local(q, all_views(x, batch, inst, q), batch.per_node_samples[q],
                             batch.desired, inst);

    // Construct a local point from known blocks, extract, and recover them.
    Matrix solution = gaussian_matrix(lp.reduced_dim(), 2, rng);
    auto bundle = extract(solution, lp);
    for (const auto& range : lp.block_layout) {
        if (range.raw)
            CHECK((bundle.new_block_q - solution.middleRows(range.offset, range.rows)).norm() ==
                  0.0);
        else
            CHECK((bundle.update_matrices[range.node] -
                   solution.middleRows(range.offset, range.rows)).norm() == 0.0);
    }

    // apply_update matches the blockwise reference computation.
    auto updated = apply_update(x, bundle);
    for (int k = 0; k < 4; ++k) {
        if (k == q)
            CHECK((updated.block(k) - bundle.new_block_q).norm() == 0.0);
        else
            CHECK((updated.block(k) - x.block(k) * bundle.update_matrices[k]).norm() == 0.0);
    }

    // Identity update matrices and the current block leave X unchanged.
    auto warm = warm_start_point(lp, x);
    auto identity_bundle = extract(warm, lp);
    auto unchanged = apply_update(x, identity_bundle);
    CHECK((unchanged.entries() - x.entries()).norm() == 0.0);

    // Zero update matrices wipe every block except q.
    dasf::UpdateBundle zeros = identity_bundle;
    for (int k = 0; k < 4; ++k)
        if (k != q) zeros.update_matrices[k].setZero();
    auto wiped = apply_update(x, zeros);
    for (int k = 0; k < 4; ++k) {
        if (k == q)
            CHECK((wiped.block(k) - x.block(k)).norm() == 0.0);
        else
            CHECK(wiped.block(k).norm() == 0.0);
    }
}

TEST_CASE("warm start reproduces the global objective exactly") {
    std::mt19937_64 rng(35);
    auto layout = NetworkLayout::uniform(4, 3, 1);
    auto inst = ProblemInstance::sparse_mwf(layout, 0.8);
    auto batch = random_batch(layout, 25, rng);
    FilterMatrix x(gaussian_matrix(12, 1, rng), layout);
    for (int q = 0; q < 4; ++q) {
        auto lp = assemble_local(q, all_views(x, batch, inst, q), batch.per_node_samples[q],
                                 batch.desired, inst);
        auto warm = warm_start_point(lp, x);
        CHECK(composite_objective(lp.composite, warm) ==
              doctest::Approx(objective(x, batch, inst)).epsilon(1e-14));
    }
}

TEST_CASE("local objective equals global objective at expanded points") {
    std::mt19937_64 rng(36);
    auto layout = NetworkLayout::uniform(3, 3, 1);
    auto inst = ProblemInstance::sparse_mwf(layout, 0.6);
    auto batch = random_batch(layout, 20, rng);
    FilterMatrix x(gaussian_matrix(9, 1, rng), layout);
    const int q = 0;
    auto lp = assemble_local(q, all_views(x, batch, inst, q), batch.per_node_samples[q],
                             batch.desired, inst);
    for (int trial = 0; trial < 10; ++trial) {
        Matrix local_point = gaussian_matrix(lp.reduced_dim(), 1, rng);
        const double local = composite_objective(lp.composite, local_point);
        const double global =
            objective(FilterMatrix(expand(local_point, lp, x), layout), batch, inst);
        CHECK(local == doctest::Approx(global).epsilon(1e-12));
    }
}

TEST_CASE("K=1 degenerate network: one step equals one central solve") {
    std::mt19937_64 rng(37);
    auto layout = NetworkLayout::uniform(1, 5, 1);
    auto inst = ProblemInstance::sparse_mwf(layout, 0.4);
    auto batch = random_batch(layout, 40, rng);
    SolverOptions opts;
    opts.tolerance = 1e-12;
    opts.max_iterations = 200000;
    dasf::Engine engine(inst, opts, 99);
    engine.step(batch);

    auto oracle = experiment::central_oracle(batch, inst, 1e-12, 200000);
    CHECK((engine.filter().entries() - oracle.solution).norm() <=
          1e-6 * (1.0 + oracle.solution.norm()));
}

TEST_CASE("engine determinism and error isolation") {
    auto layout = NetworkLayout::uniform(3, 2, 1);
    auto inst = ProblemInstance::sparse_mwf(layout, 0.5);
    auto scenario = datagen::make_static_scenario(layout, 30, 5);
    auto window_at = [&](int i) { return datagen::sample_window(scenario, i); };

    SolverOptions opts;
    dasf::Engine a(inst, opts, 42);
    dasf::Engine b(inst, opts, 42);
    auto ra = a.run(window_at, dasf::Mode::Batch, 6);
    auto rb = b.run(window_at, dasf::Mode::Batch, 6);
    CHECK((a.filter().entries() - b.filter().entries()).norm() == 0.0);
    for (size_t i = 0; i < ra.size(); ++i) {
        CHECK(ra[i].objective_after == rb[i].objective_after);
        CHECK(ra[i].scalars_up == rb[i].scalars_up);
    }

    // A failing step leaves the engine state untouched.
    dasf::Engine c(inst, opts, 42);
    auto before = c.filter().entries();
    SignalBatch bad = window_at(1);
    bad.desired = Matrix::Ones(1, 7);  // wrong N
    CHECK_THROWS(c.step(bad));
    CHECK((c.filter().entries() - before).norm() == 0.0);
    CHECK(c.iteration() == 0);
    auto rec = c.step(window_at(1));  // still usable afterwards
    CHECK(rec.iteration == 1);
}
