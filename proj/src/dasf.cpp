#include "nsdasf/dasf.hpp"

#include <algorithm>

namespace nsdasf::dasf {

CompressedView compress(const Matrix& x_k, const Matrix& batch_k, const Matrix& gamma_k,
                        int node, int window_index) {
    if (x_k.rows() != batch_k.rows() || x_k.rows() != gamma_k.rows())
        throw config_error("compress: row counts of block, samples and gamma must agree");
    CompressedView view;
    view.node = node;
    view.z_samples = x_k.transpose() * batch_k;
    view.f_block = x_k.transpose() * gamma_k;
    view.window_index = window_index;
    return view;
}

LocalProblem assemble_local(int q, const std::vector<CompressedView>& views, const Matrix& raw_q,
                            const Matrix& desired, const ProblemInstance& inst) {
    const NetworkLayout& layout = inst.layout;
    const int k_count = layout.node_count();
    const int q_channels = layout.channels(q);
    if (q < 0 || q >= k_count) throw config_error("assemble_local: invalid updating node");
    if (static_cast<int>(views.size()) != k_count - 1)
        throw protocol_error("assemble_local: expected exactly K-1 compressed views");
    if (raw_q.rows() != q_channels)
        throw config_error("assemble_local: raw block row count mismatch");

    std::vector<const CompressedView*> by_node(k_count, nullptr);
    int window = views.empty() ? 1 : views.front().window_index;
    for (const auto& v : views) {
        if (v.node < 0 || v.node >= k_count || v.node == q)
            throw protocol_error("assemble_local: view from unexpected node");
        if (by_node[v.node]) throw protocol_error("assemble_local: duplicate view");
        if (v.window_index != window)
            throw protocol_error("assemble_local: stale view (window mismatch)");
        by_node[v.node] = &v;
    }

    const int n = static_cast<int>(raw_q.cols());
    const int out = layout.output_count();
    if (desired.rows() != out || desired.cols() != n)
        throw config_error("assemble_local: desired signal must be Q x N");

    LocalProblem lp;
    lp.updating_node = q;
    long rows = 0, reg_cols = 0;
    for (int k = 0; k < k_count; ++k) {
        BlockRange range;
        range.node = k;
        range.offset = static_cast<int>(rows);
        range.reg_offset = static_cast<int>(reg_cols);
        range.reg_cols = layout.regularizer_width(k);
        range.raw = (k == q);
        range.rows = range.raw ? q_channels : out;
        rows += range.rows;
        reg_cols += range.reg_cols;
        lp.block_layout.push_back(range);
    }

    lp.composite.data_operator = Matrix(rows, n);
    lp.composite.reg_operator = Matrix::Zero(rows, reg_cols);
    lp.composite.target = desired;
    lp.composite.lambda = inst.lambda;
    for (const auto& range : lp.block_layout) {
        if (range.raw) {
            if (n != raw_q.cols()) throw protocol_error("assemble_local: sample count mismatch");
            lp.composite.data_operator.middleRows(range.offset, range.rows) = raw_q;
            lp.composite.reg_operator.block(range.offset, range.reg_offset, range.rows,
                                            range.reg_cols) = inst.gamma_blocks[q];
        } else {
            const CompressedView& v = *by_node[range.node];
            if (v.z_samples.rows() != out || v.z_samples.cols() != n)
                throw protocol_error("assemble_local: compressed sample dimensions mismatch");
            if (v.f_block.rows() != out || v.f_block.cols() != range.reg_cols)
                throw protocol_error("assemble_local: compressed gamma dimensions mismatch");
            lp.composite.data_operator.middleRows(range.offset, range.rows) = v.z_samples;
            lp.composite.reg_operator.block(range.offset, range.reg_offset, range.rows,
                                            range.reg_cols) = v.f_block;
        }
    }
    return lp;
}

UpdateBundle extract(const Matrix& solution, const LocalProblem& lp) {
    if (solution.rows() != lp.reduced_dim())
        throw config_error("extract: solution row count mismatch local problem");
    UpdateBundle bundle;
    bundle.updating_node = lp.updating_node;
    bundle.update_matrices.resize(lp.block_layout.size());
    for (const auto& range : lp.block_layout) {
        if (range.raw)
            bundle.new_block_q = solution.middleRows(range.offset, range.rows);
        else
            bundle.update_matrices[range.node] = solution.middleRows(range.offset, range.rows);
    }
    return bundle;
}

FilterMatrix apply_update(const FilterMatrix& x, const UpdateBundle& bundle) {
    const NetworkLayout& layout = x.layout();
    const int q = bundle.updating_node;
    if (bundle.new_block_q.rows() != layout.channels(q) ||
        bundle.new_block_q.cols() != layout.output_count())
        throw config_error("apply_update: new block dimensions mismatch");
    Matrix entries(layout.total_channels(), layout.output_count());
    for (int k = 0; k < layout.node_count(); ++k) {
        auto rows = entries.middleRows(layout.row_offset(k), layout.channels(k));
        if (k == q) {
            rows = bundle.new_block_q;
        } else {
            const Matrix& g = bundle.update_matrices.at(k);
            if (g.rows() != layout.output_count() || g.cols() != layout.output_count())
                throw config_error("apply_update: update matrix must be Q x Q");
            rows.noalias() = x.block(k) * g;
        }
    }
    if (!entries.allFinite()) throw numeric_error("apply_update: non-finite result");
    return FilterMatrix(std::move(entries), layout);
}

Matrix warm_start_point(const LocalProblem& lp, const FilterMatrix& x) {
    const int out = x.layout().output_count();
    Matrix point(lp.reduced_dim(), out);
    for (const auto& range : lp.block_layout) {
        if (range.raw)
            point.middleRows(range.offset, range.rows) = x.block(range.node);
        else
            point.middleRows(range.offset, range.rows) = Matrix::Identity(out, out);
    }
    return point;
}

}  // namespace nsdasf::dasf
