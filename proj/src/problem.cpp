#include "nsdasf/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nsdasf {

NetworkLayout::NetworkLayout(int node_count, std::vector<int> channel_counts, int output_count,
                             std::vector<int> regularizer_widths)
    : node_count_(node_count),
      channel_counts_(std::move(channel_counts)),
      output_count_(output_count),
      regularizer_widths_(std::move(regularizer_widths)) {
    if (node_count_ <= 0) throw config_error("layout: node count must be positive");
    if (output_count_ <= 0) throw config_error("layout: output channel count must be positive");
    if (static_cast<int>(channel_counts_.size()) != node_count_)
        throw config_error("layout: channel_counts size must equal node count");
    if (static_cast<int>(regularizer_widths_.size()) != node_count_)
        throw config_error("layout: regularizer_widths size must equal node count");
    offsets_.resize(node_count_);
    total_channels_ = 0;
    for (int k = 0; k < node_count_; ++k) {
        if (channel_counts_[k] <= 0) throw config_error("layout: channel counts must be positive");
        if (regularizer_widths_[k] <= 0)
            throw config_error("layout: regularizer widths must be positive");
        offsets_[k] = total_channels_;
        total_channels_ += channel_counts_[k];
    }
    const int min_channels = *std::min_element(channel_counts_.begin(), channel_counts_.end());
    if (output_count_ > min_channels)
        throw config_error("layout: Q must not exceed the smallest per-node channel count");
}

NetworkLayout NetworkLayout::uniform(int node_count, int channels_per_node, int output_count) {
    return NetworkLayout(node_count, std::vector<int>(node_count, channels_per_node), output_count,
                         std::vector<int>(node_count, channels_per_node));
}

FilterMatrix::FilterMatrix(Matrix entries, NetworkLayout layout)
    : entries_(std::move(entries)), layout_(std::move(layout)) {
    if (entries_.rows() != layout_.total_channels() || entries_.cols() != layout_.output_count())
        throw config_error("filter: entries must be M x Q for the given layout");
    if (!entries_.allFinite()) throw numeric_error("filter: non-finite entries");
}

Matrix SignalBatch::stacked() const {
    long rows = 0;
    for (const auto& s : per_node_samples) rows += s.rows();
    const long cols = per_node_samples.empty() ? 0 : per_node_samples.front().cols();
    Matrix y(rows, cols);
    long at = 0;
    for (const auto& s : per_node_samples) {
        y.middleRows(at, s.rows()) = s;
        at += s.rows();
    }
    return y;
}

void SignalBatch::validate(const NetworkLayout& layout) const {
    if (static_cast<int>(per_node_samples.size()) != layout.node_count())
        throw config_error("batch: one sample block per node required");
    const int n = n_samples();
    if (n < 1) throw config_error("batch: at least one sample required");
    for (int k = 0; k < layout.node_count(); ++k) {
        const auto& s = per_node_samples[k];
        if (s.rows() != layout.channels(k) || s.cols() != n)
            throw config_error("batch: sample block dimensions mismatch layout");
        if (!s.allFinite()) throw numeric_error("batch: non-finite samples");
    }
    if (desired.rows() != layout.output_count() || desired.cols() != n)
        throw config_error("batch: desired signal must be Q x N");
    if (!desired.allFinite()) throw numeric_error("batch: non-finite desired signal");
}

ProblemInstance ProblemInstance::sparse_mwf(NetworkLayout layout, double lambda) {
    std::vector<Matrix> gammas;
    gammas.reserve(layout.node_count());
    for (int k = 0; k < layout.node_count(); ++k)
        gammas.push_back(Matrix::Identity(layout.channels(k), layout.channels(k)));
    ProblemInstance inst{std::move(layout), lambda, std::move(gammas), {}};
    inst.validate();
    return inst;
}

void ProblemInstance::validate() const {
    if (lambda < 0) throw config_error("instance: lambda must be nonnegative");
    if (static_cast<int>(gamma_blocks.size()) != layout.node_count())
        throw config_error("instance: one gamma block per node required");
    for (int k = 0; k < layout.node_count(); ++k) {
        const auto& g = gamma_blocks[k];
        if (g.rows() != layout.channels(k) || g.cols() != layout.regularizer_width(k))
            throw config_error("instance: gamma block dimensions mismatch layout");
    }
    if (!constraint_hooks.empty() &&
        static_cast<int>(constraint_hooks.size()) != layout.node_count())
        throw config_error("instance: constraint hooks must be absent or one per node");
}

double objective(const FilterMatrix& x, const SignalBatch& batch, const ProblemInstance& inst) {
    batch.validate(inst.layout);
    if (x.layout() != inst.layout) throw config_error("objective: filter layout mismatch");
    const int n = batch.n_samples();
    double loss = 0.0;
    {
        Matrix residual = -batch.desired;
        for (int k = 0; k < inst.layout.node_count(); ++k)
            residual.noalias() += x.block(k).transpose() * batch.per_node_samples[k];
        loss = residual.squaredNorm() / n;
    }
    double reg = 0.0;
    for (double r : regularizer_blocks(x, inst)) reg += r;
    return loss + reg;
}

Matrix smooth_gradient(const FilterMatrix& x, const SignalBatch& batch) {
    batch.validate(x.layout());
    const int n = batch.n_samples();
    const int q = x.layout().output_count();
    Matrix residual(n, q);  // Y^T X - D^T
    residual = -batch.desired.transpose();
    for (int k = 0; k < x.layout().node_count(); ++k)
        residual.noalias() += batch.per_node_samples[k].transpose() * x.block(k);
    Matrix grad(x.layout().total_channels(), q);
    for (int k = 0; k < x.layout().node_count(); ++k)
        grad.middleRows(x.layout().row_offset(k), x.layout().channels(k)).noalias() =
            (2.0 / n) * batch.per_node_samples[k] * residual;
    return grad;
}

std::vector<double> regularizer_blocks(const FilterMatrix& x, const ProblemInstance& inst) {
    if (x.layout() != inst.layout) throw config_error("regularizer: filter layout mismatch");
    std::vector<double> values(inst.layout.node_count());
    for (int k = 0; k < inst.layout.node_count(); ++k) {
        const Matrix compressed = x.block(k).transpose() * inst.gamma_blocks[k];
        values[k] = inst.lambda * compressed.cwiseAbs().sum();
    }
    return values;
}

}  // namespace nsdasf
