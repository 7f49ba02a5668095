#pragma once

// Sparse multichannel Wiener filtering over a block-partitioned sensor
// network:
//
//   min_X  (1/N) ||X^T Y - D||_F^2 + lambda ||X^T Gamma||_{1,1}
//
// where X in R^{M x Q} is partitioned row-wise into per-node blocks X_k,
// Y stacks the per-node sample matrices and Gamma = BlkDiag(Gamma_1, ...,
// Gamma_K) is a constant per-node weighting (identity for the shipped
// instance). Time runs along columns everywhere.

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "nsdasf/errors.hpp"

namespace nsdasf {

using Matrix = Eigen::MatrixXd;

// Row partitioning of the network-wide filter: K nodes, node k owning
// M_k contiguous rows, Q output channels, and the column count L_k of its
// regularizer block Gamma_k.
class NetworkLayout {
public:
    NetworkLayout(int node_count, std::vector<int> channel_counts, int output_count,
                  std::vector<int> regularizer_widths);

    // All nodes with the same channel count, identity-width regularizer.
    static NetworkLayout uniform(int node_count, int channels_per_node, int output_count);

    int node_count() const { return node_count_; }
    int output_count() const { return output_count_; }
    int total_channels() const { return total_channels_; }
    int channels(int k) const { return channel_counts_.at(k); }
    int regularizer_width(int k) const { return regularizer_widths_.at(k); }
    int row_offset(int k) const { return offsets_.at(k); }
    const std::vector<int>& channel_counts() const { return channel_counts_; }
    const std::vector<int>& regularizer_widths() const { return regularizer_widths_; }

    bool operator==(const NetworkLayout&) const = default;

private:
    int node_count_;
    std::vector<int> channel_counts_;
    int output_count_;
    std::vector<int> regularizer_widths_;
    std::vector<int> offsets_;
    int total_channels_;
};

// The network-wide filter X in R^{M x Q} with block views per node.
class FilterMatrix {
public:
    FilterMatrix(Matrix entries, NetworkLayout layout);

    const Matrix& entries() const { return entries_; }
    Matrix& entries() { return entries_; }
    const NetworkLayout& layout() const { return layout_; }

    // The M_k x Q block X_k.
    Eigen::Block<const Matrix> block(int k) const {
        return entries_.middleRows(layout_.row_offset(k), layout_.channels(k));
    }
    Eigen::Block<Matrix> block(int k) {
        return entries_.middleRows(layout_.row_offset(k), layout_.channels(k));
    }

private:
    Matrix entries_;
    NetworkLayout layout_;
};

// One window of N samples: per-node M_k x N observation matrices plus the
// Q x N desired signal over the same sample range.
struct SignalBatch {
    std::vector<Matrix> per_node_samples;
    Matrix desired;
    int window_index = 1;
    long sample_begin = 0;
    long sample_end = 0;  // exclusive

    int n_samples() const {
        return per_node_samples.empty() ? 0 : static_cast<int>(per_node_samples.front().cols());
    }

    // Row-stacks all per-node sample blocks into the M x N matrix Y.
    Matrix stacked() const;

    void validate(const NetworkLayout& layout) const;
};

// Optional per-node feasibility hook; stored but never invoked by the
// shipped unconstrained instance.
struct ConstraintHook {
    std::function<bool(const Matrix&)> feasible;
    std::function<Matrix(const Matrix&)> project;
};

struct ProblemInstance {
    NetworkLayout layout;
    double lambda = 1.0;
    std::vector<Matrix> gamma_blocks;
    std::vector<ConstraintHook> constraint_hooks;  // empty for the shipped instance

    // The shipped sparse multichannel Wiener filter: identity Gamma_k.
    static ProblemInstance sparse_mwf(NetworkLayout layout, double lambda = 1.0);

    void validate() const;
};

// (1/N) ||X^T Y - D||_F^2 + lambda ||X^T Gamma||_{1,1}.
double objective(const FilterMatrix& x, const SignalBatch& batch, const ProblemInstance& inst);

// Gradient of the smooth part: (2/N) Y (Y^T X - D^T).
Matrix smooth_gradient(const FilterMatrix& x, const SignalBatch& batch);

// Per-node regularizer values lambda ||X_k^T Gamma_k||_{1,1}; their sum is
// the regularizer term of objective(), with the same per-block summation
// order.
std::vector<double> regularizer_blocks(const FilterMatrix& x, const ProblemInstance& inst);

}  // namespace nsdasf
