#pragma once

// Distributed-iteration building blocks: per-node compression, local-problem assembly,
// block extraction and update application. At each iteration the updating
// node q receives the Q-channel compressed views z_k = X_k^T y_k and the
// compressed regularizer blocks F_k = X_k^T Gamma_k of every other node,
// solves the reduced composite problem of dimension M_q + (K-1) Q, keeps
// its own block and sends each node k a Q x Q update matrix G_k.

#include <vector>

#include "nsdasf/problem.hpp"
#include "nsdasf/solver.hpp"

namespace nsdasf::dasf {

struct CompressedView {
    int node = 0;
    Matrix z_samples;  // Q x N
    Matrix f_block;    // Q x L_k
    int window_index = 1;
};

// Row role and range of one node inside the stacked local problem.
struct BlockRange {
    int node = 0;
    int offset = 0;
    int rows = 0;
    int reg_offset = 0;
    int reg_cols = 0;
    bool raw = false;  // true only for the updating node
};

struct LocalProblem {
    CompositeProblem composite;
    std::vector<BlockRange> block_layout;
    int updating_node = 0;

    long reduced_dim() const { return composite.rows(); }
};

struct UpdateBundle {
    Matrix new_block_q;                  // M_q x Q
    std::vector<Matrix> update_matrices;  // indexed by node; Q x Q for k != q, empty at q
    int updating_node = 0;
    int window_index = 1;
};

CompressedView compress(const Matrix& x_k, const Matrix& batch_k, const Matrix& gamma_k,
                        int node, int window_index);

// Stacks the compressed views (node q contributing its raw rows) into the
// reduced composite problem; reg_operator is block-diagonal with blocks
// F_k for k != q and Gamma_q at q.
LocalProblem assemble_local(int q, const std::vector<CompressedView>& views, const Matrix& raw_q,
                            const Matrix& desired, const ProblemInstance& inst);

UpdateBundle extract(const Matrix& solution, const LocalProblem& lp);

FilterMatrix apply_update(const FilterMatrix& x, const UpdateBundle& bundle);

// The feasible point reproducing the current filter: identity update
// matrices and node q's current block. Used as the solver warm start,
// standing in for the minimum-distance tie-break.
Matrix warm_start_point(const LocalProblem& lp, const FilterMatrix& x);

}  // namespace nsdasf::dasf
