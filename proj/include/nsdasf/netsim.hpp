#pragma once

// In-memory simulated fully-connected sensor network. Nodes hold their
// current filter block, regularizer block and window data; a round has two
// synchronous barriers (all-to-q, then q-to-all). Transport is reliable,
// ordered per sender, and oblivious to payload semantics: it only counts
// the scalars carried. Accounting is in scalars; a CLI flag converts to
// bytes downstream.

#include <iosfwd>
#include <vector>

#include "nsdasf/dasf.hpp"
#include "nsdasf/problem.hpp"

namespace nsdasf::netsim {

enum class MessageKind { CompressedData, UpdateMatrix, FBlock };

struct Message {
    MessageKind kind = MessageKind::CompressedData;
    int source = 0;
    int destination = 0;
    long payload_values = 0;
    int window_index = 1;
    int iteration = 0;
};

struct LedgerEntry {
    int iteration = 0;
    long scalars_up = 0;    // toward the updating node
    long scalars_down = 0;  // from the updating node
};

struct BandwidthLedger {
    std::vector<LedgerEntry> per_iteration;
    long centralized_baseline = 0;  // scalars a fusion center ingests per window: N * M

    long total_scalars() const;
};

// Ratio of the raw-forwarding traffic of the K-1 non-sink nodes to the
// mean per-iteration compressed traffic.
double compression_ratio(const BandwidthLedger& ledger, int node_count);

// Exact per-iteration uplink size for the shipped message pattern:
// sum over k != q of Q*N (+ Q*L_k while F-blocks are transmitted).
long expected_scalars_up(const NetworkLayout& layout, int q, long n_samples,
                         bool f_blocks_sent);
long expected_scalars_down(const NetworkLayout& layout);

struct DeliveredRound {
    std::vector<dasf::CompressedView> views;  // from every node k != q, ordered by node
    const Matrix* raw_q = nullptr;
    const Matrix* desired = nullptr;
};

class Network {
public:
    Network(ProblemInstance inst, FilterMatrix initial_filter, bool cache_gamma = false,
            bool keep_trace = false);

    const FilterMatrix& filter() const { return filter_; }
    const ProblemInstance& instance() const { return inst_; }
    const BandwidthLedger& ledger() const { return ledger_; }
    const std::vector<Message>& trace() const { return trace_; }

    void load_window(SignalBatch window);
    const SignalBatch& window() const;

    // Aggregation barrier: every node except q compresses its window and
    // sends the result to q. Messages are staged and committed with the
    // matching broadcast, so a failed round leaves the ledger untouched.
    DeliveredRound deliver_round(int q);

    // Dissemination barrier: q sends each node its update matrix; blocks
    // are updated in place.
    void broadcast_update(const dasf::UpdateBundle& bundle);

    // Discards staged messages of an aborted round.
    void abort_round();

    // CSV trace: iteration, kind, source, destination, scalars, window_index.
    void write_trace(std::ostream& out) const;

private:
    void stage(MessageKind kind, int source, int destination, long payload_values);

    ProblemInstance inst_;
    FilterMatrix filter_;
    SignalBatch window_;
    bool has_window_ = false;
    bool cache_gamma_;
    bool keep_trace_;
    int iteration_ = 0;
    int pending_q_ = -1;
    std::vector<Message> staged_;
    BandwidthLedger ledger_;
    std::vector<Message> trace_;
};

}  // namespace nsdasf::netsim
