#include "nsdasf/netsim.hpp"

#include <numeric>
#include <ostream>

namespace nsdasf::netsim {

long BandwidthLedger::total_scalars() const {
    long total = 0;
    for (const auto& e : per_iteration) total += e.scalars_up + e.scalars_down;
    return total;
}

double compression_ratio(const BandwidthLedger& ledger, int node_count) {
    if (ledger.per_iteration.empty()) throw degenerate_input_error("compression_ratio: empty ledger");
    const double mean_traffic =
        static_cast<double>(ledger.total_scalars()) / ledger.per_iteration.size();
    const double raw_forwarding =
        static_cast<double>(ledger.centralized_baseline) * (node_count - 1) / node_count;
    return raw_forwarding / mean_traffic;
}

long expected_scalars_up(const NetworkLayout& layout, int q, long n_samples, bool f_blocks_sent) {
    long total = 0;
    for (int k = 0; k < layout.node_count(); ++k) {
        if (k == q) continue;
        total += layout.output_count() * n_samples;
        if (f_blocks_sent) total += layout.output_count() * layout.regularizer_width(k);
    }
    return total;
}

long expected_scalars_down(const NetworkLayout& layout) {
    const long q2 = static_cast<long>(layout.output_count()) * layout.output_count();
    return (layout.node_count() - 1) * q2;
}

Network::Network(ProblemInstance inst, FilterMatrix initial_filter, bool cache_gamma,
                 bool keep_trace)
    : inst_(std::move(inst)),
      filter_(std::move(initial_filter)),
      cache_gamma_(cache_gamma),
      keep_trace_(keep_trace) {
    inst_.validate();
    if (filter_.layout() != inst_.layout) throw config_error("network: filter layout mismatch");
}

void Network::load_window(SignalBatch window) {
    window.validate(inst_.layout);
    ledger_.centralized_baseline =
        static_cast<long>(window.n_samples()) * inst_.layout.total_channels();
    window_ = std::move(window);
    has_window_ = true;
}

const SignalBatch& Network::window() const {
    if (!has_window_) throw protocol_error("network: no window loaded");
    return window_;
}

void Network::stage(MessageKind kind, int source, int destination, long payload_values) {
    Message m;
    m.kind = kind;
    m.source = source;
    m.destination = destination;
    m.payload_values = payload_values;
    m.window_index = window_.window_index;
    m.iteration = iteration_;
    staged_.push_back(m);
}

DeliveredRound Network::deliver_round(int q) {
    if (!has_window_) throw protocol_error("deliver_round: no window loaded");
    if (q < 0 || q >= inst_.layout.node_count())
        throw protocol_error("deliver_round: invalid updating node");
    if (pending_q_ >= 0) throw protocol_error("deliver_round: previous round still open");

    // F-blocks travel every iteration unless the static-gamma optimization
    // is on, in which case only the first full round carries them.
    const bool send_f = !cache_gamma_ || iteration_ < inst_.layout.node_count();

    DeliveredRound round;
    for (int k = 0; k < inst_.layout.node_count(); ++k) {
        if (k == q) continue;
        auto view = dasf::compress(filter_.block(k), window_.per_node_samples[k],
                                   inst_.gamma_blocks[k], k, window_.window_index);
        stage(MessageKind::CompressedData, k, q, view.z_samples.size());
        if (send_f) stage(MessageKind::FBlock, k, q, view.f_block.size());
        round.views.push_back(std::move(view));
    }
    round.raw_q = &window_.per_node_samples[q];
    round.desired = &window_.desired;
    pending_q_ = q;
    return round;
}

void Network::broadcast_update(const dasf::UpdateBundle& bundle) {
    if (pending_q_ < 0) throw protocol_error("broadcast_update: no round in progress");
    if (bundle.updating_node != pending_q_)
        throw protocol_error("broadcast_update: bundle from unexpected node");
    FilterMatrix updated = dasf::apply_update(filter_, bundle);

    const long q2 = static_cast<long>(inst_.layout.output_count()) * inst_.layout.output_count();
    for (int k = 0; k < inst_.layout.node_count(); ++k) {
        if (k == pending_q_) continue;
        stage(MessageKind::UpdateMatrix, pending_q_, k, q2);
    }

    // Commit: ledger entry plus optional trace, then advance the iteration.
    LedgerEntry entry;
    entry.iteration = iteration_;
    for (const auto& m : staged_) {
        if (m.destination == pending_q_)
            entry.scalars_up += m.payload_values;
        else
            entry.scalars_down += m.payload_values;
    }
    ledger_.per_iteration.push_back(entry);
    if (keep_trace_) trace_.insert(trace_.end(), staged_.begin(), staged_.end());
    staged_.clear();
    filter_ = std::move(updated);
    pending_q_ = -1;
    ++iteration_;
}

void Network::abort_round() {
    staged_.clear();
    pending_q_ = -1;
}

void Network::write_trace(std::ostream& out) const {
    out << "iteration,kind,source,destination,scalars,window_index\n";
    for (const auto& m : trace_) {
        const char* kind = m.kind == MessageKind::CompressedData ? "compressed_data"
                           : m.kind == MessageKind::UpdateMatrix ? "update_matrix"
                                                                 : "f_block";
        out << m.iteration << ',' << kind << ',' << m.source << ',' << m.destination << ','
            << m.payload_values << ',' << m.window_index << '\n';
    }
}

}  // namespace nsdasf::netsim
