#include "nsdasf/datagen.hpp"

#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "nsdasf/rng.hpp"

namespace nsdasf::datagen {

namespace {

// Substream counters for structural draws; windows use their own index.
constexpr std::uint64_t kGroundTruthStream = 1ULL << 40;
constexpr std::uint64_t kAnchorAStream = (1ULL << 40) + 1;
constexpr std::uint64_t kAnchorBStream = (1ULL << 40) + 2;

Matrix sparse_ground_truth(const NetworkLayout& layout, std::mt19937_64& rng) {
    const long m = layout.total_channels();
    const long q = layout.output_count();
    const long entries = m * q;
    const long nnz = (entries + 9) / 10;  // exactly M/10 when 10 | M and Q = 1
    std::vector<long> positions(entries);
    std::iota(positions.begin(), positions.end(), 0);
    // Partial Fisher-Yates draw without replacement.
    for (long j = 0; j < nnz; ++j) {
        std::uniform_int_distribution<long> pick(j, entries - 1);
        std::swap(positions[j], positions[pick(rng)]);
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix gt = Matrix::Zero(m, q);
    for (long j = 0; j < nnz; ++j) {
        const long p = positions[j];
        gt(p % m, p / m) = normal(rng);
    }
    return gt;
}

SignalBatch window_from_ground_truth(const NetworkLayout& layout, const Matrix& ground_truth,
                                     double noise_std, int n_samples, std::uint64_t seed,
                                     int window_index) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(window_index)));
    const Matrix y = gaussian_matrix(layout.total_channels(), n_samples, rng);
    const Matrix noise = gaussian_matrix(layout.output_count(), n_samples, rng, noise_std);

    SignalBatch batch;
    batch.window_index = window_index;
    batch.sample_begin = static_cast<long>(window_index - 1) * n_samples;
    batch.sample_end = batch.sample_begin + n_samples;
    batch.per_node_samples.reserve(layout.node_count());
    for (int k = 0; k < layout.node_count(); ++k)
        batch.per_node_samples.push_back(y.middleRows(layout.row_offset(k), layout.channels(k)));
    batch.desired = ground_truth.transpose() * y + noise;
    return batch;
}

}  // namespace

StaticScenario make_static_scenario(NetworkLayout layout, int n_samples, std::uint64_t seed,
                                    double noise_std) {
    if (n_samples < 1) throw config_error("scenario: n_samples must be positive");
    if (noise_std <= 0) throw config_error("scenario: noise_std must be positive");
    StaticScenario s{std::move(layout), Matrix(), noise_std, n_samples, seed};
    std::mt19937_64 rng(mix_seed(seed, kGroundTruthStream));
    s.ground_truth = sparse_ground_truth(s.layout, rng);
    return s;
}

TrackingScenario make_tracking_scenario(NetworkLayout layout, int n_samples, std::uint64_t seed,
                                        double noise_std) {
    if (n_samples < 1) throw config_error("scenario: n_samples must be positive");
    if (noise_std <= 0) throw config_error("scenario: noise_std must be positive");
    TrackingScenario s{std::move(layout), Matrix(), Matrix(), noise_std, n_samples, seed};
    std::mt19937_64 rng_a(mix_seed(seed, kAnchorAStream));
    std::mt19937_64 rng_b(mix_seed(seed, kAnchorBStream));
    s.anchor_a = sparse_ground_truth(s.layout, rng_a);
    s.anchor_b = sparse_ground_truth(s.layout, rng_b);
    return s;
}

double weight_at(int i) {
    const double t = i / 180.0;
    return t * std::cos(t * t * t * t);
}

Matrix ground_truth_at(const TrackingScenario& s, int i) {
    const double w = weight_at(i);
    return w * s.anchor_a + (1.0 - w) * s.anchor_b;
}

SignalBatch sample_window(const StaticScenario& s, int window_index) {
    if (window_index < 1) throw config_error("sample_window: window index must be >= 1");
    return window_from_ground_truth(s.layout, s.ground_truth, s.noise_std, s.n_samples, s.seed,
                                    window_index);
}

SignalBatch sample_window(const TrackingScenario& s, int window_index) {
    if (window_index < 1) throw config_error("sample_window: window index must be >= 1");
    return window_from_ground_truth(s.layout, ground_truth_at(s, window_index), s.noise_std,
                                    s.n_samples, s.seed, window_index);
}

double projection_coefficient(const Matrix& x, const Matrix& anchor_a, const Matrix& anchor_b) {
    const Matrix direction = anchor_a - anchor_b;
    const double denom = direction.squaredNorm();
    if (denom == 0.0) throw degenerate_input_error("projection_coefficient: coincident anchors");
    return ((x - anchor_b).array() * direction.array()).sum() / denom;
}

void write_matrix_csv(std::ostream& out, const Matrix& m, std::uint64_t seed) {
    out << "rows=" << m.rows() << ",cols=" << m.cols() << ",seed=" << seed << "\n";
    char buf[32];
    for (long r = 0; r < m.rows(); ++r) {
        for (long c = 0; c < m.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
            out << buf << (c + 1 < m.cols() ? "," : "");
        }
        out << "\n";
    }
}

Matrix read_matrix_csv(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw config_error("matrix csv: missing header");
    long rows = 0, cols = 0;
    unsigned long long seed = 0;
    if (std::sscanf(header.c_str(), "rows=%ld,cols=%ld,seed=%llu", &rows, &cols, &seed) != 3)
        throw config_error("matrix csv: malformed header");
    Matrix m(rows, cols);
    std::string line;
    for (long r = 0; r < rows; ++r) {
        if (!std::getline(in, line)) throw config_error("matrix csv: truncated body");
        std::stringstream row(line);
        std::string cell;
        for (long c = 0; c < cols; ++c) {
            if (!std::getline(row, cell, ',')) throw config_error("matrix csv: short row");
            m(r, c) = std::stod(cell);
        }
    }
    return m;
}

}  // namespace nsdasf::datagen
