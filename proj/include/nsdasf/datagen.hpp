#pragma once

// Seeded synthetic scenarios: stationary sparse-ground-truth mixtures
// (d(t) = Xgt^T y(t) + n(t), y and n i.i.d. Gaussian) and the
// time-varying tracking scenario interpolating two sparse anchors with
// weight w(t) = t cos(t^4), t_i = i / 180. Window i is generated from a
// counter-based substream, so any window can be re-sampled independently
// of generation order.

#include <cstdint>
#include <iosfwd>

#include "nsdasf/problem.hpp"

namespace nsdasf::datagen {

struct StaticScenario {
    NetworkLayout layout;
    Matrix ground_truth;  // M x Q, sparse
    double noise_std = 0.31622776601683794;  // sqrt(0.1)
    int n_samples = 1000;
    std::uint64_t seed = 0;
};

struct TrackingScenario {
    NetworkLayout layout;
    Matrix anchor_a;
    Matrix anchor_b;
    double noise_std = 0.31622776601683794;
    int n_samples = 1000;
    std::uint64_t seed = 0;
};

// Ground truth with ceil(M*Q/10) standard-normal nonzero entries at
// positions drawn uniformly without replacement.
StaticScenario make_static_scenario(NetworkLayout layout, int n_samples, std::uint64_t seed,
                                    double noise_std = 0.31622776601683794);

TrackingScenario make_tracking_scenario(NetworkLayout layout, int n_samples, std::uint64_t seed,
                                        double noise_std = 0.31622776601683794);

// (i/180) * cos((i/180)^4).
double weight_at(int i);

// w(t_i) * anchor_a + (1 - w(t_i)) * anchor_b.
Matrix ground_truth_at(const TrackingScenario& s, int i);

SignalBatch sample_window(const StaticScenario& s, int window_index);
SignalBatch sample_window(const TrackingScenario& s, int window_index);

// <vec(X - B), vec(A - B)> / ||A - B||_F^2.
double projection_coefficient(const Matrix& x, const Matrix& anchor_a, const Matrix& anchor_b);

// Row-major flat dump with a dims/seed header, for cross-implementation
// fixtures.
void write_matrix_csv(std::ostream& out, const Matrix& m, std::uint64_t seed);
Matrix read_matrix_csv(std::istream& in);

}  // namespace nsdasf::datagen
