#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

namespace nsdasf {

// splitmix64 finalizer; used to derive independent substream seeds from a
// master seed and a counter (window index, run index, ...).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (counter + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline Eigen::MatrixXd gaussian_matrix(long rows, long cols, std::mt19937_64& rng,
                                       double stddev = 1.0) {
    std::normal_distribution<double> normal(0.0, stddev);
    Eigen::MatrixXd m(rows, cols);
    // Column-major fill so the stream layout matches Eigen's storage order.
    for (long c = 0; c < cols; ++c)
        for (long r = 0; r < rows; ++r) m(r, c) = normal(rng);
    return m;
}

}  // namespace nsdasf
