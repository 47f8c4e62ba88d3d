#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace lassodist {

/// Seeded source of uniform and Gaussian variates.
///
/// Child streams are derived from a (seed, index) pair through a counter-based
/// mix, so replicate r sees the same numbers regardless of which worker runs it
/// or in what order.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    /// Independent stream for replicate `index` under `seed`.
    static RandomStream child(std::uint64_t seed, std::uint64_t index);

    double normal();
    double uniform();
    /// +1 or -1 with equal probability.
    double rademacher();

    Eigen::VectorXd normal_vector(Eigen::Index n, double stddev = 1.0);

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// SplitMix64 finalizer; used to derive child seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace lassodist
