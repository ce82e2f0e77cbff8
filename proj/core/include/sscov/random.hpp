#pragma once

#include <cstdint>
#include <random>

namespace sscov {

/// Seedable generator. Replication r of an experiment uses
/// `Rng::stream(base_seed, r)`, so replications are reproducible and
/// independent of the order in which they run.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng stream(std::uint64_t base_seed, std::uint64_t index) {
        return Rng(base_seed + index);
    }

    std::mt19937_64& engine() noexcept { return engine_; }

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    double chi_squared(double dof) { return std::chi_squared_distribution<double>(dof)(engine_); }
    bool bernoulli(double p) { return uniform() < p; }
    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(engine_);
    }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace sscov
