#pragma once

#include <cstdint>
#include <random>

namespace mealclust {

/// Seedable generator whose output is identical on every platform.
///
/// The engine is std::mt19937_64, whose sequence is fixed by the standard.
/// The standard distributions are not (their algorithms are left to the
/// library vendor), so the variates are derived here: uniforms from the top
/// 53 bits, bounded integers by rejection, normals by Box-Muller and
/// exponentials by inversion.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform();

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t index(std::uint64_t n);

    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }

    /// Normal restricted to [mean - width*sd, mean + width*sd] by rejection.
    double truncated_normal(double mean, double sd, double width);

    /// Exponential with the given rate.
    double exponential(double rate);

    /// Poisson count (Knuth's product method; intended for small means).
    std::uint64_t poisson(double mean);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace mealclust
