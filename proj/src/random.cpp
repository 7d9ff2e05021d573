#include "mealclust/random.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "mealclust/errors.hpp"

namespace mealclust {

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::index(std::uint64_t n) {
    if (n == 0) throw ArgumentError("Rng::index: empty range");
    // Reject the tail that would bias the modulo.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x = 0;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

double Rng::truncated_normal(double mean, double sd, double width) {
    double z = 0.0;
    do {
        z = normal();
    } while (std::abs(z) > width);
    return mean + sd * z;
}

double Rng::exponential(double rate) {
    if (!(rate > 0.0)) throw ArgumentError("Rng::exponential: rate must be positive");
    return -std::log1p(-uniform()) / rate;
}

std::uint64_t Rng::poisson(double mean) {
    if (mean < 0.0) throw ArgumentError("Rng::poisson: negative mean");
    const double limit = std::exp(-mean);
    std::uint64_t count = 0;
    double product = uniform();
    while (product > limit) {
        ++count;
        product *= uniform();
    }
    return count;
}

}  // namespace mealclust
