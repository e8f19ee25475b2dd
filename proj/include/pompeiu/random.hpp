#pragma once

#include <cstdint>
#include <numbers>

#include "pompeiu/vec3.hpp"

namespace pompeiu {

/// Splittable deterministic random stream (splitmix64). Produces the same
/// sequence on every platform, unlike the std:: distributions. split(salt)
/// derives an independent stream keyed by salt, so draws indexed by work
/// item stay reproducible under any parallel schedule.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    Vec3 unit_vector() {
        const double z = uniform(-1.0, 1.0);
        const double phi = uniform(0.0, 2.0 * std::numbers::pi);
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {r * std::cos(phi), r * std::sin(phi), z};
    }

    /// Uniform inside the ball of given radius.
    Vec3 point_in_ball(double radius) {
        const double u = uniform();
        return std::cbrt(u) * radius * unit_vector();
    }

    RandomStream split(std::uint64_t salt) const {
        std::uint64_t z = state_ ^ (0x9e3779b97f4a7c15ull * (salt + 1));
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return RandomStream(z ^ (z >> 31));
    }

private:
    std::uint64_t state_;
};

}  // namespace pompeiu
