#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "kvf/linalg.hpp"

namespace kvf {

/// Seeded random source with pinned output: the engine is the fully
/// specified std::mt19937_64 and every distribution is derived here by
/// explicit formulas, so a (seed, call sequence) pair yields identical
/// values on every platform. Standard-library distributions are not used
/// because their algorithms are implementation-defined.
class DeterministicRng {
public:
    explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t raw() { return engine_(); }

    /// uniform on [0, 1)
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    /// standard normal via Box-Muller
    double gaussian() {
        const double u1 = 1.0 - uniform01(); // (0, 1]
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    Vec gaussian_vec(std::size_t n) {
        Vec g(n);
        for (double& x : g) x = gaussian();
        return g;
    }

    /// uniform on the unit sphere of R^n
    Vec unit_sphere(std::size_t n) {
        for (;;) {
            Vec g = gaussian_vec(n);
            const double r = norm(g);
            if (r > 1e-12) return scaled(1.0 / r, g);
        }
    }

private:
    std::mt19937_64 engine_;
};

} // namespace kvf
