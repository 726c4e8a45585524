#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace supermix {

// Seedable generator used everywhere samples are drawn. The generator family
// (mt19937_64) and the uniform/Gaussian transforms below are fixed so that a
// given seed produces the same points on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // uniform on [0, 1) with 53 bits of resolution
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Box-Muller; one draw per call, the paired value is discarded so the
    // stream does not depend on call parity.
    double gaussian() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    // inverse-CDF draws
    double laplace() {
        const double u = uniform01() - 0.5;
        return (u < 0.0 ? 1.0 : -1.0) * std::log(1.0 - 2.0 * std::abs(u));
    }

    double cauchy(double scale) {
        return scale * std::tan(M_PI * (uniform01() - 0.5));
    }

    double exponential() {
        double u = uniform01();
        while (u <= 0.0) u = uniform01();
        return -std::log(u);
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace supermix
