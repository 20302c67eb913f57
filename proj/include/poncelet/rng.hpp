#pragma once

// Deterministic RNG for ensemble checks and the CLI: raw mt19937_64 bits
// mapped to doubles by hand so outputs are identical across standard
// libraries (std::uniform_real_distribution is implementation-defined).

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>

namespace poncelet {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform01() {
        return (gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // radially symmetric via Box-Muller on deterministic uniforms
    double gaussian() {
        double u1 = uniform01(), u2 = uniform01();
        while (u1 == 0.0) u1 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    Eigen::VectorXd unit_vector(int d) {
        Eigen::VectorXd v(d);
        double n = 0;
        do {
            for (int i = 0; i < d; ++i) v[i] = gaussian();
            n = v.norm();
        } while (n < 1e-12);
        return v / n;
    }

    std::uint64_t bits() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

}  // namespace poncelet
