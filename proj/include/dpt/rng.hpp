#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace dpt {

// Deterministic random source. All draws go through explicit methods so a
// given (seed, call sequence) reproduces bit-identical streams on one
// platform; distribution code is written out here instead of relying on
// std:: distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t bits() { return engine_(); }

    // Uniform in [0, 1).
    double uniform01() {
        return (bits() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    int uniform_int(int lo, int hi) { // inclusive bounds
        return lo + static_cast<int>(bits() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    // Standard normal via Box-Muller; caches the second deviate.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 <= 0.0) u1 = uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double t = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    std::vector<double> normal_vector(int n) {
        std::vector<double> v(static_cast<std::size_t>(n));
        for (double& x : v) x = normal();
        return v;
    }

    // Uniform on the unit sphere S^{d-1}.
    std::vector<double> unit_vector(int d) {
        std::vector<double> v;
        double nrm = 0.0;
        while (nrm < 1e-12) {
            v = normal_vector(d);
            nrm = 0.0;
            for (double x : v) nrm += x * x;
            nrm = std::sqrt(nrm);
        }
        for (double& x : v) x /= nrm;
        return v;
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace dpt
