#ifndef PEELKIT_RNG_HPP
#define PEELKIT_RNG_HPP

#include <cstdint>
#include <string_view>

#include <Eigen/Dense>

namespace peelkit {

// Deterministic 64-bit generator (splitmix64 core). We avoid the standard
// <random> distributions so that sampled certificates are bit-identical
// across compilers and library versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

    // Independent substream; stable under reordering of other draws.
    Rng fork(std::uint64_t stream) const {
        return Rng(mix(state_ ^ 0xA0761D6478BD642Full, stream));
    }

    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        std::uint64_t z = a ^ (b + 0x9E3779B97F4A7C15ull + (a << 6) + (a >> 2));
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        return z ^ (z >> 31);
    }

    // Uniform direction on the unit sphere via cube rejection.
    Eigen::VectorXd unit_direction(int dim) {
        Eigen::VectorXd v(dim);
        while (true) {
            for (int i = 0; i < dim; ++i) v[i] = uniform(-1.0, 1.0);
            const double n2 = v.squaredNorm();
            if (n2 > 1e-12 && n2 <= 1.0) return v / std::sqrt(n2);
        }
    }

private:
    std::uint64_t state_;
};

// FNV-1a, used for content hashes in artifact files.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

} // namespace peelkit

#endif
