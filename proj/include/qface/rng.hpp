#ifndef QFACE_RNG_HPP
#define QFACE_RNG_HPP

#include <cstdint>
#include <random>

namespace qface {

/// Seeded random stream with fixed variate derivations (53-bit uniform,
/// Box-Muller normal) so that a seed pins the exact sample sequence
/// independently of standard-library distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform();

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi);

    /// Standard normal via Box-Muller; generates pairs, caches the spare.
    double normal();

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace qface

#endif  // QFACE_RNG_HPP
