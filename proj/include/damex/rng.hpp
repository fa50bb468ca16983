#ifndef DAMEX_RNG_HPP
#define DAMEX_RNG_HPP

#include <cstdint>
#include <random>

namespace damex {

/// Deterministic random source. Wraps std::mt19937_64 (whose output sequence
/// is fixed by the standard) and derives all variates from raw 64-bit draws,
/// so results are reproducible across platforms and standard libraries.
class RngEngine {
public:
    explicit RngEngine(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_bits() { return gen_(); }

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(next_bits() >> 11) * 0x1.0p-53; }

    /// Uniform on the open interval (0, 1); never returns an exact endpoint.
    double uniform_open01() { return (static_cast<double>(next_bits() >> 11) + 0.5) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Unbiased integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);

    /// Standard exponential draw, strictly positive and finite.
    double unit_exponential();

private:
    std::mt19937_64 gen_;
};

/// Independent sub-stream seed for worker `stream` of a master seed
/// (splitmix64 finalizer; distinct streams give unrelated sequences).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace damex

#endif
