#include "damex/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace damex {

std::uint64_t RngEngine::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("below: n must be positive");
    // Rejection sampling over the largest multiple of n that fits in 64 bits.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = next_bits();
    } while (x >= limit);
    return x % n;
}

double RngEngine::unit_exponential() {
    return -std::log(uniform_open01());
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace damex
