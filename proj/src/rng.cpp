#include "imc/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace imc::rng {

std::uint64_t derive(std::uint64_t seed, std::uint64_t word) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (word + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t derive(std::uint64_t seed, std::initializer_list<std::uint64_t> words) {
    std::uint64_t s = seed;
    for (std::uint64_t w : words) s = derive(s, w);
    return s;
}

double Stream::normal() {
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; // (0, 1]
    const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;       // [0, 1)
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Stream::uniform_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_below: n must be positive");
    const std::uint64_t limit = (UINT64_MAX / n) * n;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % n;
}

} // namespace imc::rng
