#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace imc::rng {

/// Derives a child seed from (seed, word) with the SplitMix64 finalizer.
/// Distinct words give decorrelated children; chaining words builds a tree,
/// e.g. derive(master, {m, trial, stream}).
std::uint64_t derive(std::uint64_t seed, std::uint64_t word);
std::uint64_t derive(std::uint64_t seed, std::initializer_list<std::uint64_t> words);

// Stream labels used across the library.
inline constexpr std::uint64_t stream_truth = 0x01;
inline constexpr std::uint64_t stream_mask = 0x02;
inline constexpr std::uint64_t stream_noise = 0x03;
inline constexpr std::uint64_t stream_fit = 0x04;

/// Deterministic random stream: a std::mt19937_64 engine (exactly specified by
/// the standard, hence reproducible across platforms) with fixed in-repo
/// transforms. Uniform doubles use the top 53 bits; normals use Box-Muller.
/// std::*_distribution is never used anywhere: its output is
/// implementation-defined and would break byte-identical reruns.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller: sqrt(-2 ln u1) * cos(2 pi u2), u1 in (0,1].
    double normal();

    double normal(double mean, double sd) { return mean + sd * normal(); }

    /// Uniform integer in [0, n) by rejection; exact, no modulo bias.
    std::uint64_t uniform_below(std::uint64_t n);

private:
    std::mt19937_64 eng_;
};

} // namespace imc::rng
