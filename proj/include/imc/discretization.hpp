#pragma once

#include <cstdint>
#include <functional>

#include "imc/matrix.hpp"

namespace imc {

/// Quantization grid for the countable candidate class: factor entries are 0
/// or one of l_lev uniform levels; l_loc_* size the per-nonzero location
/// codes. p_range is always [-1, 1], q_range is [-q_max, q_max].
struct DiscretizationScheme {
    double beta = 1.0;
    std::uint64_t l_lev = 2;
    std::uint64_t l_loc_p = 1;
    std::uint64_t l_loc_q = 1;
    double q_max = 1.0;

    /// Canonical scheme: l_lev = levels(n1, n2, beta), l_loc_p = 2^ceil(log2(r1*r)),
    /// l_loc_q = 2^ceil(log2(r*r2)).
    static DiscretizationScheme from_dims(std::size_t n1, std::size_t n2, double beta,
                                          std::size_t r1, std::size_t r, std::size_t r2,
                                          double q_max);

    /// Throws std::invalid_argument unless all level counts are powers of two
    /// with l_lev >= 2 and beta >= 1.
    void validate() const;
};

/// 2^ceil(beta * log2(max(n1, n2))), the number of amplitude levels.
/// Requires beta >= 1 and max(n1, n2) >= 2.
std::uint64_t levels(std::size_t n1, std::size_t n2, double beta);

/// Maps zero entries to zero exactly and every nonzero entry to the nearest
/// of l_lev uniform levels c*(2k/(l_lev-1) - 1), k = 0..l_lev-1. Ties go to
/// the level nearer zero. Per-entry error is at most c/(l_lev-1).
/// Throws if an entry lies outside [-c, c] (relative slack 1e-12).
DenseMatrix quantize_factor(const DenseMatrix& m, double c, std::uint64_t l_lev);

/// Code length in bits: ||P||_0 * log2(l_loc_p * l_lev) + ||Q||_0 * log2(l_loc_q * l_lev).
double penalty(const DenseMatrix& p, const DenseMatrix& q, const DiscretizationScheme& scheme);

/// Exhaustive Kraft-McMillan check over all (P, Q) pairs with P in the r1 x r
/// grid and Q in the r x r2 grid: returns sum of 2^-len over the class, where
/// len is the length of a uniquely decodable encoding of the pair: a
/// ceil(log2(d+1))-bit support-count header per factor followed by the
/// penalty()'s fixed-length (location, amplitude) records. Always <= 1.
/// extra_bits_per_factor inflates each factor's length (monotonicity checks).
/// Throws when the class size (l_lev+1)^(r1*r + r*r2) exceeds cap.
double kraft_sum(const DiscretizationScheme& scheme, std::size_t r1, std::size_t r,
                 std::size_t r2, std::uint64_t cap = 1'000'000,
                 std::uint64_t extra_bits_per_factor = 0);

/// Visits every discretized (P, Q) pair whose assembled X = A*P*Q*B satisfies
/// ||X||_max <= x_max (relative slack 1e-12), in a fixed lexicographic order:
/// entries of P row-major then entries of Q row-major form an odometer whose
/// last slot moves fastest; each slot runs 0, then the levels in ascending
/// order. Throws when the class size exceeds cap.
void enumerate_class(const DenseMatrix& a, const DenseMatrix& b, std::size_t r,
                     const DiscretizationScheme& scheme, double x_max, std::uint64_t cap,
                     const std::function<void(const DenseMatrix& p, const DenseMatrix& q,
                                              const DenseMatrix& x)>& visit);

} // namespace imc
