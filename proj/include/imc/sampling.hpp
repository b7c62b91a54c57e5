#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "imc/matrix.hpp"
#include "imc/noise.hpp"

namespace imc {

using IndexSet = std::vector<std::pair<std::size_t, std::size_t>>;

struct Sample {
    std::size_t i = 0;
    std::size_t j = 0;
    double y = 0.0;

    bool operator==(const Sample&) const = default;
};

/// Observed entries of an n1 x n2 matrix. nominal_m is the sampling budget m
/// that defines gamma = m/(n1*n2); the realized count samples.size() is
/// Binomial(n1*n2, gamma) and generally differs from m.
struct ObservationSet {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::size_t nominal_m = 0;
    std::vector<Sample> samples;

    double gamma() const { return static_cast<double>(nominal_m) / (static_cast<double>(n1) * static_cast<double>(n2)); }
};

/// Includes each of the n1*n2 locations independently with probability
/// gamma = m/(n1*n2), in row-major order. Deterministic given seed.
/// Throws std::invalid_argument unless 4 <= m <= n1*n2.
IndexSet draw_mask(std::size_t n1, std::size_t n2, std::size_t m, std::uint64_t seed);

/// Draws y ~ p_x(i,j) for each masked location, in mask order. Deterministic
/// given seed. nominal_m = 0 means "use the realized count".
ObservationSet observe(const DenseMatrix& x_true, const IndexSet& mask, const NoiseModel& noise,
                       std::uint64_t seed, std::size_t nominal_m = 0);

/// CSV with header `i,j,y`; 0-based indices, values at 17 significant digits.
void write_observations_csv(const ObservationSet& obs, std::ostream& out);
void write_observations_csv(const ObservationSet& obs, const std::string& path);
ObservationSet read_observations_csv(std::istream& in, std::size_t n1, std::size_t n2);
ObservationSet read_observations_csv(const std::string& path, std::size_t n1, std::size_t n2);

} // namespace imc
