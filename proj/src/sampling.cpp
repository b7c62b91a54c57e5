#include "imc/sampling.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "imc/errors.hpp"

namespace imc {

IndexSet draw_mask(std::size_t n1, std::size_t n2, std::size_t m, std::uint64_t seed) {
    if (n1 == 0 || n2 == 0) throw std::invalid_argument("draw_mask: empty matrix");
    if (m < 4 || m > n1 * n2) {
        throw std::invalid_argument("draw_mask: m = " + std::to_string(m) +
                                    " outside [4, " + std::to_string(n1 * n2) + "]");
    }
    const double gamma = static_cast<double>(m) / (static_cast<double>(n1) * static_cast<double>(n2));
    rng::Stream stream(seed);
    IndexSet mask;
    mask.reserve(m + m / 2);
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            if (stream.uniform01() < gamma) mask.emplace_back(i, j);
        }
    }
    return mask;
}

ObservationSet observe(const DenseMatrix& x_true, const IndexSet& mask, const NoiseModel& noise,
                       std::uint64_t seed, std::size_t nominal_m) {
    ObservationSet obs;
    obs.n1 = x_true.rows();
    obs.n2 = x_true.cols();
    rng::Stream stream(seed);
    obs.samples.reserve(mask.size());
    for (const auto& [i, j] : mask) {
        if (i >= x_true.rows() || j >= x_true.cols()) {
            throw std::invalid_argument("observe: mask index (" + std::to_string(i) + "," +
                                        std::to_string(j) + ") out of range");
        }
        obs.samples.push_back(Sample{i, j, noise.sample(x_true(i, j), stream)});
    }
    obs.nominal_m = nominal_m == 0 ? obs.samples.size() : nominal_m;
    return obs;
}

void write_observations_csv(const ObservationSet& obs, std::ostream& out) {
    out << "i,j,y\n";
    char buf[64];
    for (const Sample& s : obs.samples) {
        std::snprintf(buf, sizeof buf, "%.17g", s.y);
        out << s.i << ',' << s.j << ',' << buf << '\n';
    }
}

void write_observations_csv(const ObservationSet& obs, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    write_observations_csv(obs, out);
}

ObservationSet read_observations_csv(std::istream& in, std::size_t n1, std::size_t n2) {
    std::string line;
    if (!std::getline(in, line) || line != "i,j,y") {
        throw ConfigError("observations CSV: expected header 'i,j,y'");
    }
    ObservationSet obs;
    obs.n1 = n1;
    obs.n2 = n2;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::size_t i = 0, j = 0;
        double y = 0.0;
        char trailing;
        if (std::sscanf(line.c_str(), "%zu,%zu,%lf%c", &i, &j, &y, &trailing) != 3) {
            throw ConfigError("observations CSV: malformed line " + std::to_string(lineno));
        }
        if (i >= n1 || j >= n2) {
            throw ConfigError("observations CSV: index out of range at line " + std::to_string(lineno));
        }
        if (!std::isfinite(y)) {
            throw ConfigError("observations CSV: non-finite value at line " + std::to_string(lineno));
        }
        if (!seen.emplace(i, j).second) {
            throw ConfigError("observations CSV: duplicate index at line " + std::to_string(lineno));
        }
        obs.samples.push_back(Sample{i, j, y});
    }
    obs.nominal_m = obs.samples.size();
    return obs;
}

ObservationSet read_observations_csv(const std::string& path, std::size_t n1, std::size_t n2) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open: " + path);
    return read_observations_csv(in, n1, n2);
}

} // namespace imc
