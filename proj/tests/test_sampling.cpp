#include "doctest.h"

#include <cmath>
#include <sstream>

#include "imc/errors.hpp"
#include "imc/noise.hpp"
#include "imc/sampling.hpp"

using imc::DenseMatrix;
using imc::GaussianNoise;
using imc::IndexSet;
using imc::ObservationSet;

TEST_SUITE("sampling") {

TEST_CASE("draw_mask enforces the observation budget range") {
    CHECK_THROWS_AS((void)imc::draw_mask(4, 4, 3, 0), std::invalid_argument);
    CHECK_THROWS_AS((void)imc::draw_mask(4, 4, 17, 0), std::invalid_argument);
    CHECK_NOTHROW((void)imc::draw_mask(4, 4, 4, 0));
    CHECK_NOTHROW((void)imc::draw_mask(4, 4, 16, 0));
}

TEST_CASE("gamma = 1 includes every location in row-major order") {
    const IndexSet mask = imc::draw_mask(3, 4, 12, 99);
    REQUIRE(mask.size() == 12);
    std::size_t k = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 4; ++j, ++k) {
            CHECK(mask[k].first == i);
            CHECK(mask[k].second == j);
        }
    }
}

TEST_CASE("same seed reproduces the mask, different seeds vary") {
    const IndexSet a = imc::draw_mask(10, 10, 25, 7);
    const IndexSet b = imc::draw_mask(10, 10, 25, 7);
    const IndexSet c = imc::draw_mask(10, 10, 25, 8);
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("realized count matches the binomial mean over many draws") {
    const int draws = 10000;
    double total = 0.0;
    for (int s = 0; s < draws; ++s) {
        total += static_cast<double>(imc::draw_mask(10, 10, 25, static_cast<std::uint64_t>(s)).size());
    }
    const double mean = total / draws;
    // sd of one count is sqrt(100 * 0.25 * 0.75); three standard errors of the mean.
    const double tol = 3.0 * std::sqrt(100.0 * 0.25 * 0.75) / std::sqrt(static_cast<double>(draws));
    CHECK(std::abs(mean - 25.0) <= tol);
}

TEST_CASE("inclusion of distinct cells is uncorrelated across seeds") {
    // 2x2 contingency of the (0,0) and (5,7) inclusion indicators over 1000
    // masks; chi-squared with 1 dof at alpha = 0.01 is 6.635.
    int n11 = 0, n10 = 0, n01 = 0, n00 = 0;
    const int draws = 1000;
    for (int s = 0; s < draws; ++s) {
        bool first = false, second = false;
        for (const auto& [i, j] : imc::draw_mask(10, 10, 25, 1000 + static_cast<std::uint64_t>(s))) {
            first = first || (i == 0 && j == 0);
            second = second || (i == 5 && j == 7);
        }
        if (first && second) ++n11;
        else if (first) ++n10;
        else if (second) ++n01;
        else ++n00;
    }
    const double r1 = n11 + n10, r0 = n01 + n00;
    const double c1 = n11 + n01, c0 = n10 + n00;
    const double n = draws;
    double chi2 = 0.0;
    const double cells[4][3] = {{static_cast<double>(n11), r1, c1},
                                {static_cast<double>(n10), r1, c0},
                                {static_cast<double>(n01), r0, c1},
                                {static_cast<double>(n00), r0, c0}};
    for (const auto& cell : cells) {
        const double expected = cell[1] * cell[2] / n;
        chi2 += (cell[0] - expected) * (cell[0] - expected) / expected;
    }
    CHECK(chi2 < 6.635);
}

TEST_CASE("observe records noisy values at masked locations") {
    DenseMatrix x(2, 3);
    for (std::size_t i = 0; i < x.size(); ++i) x.data()[i] = static_cast<double>(i) - 2.0;

    SUBCASE("nearly noiseless observation reproduces the entries") {
        const IndexSet mask = imc::draw_mask(2, 3, 6, 1);
        const GaussianNoise noise(1e-18); // sigma = 1e-9
        const ObservationSet obs = imc::observe(x, mask, noise, 5, 6);
        REQUIRE(obs.samples.size() == 6);
        for (const auto& s : obs.samples) {
            CHECK(std::abs(s.y - x(s.i, s.j)) < 1e-6);
        }
        CHECK(obs.gamma() == 1.0);
        CHECK(obs.nominal_m == 6);
    }

    SUBCASE("empty mask gives an empty set") {
        const ObservationSet obs = imc::observe(x, IndexSet{}, GaussianNoise(1.0), 5, 4);
        CHECK(obs.samples.empty());
        CHECK(obs.n1 == 2);
        CHECK(obs.n2 == 3);
    }

    SUBCASE("nominal_m defaults to the realized count") {
        const IndexSet mask = imc::draw_mask(2, 3, 4, 1);
        const ObservationSet obs = imc::observe(x, mask, GaussianNoise(1.0), 5);
        CHECK(obs.nominal_m == mask.size());
    }
}

TEST_CASE("noise sample mean over a full mask is near zero") {
    const DenseMatrix x(100, 100);
    const IndexSet mask = imc::draw_mask(100, 100, 10000, 3);
    REQUIRE(mask.size() == 10000);
    const ObservationSet obs = imc::observe(x, mask, GaussianNoise(1.0), 11, 10000);
    double total = 0.0;
    for (const auto& s : obs.samples) total += s.y;
    CHECK(std::abs(total / 10000.0) < 0.03); // 3 / sqrt(10^4)
}

TEST_CASE("observations survive a CSV round trip exactly") {
    DenseMatrix x(3, 3);
    for (std::size_t i = 0; i < x.size(); ++i) x.data()[i] = 0.1 * static_cast<double>(i) - 0.31;
    const ObservationSet obs =
        imc::observe(x, imc::draw_mask(3, 3, 5, 17), GaussianNoise(0.7), 23, 5);

    std::ostringstream out;
    imc::write_observations_csv(obs, out);
    CHECK(out.str().substr(0, 6) == "i,j,y\n");

    std::istringstream in(out.str());
    const ObservationSet back = imc::read_observations_csv(in, 3, 3);
    REQUIRE(back.samples.size() == obs.samples.size());
    for (std::size_t k = 0; k < obs.samples.size(); ++k) {
        CHECK(back.samples[k].i == obs.samples[k].i);
        CHECK(back.samples[k].j == obs.samples[k].j);
        CHECK(back.samples[k].y == obs.samples[k].y); // 17 significant digits round-trip
    }
    CHECK(back.nominal_m == back.samples.size());
}

TEST_CASE("reader rejects malformed input") {
    const auto read = [](const std::string& text) {
        std::istringstream in(text);
        return imc::read_observations_csv(in, 2, 2);
    };
    CHECK_THROWS_AS((void)read("x,y,z\n0,0,1.0\n"), imc::ConfigError);      // wrong header
    CHECK_THROWS_AS((void)read("i,j,y\n2,0,1.0\n"), imc::ConfigError);      // row out of range
    CHECK_THROWS_AS((void)read("i,j,y\n0,0,1.0\n0,0,2.0\n"), imc::ConfigError); // duplicate
    CHECK_THROWS_AS((void)read("i,j,y\n0,0,nan\n"), imc::ConfigError);      // non-finite
    CHECK_THROWS_AS((void)read("i,j,y\n0,0\n"), imc::ConfigError);          // missing field
    CHECK_NOTHROW((void)read("i,j,y\n"));                                   // empty body is fine
}

} // TEST_SUITE
