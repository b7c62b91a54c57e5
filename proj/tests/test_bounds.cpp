#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "imc/bounds.hpp"
#include "imc/discretization.hpp"
#include "imc/noise.hpp"
#include "imc/rng.hpp"

TEST_SUITE("bounds") {

TEST_CASE("beta_gaussian clamps at 1 and matches a hand value") {
    // Huge x_max drives the log term negative; the floor takes over.
    CHECK(imc::beta_gaussian(100.0, 10.0, 10.0, 1, 1, 1, 1.0, 1.0, 1.0, 1e9) == 1.0);
    // 6*sqrt(100)*1*1*1*1/6 = 10 = max(n1, n2), so the ratio of logs is 1.
    CHECK(imc::beta_gaussian(100.0, 10.0, 7.0, 1, 1, 1, 1.0, 1.0, 1.0, 6.0) ==
          doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("beta_gaussian makes the level count cover the class diameter") {
    imc::rng::Stream s(181);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n1 = 8 + s.uniform_below(33);
        const std::size_t n2 = 8 + s.uniform_below(33);
        const std::size_t m = 4 + s.uniform_below(n1 * n2 - 3);
        const double r = 1.0 + static_cast<double>(s.uniform_below(2));
        const double r1 = 1.0 + static_cast<double>(s.uniform_below(2));
        const double r2 = 1.0 + static_cast<double>(s.uniform_below(2));
        const double a_max = s.uniform(0.5, 2.0);
        const double b_max = s.uniform(0.5, 2.0);
        const double q_max = s.uniform(0.5, 2.0);
        const double x_max = s.uniform(0.5, 2.0);
        const double beta = imc::beta_gaussian(static_cast<double>(m),
                                               static_cast<double>(n1), static_cast<double>(n2),
                                               r, r1, r2, a_max, b_max, q_max, x_max);
        CHECK(beta >= 1.0);
        const double l = static_cast<double>(imc::levels(n1, n2, beta));
        CHECK(l >= 6.0 * std::sqrt(static_cast<double>(m)) * (r * r1 * r2) * a_max * b_max *
                       q_max / x_max);
    }
}

TEST_CASE("beta_gaussian input validation") {
    CHECK_THROWS_AS((void)imc::beta_gaussian(3.0, 10, 10, 1, 1, 1, 1, 1, 1, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)imc::beta_gaussian(100.0, 1.0, 1.0, 1, 1, 1, 1, 1, 1, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)imc::beta_gaussian(100.0, 10, 10, 1, 1, 1, 1, 1, 1, 0.0),
                    std::invalid_argument);
}

TEST_CASE("lambda_min fixed points and monotonicity") {
    CHECK(imc::lambda_min(0.0, 1.0, 1.0, std::exp(1.0), 1.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(imc::lambda_min(2.0, 1.0, 4.0, 16.0, 16.0) ==
          doctest::Approx(38.8162421113569).epsilon(1e-13));

    const double base = imc::lambda_min(1.0, 2.0, 3.0, 20.0, 10.0);
    CHECK(imc::lambda_min(2.0, 2.0, 3.0, 20.0, 10.0) > base);
    CHECK(imc::lambda_min(1.0, 3.0, 3.0, 20.0, 10.0) > base);
    CHECK(imc::lambda_min(1.0, 2.0, 5.0, 20.0, 10.0) > base);
    CHECK(imc::lambda_min(1.0, 2.0, 3.0, 40.0, 10.0) > base);
    // Only the larger dimension matters.
    CHECK(imc::lambda_min(1.0, 2.0, 3.0, 20.0, 15.0) == base);
    CHECK_THROWS_AS((void)imc::lambda_min(-0.5, 1.0, 1.0, 10.0, 10.0), std::invalid_argument);
}

TEST_CASE("theorem1_rhs structure") {
    const double e = std::exp(1.0);
    // With kl = 0 and no support, only the 8*d*log(m)/m term remains.
    CHECK(imc::theorem1_rhs(1.0, 0.0, 0.0, 1.0, e, e, e * e, 0.0, 0.0, 0.0) ==
          doctest::Approx(8.0 * 2.0 / (e * e)).epsilon(1e-14));

    const auto at_m = [](double m) {
        return imc::theorem1_rhs(2.0, 38.82, 38.82, 1.0, 16.0, 16.0, m, 0.0, 2.0, 2.0);
    };
    CHECK(at_m(200.0) < at_m(100.0));
    CHECK(at_m(400.0) < at_m(200.0));

    // Full evaluation against an independent spelling of the formula.
    const double d = 2.0, lp = 38.8162421113569, lq = 38.8162421113569, beta = 1.0;
    const double n = 16.0, m = 100.0, p0 = 2.0, q0 = 2.0;
    const double expected =
        8.0 * d * std::log(m) / m +
        3.0 * ((lp + lq + 4.0 * d * (beta + 4.0) * std::log(n) / 3.0) * (p0 + q0) / m);
    CHECK(imc::theorem1_rhs(d, lp, lq, beta, n, n, m, 0.0, p0, q0) ==
          doctest::Approx(expected).epsilon(1e-12));

    // kl enters through its own additive term, divided by n1*n2.
    const double with_kl = imc::theorem1_rhs(d, lp, lq, beta, n, n, m, 32.0, p0, q0);
    CHECK(with_kl == doctest::Approx(expected + 3.0 * 32.0 / 256.0).epsilon(1e-12));

    CHECK_THROWS_AS((void)imc::theorem1_rhs(1, 0, 0, 1, 4, 4, 3.0, 0, 0, 0),
                    std::invalid_argument);
}

TEST_CASE("corollary1_rhs fixed points and sparsity scaling") {
    const double e = std::exp(1.0);
    CHECK(imc::corollary1_rhs(1.0, 1.0, 1.0, e, e, e * e, 1.0, 0.0) ==
          doctest::Approx(860.0 / (e * e)).epsilon(1e-13));
    // No support: only the log(m)/m term.
    CHECK(imc::corollary1_rhs(2.0, 0.5, 1.5, 10.0, 10.0, 50.0, 0.0, 0.0) ==
          doctest::Approx(70.0 * 4.0 * std::log(50.0) / 50.0).epsilon(1e-14));
    // The support term is linear in p0 + q0.
    const double base = imc::corollary1_rhs(1.0, 1.0, 2.0, 12.0, 9.0, 60.0, 0.0, 0.0);
    const double one = imc::corollary1_rhs(1.0, 1.0, 2.0, 12.0, 9.0, 60.0, 2.0, 1.0);
    const double two = imc::corollary1_rhs(1.0, 1.0, 2.0, 12.0, 9.0, 60.0, 4.0, 2.0);
    CHECK(two - base == doctest::Approx(2.0 * (one - base)).epsilon(1e-12));
    CHECK_THROWS_AS((void)imc::corollary1_rhs(1, 1, 1, 4, 4, 3.0, 0, 0), std::invalid_argument);
}

TEST_CASE("compute_bound_report ties the pieces together") {
    const imc::BoundReport rep =
        imc::compute_bound_report(32, 24, 2, 4, 4, 200, 0.25, 2.0, 1.5, 1.0, 1.25, 6, 3);

    CHECK(rep.n1 == 32);
    CHECK(rep.n2 == 24);
    CHECK(rep.m == 200);
    CHECK(rep.p0 == 6);
    CHECK(rep.q0 == 3);

    const double beta =
        imc::beta_gaussian(200.0, 32.0, 24.0, 2.0, 4.0, 4.0, 1.0, 1.25, 1.5, 2.0);
    CHECK(rep.beta == beta);
    CHECK(rep.l_lev == imc::levels(32, 24, beta));
    CHECK(rep.d_const == imc::GaussianNoise(0.25).d_constant(2.0));
    CHECK(rep.lambda_p_min == imc::lambda_min(rep.d_const, beta, 4.0, 32.0, 24.0));
    CHECK(rep.lambda_q_min == imc::lambda_min(rep.d_const, beta, 4.0, 32.0, 24.0));
    CHECK(rep.theorem1 == imc::theorem1_rhs(rep.d_const, rep.lambda_p_min, rep.lambda_q_min,
                                            beta, 32.0, 24.0, 200.0, 0.0, 6.0, 3.0));
    CHECK(rep.corollary1 == imc::corollary1_rhs(2.0, 0.25, beta, 32.0, 24.0, 200.0, 6.0, 3.0));
}

} // TEST_SUITE
