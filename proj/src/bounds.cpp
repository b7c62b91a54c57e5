#include "imc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "imc/discretization.hpp"
#include "imc/noise.hpp"

namespace imc {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string("bounds: ") + name + " must be positive and finite");
    }
}

} // namespace

double beta_gaussian(double m, double n1, double n2, double r, double r1, double r2,
                     double a_max, double b_max, double q_max, double x_max) {
    require_positive(m, "m");
    require_positive(r, "r");
    require_positive(r1, "r1");
    require_positive(r2, "r2");
    require_positive(a_max, "a_max");
    require_positive(b_max, "b_max");
    require_positive(q_max, "q_max");
    require_positive(x_max, "x_max");
    if (m < 4.0) throw std::invalid_argument("bounds: m must be >= 4");
    const double n = std::max(n1, n2);
    if (!(n > 1.0)) throw std::invalid_argument("bounds: max(n1, n2) must exceed 1");
    const double arg = 6.0 * std::sqrt(m) * (r * r1 * r2) * a_max * b_max * q_max / x_max;
    return std::max(1.0, 1.0 + std::log(arg) / std::log(n));
}

double lambda_min(double d_const, double beta, double r_dim, double n1, double n2) {
    if (d_const < 0.0) throw std::invalid_argument("bounds: d_const must be >= 0");
    require_positive(r_dim, "r_dim");
    const double n = std::max(n1, n2);
    if (!(n > 1.0)) throw std::invalid_argument("bounds: max(n1, n2) must exceed 1");
    return 2.0 * (1.0 + 2.0 * d_const / 3.0) * (4.0 * std::log(r_dim) + beta * std::log(n));
}

double theorem1_rhs(double d_const, double lambda_p, double lambda_q, double beta, double n1,
                    double n2, double m, double kl_at_candidate, double p0, double q0) {
    if (m < 4.0) throw std::invalid_argument("bounds: m must be >= 4");
    const double n = std::max(n1, n2);
    const double oracle_term = kl_at_candidate / (n1 * n2) +
                               ((lambda_p + lambda_q) + 4.0 * d_const * (beta + 4.0) * std::log(n) / 3.0) *
                                   (p0 + q0) / m;
    return 8.0 * d_const * std::log(m) / m + 3.0 * oracle_term;
}

double corollary1_rhs(double x_max, double sigma2, double beta, double n1, double n2, double m,
                      double p0_star, double q0_star) {
    if (m < 4.0) throw std::invalid_argument("bounds: m must be >= 4");
    const double n = std::max(n1, n2);
    return 70.0 * x_max * x_max * std::log(m) / m +
           48.0 * (sigma2 + 2.0 * x_max * x_max) * (beta + 4.0) * std::log(n) * (p0_star + q0_star) / m;
}

BoundReport compute_bound_report(std::size_t n1, std::size_t n2, std::size_t r, std::size_t r1,
                                 std::size_t r2, std::size_t m, double sigma2, double x_max,
                                 double q_max, double a_max, double b_max, std::size_t p0,
                                 std::size_t q0) {
    BoundReport rep;
    rep.n1 = n1;
    rep.n2 = n2;
    rep.r = r;
    rep.r1 = r1;
    rep.r2 = r2;
    rep.m = m;
    rep.sigma2 = sigma2;
    rep.x_max = x_max;
    rep.q_max = q_max;
    rep.a_max = a_max;
    rep.b_max = b_max;
    rep.p0 = p0;
    rep.q0 = q0;

    const double md = static_cast<double>(m);
    rep.beta = beta_gaussian(md, static_cast<double>(n1), static_cast<double>(n2),
                             static_cast<double>(r), static_cast<double>(r1),
                             static_cast<double>(r2), a_max, b_max, q_max, x_max);
    rep.l_lev = levels(n1, n2, rep.beta);
    rep.d_const = GaussianNoise(sigma2).d_constant(x_max);
    rep.lambda_p_min = lambda_min(rep.d_const, rep.beta, static_cast<double>(r1),
                                  static_cast<double>(n1), static_cast<double>(n2));
    rep.lambda_q_min = lambda_min(rep.d_const, rep.beta, static_cast<double>(r2),
                                  static_cast<double>(n1), static_cast<double>(n2));
    rep.theorem1 = theorem1_rhs(rep.d_const, rep.lambda_p_min, rep.lambda_q_min, rep.beta,
                                static_cast<double>(n1), static_cast<double>(n2), md, 0.0,
                                static_cast<double>(p0), static_cast<double>(q0));
    rep.corollary1 = corollary1_rhs(x_max, sigma2, rep.beta, static_cast<double>(n1),
                                    static_cast<double>(n2), md, static_cast<double>(p0),
                                    static_cast<double>(q0));
    return rep;
}

} // namespace imc
