#pragma once

#include <cstdint>

namespace imc {

/// Discretization exponent for the Gaussian instantiation:
/// max{1, 1 + log(6*sqrt(m)*(r*r1*r2)*a_max*b_max*q_max / x_max) / log(n1 v n2)}.
/// All logs natural here and below.
double beta_gaussian(double m, double n1, double n2, double r, double r1, double r2,
                     double a_max, double b_max, double q_max, double x_max);

/// Smallest admissible factor penalty weight:
/// 2*(1 + 2*d_const/3)*(4*log(r_dim) + beta*log(n1 v n2)).
double lambda_min(double d_const, double beta, double r_dim, double n1, double n2);

/// Per-element oracle error bound (in -2 log affinity units) evaluated at one
/// candidate with divergence kl_at_candidate and factor sparsities p0, q0:
/// 8*d*log(m)/m + 3*(kl/(n1*n2) + ((lp+lq) + 4*d*(beta+4)*log(n1 v n2)/3)*(p0+q0)/m).
/// The oracle min over candidates is the caller's job.
double theorem1_rhs(double d_const, double lambda_p, double lambda_q, double beta, double n1,
                    double n2, double m, double kl_at_candidate, double p0, double q0);

/// Constant-explicit Gaussian per-element squared-error bound at the true
/// sparsities: 70*x_max^2*log(m)/m + 48*(sigma2+2*x_max^2)*(beta+4)*log(n1 v n2)*(p0+q0)/m.
double corollary1_rhs(double x_max, double sigma2, double beta, double n1, double n2, double m,
                      double p0_star, double q0_star);

/// Every theoretical quantity for one experiment cell, plus an input echo.
struct BoundReport {
    // inputs
    std::size_t n1 = 0, n2 = 0, r = 0, r1 = 0, r2 = 0;
    std::size_t m = 0;
    double sigma2 = 0.0;
    double x_max = 0.0, q_max = 0.0, a_max = 0.0, b_max = 0.0;
    std::size_t p0 = 0, q0 = 0;
    // outputs
    double beta = 0.0;
    std::uint64_t l_lev = 0;
    double d_const = 0.0;
    double lambda_p_min = 0.0;
    double lambda_q_min = 0.0;
    double theorem1 = 0.0;   // evaluated at kl = 0 (in-class candidate at the true sparsities)
    double corollary1 = 0.0;
};

BoundReport compute_bound_report(std::size_t n1, std::size_t n2, std::size_t r, std::size_t r1,
                                 std::size_t r2, std::size_t m, double sigma2, double x_max,
                                 double q_max, double a_max, double b_max, std::size_t p0,
                                 std::size_t q0);

} // namespace imc
