#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "imc/discretization.hpp"
#include "imc/matrix.hpp"
#include "imc/noise.hpp"
#include "imc/sampling.hpp"

namespace imc {

enum class StepKind { fixed, backtracking };

struct StepRule {
    StepKind kind = StepKind::backtracking;
    double eta = 1e-2;    // fixed rule only
    double shrink = 0.5;  // backtracking: step multiplier per failed try
    int max_tries = 30;
};

enum class InitKind { spectral, random, provided };

struct InitRule {
    InitKind kind = InitKind::random;
    double scale = 0.5; // random: entries i.i.d. uniform on [-scale, scale]
    std::optional<DenseMatrix> p0;
    std::optional<DenseMatrix> q0;
};

enum class XMaxRule { none, rescale };

struct EstimatorConfig {
    std::size_t r = 1; // inner dimension of the fitted factors
    double lambda_p = 0.0;
    double lambda_q = 0.0;
    std::size_t max_outer_iters = 200;
    StepRule step;
    double tol_objective = 1e-8;
    InitRule init;
    XMaxRule enforce_x_max = XMaxRule::none;
    bool project_to_grid = false;
    double grid_beta = 1.0; // scheme used when project_to_grid is set
    double x_max = 1.0;
    double q_max = 1.0;
    std::uint64_t seed = 0;
};

struct FitResult {
    DenseMatrix P_hat;
    DenseMatrix Q_hat;
    DenseMatrix X_hat;
    std::vector<double> objective_trace;
    bool converged = false;
    std::size_t iterations = 0;
    std::int64_t wall_time_ms = 0;
};

/// Penalized negative log-likelihood of the observed entries:
/// -sum log p_X(i,j)(y) + lambda_p*||P||_0 + lambda_q*||Q||_0, X = A*P*Q*B.
double objective(const DenseMatrix& p, const DenseMatrix& q, const ObservationSet& obs,
                 const DenseMatrix& a, const DenseMatrix& b, const NoiseModel& noise,
                 double lambda_p, double lambda_q);

/// Gradients of the masked quadratic loss (Gaussian log-likelihood) in P and Q:
/// grad_P = -(1/s2) A^T (M.(Y-APQB)) (QB)^T, grad_Q = -(1/s2) (AP)^T (M.(Y-APQB)) B^T.
std::pair<DenseMatrix, DenseMatrix> masked_gaussian_gradients(const DenseMatrix& p,
                                                              const DenseMatrix& q,
                                                              const ObservationSet& obs,
                                                              const DenseMatrix& a,
                                                              const DenseMatrix& b, double sigma2);

/// Exact minimizer of objective() over the discretized class, by exhaustive
/// enumeration. Ties break toward smaller penalty(), then earlier enumeration
/// order, so the result is deterministic.
FitResult oracle_solve(const ObservationSet& obs, const DenseMatrix& a, const DenseMatrix& b,
                       std::size_t r, const NoiseModel& noise, const DiscretizationScheme& scheme,
                       double lambda_p, double lambda_q, double x_max,
                       std::uint64_t cap = 1'000'000);

/// Alternating proximal gradient on the penalized Gaussian objective: per
/// outer iteration a P step (gradient, step size by the configured rule,
/// entrywise hard threshold at sqrt(2*lambda*eta), clamp to [-1,1]) and the
/// symmetric Q step (clamp to [-q_max, q_max]). Stops when the objective
/// decrease falls below tol_objective or at max_outer_iters. Throws
/// SolverDiverged (with the trace) on a non-finite objective.
FitResult alt_min_solve(const ObservationSet& obs, const DenseMatrix& a, const DenseMatrix& b,
                        const NoiseModel& noise, const EstimatorConfig& config);

} // namespace imc
