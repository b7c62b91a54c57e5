#pragma once

#include <cstdint>
#include <cstddef>
#include <ostream>
#include <vector>

#include "imc/estimator.hpp"
#include "imc/model.hpp"

namespace imc {

enum class SolverKind { oracle, alt_min };

/// Full description of one Monte Carlo experiment: dimensions and box
/// constants of the ground truth, target support sizes, noise level, the
/// observation-count grid, and solver settings.
struct ExperimentConfig {
    std::size_t n1 = 0, n2 = 0;
    std::size_t r = 0, r1 = 0, r2 = 0;
    std::size_t p0 = 0, q0 = 0; // exact nonzero counts of the generated factors
    double x_max = 1.0, q_max = 1.0, a_max = 1.0, b_max = 1.0;
    double sigma2 = 1.0;
    std::vector<std::size_t> m_grid;
    std::size_t trials_per_cell = 0;
    SolverKind solver = SolverKind::alt_min;
    EstimatorConfig estimator;     // r, x_max, q_max, seed are overwritten per trial
    bool lambda_auto = false;      // true: set both lambdas to the per-cell theoretical minimum
    bool beta_auto = false;        // true: derive the grid resolution exponent per cell
    std::uint64_t master_seed = 0;
    bool fixed_truth = false;      // one ground truth for the whole sweep instead of per trial
    std::uint64_t oracle_cap = 1'000'000;

    void validate() const; // throws ConfigError
};

/// One fitted trial. wall_time_ms is pinned to zero so sweep output is a pure
/// function of the config.
struct SweepRow {
    std::size_t trial = 0;
    std::size_t m = 0;
    double gamma = 0.0;
    std::size_t realized_obs = 0;
    std::size_t p0 = 0, q0 = 0;
    double mse = 0.0; // NaN when the solver diverged
    double cor1_rhs = 0.0;
    double objective = 0.0;
    std::size_t iters = 0;
    std::int64_t ms = 0;
    std::uint64_t seed = 0;
};

/// Sub-seed labels hung off a trial seed, one per independent random draw.
namespace seed_stream {
inline constexpr std::uint64_t truth = 1;
inline constexpr std::uint64_t mask = 2;
inline constexpr std::uint64_t noise = 3;
inline constexpr std::uint64_t fit = 4;
} // namespace seed_stream

/// Draw a ground truth for the config: A, B uniform in their boxes, factors
/// with exactly p0 / q0 nonzeros at uniform positions, then Q scaled so
/// ‖A P Q B‖_max = x_max/2. Draws that scale Q out of its box (or hit an
/// all-zero product) are redrawn, up to 100 attempts.
ImcModel gen_ground_truth(const ExperimentConfig& cfg, std::uint64_t seed);

/// Run the full grid. Row order is (m_grid order) x (trial 0..T-1) regardless
/// of thread count; every row depends only on (master_seed, m, trial).
/// A diverged fit yields a row with mse = NaN rather than an error.
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, unsigned threads = 1);

/// Header: trial,m,gamma,realized_obs,p0,q0,mse,cor1_rhs,objective,iters,ms,seed
void write_results_csv(std::ostream& out, const std::vector<SweepRow>& rows);

enum class SweepField { trial, m, gamma, realized_obs, p0, q0, mse, cor1_rhs, objective, iters };

double field_value(const SweepRow& row, SweepField field);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t excluded_rows = 0; // NaN-y rows dropped before averaging
};

/// OLS of log per-cell mean y against log x, one cell per distinct x value.
/// Requires at least 3 cells and positive x and mean y.
SlopeFit fit_slope(const std::vector<SweepRow>& rows, SweepField x, SweepField y);

} // namespace imc
