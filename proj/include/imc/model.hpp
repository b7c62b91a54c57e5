#pragma once

#include <optional>
#include <string>
#include <vector>

#include "imc/matrix.hpp"

namespace imc {

/// Bilinear observation model X = A * P * Q * B with known side features A, B
/// and unknown sparse factors P, Q, plus the box constants the class is
/// defined by.
struct ImcModel {
    std::size_t n1 = 0, n2 = 0; // X is n1 x n2
    std::size_t r1 = 0, r2 = 0; // A is n1 x r1, B is r2 x n2
    std::size_t r = 0;          // P is r1 x r, Q is r x r2

    DenseMatrix A;
    DenseMatrix B;
    std::optional<DenseMatrix> P; // absent when the model only carries features
    std::optional<DenseMatrix> Q;

    double x_max = 1.0;
    double q_max = 1.0;
    double a_max = 1.0;
    double b_max = 1.0;

    /// Throws std::invalid_argument naming the offending pair when any stored
    /// dimension disagrees with the declared n1, n2, r1, r2, r.
    void check_shapes() const;
};

/// X = ((A * P) * Q) * B. Throws on conformability mismatch.
DenseMatrix assemble(const DenseMatrix& A, const DenseMatrix& P, const DenseMatrix& Q,
                     const DenseMatrix& B);

/// Ground truth must satisfy ||X||_max <= x_max/2; candidates only x_max.
enum class ValidationRole { ground_truth, candidate };

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Checks the max-norm box constraints (||P||_max <= 1, ||Q||_max <= q_max,
/// ||A||_max <= a_max, ||B||_max <= b_max, and the role-dependent bound on
/// ||X||_max) with relative slack 1e-12. Violations are reported, not thrown.
ValidationReport validate_bounds(const ImcModel& model, ValidationRole role);

/// ||x_true - x_hat||_F^2 / (rows * cols).
double per_element_sq_error(const DenseMatrix& x_true, const DenseMatrix& x_hat);

} // namespace imc
