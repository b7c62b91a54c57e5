#pragma once

#include <cstddef>
#include <vector>

namespace imc {

/// Dense real matrix with row-major storage.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols);
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    /// Builds from a list of rows; all rows must have equal length.
    static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows);
    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool operator==(const DenseMatrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix transpose(const DenseMatrix& m);
DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix scale(const DenseMatrix& m, double s);

/// Largest absolute entry (0 for an empty matrix).
double max_norm(const DenseMatrix& m);
double sq_frobenius_norm(const DenseMatrix& m);
double frobenius_norm(const DenseMatrix& m);
/// Number of entries that are exactly nonzero.
std::size_t l0_norm(const DenseMatrix& m);
bool is_finite(const DenseMatrix& m);

/// Thin SVD m = U * diag(s) * V^T with singular values in descending order.
struct SvdResult {
    DenseMatrix U; // rows x k
    std::vector<double> s;
    DenseMatrix V; // cols x k
};

/// One-sided Jacobi SVD; intended for small matrices (initializers, tests).
SvdResult svd(const DenseMatrix& m);

} // namespace imc
