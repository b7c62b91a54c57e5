#include "imc/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace imc {

namespace {

std::string dims(const DenseMatrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument(std::string(op) + ": shape mismatch (" + dims(a) +
                                    " vs " + dims(b) + ")");
    }
}

} // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw std::invalid_argument("DenseMatrix: entry count " + std::to_string(data_.size()) +
                                    " does not match " + dims(*this));
    }
}

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.front().size();
    DenseMatrix out(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c) {
            throw std::invalid_argument("DenseMatrix::from_rows: ragged row " + std::to_string(i));
        }
        for (std::size_t j = 0; j < c; ++j) out(i, j) = rows[i][j];
    }
    return out;
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
    return out;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("multiply: dimension mismatch (" + dims(a) + " * " + dims(b) + ")");
    }
    DenseMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

DenseMatrix transpose(const DenseMatrix& m) {
    DenseMatrix out(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = m(i, j);
    return out;
}

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b, "add");
    DenseMatrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += b.data()[i];
    return out;
}

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b, "subtract");
    DenseMatrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] -= b.data()[i];
    return out;
}

DenseMatrix scale(const DenseMatrix& m, double s) {
    DenseMatrix out = m;
    for (double& v : out.data()) v *= s;
    return out;
}

double max_norm(const DenseMatrix& m) {
    double best = 0.0;
    for (double v : m.data()) best = std::max(best, std::abs(v));
    return best;
}

double sq_frobenius_norm(const DenseMatrix& m) {
    double acc = 0.0;
    for (double v : m.data()) acc += v * v;
    return acc;
}

double frobenius_norm(const DenseMatrix& m) { return std::sqrt(sq_frobenius_norm(m)); }

std::size_t l0_norm(const DenseMatrix& m) {
    std::size_t n = 0;
    for (double v : m.data()) n += v != 0.0;
    return n;
}

bool is_finite(const DenseMatrix& m) {
    return std::all_of(m.data().begin(), m.data().end(),
                       [](double v) { return std::isfinite(v); });
}

SvdResult svd(const DenseMatrix& m) {
    // One-sided Jacobi on columns; for wide matrices run on the transpose and swap U/V.
    if (m.rows() < m.cols()) {
        SvdResult t = svd(transpose(m));
        return SvdResult{std::move(t.V), std::move(t.s), std::move(t.U)};
    }
    const std::size_t n = m.cols();
    DenseMatrix G = m;
    DenseMatrix V = DenseMatrix::identity(n);

    const double eps = 1e-14;
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (std::size_t i = 0; i < G.rows(); ++i) {
                    app += G(i, p) * G(i, p);
                    aqq += G(i, q) * G(i, q);
                    apq += G(i, p) * G(i, q);
                }
                if (std::abs(apq) <= eps * std::sqrt(app * aqq) || apq == 0.0) continue;
                rotated = true;
                const double zeta = (aqq - app) / (2.0 * apq);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < G.rows(); ++i) {
                    const double gp = G(i, p), gq = G(i, q);
                    G(i, p) = c * gp - s * gq;
                    G(i, q) = s * gp + c * gq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vp = V(i, p), vq = V(i, q);
                    V(i, p) = c * vp - s * vq;
                    V(i, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sv(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double norm = 0.0;
        for (std::size_t i = 0; i < G.rows(); ++i) norm += G(i, j) * G(i, j);
        sv[j] = std::sqrt(norm);
    }
    std::vector<std::size_t> order(n);
    for (std::size_t j = 0; j < n; ++j) order[j] = j;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return sv[a] > sv[b]; });

    SvdResult out;
    out.U = DenseMatrix(m.rows(), n);
    out.V = DenseMatrix(n, n);
    out.s.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = order[k];
        out.s[k] = sv[j];
        const double inv = sv[j] > 0.0 ? 1.0 / sv[j] : 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) out.U(i, k) = G(i, j) * inv;
        for (std::size_t i = 0; i < n; ++i) out.V(i, k) = V(i, j);
    }
    return out;
}

} // namespace imc
