#include "imc/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace imc {

namespace {

constexpr double kRelSlack = 1e-12;

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

std::string shape(const DenseMatrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

bool within(double value, double limit) { return value <= limit * (1.0 + kRelSlack); }

void check_norm(std::vector<std::string>& out, const char* name, double value, double limit,
                const char* limit_name) {
    if (!within(value, limit)) {
        std::ostringstream os;
        os << "||" << name << "||_max = " << value << " exceeds " << limit_name << " = " << limit;
        out.push_back(os.str());
    }
}

} // namespace

void ImcModel::check_shapes() const {
    require(A.rows() == n1 && A.cols() == r1,
            "model: A is " + shape(A) + ", expected n1 x r1 = " + std::to_string(n1) + "x" +
                std::to_string(r1));
    require(B.rows() == r2 && B.cols() == n2,
            "model: B is " + shape(B) + ", expected r2 x n2 = " + std::to_string(r2) + "x" +
                std::to_string(n2));
    if (P) {
        require(P->rows() == r1 && P->cols() == r,
                "model: P is " + shape(*P) + ", expected r1 x r = " + std::to_string(r1) + "x" +
                    std::to_string(r));
    }
    if (Q) {
        require(Q->rows() == r && Q->cols() == r2,
                "model: Q is " + shape(*Q) + ", expected r x r2 = " + std::to_string(r) + "x" +
                    std::to_string(r2));
    }
}

DenseMatrix assemble(const DenseMatrix& A, const DenseMatrix& P, const DenseMatrix& Q,
                     const DenseMatrix& B) {
    if (A.cols() != P.rows()) {
        throw std::invalid_argument("assemble: A.cols != P.rows (" + shape(A) + " vs " + shape(P) + ")");
    }
    if (P.cols() != Q.rows()) {
        throw std::invalid_argument("assemble: P.cols != Q.rows (" + shape(P) + " vs " + shape(Q) + ")");
    }
    if (Q.cols() != B.rows()) {
        throw std::invalid_argument("assemble: Q.cols != B.rows (" + shape(Q) + " vs " + shape(B) + ")");
    }
    return multiply(multiply(multiply(A, P), Q), B);
}

ValidationReport validate_bounds(const ImcModel& model, ValidationRole role) {
    model.check_shapes();
    ValidationReport report;
    check_norm(report.violations, "A", max_norm(model.A), model.a_max, "a_max");
    check_norm(report.violations, "B", max_norm(model.B), model.b_max, "b_max");
    if (model.P) check_norm(report.violations, "P", max_norm(*model.P), 1.0, "1");
    if (model.Q) check_norm(report.violations, "Q", max_norm(*model.Q), model.q_max, "q_max");
    if (model.P && model.Q) {
        const DenseMatrix X = assemble(model.A, *model.P, *model.Q, model.B);
        const bool truth = role == ValidationRole::ground_truth;
        check_norm(report.violations, "X", max_norm(X),
                   truth ? model.x_max / 2.0 : model.x_max, truth ? "x_max/2" : "x_max");
    }
    return report;
}

double per_element_sq_error(const DenseMatrix& x_true, const DenseMatrix& x_hat) {
    const DenseMatrix diff = subtract(x_true, x_hat);
    if (diff.size() == 0) return 0.0;
    return sq_frobenius_norm(diff) / static_cast<double>(diff.size());
}

} // namespace imc
