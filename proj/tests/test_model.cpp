#include "doctest.h"

#include <stdexcept>
#include <string>

#include "imc/model.hpp"

using imc::DenseMatrix;
using imc::ImcModel;
using imc::ValidationRole;

namespace {

ImcModel tiny_model() {
    ImcModel m;
    m.n1 = 2;
    m.n2 = 2;
    m.r1 = 2;
    m.r2 = 2;
    m.r = 2;
    m.A = DenseMatrix::identity(2);
    m.B = DenseMatrix::identity(2);
    m.P = DenseMatrix(2, 2);
    m.Q = DenseMatrix(2, 2);
    return m;
}

bool mentions(const std::vector<std::string>& violations, const std::string& needle) {
    for (const std::string& v : violations) {
        if (v.find(needle) != std::string::npos) return true;
    }
    return false;
}

} // namespace

TEST_SUITE("model") {

TEST_CASE("assemble of identities is the identity") {
    const DenseMatrix i2 = DenseMatrix::identity(2);
    CHECK(imc::assemble(i2, i2, i2, i2) == i2);
}

TEST_CASE("assemble with a zero factor is zero") {
    const DenseMatrix a = DenseMatrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
    const DenseMatrix p(2, 3);
    const DenseMatrix q = DenseMatrix::from_rows({{1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}});
    const DenseMatrix x = imc::assemble(a, p, q, a);
    CHECK(imc::max_norm(x) == 0.0);
}

TEST_CASE("assemble matches a hand computation") {
    const DenseMatrix a = DenseMatrix::from_rows({{1.0, 1.0}});
    const DenseMatrix p = DenseMatrix::from_rows({{1.0}, {1.0}});
    const DenseMatrix q = DenseMatrix::from_rows({{2.0}});
    const DenseMatrix b = DenseMatrix::from_rows({{1.0, 0.0}});
    CHECK(imc::assemble(a, p, q, b) == DenseMatrix::from_rows({{4.0, 0.0}}));
}

TEST_CASE("assemble is bilinear in P with exact integer data") {
    const DenseMatrix a = DenseMatrix::from_rows({{1.0, 2.0}, {0.0, 1.0}, {3.0, 1.0}});
    const DenseMatrix p = DenseMatrix::from_rows({{2.0}, {-1.0}});
    const DenseMatrix q = DenseMatrix::from_rows({{3.0, 0.0}});
    const DenseMatrix b = DenseMatrix::from_rows({{1.0, -2.0}, {0.0, 4.0}});
    const DenseMatrix x = imc::assemble(a, p, q, b);
    for (const double c : {-3.0, 2.0, 7.0}) {
        CHECK(imc::assemble(a, imc::scale(p, c), q, b) == imc::scale(x, c));
    }
}

TEST_CASE("assemble names the offending pair") {
    CHECK_THROWS_WITH_AS((void)imc::assemble(DenseMatrix(1, 2), DenseMatrix(3, 1),
                                             DenseMatrix(1, 1), DenseMatrix(1, 1)),
                         doctest::Contains("A.cols != P.rows"), std::invalid_argument);
    CHECK_THROWS_WITH_AS((void)imc::assemble(DenseMatrix(1, 2), DenseMatrix(2, 1),
                                             DenseMatrix(2, 1), DenseMatrix(1, 1)),
                         doctest::Contains("P.cols != Q.rows"), std::invalid_argument);
}

TEST_CASE("check_shapes names the offending matrix") {
    ImcModel m = tiny_model();
    m.A = DenseMatrix(3, 2);
    CHECK_THROWS_WITH_AS(m.check_shapes(), doctest::Contains("A is 3x2"), std::invalid_argument);
    m = tiny_model();
    m.Q = DenseMatrix(1, 2);
    CHECK_THROWS_WITH_AS(m.check_shapes(), doctest::Contains("Q is 1x2"), std::invalid_argument);
}

TEST_CASE("all-zero model has no violations") {
    const ImcModel m = tiny_model();
    CHECK(imc::validate_bounds(m, ValidationRole::candidate).ok());
    CHECK(imc::validate_bounds(m, ValidationRole::ground_truth).ok());
}

TEST_CASE("an out-of-box P entry is reported") {
    ImcModel m = tiny_model();
    (*m.P)(0, 0) = 1.5;
    const auto report = imc::validate_bounds(m, ValidationRole::candidate);
    CHECK_FALSE(report.ok());
    CHECK(mentions(report.violations, "||P||_max"));
}

TEST_CASE("the X box halves for the ground-truth role") {
    ImcModel m = tiny_model();
    // X = 0.6 * x_max * I: inside the candidate box, outside the truth box.
    (*m.P)(0, 0) = 1.0;
    (*m.P)(1, 1) = 1.0;
    (*m.Q)(0, 0) = 0.6;
    (*m.Q)(1, 1) = 0.6;
    CHECK(imc::validate_bounds(m, ValidationRole::candidate).ok());
    const auto report = imc::validate_bounds(m, ValidationRole::ground_truth);
    CHECK_FALSE(report.ok());
    CHECK(mentions(report.violations, "x_max/2"));
}

TEST_CASE("validation tolerates tiny floating overshoot") {
    ImcModel m = tiny_model();
    (*m.P)(0, 0) = 1.0 + 1e-13; // within the relative slack
    CHECK(imc::validate_bounds(m, ValidationRole::candidate).ok());
}

TEST_CASE("per-element squared error") {
    const DenseMatrix a = DenseMatrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
    CHECK(imc::per_element_sq_error(a, a) == 0.0);
    const DenseMatrix b = DenseMatrix::from_rows({{2.0, 3.0}, {4.0, 5.0}});
    CHECK(imc::per_element_sq_error(a, b) == 1.0);
    const DenseMatrix c = DenseMatrix::from_rows({{1.0, 2.0}, {3.0, 0.0}});
    CHECK(imc::per_element_sq_error(a, c) == 4.0);
    CHECK_THROWS_AS((void)imc::per_element_sq_error(a, DenseMatrix(1, 2)), std::invalid_argument);
}

} // TEST_SUITE
