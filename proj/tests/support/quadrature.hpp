#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

// Small adaptive Simpson integrator used as an independent oracle for the
// closed-form divergence expressions. Deliberately self-contained: it must not
// share any code with the library it checks.
namespace testsupport {

template <typename F>
double simpson_panel(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adapt(const F& f, double a, double m, double b, double fa, double fm, double fb,
             double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson_panel<F>(a, m, fa, flm, fm);
    const double right = simpson_panel<F>(m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adapt(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double tol = 1e-12) {
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    return adapt(f, a, m, b, fa, fm, fb, simpson_panel<F>(a, b, fa, fm, fb), tol, 48);
}

// Integrate with interior knots so a peak much narrower than the interval
// cannot slip between the first Simpson sample points.
template <typename F>
double integrate_with_knots(const F& f, std::vector<double> knots, double tol) {
    std::sort(knots.begin(), knots.end());
    const double panel_tol = tol / static_cast<double>(knots.size());
    double total = 0.0;
    for (std::size_t k = 1; k < knots.size(); ++k) {
        if (knots[k] > knots[k - 1]) total += integrate(f, knots[k - 1], knots[k], panel_tol);
    }
    return total;
}

inline std::vector<double> gaussian_pair_knots(double x_true, double x_cand, double sd) {
    std::vector<double> knots;
    for (const double c : {x_true, x_cand}) {
        for (const double off : {-14.0, -6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0, 14.0}) {
            knots.push_back(c + off * sd);
        }
    }
    const double lo = std::min(x_true, x_cand) - 14.0 * sd;
    const double hi = std::max(x_true, x_cand) + 14.0 * sd;
    knots.erase(std::remove_if(knots.begin(), knots.end(),
                               [&](double v) { return v < lo || v > hi; }),
                knots.end());
    knots.push_back(lo);
    knots.push_back(hi);
    return knots;
}

inline double gaussian_pdf(double y, double x, double sigma2) {
    const double d = y - x;
    return std::exp(-d * d / (2.0 * sigma2)) / std::sqrt(2.0 * M_PI * sigma2);
}

// D(p || q) between N(x_true, s2) and N(x_cand, s2), by quadrature of the
// defining integral.
template <typename Dummy = void>
double kl_by_quadrature(double x_true, double x_cand, double sigma2, double tol = 1e-9) {
    const double sd = std::sqrt(sigma2);
    const auto f = [=](double y) {
        const double p = gaussian_pdf(y, x_true, sigma2);
        const double dq = y - x_cand;
        const double dp = y - x_true;
        const double log_ratio = (dq * dq - dp * dp) / (2.0 * sigma2);
        return p * log_ratio;
    };
    return integrate_with_knots(f, gaussian_pair_knots(x_true, x_cand, sd), tol);
}

// -2 log integral sqrt(p q), same pair of densities.
template <typename Dummy = void>
double neg2_log_affinity_by_quadrature(double x_true, double x_cand, double sigma2,
                                       double tol = 1e-12) {
    const double sd = std::sqrt(sigma2);
    const auto f = [=](double y) {
        return std::sqrt(gaussian_pdf(y, x_true, sigma2) * gaussian_pdf(y, x_cand, sigma2));
    };
    return -2.0 * std::log(integrate_with_knots(f, gaussian_pair_knots(x_true, x_cand, sd), tol));
}

} // namespace testsupport
