#include "imc/discretization.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "imc/model.hpp"

namespace imc {

namespace {

constexpr double kRelSlack = 1e-12;

bool is_pow2(std::uint64_t v) { return v != 0 && std::has_single_bit(v); }

int log2_exact(std::uint64_t v) { return std::countr_zero(v); }

double level_value(double c, std::uint64_t k, std::uint64_t l_lev) {
    return c * (2.0 * static_cast<double>(k) / static_cast<double>(l_lev - 1) - 1.0);
}

// (l_lev + 1)^slots, or nullopt-style sentinel (0) on overflow past cap checks.
double class_size(std::uint64_t l_lev, std::size_t slots) {
    return std::pow(static_cast<double>(l_lev) + 1.0, static_cast<double>(slots));
}

} // namespace

DiscretizationScheme DiscretizationScheme::from_dims(std::size_t n1, std::size_t n2, double beta,
                                                     std::size_t r1, std::size_t r, std::size_t r2,
                                                     double q_max) {
    if (r1 == 0 || r == 0 || r2 == 0) {
        throw std::invalid_argument("DiscretizationScheme: factor dimensions must be positive");
    }
    DiscretizationScheme s;
    s.beta = beta;
    s.l_lev = levels(n1, n2, beta);
    s.l_loc_p = std::bit_ceil(static_cast<std::uint64_t>(r1) * r);
    s.l_loc_q = std::bit_ceil(static_cast<std::uint64_t>(r) * r2);
    s.q_max = q_max;
    s.validate();
    return s;
}

void DiscretizationScheme::validate() const {
    if (beta < 1.0) throw std::invalid_argument("DiscretizationScheme: beta must be >= 1");
    if (!is_pow2(l_lev) || l_lev < 2) {
        throw std::invalid_argument("DiscretizationScheme: l_lev must be a power of two >= 2");
    }
    if (!is_pow2(l_loc_p) || !is_pow2(l_loc_q)) {
        throw std::invalid_argument("DiscretizationScheme: l_loc_p/l_loc_q must be powers of two");
    }
    if (!(q_max > 0.0)) throw std::invalid_argument("DiscretizationScheme: q_max must be positive");
}

std::uint64_t levels(std::size_t n1, std::size_t n2, double beta) {
    if (beta < 1.0) throw std::invalid_argument("levels: beta must be >= 1");
    const std::size_t n = std::max(n1, n2);
    if (n < 2) throw std::invalid_argument("levels: max(n1, n2) must be >= 2");
    const double t = beta * std::log2(static_cast<double>(n));
    // Guard against t landing epsilon above an exact integer.
    const double exponent = std::ceil(t - 1e-12 * std::max(1.0, std::abs(t)));
    if (exponent > 62.0) throw std::invalid_argument("levels: level count overflows 64 bits");
    return std::uint64_t{1} << static_cast<unsigned>(exponent);
}

DenseMatrix quantize_factor(const DenseMatrix& m, double c, std::uint64_t l_lev) {
    if (!(c > 0.0)) throw std::invalid_argument("quantize_factor: range bound must be positive");
    if (l_lev < 2) throw std::invalid_argument("quantize_factor: l_lev must be >= 2");
    const double step = 2.0 * c / static_cast<double>(l_lev - 1);
    DenseMatrix out(m.rows(), m.cols());
    for (std::size_t idx = 0; idx < m.size(); ++idx) {
        const double v = m.data()[idx];
        if (v == 0.0) continue;
        if (std::abs(v) > c * (1.0 + kRelSlack)) {
            throw std::invalid_argument("quantize_factor: entry " + std::to_string(v) +
                                        " outside [-" + std::to_string(c) + ", " + std::to_string(c) + "]");
        }
        const double clamped = std::clamp(v, -c, c);
        const double pos = (clamped + c) / step;
        std::uint64_t k;
        const double k0 = std::floor(pos);
        if (k0 >= static_cast<double>(l_lev - 1)) {
            k = l_lev - 1;
        } else {
            const std::uint64_t lo = static_cast<std::uint64_t>(k0);
            const double frac = pos - k0;
            if (frac > 0.5) {
                k = lo + 1;
            } else if (frac < 0.5) {
                k = lo;
            } else {
                // Exact midpoint: take the level nearer zero.
                const double below = level_value(c, lo, l_lev);
                const double above = level_value(c, lo + 1, l_lev);
                k = std::abs(below) <= std::abs(above) ? lo : lo + 1;
            }
        }
        out.data()[idx] = level_value(c, k, l_lev);
    }
    return out;
}

double penalty(const DenseMatrix& p, const DenseMatrix& q, const DiscretizationScheme& scheme) {
    scheme.validate();
    const double bits_p = log2_exact(scheme.l_loc_p) + log2_exact(scheme.l_lev);
    const double bits_q = log2_exact(scheme.l_loc_q) + log2_exact(scheme.l_lev);
    return static_cast<double>(l0_norm(p)) * bits_p + static_cast<double>(l0_norm(q)) * bits_q;
}

double kraft_sum(const DiscretizationScheme& scheme, std::size_t r1, std::size_t r, std::size_t r2,
                 std::uint64_t cap, std::uint64_t extra_bits_per_factor) {
    scheme.validate();
    const std::size_t dp = r1 * r;
    const std::size_t dq = r * r2;
    if (class_size(scheme.l_lev, dp + dq) > static_cast<double>(cap)) {
        throw std::invalid_argument("kraft_sum: class size exceeds enumeration cap");
    }

    const int bits_p = log2_exact(scheme.l_loc_p) + log2_exact(scheme.l_lev);
    const int bits_q = log2_exact(scheme.l_loc_q) + log2_exact(scheme.l_lev);
    // Support-count headers make the concatenated code uniquely decodable.
    const int header = static_cast<int>(std::bit_width(static_cast<std::uint64_t>(dp)) +
                                        std::bit_width(static_cast<std::uint64_t>(dq))) +
                       2 * static_cast<int>(extra_bits_per_factor);

    const std::uint64_t choices = scheme.l_lev + 1; // zero plus each level
    std::vector<std::uint64_t> digits(dp + dq, 0);
    double sum = 0.0;
    while (true) {
        std::size_t nnz_p = 0, nnz_q = 0;
        for (std::size_t s = 0; s < dp; ++s) nnz_p += digits[s] != 0;
        for (std::size_t s = dp; s < digits.size(); ++s) nnz_q += digits[s] != 0;
        const int pen = header + static_cast<int>(nnz_p) * bits_p + static_cast<int>(nnz_q) * bits_q;
        sum += std::ldexp(1.0, -pen);

        std::size_t slot = digits.size();
        while (slot > 0) {
            --slot;
            if (++digits[slot] < choices) break;
            digits[slot] = 0;
            if (slot == 0) return sum;
        }
    }
}

void enumerate_class(const DenseMatrix& a, const DenseMatrix& b, std::size_t r,
                     const DiscretizationScheme& scheme, double x_max, std::uint64_t cap,
                     const std::function<void(const DenseMatrix&, const DenseMatrix&,
                                              const DenseMatrix&)>& visit) {
    scheme.validate();
    if (x_max < 0.0) throw std::invalid_argument("enumerate_class: x_max must be >= 0");
    if (r == 0) throw std::invalid_argument("enumerate_class: r must be positive");
    const std::size_t r1 = a.cols();
    const std::size_t r2 = b.rows();
    const std::size_t dp = r1 * r;
    const std::size_t dq = r * r2;
    if (class_size(scheme.l_lev, dp + dq) > static_cast<double>(cap)) {
        throw std::invalid_argument("enumerate_class: class size exceeds enumeration cap");
    }

    // Per-slot value tables: 0 first, then levels in ascending order.
    const auto values_for = [&](double c) {
        std::vector<double> vals(scheme.l_lev + 1, 0.0);
        for (std::uint64_t k = 0; k < scheme.l_lev; ++k) vals[k + 1] = level_value(c, k, scheme.l_lev);
        return vals;
    };
    const std::vector<double> p_values = values_for(1.0);
    const std::vector<double> q_values = values_for(scheme.q_max);

    const std::uint64_t choices = scheme.l_lev + 1;
    std::vector<std::uint64_t> digits(dp + dq, 0);
    DenseMatrix p(r1, r), q(r, r2);
    while (true) {
        for (std::size_t s = 0; s < dp; ++s) p.data()[s] = p_values[digits[s]];
        for (std::size_t s = 0; s < dq; ++s) q.data()[s] = q_values[digits[dp + s]];
        const DenseMatrix x = assemble(a, p, q, b);
        if (max_norm(x) <= x_max * (1.0 + kRelSlack)) visit(p, q, x);

        std::size_t slot = digits.size();
        while (slot > 0) {
            --slot;
            if (++digits[slot] < choices) break;
            digits[slot] = 0;
            if (slot == 0) return;
        }
    }
}

} // namespace imc
