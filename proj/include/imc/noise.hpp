#pragma once

#include <memory>

#include "imc/matrix.hpp"
#include "imc/rng.hpp"

namespace imc {

/// Per-entry observation channel y ~ p_x. The estimator and the bound
/// calculators only touch this interface, so other channels can slot in.
class NoiseModel {
public:
    virtual ~NoiseModel() = default;

    virtual double log_pdf(double x, double y) const = 0;
    virtual double sample(double x, rng::Stream& stream) const = 0;

    /// KL(p_x_true || p_x_cand).
    virtual double kl(double x_true, double x_cand) const = 0;

    /// -2 log of the Hellinger affinity between p_x_cand and p_x_true.
    virtual double neg2_log_affinity(double x_cand, double x_true) const = 0;

    /// Uniform KL upper bound over pairs in [-x_max, x_max].
    virtual double d_constant(double x_max) const = 0;
};

/// Additive Gaussian channel with known variance sigma2.
class GaussianNoise final : public NoiseModel {
public:
    explicit GaussianNoise(double sigma2);

    double sigma2() const { return sigma2_; }

    double log_pdf(double x, double y) const override;
    double sample(double x, rng::Stream& stream) const override;
    double kl(double x_true, double x_cand) const override;
    double neg2_log_affinity(double x_cand, double x_true) const override;
    double d_constant(double x_max) const override;

private:
    double sigma2_;
};

/// Sum of entrywise KL divergences between two equal-shape matrices.
double matrix_kl(const DenseMatrix& x_true, const DenseMatrix& x_cand, const NoiseModel& noise);

} // namespace imc
