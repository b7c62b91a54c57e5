#include "imc/noise.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace imc {

GaussianNoise::GaussianNoise(double sigma2) : sigma2_(sigma2) {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
        throw std::invalid_argument("GaussianNoise: sigma2 must be positive and finite");
    }
}

double GaussianNoise::log_pdf(double x, double y) const {
    const double d = y - x;
    return -0.5 * std::log(2.0 * std::numbers::pi * sigma2_) - d * d / (2.0 * sigma2_);
}

double GaussianNoise::sample(double x, rng::Stream& stream) const {
    return x + std::sqrt(sigma2_) * stream.normal();
}

double GaussianNoise::kl(double x_true, double x_cand) const {
    const double d = x_true - x_cand;
    return d * d / (2.0 * sigma2_);
}

double GaussianNoise::neg2_log_affinity(double x_cand, double x_true) const {
    const double d = x_true - x_cand;
    return d * d / (4.0 * sigma2_);
}

double GaussianNoise::d_constant(double x_max) const {
    return 2.0 * x_max * x_max / sigma2_;
}

double matrix_kl(const DenseMatrix& x_true, const DenseMatrix& x_cand, const NoiseModel& noise) {
    if (x_true.rows() != x_cand.rows() || x_true.cols() != x_cand.cols()) {
        throw std::invalid_argument("matrix_kl: shape mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < x_true.size(); ++i) {
        acc += noise.kl(x_true.data()[i], x_cand.data()[i]);
    }
    return acc;
}

} // namespace imc
