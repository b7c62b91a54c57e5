#include "imc/estimator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "imc/errors.hpp"
#include "imc/model.hpp"
#include "imc/rng.hpp"

namespace imc {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ms(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

void check_obs_range(const ObservationSet& obs, std::size_t n1, std::size_t n2) {
    for (const Sample& s : obs.samples) {
        if (s.i >= n1 || s.j >= n2) {
            throw std::invalid_argument("observations index (" + std::to_string(s.i) + "," +
                                        std::to_string(s.j) + ") outside " + std::to_string(n1) +
                                        "x" + std::to_string(n2));
        }
    }
}

double neg_log_lik(const DenseMatrix& x, const ObservationSet& obs, const NoiseModel& noise) {
    double acc = 0.0;
    for (const Sample& s : obs.samples) acc -= noise.log_pdf(x(s.i, s.j), s.y);
    return acc;
}

double dot(const DenseMatrix& a, const DenseMatrix& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a.data()[i] * b.data()[i];
    return acc;
}

// Hessian operator of the masked quadratic loss in one factor:
// G(V) = (1/s2) * left^T (M . (left V right)) right^T with V of shape
// left.cols x right.rows.
DenseMatrix apply_quadratic_hessian(const DenseMatrix& left, const DenseMatrix& right,
                                    const ObservationSet& obs, double sigma2,
                                    const DenseMatrix& v) {
    const DenseMatrix w = multiply(left, v); // n1 x right.rows
    DenseMatrix g(v.rows(), v.cols());
    for (const Sample& s : obs.samples) {
        double t = 0.0;
        for (std::size_t h = 0; h < v.cols(); ++h) t += w(s.i, h) * right(h, s.j);
        if (t == 0.0) continue;
        for (std::size_t a = 0; a < v.rows(); ++a) {
            const double la = left(s.i, a) * t;
            if (la == 0.0) continue;
            for (std::size_t h = 0; h < v.cols(); ++h) g(a, h) += la * right(h, s.j);
        }
    }
    return scale(g, 1.0 / sigma2);
}

// Largest-eigenvalue estimate of the operator above by warm-started power
// iteration; a lower bound, so 1/L is a slightly optimistic first step and
// backtracking does the rest.
double lipschitz_estimate(const DenseMatrix& left, const DenseMatrix& right,
                          const ObservationSet& obs, double sigma2, DenseMatrix& warm) {
    if (frobenius_norm(warm) == 0.0) {
        for (double& e : warm.data()) e = 1.0;
    }
    double lambda = 0.0;
    for (int it = 0; it < 6; ++it) {
        const double norm = frobenius_norm(warm);
        if (!(norm > 0.0) || !std::isfinite(norm)) return 0.0;
        warm = scale(warm, 1.0 / norm);
        const DenseMatrix g = apply_quadratic_hessian(left, right, obs, sigma2, warm);
        lambda = dot(warm, g);
        warm = g;
    }
    return std::isfinite(lambda) ? std::max(lambda, 0.0) : 0.0;
}

// Gradient step + hard threshold at sqrt(2*lambda*eta) + box clamp.
DenseMatrix prox_step(const DenseMatrix& v, const DenseMatrix& grad, double eta, double lambda,
                      double box) {
    DenseMatrix out(v.rows(), v.cols());
    const double thr_sq = 2.0 * lambda * eta;
    for (std::size_t e = 0; e < v.size(); ++e) {
        double u = v.data()[e] - eta * grad.data()[e];
        if (lambda > 0.0 && u * u < thr_sq) u = 0.0;
        out.data()[e] = std::clamp(u, -box, box);
    }
    return out;
}

struct InitPair {
    DenseMatrix p;
    DenseMatrix q;
};

InitPair random_init(std::size_t r1, std::size_t r, std::size_t r2, const DenseMatrix& a,
                     const DenseMatrix& b, const EstimatorConfig& cfg, rng::Stream& stream) {
    InitPair out{DenseMatrix(r1, r), DenseMatrix(r, r2)};
    const double s = cfg.init.scale;
    for (double& e : out.p.data()) e = stream.uniform(-s, s);
    for (double& e : out.q.data()) e = stream.uniform(-s, s);
    const DenseMatrix x0 = assemble(a, out.p, out.q, b);
    const double mn = max_norm(x0);
    if (mn > 0.0) out.q = scale(out.q, cfg.x_max / 2.0 / mn);
    return out;
}

InitPair spectral_init(std::size_t r1, std::size_t r, std::size_t r2, const DenseMatrix& a,
                       const DenseMatrix& b, const ObservationSet& obs,
                       const EstimatorConfig& cfg, rng::Stream& stream) {
    const double gamma = obs.gamma();
    if (obs.samples.empty() || !(gamma > 0.0)) return random_init(r1, r, r2, a, b, cfg, stream);

    DenseMatrix y_full(a.rows(), b.cols());
    for (const Sample& s : obs.samples) y_full(s.i, s.j) = s.y / gamma;
    const DenseMatrix w = multiply(multiply(transpose(a), y_full), transpose(b)); // r1 x r2
    const SvdResult dec = svd(w);

    InitPair out{DenseMatrix(r1, r), DenseMatrix(r, r2)};
    const std::size_t k_avail = std::min(r, dec.s.size());
    for (std::size_t k = 0; k < k_avail; ++k) {
        const double root = std::sqrt(dec.s[k]);
        for (std::size_t i = 0; i < r1; ++i) out.p(i, k) = dec.U(i, k) * root;
        for (std::size_t j = 0; j < r2; ++j) out.q(k, j) = root * dec.V(j, k);
    }
    // Move column scale from P into Q so the P box constraint starts slack.
    for (std::size_t k = 0; k < r; ++k) {
        double mp = 0.0;
        for (std::size_t i = 0; i < r1; ++i) mp = std::max(mp, std::abs(out.p(i, k)));
        if (mp > 0.95) {
            const double c = mp / 0.95;
            for (std::size_t i = 0; i < r1; ++i) out.p(i, k) /= c;
            for (std::size_t j = 0; j < r2; ++j) out.q(k, j) *= c;
        }
    }
    for (double& e : out.p.data()) e = std::clamp(e, -1.0, 1.0);
    for (double& e : out.q.data()) e = std::clamp(e, -cfg.q_max, cfg.q_max);
    return out;
}

} // namespace

double objective(const DenseMatrix& p, const DenseMatrix& q, const ObservationSet& obs,
                 const DenseMatrix& a, const DenseMatrix& b, const NoiseModel& noise,
                 double lambda_p, double lambda_q) {
    if (lambda_p < 0.0 || lambda_q < 0.0) {
        throw std::invalid_argument("objective: lambda_p and lambda_q must be >= 0");
    }
    const DenseMatrix x = assemble(a, p, q, b);
    check_obs_range(obs, x.rows(), x.cols());
    return neg_log_lik(x, obs, noise) + lambda_p * static_cast<double>(l0_norm(p)) +
           lambda_q * static_cast<double>(l0_norm(q));
}

std::pair<DenseMatrix, DenseMatrix> masked_gaussian_gradients(const DenseMatrix& p,
                                                              const DenseMatrix& q,
                                                              const ObservationSet& obs,
                                                              const DenseMatrix& a,
                                                              const DenseMatrix& b, double sigma2) {
    if (!(sigma2 > 0.0)) throw std::invalid_argument("masked_gaussian_gradients: sigma2 must be positive");
    const DenseMatrix ap = multiply(a, p);
    const DenseMatrix x = multiply(multiply(ap, q), b);
    check_obs_range(obs, x.rows(), x.cols());

    DenseMatrix residual(x.rows(), x.cols()); // M . (Y - X), zero off the mask
    for (const Sample& s : obs.samples) residual(s.i, s.j) = s.y - x(s.i, s.j);

    const DenseMatrix qb = multiply(q, b);
    DenseMatrix grad_p = scale(multiply(multiply(transpose(a), residual), transpose(qb)), -1.0 / sigma2);
    DenseMatrix grad_q = scale(multiply(multiply(transpose(ap), residual), transpose(b)), -1.0 / sigma2);
    return {std::move(grad_p), std::move(grad_q)};
}

FitResult oracle_solve(const ObservationSet& obs, const DenseMatrix& a, const DenseMatrix& b,
                       std::size_t r, const NoiseModel& noise, const DiscretizationScheme& scheme,
                       double lambda_p, double lambda_q, double x_max, std::uint64_t cap) {
    const auto start = Clock::now();
    check_obs_range(obs, a.rows(), b.cols());

    FitResult best;
    double best_obj = 0.0;
    double best_pen = 0.0;
    std::size_t count = 0;
    enumerate_class(a, b, r, scheme, x_max, cap,
                    [&](const DenseMatrix& p, const DenseMatrix& q, const DenseMatrix& x) {
                        const double obj = neg_log_lik(x, obs, noise) +
                                           lambda_p * static_cast<double>(l0_norm(p)) +
                                           lambda_q * static_cast<double>(l0_norm(q));
                        const double pen = penalty(p, q, scheme);
                        ++count;
                        const bool better =
                            count == 1 || obj < best_obj || (obj == best_obj && pen < best_pen);
                        if (better) {
                            best.P_hat = p;
                            best.Q_hat = q;
                            best.X_hat = x;
                            best_obj = obj;
                            best_pen = pen;
                        }
                    });

    best.objective_trace = {best_obj};
    best.converged = true;
    best.iterations = count;
    best.wall_time_ms = elapsed_ms(start);
    return best;
}

FitResult alt_min_solve(const ObservationSet& obs, const DenseMatrix& a, const DenseMatrix& b,
                        const NoiseModel& noise, const EstimatorConfig& cfg) {
    const auto start = Clock::now();
    const auto* gaussian = dynamic_cast<const GaussianNoise*>(&noise);
    if (gaussian == nullptr) {
        throw std::invalid_argument("alt_min_solve: only Gaussian noise is supported");
    }
    const double sigma2 = gaussian->sigma2();
    if (cfg.r == 0) throw std::invalid_argument("alt_min_solve: r must be positive");
    if (cfg.max_outer_iters == 0) throw std::invalid_argument("alt_min_solve: max_outer_iters must be positive");
    if (!(cfg.tol_objective > 0.0)) throw std::invalid_argument("alt_min_solve: tol_objective must be positive");
    if (cfg.step.kind == StepKind::backtracking &&
        !(cfg.step.shrink > 0.0 && cfg.step.shrink < 1.0)) {
        throw std::invalid_argument("alt_min_solve: shrink factor must lie in (0,1)");
    }
    const std::size_t r1 = a.cols();
    const std::size_t r2 = b.rows();
    check_obs_range(obs, a.rows(), b.cols());

    rng::Stream stream(cfg.seed);
    InitPair cur;
    switch (cfg.init.kind) {
        case InitKind::random:
            cur = random_init(r1, cfg.r, r2, a, b, cfg, stream);
            break;
        case InitKind::spectral:
            cur = spectral_init(r1, cfg.r, r2, a, b, obs, cfg, stream);
            break;
        case InitKind::provided:
            if (!cfg.init.p0 || !cfg.init.q0) {
                throw std::invalid_argument("alt_min_solve: provided init requires P0 and Q0");
            }
            if (cfg.init.p0->rows() != r1 || cfg.init.p0->cols() != cfg.r ||
                cfg.init.q0->rows() != cfg.r || cfg.init.q0->cols() != r2) {
                throw std::invalid_argument("alt_min_solve: provided init has wrong shape");
            }
            cur = InitPair{*cfg.init.p0, *cfg.init.q0};
            break;
    }

    const auto full_objective = [&](const DenseMatrix& p, const DenseMatrix& q) {
        return objective(p, q, obs, a, b, noise, cfg.lambda_p, cfg.lambda_q);
    };

    double cur_obj = full_objective(cur.p, cur.q);
    std::vector<double> trace{cur_obj};
    if (!std::isfinite(cur_obj)) throw SolverDiverged("alt_min_solve: non-finite initial objective", trace);

    DenseMatrix warm_p(r1, cfg.r), warm_q(cfg.r, r2);

    // One half step: gradient + prox + clamp on `factor`, the other factor
    // fixed; returns the accepted objective (== cur_obj if no move survived
    // backtracking).
    const auto half_step = [&](DenseMatrix& factor, bool p_step) {
        const auto grads = masked_gaussian_gradients(cur.p, cur.q, obs, a, b, sigma2);
        const DenseMatrix& grad = p_step ? grads.first : grads.second;
        const double lambda = p_step ? cfg.lambda_p : cfg.lambda_q;
        const double box = p_step ? 1.0 : cfg.q_max;

        double eta;
        if (cfg.step.kind == StepKind::fixed) {
            eta = cfg.step.eta;
        } else {
            double lip;
            if (p_step) {
                lip = lipschitz_estimate(a, multiply(cur.q, b), obs, sigma2, warm_p);
            } else {
                lip = lipschitz_estimate(multiply(a, cur.p), b, obs, sigma2, warm_q);
            }
            eta = lip > 0.0 ? 1.0 / lip : 1.0;
        }

        if (cfg.step.kind == StepKind::fixed) {
            factor = prox_step(factor, grad, eta, lambda, box);
            cur_obj = full_objective(cur.p, cur.q);
            return;
        }
        for (int attempt = 0; attempt < cfg.step.max_tries; ++attempt) {
            const DenseMatrix cand = prox_step(factor, grad, eta, lambda, box);
            const double cand_obj =
                p_step ? full_objective(cand, cur.q) : full_objective(cur.p, cand);
            if (std::isfinite(cand_obj) && cand_obj <= cur_obj) {
                factor = cand;
                cur_obj = cand_obj;
                return;
            }
            eta *= cfg.step.shrink;
        }
        // No acceptable step: keep the factor unchanged.
    };

    bool converged = false;
    std::size_t iterations = 0;
    for (std::size_t outer = 1; outer <= cfg.max_outer_iters; ++outer) {
        const double prev_obj = cur_obj;
        half_step(cur.p, true);
        half_step(cur.q, false);
        trace.push_back(cur_obj);
        iterations = outer;
        if (!std::isfinite(cur_obj)) {
            throw SolverDiverged("alt_min_solve: objective diverged at iteration " +
                                     std::to_string(outer),
                                 trace);
        }
        if (prev_obj - cur_obj < cfg.tol_objective) {
            converged = true;
            break;
        }
    }

    if (cfg.enforce_x_max == XMaxRule::rescale) {
        const double mn = max_norm(assemble(a, cur.p, cur.q, b));
        if (mn > cfg.x_max && mn > 0.0) cur.q = scale(cur.q, cfg.x_max / mn);
    }
    if (cfg.project_to_grid) {
        const DiscretizationScheme scheme = DiscretizationScheme::from_dims(
            a.rows(), b.cols(), cfg.grid_beta, r1, cfg.r, r2, cfg.q_max);
        cur.p = quantize_factor(cur.p, 1.0, scheme.l_lev);
        cur.q = quantize_factor(cur.q, scheme.q_max, scheme.l_lev);
    }

    FitResult out;
    out.P_hat = std::move(cur.p);
    out.Q_hat = std::move(cur.q);
    out.X_hat = assemble(a, out.P_hat, out.Q_hat, b);
    out.objective_trace = std::move(trace);
    out.converged = converged;
    out.iterations = iterations;
    out.wall_time_ms = elapsed_ms(start);
    return out;
}

} // namespace imc
