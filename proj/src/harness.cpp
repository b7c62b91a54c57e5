#include "imc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "imc/bounds.hpp"
#include "imc/discretization.hpp"
#include "imc/errors.hpp"
#include "imc/noise.hpp"
#include "imc/rng.hpp"
#include "imc/sampling.hpp"

namespace imc {

namespace {

void sample_support(rng::Stream& stream, std::size_t total, std::size_t count,
                    std::vector<std::size_t>& out) {
    out.resize(total);
    std::iota(out.begin(), out.end(), std::size_t{0});
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t j = k + static_cast<std::size_t>(stream.uniform_below(total - k));
        std::swap(out[k], out[j]);
    }
    out.resize(count);
}

double nonzero_uniform(rng::Stream& stream, double bound) {
    double v = 0.0;
    while (v == 0.0) v = stream.uniform(-bound, bound);
    return v;
}

DenseMatrix sparse_factor(rng::Stream& stream, std::size_t rows, std::size_t cols,
                          std::size_t nnz, double bound, std::vector<std::size_t>& scratch) {
    DenseMatrix out(rows, cols);
    sample_support(stream, rows * cols, nnz, scratch);
    std::sort(scratch.begin(), scratch.end());
    for (const std::size_t flat : scratch) out.data()[flat] = nonzero_uniform(stream, bound);
    return out;
}

} // namespace

void ExperimentConfig::validate() const {
    const auto fail = [](const std::string& msg) { throw ConfigError("experiment config: " + msg); };
    if (n1 == 0 || n2 == 0 || r == 0 || r1 == 0 || r2 == 0) fail("all dimensions must be positive");
    if (p0 > r1 * r) fail("p0 exceeds the factor size r1*r");
    if (q0 > r * r2) fail("q0 exceeds the factor size r*r2");
    const auto positive = [&](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) fail(std::string(name) + " must be positive and finite");
    };
    positive(x_max, "x_max");
    positive(q_max, "q_max");
    positive(a_max, "a_max");
    positive(b_max, "b_max");
    positive(sigma2, "sigma2");
    for (const std::size_t m : m_grid) {
        if (m < 4 || m > n1 * n2) {
            fail("m = " + std::to_string(m) + " outside [4, " + std::to_string(n1 * n2) + "]");
        }
    }
    if (!lambda_auto && (estimator.lambda_p < 0.0 || estimator.lambda_q < 0.0)) {
        fail("lambdas must be >= 0");
    }
    if (!(estimator.tol_objective > 0.0)) fail("tol_objective must be positive");
    if (estimator.max_outer_iters == 0) fail("max_outer_iters must be positive");
    if (!(estimator.step.eta > 0.0)) fail("step eta must be positive");
    if (!(estimator.step.shrink > 0.0 && estimator.step.shrink < 1.0)) fail("step shrink must lie in (0,1)");
    if (estimator.step.max_tries < 1) fail("step max_tries must be positive");
    if (!(estimator.init.scale > 0.0)) fail("init scale must be positive");
    const bool needs_grid = solver == SolverKind::oracle || estimator.project_to_grid;
    if (needs_grid && !beta_auto && !(estimator.grid_beta >= 1.0)) {
        fail("grid_beta must be >= 1 (or beta_auto set) when a quantization grid is used");
    }
    if (oracle_cap == 0) fail("oracle_cap must be positive");
}

ImcModel gen_ground_truth(const ExperimentConfig& cfg, std::uint64_t seed) {
    if (cfg.n1 == 0 || cfg.n2 == 0 || cfg.r == 0 || cfg.r1 == 0 || cfg.r2 == 0) {
        throw ConfigError("gen_ground_truth: all dimensions must be positive");
    }
    if (cfg.p0 > cfg.r1 * cfg.r || cfg.q0 > cfg.r * cfg.r2) {
        throw ConfigError("gen_ground_truth: infeasible sparsity targets");
    }

    rng::Stream stream(seed);
    std::vector<std::size_t> scratch;
    for (int attempt = 0; attempt < 100; ++attempt) {
        ImcModel model;
        model.n1 = cfg.n1;
        model.n2 = cfg.n2;
        model.r1 = cfg.r1;
        model.r2 = cfg.r2;
        model.r = cfg.r;
        model.x_max = cfg.x_max;
        model.q_max = cfg.q_max;
        model.a_max = cfg.a_max;
        model.b_max = cfg.b_max;

        model.A = DenseMatrix(cfg.n1, cfg.r1);
        for (double& e : model.A.data()) e = stream.uniform(-cfg.a_max, cfg.a_max);
        model.B = DenseMatrix(cfg.r2, cfg.n2);
        for (double& e : model.B.data()) e = stream.uniform(-cfg.b_max, cfg.b_max);
        model.P = sparse_factor(stream, cfg.r1, cfg.r, cfg.p0, 1.0, scratch);
        model.Q = sparse_factor(stream, cfg.r, cfg.r2, cfg.q0, cfg.q_max, scratch);

        const double mn = max_norm(assemble(model.A, *model.P, *model.Q, model.B));
        if (!(mn > 0.0)) continue; // all-zero product, try a fresh draw
        const double factor = (cfg.x_max / 2.0) / mn;
        model.Q = scale(*model.Q, factor);
        if (max_norm(*model.Q) > cfg.q_max * (1.0 + 1e-12)) continue; // scaling left the Q box
        if (!validate_bounds(model, ValidationRole::ground_truth).ok()) continue;
        return model;
    }
    throw ConfigError("gen_ground_truth: degenerate X (all-zero or unscalable) after 100 redraws");
}

namespace {

SweepRow run_one(const ExperimentConfig& cfg, const ImcModel* fixed, std::size_t m,
                 std::size_t trial) {
    const std::uint64_t trial_seed = rng::derive(cfg.master_seed, {m, trial});

    SweepRow row;
    row.trial = trial;
    row.m = m;
    row.gamma = static_cast<double>(m) / (static_cast<double>(cfg.n1) * static_cast<double>(cfg.n2));
    row.seed = trial_seed;

    ImcModel drawn;
    if (fixed == nullptr) {
        drawn = gen_ground_truth(cfg, rng::derive(trial_seed, seed_stream::truth));
    }
    const ImcModel& model = fixed != nullptr ? *fixed : drawn;
    const DenseMatrix x_true = assemble(model.A, *model.P, *model.Q, model.B);

    const IndexSet mask = draw_mask(cfg.n1, cfg.n2, m, rng::derive(trial_seed, seed_stream::mask));
    const GaussianNoise noise(cfg.sigma2);
    const ObservationSet obs =
        observe(x_true, mask, noise, rng::derive(trial_seed, seed_stream::noise), m);
    row.realized_obs = obs.samples.size();
    row.p0 = l0_norm(*model.P);
    row.q0 = l0_norm(*model.Q);

    const double md = static_cast<double>(m);
    const double beta = cfg.beta_auto
                            ? beta_gaussian(md, static_cast<double>(cfg.n1),
                                            static_cast<double>(cfg.n2), static_cast<double>(cfg.r),
                                            static_cast<double>(cfg.r1), static_cast<double>(cfg.r2),
                                            cfg.a_max, cfg.b_max, cfg.q_max, cfg.x_max)
                            : cfg.estimator.grid_beta;
    row.cor1_rhs = corollary1_rhs(cfg.x_max, cfg.sigma2, beta, static_cast<double>(cfg.n1),
                                  static_cast<double>(cfg.n2), md, static_cast<double>(row.p0),
                                  static_cast<double>(row.q0));

    double lambda_p = cfg.estimator.lambda_p;
    double lambda_q = cfg.estimator.lambda_q;
    if (cfg.lambda_auto) {
        const double d_const = noise.d_constant(cfg.x_max);
        lambda_p = lambda_min(d_const, beta, static_cast<double>(cfg.r1),
                              static_cast<double>(cfg.n1), static_cast<double>(cfg.n2));
        lambda_q = lambda_min(d_const, beta, static_cast<double>(cfg.r2),
                              static_cast<double>(cfg.n1), static_cast<double>(cfg.n2));
    }

    try {
        FitResult fit;
        if (cfg.solver == SolverKind::oracle) {
            const DiscretizationScheme scheme = DiscretizationScheme::from_dims(
                cfg.n1, cfg.n2, beta, cfg.r1, cfg.r, cfg.r2, cfg.q_max);
            fit = oracle_solve(obs, model.A, model.B, cfg.r, noise, scheme, lambda_p, lambda_q,
                               cfg.x_max, cfg.oracle_cap);
        } else {
            EstimatorConfig ec = cfg.estimator;
            ec.r = cfg.r;
            ec.x_max = cfg.x_max;
            ec.q_max = cfg.q_max;
            ec.lambda_p = lambda_p;
            ec.lambda_q = lambda_q;
            ec.grid_beta = beta;
            ec.seed = rng::derive(trial_seed, seed_stream::fit);
            fit = alt_min_solve(obs, model.A, model.B, noise, ec);
        }
        row.mse = per_element_sq_error(x_true, fit.X_hat);
        row.objective = fit.objective_trace.back();
        row.iters = fit.iterations;
    } catch (const SolverDiverged& e) {
        row.mse = std::numeric_limits<double>::quiet_NaN();
        row.objective = e.objective_trace.empty() ? std::numeric_limits<double>::quiet_NaN()
                                                  : e.objective_trace.back();
        row.iters = e.objective_trace.empty() ? 0 : e.objective_trace.size() - 1;
    }
    row.ms = 0;
    return row;
}

} // namespace

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, unsigned threads) {
    cfg.validate();

    ImcModel fixed_model;
    const ImcModel* fixed = nullptr;
    if (cfg.fixed_truth) {
        fixed_model = gen_ground_truth(cfg, rng::derive(cfg.master_seed, seed_stream::truth));
        fixed = &fixed_model;
    }

    const std::size_t total = cfg.m_grid.size() * cfg.trials_per_cell;
    std::vector<SweepRow> rows(total);
    if (total == 0) return rows;

    const auto task = [&](std::size_t flat) {
        const std::size_t m = cfg.m_grid[flat / cfg.trials_per_cell];
        const std::size_t trial = flat % cfg.trials_per_cell;
        rows[flat] = run_one(cfg, fixed, m, trial);
    };

    const unsigned workers =
        std::min<unsigned>(std::max(threads, 1u), static_cast<unsigned>(total));
    if (workers <= 1) {
        for (std::size_t flat = 0; flat < total; ++flat) task(flat);
        return rows;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (!failed.load(std::memory_order_relaxed)) {
                const std::size_t flat = next.fetch_add(1, std::memory_order_relaxed);
                if (flat >= total) break;
                try {
                    task(flat);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    failed.store(true, std::memory_order_relaxed);
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return rows;
}

namespace {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void write_results_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "trial,m,gamma,realized_obs,p0,q0,mse,cor1_rhs,objective,iters,ms,seed\n";
    for (const SweepRow& row : rows) {
        out << row.trial << ',' << row.m << ',' << format_double(row.gamma) << ','
            << row.realized_obs << ',' << row.p0 << ',' << row.q0 << ','
            << format_double(row.mse) << ',' << format_double(row.cor1_rhs) << ','
            << format_double(row.objective) << ',' << row.iters << ',' << row.ms << ','
            << row.seed << '\n';
    }
}

double field_value(const SweepRow& row, SweepField field) {
    switch (field) {
        case SweepField::trial: return static_cast<double>(row.trial);
        case SweepField::m: return static_cast<double>(row.m);
        case SweepField::gamma: return row.gamma;
        case SweepField::realized_obs: return static_cast<double>(row.realized_obs);
        case SweepField::p0: return static_cast<double>(row.p0);
        case SweepField::q0: return static_cast<double>(row.q0);
        case SweepField::mse: return row.mse;
        case SweepField::cor1_rhs: return row.cor1_rhs;
        case SweepField::objective: return row.objective;
        case SweepField::iters: return static_cast<double>(row.iters);
    }
    throw std::invalid_argument("field_value: unknown field");
}

SlopeFit fit_slope(const std::vector<SweepRow>& rows, SweepField x, SweepField y) {
    std::map<double, std::pair<double, std::size_t>> cells; // x -> (sum y, count)
    SlopeFit out;
    for (const SweepRow& row : rows) {
        const double xv = field_value(row, x);
        const double yv = field_value(row, y);
        if (std::isnan(yv)) {
            ++out.excluded_rows;
            continue;
        }
        auto& cell = cells[xv];
        cell.first += yv;
        cell.second += 1;
    }
    if (cells.size() < 3) {
        throw std::invalid_argument("fit_slope: need at least 3 distinct x cells, have " +
                                    std::to_string(cells.size()));
    }

    std::vector<double> lx, ly;
    for (const auto& [xv, cell] : cells) {
        const double mean = cell.first / static_cast<double>(cell.second);
        if (!(xv > 0.0) || !(mean > 0.0)) {
            throw std::invalid_argument("fit_slope: log fit needs positive x and positive mean y");
        }
        lx.push_back(std::log(xv));
        ly.push_back(std::log(mean));
    }

    const double n = static_cast<double>(lx.size());
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double dx = lx[i] - mx;
        const double dy = ly[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    out.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return out;
}

} // namespace imc
