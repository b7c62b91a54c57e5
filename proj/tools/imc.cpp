#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "imc/bounds.hpp"
#include "imc/discretization.hpp"
#include "imc/errors.hpp"
#include "imc/estimator.hpp"
#include "imc/harness.hpp"
#include "imc/io.hpp"
#include "imc/rng.hpp"
#include "imc/sampling.hpp"

namespace {

struct GenerateArgs {
    std::string config;
    std::string out_model;
    std::string out_obs;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

int run_generate(const GenerateArgs& args) {
    const imc::ExperimentConfig cfg =
        imc::io::experiment_config_from_json(imc::io::load_json_file(args.config));
    if (cfg.m_grid.empty()) throw imc::ConfigError("generate: m_grid must not be empty");
    const std::uint64_t seed = args.seed_given ? args.seed : cfg.master_seed;
    const std::size_t m = cfg.m_grid.front();

    const imc::ImcModel model =
        imc::gen_ground_truth(cfg, imc::rng::derive(seed, imc::seed_stream::truth));
    const imc::DenseMatrix x_true = imc::assemble(model.A, *model.P, *model.Q, model.B);
    const imc::IndexSet mask = imc::draw_mask(
        cfg.n1, cfg.n2, m, imc::rng::derive(seed, imc::seed_stream::mask));
    const imc::GaussianNoise noise(cfg.sigma2);
    const imc::ObservationSet obs =
        imc::observe(x_true, mask, noise, imc::rng::derive(seed, imc::seed_stream::noise), m);

    imc::io::write_json_file(args.out_model, imc::io::model_to_json(model));
    imc::write_observations_csv(obs, args.out_obs);
    std::cout << "model: " << args.out_model << "\nobservations: " << args.out_obs << " ("
              << obs.samples.size() << " of budget " << m << ")\n";
    return 0;
}

int run_sweep_cmd(const std::string& config, const std::string& out, unsigned threads) {
    const imc::ExperimentConfig cfg =
        imc::io::experiment_config_from_json(imc::io::load_json_file(config));
    const std::vector<imc::SweepRow> rows = imc::run_sweep(cfg, threads);

    std::ofstream stream(out, std::ios::binary);
    if (!stream) throw imc::ConfigError("cannot open '" + out + "' for writing");
    imc::write_results_csv(stream, rows);
    if (!stream) throw std::runtime_error("write to '" + out + "' failed");

    std::size_t diverged = 0;
    for (const imc::SweepRow& row : rows) {
        if (std::isnan(row.mse)) ++diverged;
    }
    std::cout << rows.size() << " rows -> " << out;
    if (diverged > 0) std::cout << " (" << diverged << " diverged)";
    std::cout << '\n';
    return 0;
}

int run_fit(const std::string& model_path, const std::string& obs_path,
            const std::string& config_path, const std::string& out_path) {
    const imc::ImcModel model = imc::io::model_from_json(imc::io::load_json_file(model_path));
    const imc::ObservationSet obs = imc::read_observations_csv(obs_path, model.n1, model.n2);

    const nlohmann::json j = imc::io::load_json_file(config_path);
    if (!j.is_object()) throw imc::ConfigError("fit config: expected a JSON object");
    for (const auto& item : j.items()) {
        if (item.key() != "estimator" && item.key() != "noise" && item.key() != "seed") {
            throw imc::ConfigError("fit config: unknown key '" + item.key() + "'");
        }
    }
    if (!j.contains("noise")) throw imc::ConfigError("fit config: missing key 'noise'");
    const auto noise = imc::io::noise_from_json(j["noise"]);

    imc::io::EstimatorConfigParse parse;
    if (j.contains("estimator")) parse = imc::io::estimator_config_from_json(j["estimator"]);
    if (parse.lambda_auto || parse.beta_auto) {
        throw imc::ConfigError("fit config: \"min\"/\"auto\" settings need a sweep cell context");
    }
    imc::EstimatorConfig ec = parse.cfg;
    ec.r = model.r;
    ec.x_max = model.x_max;
    ec.q_max = model.q_max;
    if (j.contains("seed")) {
        const nlohmann::json& s = j["seed"];
        if (!s.is_number_integer() && !s.is_number_unsigned()) {
            throw imc::ConfigError("fit config: 'seed' must be an integer");
        }
        ec.seed = s.get<std::uint64_t>();
    }

    const imc::FitResult fit = imc::alt_min_solve(obs, model.A, model.B, *noise, ec);
    imc::io::write_json_file(out_path, imc::io::fit_to_json(fit));
    std::cout << "converged=" << (fit.converged ? "true" : "false")
              << " iterations=" << fit.iterations
              << " objective=" << fit.objective_trace.back() << " -> " << out_path << '\n';
    return 0;
}

int run_bound(const std::string& config) {
    const imc::BoundReport rep =
        imc::io::bound_report_from_json_config(imc::io::load_json_file(config));
    std::cout << imc::io::bound_report_to_json(rep).dump(2) << '\n';
    return 0;
}

int run_kraft(std::size_t r1, std::size_t r, std::size_t r2, std::size_t n1, std::size_t n2,
              double beta, std::uint64_t cap) {
    imc::DiscretizationScheme scheme;
    try {
        scheme = imc::DiscretizationScheme::from_dims(n1, n2, beta, r1, r, r2, 1.0);
    } catch (const std::invalid_argument& e) {
        throw imc::ConfigError(std::string("kraft: ") + e.what());
    }
    double sum = 0.0;
    try {
        sum = imc::kraft_sum(scheme, r1, r, r2, cap);
    } catch (const std::invalid_argument& e) {
        throw imc::ConfigError(std::string("kraft: ") + e.what());
    }
    const bool pass = sum <= 1.0 + 1e-12;
    std::printf("kraft_sum = %.17g (l_lev = %llu, l_loc_p = %llu, l_loc_q = %llu)\n%s\n", sum,
                static_cast<unsigned long long>(scheme.l_lev),
                static_cast<unsigned long long>(scheme.l_loc_p),
                static_cast<unsigned long long>(scheme.l_loc_q), pass ? "PASS" : "FAIL");
    return pass ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse-factor inductive matrix completion: data generation, fitting, "
                 "theoretical bounds, and Monte Carlo sweeps"};
    app.require_subcommand(1);

    GenerateArgs gen_args;
    CLI::App* gen = app.add_subcommand("generate", "Draw a ground-truth model and observations");
    gen->add_option("--config", gen_args.config, "Experiment config JSON")->required();
    gen->add_option("--out-model", gen_args.out_model, "Output model JSON path")->required();
    gen->add_option("--out-obs", gen_args.out_obs, "Output observations CSV path")->required();
    CLI::Option* seed_opt = gen->add_option("--seed", gen_args.seed, "Master seed override");

    std::string sweep_config, sweep_out;
    unsigned sweep_threads = 1;
    CLI::App* sweep = app.add_subcommand("sweep", "Run a Monte Carlo sweep, write results CSV");
    sweep->add_option("--config", sweep_config, "Experiment config JSON")->required();
    sweep->add_option("--out", sweep_out, "Output results CSV path")->required();
    sweep->add_option("--threads", sweep_threads, "Worker threads (output is identical)");

    std::string fit_model, fit_obs, fit_config, fit_out;
    CLI::App* fit = app.add_subcommand("fit", "Fit factors to observations");
    fit->add_option("--model", fit_model, "Model JSON (features and box constants)")->required();
    fit->add_option("--obs", fit_obs, "Observations CSV")->required();
    fit->add_option("--config", fit_config, "Fit config JSON (estimator, noise, seed)")->required();
    fit->add_option("--out", fit_out, "Output fit JSON path")->required();

    std::string bound_config;
    CLI::App* bound = app.add_subcommand("bound", "Print the error-bound report as JSON");
    bound->add_option("--config", bound_config, "Bound config JSON")->required();

    std::size_t k_r1 = 0, k_r = 0, k_r2 = 0, k_n1 = 0, k_n2 = 0;
    double k_beta = 1.0;
    std::uint64_t k_cap = 1'000'000;
    CLI::App* kraft = app.add_subcommand("kraft", "Check code-length summability for a scheme");
    kraft->add_option("--r1", k_r1, "Rows of P")->required();
    kraft->add_option("--r", k_r, "Inner dimension")->required();
    kraft->add_option("--r2", k_r2, "Columns of Q")->required();
    kraft->add_option("--n1", k_n1, "Rows of X")->required();
    kraft->add_option("--n2", k_n2, "Columns of X")->required();
    kraft->add_option("--beta", k_beta, "Level-count exponent (>= 1)")->required();
    kraft->add_option("--cap", k_cap, "Enumeration cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        gen_args.seed_given = seed_opt->count() > 0;
        if (gen->parsed()) return run_generate(gen_args);
        if (sweep->parsed()) return run_sweep_cmd(sweep_config, sweep_out, sweep_threads);
        if (fit->parsed()) return run_fit(fit_model, fit_obs, fit_config, fit_out);
        if (bound->parsed()) return run_bound(bound_config);
        if (kraft->parsed()) return run_kraft(k_r1, k_r, k_r2, k_n1, k_n2, k_beta, k_cap);
    } catch (const imc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
