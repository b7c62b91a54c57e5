#include "imc/io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <string>

#include "imc/errors.hpp"

namespace imc::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what, const std::string& msg) {
    throw ConfigError(what + ": " + msg);
}

void check_keys(const json& j, const std::string& what,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(what, "expected a JSON object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) fail(what, "unknown key '" + item.key() + "'");
    }
}

const json& require(const json& j, const std::string& what, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) fail(what, std::string("missing key '") + key + "'");
    return *it;
}

double get_number(const json& j, const std::string& what, const char* key) {
    const json& v = require(j, what, key);
    if (!v.is_number()) fail(what, std::string("'") + key + "' must be a number");
    return v.get<double>();
}

double get_number_or(const json& j, const std::string& what, const char* key, double fallback) {
    const auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number()) fail(what, std::string("'") + key + "' must be a number");
    return it->get<double>();
}

std::size_t as_index(const json& v, const std::string& what, const char* key) {
    if (v.is_number_unsigned()) return v.get<std::size_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
        return static_cast<std::size_t>(v.get<std::int64_t>());
    }
    fail(what, std::string("'") + key + "' must be a non-negative integer");
}

std::size_t get_index(const json& j, const std::string& what, const char* key) {
    return as_index(require(j, what, key), what, key);
}

std::size_t get_index_or(const json& j, const std::string& what, const char* key,
                         std::size_t fallback) {
    const auto it = j.find(key);
    if (it == j.end()) return fallback;
    return as_index(*it, what, key);
}

std::uint64_t get_u64_or(const json& j, const std::string& what, const char* key,
                         std::uint64_t fallback) {
    const auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (it->is_number_unsigned()) return it->get<std::uint64_t>();
    if (it->is_number_integer() && it->get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(it->get<std::int64_t>());
    }
    fail(what, std::string("'") + key + "' must be a non-negative integer");
}

bool get_bool_or(const json& j, const std::string& what, const char* key, bool fallback) {
    const auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_boolean()) fail(what, std::string("'") + key + "' must be a boolean");
    return it->get<bool>();
}

std::string get_string(const json& j, const std::string& what, const char* key) {
    const json& v = require(j, what, key);
    if (!v.is_string()) fail(what, std::string("'") + key + "' must be a string");
    return v.get<std::string>();
}

} // namespace

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("cannot parse '" + path + "': " + e.what());
    }
    return j;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    out << j.dump(2) << '\n';
    if (!out) throw ConfigError("write to '" + path + "' failed");
}

json matrix_to_json(const DenseMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(std::move(row));
    }
    return rows;
}

DenseMatrix matrix_from_json(const json& j, const std::string& what) {
    if (!j.is_array()) fail(what, "expected an array of rows");
    const std::size_t rows = j.size();
    if (rows == 0) return DenseMatrix(0, 0);
    if (!j[0].is_array()) fail(what, "rows must be arrays");
    const std::size_t cols = j[0].size();
    DenseMatrix out(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const json& row = j[i];
        if (!row.is_array() || row.size() != cols) fail(what, "rows have inconsistent lengths");
        for (std::size_t k = 0; k < cols; ++k) {
            if (!row[k].is_number()) fail(what, "entries must be numbers");
            const double v = row[k].get<double>();
            if (!std::isfinite(v)) fail(what, "entries must be finite");
            out(i, k) = v;
        }
    }
    return out;
}

json model_to_json(const ImcModel& model) {
    json j;
    j["n1"] = model.n1;
    j["n2"] = model.n2;
    j["r1"] = model.r1;
    j["r2"] = model.r2;
    j["r"] = model.r;
    j["A"] = matrix_to_json(model.A);
    j["B"] = matrix_to_json(model.B);
    if (model.P) j["P"] = matrix_to_json(*model.P);
    if (model.Q) j["Q"] = matrix_to_json(*model.Q);
    j["x_max"] = model.x_max;
    j["q_max"] = model.q_max;
    j["a_max"] = model.a_max;
    j["b_max"] = model.b_max;
    return j;
}

ImcModel model_from_json(const json& j) {
    const std::string what = "model";
    check_keys(j, what,
               {"n1", "n2", "r1", "r2", "r", "A", "B", "P", "Q", "x_max", "q_max", "a_max",
                "b_max"});
    ImcModel model;
    model.n1 = get_index(j, what, "n1");
    model.n2 = get_index(j, what, "n2");
    model.r1 = get_index(j, what, "r1");
    model.r2 = get_index(j, what, "r2");
    model.r = get_index(j, what, "r");
    model.A = matrix_from_json(require(j, what, "A"), what + ".A");
    model.B = matrix_from_json(require(j, what, "B"), what + ".B");
    if (j.contains("P")) model.P = matrix_from_json(j["P"], what + ".P");
    if (j.contains("Q")) model.Q = matrix_from_json(j["Q"], what + ".Q");
    model.x_max = get_number(j, what, "x_max");
    model.q_max = get_number(j, what, "q_max");
    model.a_max = get_number(j, what, "a_max");
    model.b_max = get_number(j, what, "b_max");
    for (const auto& [name, v] : {std::pair<const char*, double>{"x_max", model.x_max},
                                  {"q_max", model.q_max},
                                  {"a_max", model.a_max},
                                  {"b_max", model.b_max}}) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            fail(what, std::string("'") + name + "' must be positive and finite");
        }
    }
    try {
        model.check_shapes();
    } catch (const std::exception& e) {
        fail(what, e.what());
    }
    return model;
}

std::unique_ptr<NoiseModel> noise_from_json(const json& j) {
    const std::string what = "noise";
    check_keys(j, what, {"kind", "sigma2"});
    const std::string kind = get_string(j, what, "kind");
    if (kind != "gaussian") fail(what, "unsupported kind '" + kind + "'");
    const double sigma2 = get_number(j, what, "sigma2");
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) fail(what, "'sigma2' must be positive and finite");
    return std::make_unique<GaussianNoise>(sigma2);
}

EstimatorConfigParse estimator_config_from_json(const json& j) {
    const std::string what = "estimator";
    check_keys(j, what,
               {"lambda_p", "lambda_q", "max_outer_iters", "tol_objective", "step", "init",
                "enforce_x_max", "project_to_grid", "grid_beta"});
    EstimatorConfigParse out;
    EstimatorConfig& cfg = out.cfg;

    for (const char* key : {"lambda_p", "lambda_q"}) {
        const auto it = j.find(key);
        if (it == j.end()) continue;
        if (it->is_string()) {
            if (it->get<std::string>() != "min") {
                fail(what, std::string("'") + key + "' must be a number or the string \"min\"");
            }
            out.lambda_auto = true;
        } else if (it->is_number()) {
            (std::string(key) == "lambda_p" ? cfg.lambda_p : cfg.lambda_q) = it->get<double>();
        } else {
            fail(what, std::string("'") + key + "' must be a number or the string \"min\"");
        }
    }
    if (out.lambda_auto &&
        !((!j.contains("lambda_p") || j["lambda_p"].is_string()) &&
          (!j.contains("lambda_q") || j["lambda_q"].is_string()))) {
        fail(what, "\"min\" lambdas cannot be mixed with numeric ones");
    }

    cfg.max_outer_iters = get_index_or(j, what, "max_outer_iters", cfg.max_outer_iters);
    cfg.tol_objective = get_number_or(j, what, "tol_objective", cfg.tol_objective);

    if (j.contains("step")) {
        const json& s = j["step"];
        const std::string sw = what + ".step";
        check_keys(s, sw, {"kind", "eta", "shrink", "max_tries"});
        const std::string kind = get_string(s, sw, "kind");
        if (kind == "fixed") {
            cfg.step.kind = StepKind::fixed;
        } else if (kind == "backtracking") {
            cfg.step.kind = StepKind::backtracking;
        } else {
            fail(sw, "kind must be \"fixed\" or \"backtracking\"");
        }
        cfg.step.eta = get_number_or(s, sw, "eta", cfg.step.eta);
        cfg.step.shrink = get_number_or(s, sw, "shrink", cfg.step.shrink);
        cfg.step.max_tries = static_cast<int>(get_index_or(
            s, sw, "max_tries", static_cast<std::size_t>(cfg.step.max_tries)));
    }

    if (j.contains("init")) {
        const json& s = j["init"];
        const std::string sw = what + ".init";
        check_keys(s, sw, {"kind", "scale", "p0", "q0"});
        const std::string kind = get_string(s, sw, "kind");
        if (kind == "random") {
            cfg.init.kind = InitKind::random;
        } else if (kind == "spectral") {
            cfg.init.kind = InitKind::spectral;
        } else if (kind == "provided") {
            cfg.init.kind = InitKind::provided;
            cfg.init.p0 = matrix_from_json(require(s, sw, "p0"), sw + ".p0");
            cfg.init.q0 = matrix_from_json(require(s, sw, "q0"), sw + ".q0");
        } else {
            fail(sw, "kind must be \"random\", \"spectral\" or \"provided\"");
        }
        cfg.init.scale = get_number_or(s, sw, "scale", cfg.init.scale);
    }

    if (j.contains("enforce_x_max")) {
        const std::string rule = get_string(j, what, "enforce_x_max");
        if (rule == "none") {
            cfg.enforce_x_max = XMaxRule::none;
        } else if (rule == "rescale") {
            cfg.enforce_x_max = XMaxRule::rescale;
        } else {
            fail(what, "enforce_x_max must be \"none\" or \"rescale\"");
        }
    }
    cfg.project_to_grid = get_bool_or(j, what, "project_to_grid", cfg.project_to_grid);

    if (j.contains("grid_beta")) {
        const json& v = j["grid_beta"];
        if (v.is_string()) {
            if (v.get<std::string>() != "auto") {
                fail(what, "'grid_beta' must be a number or the string \"auto\"");
            }
            out.beta_auto = true;
        } else if (v.is_number()) {
            cfg.grid_beta = v.get<double>();
        } else {
            fail(what, "'grid_beta' must be a number or the string \"auto\"");
        }
    }
    return out;
}

ExperimentConfig experiment_config_from_json(const json& j) {
    const std::string what = "experiment config";
    check_keys(j, what,
               {"n1", "n2", "r", "r1", "r2", "p0", "q0", "x_max", "q_max", "a_max", "b_max",
                "noise", "m_grid", "trials_per_cell", "solver", "estimator", "master_seed",
                "fixed_truth", "oracle_cap"});
    ExperimentConfig cfg;
    cfg.n1 = get_index(j, what, "n1");
    cfg.n2 = get_index(j, what, "n2");
    cfg.r = get_index(j, what, "r");
    cfg.r1 = get_index(j, what, "r1");
    cfg.r2 = get_index(j, what, "r2");
    cfg.p0 = get_index(j, what, "p0");
    cfg.q0 = get_index(j, what, "q0");
    cfg.x_max = get_number_or(j, what, "x_max", cfg.x_max);
    cfg.q_max = get_number_or(j, what, "q_max", cfg.q_max);
    cfg.a_max = get_number_or(j, what, "a_max", cfg.a_max);
    cfg.b_max = get_number_or(j, what, "b_max", cfg.b_max);

    const json& noise = require(j, what, "noise");
    const auto model = noise_from_json(noise); // validates kind and sigma2
    cfg.sigma2 = dynamic_cast<const GaussianNoise&>(*model).sigma2();

    const json& grid = require(j, what, "m_grid");
    if (!grid.is_array()) fail(what, "'m_grid' must be an array of integers");
    for (const json& v : grid) cfg.m_grid.push_back(as_index(v, what, "m_grid"));
    cfg.trials_per_cell = get_index(j, what, "trials_per_cell");

    const std::string solver = get_string(j, what, "solver");
    if (solver == "oracle") {
        cfg.solver = SolverKind::oracle;
    } else if (solver == "alt_min") {
        cfg.solver = SolverKind::alt_min;
    } else {
        fail(what, "solver must be \"oracle\" or \"alt_min\"");
    }

    if (j.contains("estimator")) {
        EstimatorConfigParse parse = estimator_config_from_json(j["estimator"]);
        cfg.estimator = std::move(parse.cfg);
        cfg.lambda_auto = parse.lambda_auto;
        cfg.beta_auto = parse.beta_auto;
    }
    cfg.master_seed = get_u64_or(j, what, "master_seed", 0);
    cfg.fixed_truth = get_bool_or(j, what, "fixed_truth", false);
    cfg.oracle_cap = get_u64_or(j, what, "oracle_cap", cfg.oracle_cap);
    cfg.validate();
    return cfg;
}

BoundReport bound_report_from_json_config(const json& j) {
    const std::string what = "bound config";
    check_keys(j, what,
               {"n1", "n2", "r", "r1", "r2", "m", "p0", "q0", "x_max", "q_max", "a_max", "b_max",
                "noise"});
    const json& noise = require(j, what, "noise");
    const auto model = noise_from_json(noise);
    const double sigma2 = dynamic_cast<const GaussianNoise&>(*model).sigma2();
    try {
        return compute_bound_report(
            get_index(j, what, "n1"), get_index(j, what, "n2"), get_index(j, what, "r"),
            get_index(j, what, "r1"), get_index(j, what, "r2"), get_index(j, what, "m"), sigma2,
            get_number(j, what, "x_max"), get_number(j, what, "q_max"),
            get_number(j, what, "a_max"), get_number(j, what, "b_max"),
            get_index(j, what, "p0"), get_index(j, what, "q0"));
    } catch (const std::invalid_argument& e) {
        fail(what, e.what());
    }
}

json fit_to_json(const FitResult& fit) {
    json j;
    j["P_hat"] = matrix_to_json(fit.P_hat);
    j["Q_hat"] = matrix_to_json(fit.Q_hat);
    j["objective_trace"] = fit.objective_trace;
    j["iterations"] = fit.iterations;
    j["converged"] = fit.converged;
    return j;
}

json bound_report_to_json(const BoundReport& rep) {
    json j;
    j["n1"] = rep.n1;
    j["n2"] = rep.n2;
    j["r"] = rep.r;
    j["r1"] = rep.r1;
    j["r2"] = rep.r2;
    j["m"] = rep.m;
    j["sigma2"] = rep.sigma2;
    j["x_max"] = rep.x_max;
    j["q_max"] = rep.q_max;
    j["a_max"] = rep.a_max;
    j["b_max"] = rep.b_max;
    j["p0"] = rep.p0;
    j["q0"] = rep.q0;
    j["beta"] = rep.beta;
    j["l_lev"] = rep.l_lev;
    j["d_const"] = rep.d_const;
    j["lambda_p_min"] = rep.lambda_p_min;
    j["lambda_q_min"] = rep.lambda_q_min;
    j["theorem1"] = rep.theorem1;
    j["corollary1"] = rep.corollary1;
    return j;
}

} // namespace imc::io
