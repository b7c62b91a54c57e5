#pragma once

#include <memory>
#include <string>

#include "json.hpp"

#include "imc/bounds.hpp"
#include "imc/estimator.hpp"
#include "imc/harness.hpp"
#include "imc/model.hpp"
#include "imc/noise.hpp"

namespace imc::io {

/// Parse a JSON file; open or syntax failures become ConfigError.
nlohmann::json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

/// Matrices travel as arrays of rows. Loading rejects ragged rows and
/// non-finite entries.
nlohmann::json matrix_to_json(const DenseMatrix& m);
DenseMatrix matrix_from_json(const nlohmann::json& j, const std::string& what);

/// Model file: n1,n2,r1,r2,r, A, B, optional P and Q, and the four box
/// constants. Unknown keys are rejected, shapes are cross-checked.
nlohmann::json model_to_json(const ImcModel& model);
ImcModel model_from_json(const nlohmann::json& j);

/// {"kind": "gaussian", "sigma2": s}. Only the Gaussian family exists.
std::unique_ptr<NoiseModel> noise_from_json(const nlohmann::json& j);

/// Solver settings plus two "defer to the sweep cell" switches: lambda_p and
/// lambda_q may be the string "min" (theoretical minimum), grid_beta may be
/// the string "auto" (resolution exponent derived per cell).
struct EstimatorConfigParse {
    EstimatorConfig cfg;
    bool lambda_auto = false;
    bool beta_auto = false;
};
EstimatorConfigParse estimator_config_from_json(const nlohmann::json& j);

ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

/// Inputs of compute_bound_report, same key names as the experiment config
/// but with a single "m".
BoundReport bound_report_from_json_config(const nlohmann::json& j);

nlohmann::json fit_to_json(const FitResult& fit);
nlohmann::json bound_report_to_json(const BoundReport& rep);

} // namespace imc::io
