#ifndef ORDSTAT_JSON_IO_HPP
#define ORDSTAT_JSON_IO_HPP

#include <json.hpp>

#include "ordstat/estimation.hpp"
#include "ordstat/moments.hpp"
#include "ordstat/prediction.hpp"
#include "ordstat/verification.hpp"

namespace ordstat {

// ordered_json keeps insertion order, so serialized field order is fixed and
// repeated runs emit byte-identical documents.  Numbers round-trip losslessly
// (shortest-representation formatting).
using json = nlohmann::ordered_json;

json to_json(const Eigen::VectorXd& v);
json to_json(const Eigen::MatrixXd& m);
Eigen::VectorXd vector_from_json(const json& j);
Eigen::MatrixXd matrix_from_json(const json& j);

// {family, n, alpha, sigma, provenance, quad_tol}
json to_json(const MomentTable& table);
MomentTable moment_table_from_json(const json& j);

// {n, r, values}
json to_json(const CensoredSample& sample);
CensoredSample censored_sample_from_json(const json& j);

// {mu_hat, sigma_hat, var_mu_unit, var_sigma_unit, cov_unit, delta}
json to_json(const BlueResult& blue);

// {targets, predictions, coefficients, mspe_unit, blue}
json to_json(const PredictionSet& set);

json to_json(const MonteCarloReport& rep);
json to_json(const DominanceReport& rep);
json to_json(const MinimizerResult& res, const OptimizerConfig& cfg);

} // namespace ordstat

#endif
