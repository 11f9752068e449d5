#include "ordstat/json_io.hpp"

#include <cmath>

#include "ordstat/errors.hpp"

namespace ordstat {

json to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

json to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

Eigen::VectorXd vector_from_json(const json& j) {
    Eigen::VectorXd v(j.size());
    for (size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    return v;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    const auto rows = j.size();
    const auto cols = rows ? j[0].size() : 0;
    Eigen::MatrixXd m(rows, cols);
    for (size_t i = 0; i < rows; ++i) {
        if (j[i].size() != cols) throw DomainError("ragged matrix in JSON");
        for (size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = j[i][c].get<double>();
    }
    return m;
}

json to_json(const MomentTable& table) {
    json j;
    j["family"] = family_name(table.family);
    j["n"] = table.n;
    j["alpha"] = to_json(table.alpha);
    j["sigma"] = to_json(table.sigma);
    j["provenance"] = table.provenance == Provenance::ClosedForm ? "closed-form" : "quadrature";
    j["quad_tol"] = table.quad_tol;
    return j;
}

MomentTable moment_table_from_json(const json& j) {
    MomentTable t;
    t.family = family_from_name(j.at("family").get<std::string>());
    t.n = j.at("n").get<int>();
    t.alpha = vector_from_json(j.at("alpha"));
    t.sigma = matrix_from_json(j.at("sigma"));
    const std::string prov = j.at("provenance").get<std::string>();
    if (prov == "closed-form") t.provenance = Provenance::ClosedForm;
    else if (prov == "quadrature") t.provenance = Provenance::Quadrature;
    else throw DomainError("unknown provenance: " + prov);
    t.quad_tol = j.at("quad_tol").get<double>();
    if (t.alpha.size() != t.n || t.sigma.rows() != t.n || t.sigma.cols() != t.n)
        throw DomainError("moment table JSON has inconsistent dimensions");
    return t;
}

json to_json(const CensoredSample& sample) {
    json j;
    j["n"] = sample.n;
    j["r"] = sample.r();
    j["values"] = to_json(sample.values);
    return j;
}

CensoredSample censored_sample_from_json(const json& j) {
    CensoredSample s;
    s.n = j.at("n").get<int>();
    s.values = vector_from_json(j.at("values"));
    if (j.contains("r") && j.at("r").get<int>() != s.r())
        throw DomainError("censored sample JSON: r does not match the number of values");
    return s;
}

json to_json(const BlueResult& blue) {
    json j;
    j["mu_hat"] = blue.mu_hat;
    j["sigma_hat"] = blue.sigma_hat;
    j["var_mu_unit"] = blue.var_mu_unit;
    j["var_sigma_unit"] = blue.var_sigma_unit;
    j["cov_unit"] = blue.cov_unit;
    j["delta"] = blue.delta;
    return j;
}

json to_json(const PredictionSet& set) {
    json j;
    j["targets"] = set.coefficients.targets;
    j["predictions"] = to_json(set.predictions);
    j["coefficients"] = to_json(set.coefficients.coeffs);
    j["mspe_unit"] = to_json(set.mspe.w);
    j["blue"] = to_json(set.blue);
    return j;
}

json to_json(const MonteCarloReport& rep) {
    json j;
    j["config"] = {{"family", family_name(rep.family)}, {"mu", rep.mu}, {"sigma", rep.sigma},
                   {"n", rep.n}, {"r", rep.r}, {"targets", rep.targets}};
    j["replications"] = rep.replications;
    j["seed"] = rep.seed;
    j["empirical_bias"] = to_json(rep.empirical_bias);
    if (rep.se_defined) {
        j["bias_standard_errors"] = to_json(rep.bias_standard_errors);
    } else {
        j["bias_standard_errors"] = nullptr;
        j["note"] = "standard errors undefined for replications < 2";
    }
    j["empirical_mspe_unit"] = to_json(rep.empirical_mspe_unit);
    j["theoretical_mspe_unit"] = to_json(rep.theoretical_mspe_unit);
    j["max_relative_mspe_error"] = rep.max_relative_mspe_error;
    return j;
}

json to_json(const DominanceReport& rep) {
    json j;
    j["config"] = {{"s", rep.s}, {"t", rep.t}};
    j["trials"] = rep.trials;
    j["seed"] = rep.seed;
    j["max_violation"] = rep.max_violation;
    if (rep.has_violation) {
        j["violating_instance"] = {{"trial", rep.worst_trial},
                                   {"l", rep.worst_l},
                                   {"k", rep.worst_k},
                                   {"a", to_json(rep.worst_a)},
                                   {"b", to_json(rep.worst_b)}};
    } else {
        j["violating_instance"] = nullptr;
    }
    return j;
}

json to_json(const MinimizerResult& res, const OptimizerConfig& cfg) {
    json j;
    j["config"] = {{"max_iters", cfg.max_iters}, {"grad_tol", cfg.grad_tol},
                   {"penalty_weight", cfg.penalty_weight}, {"seed", cfg.seed}};
    j["a"] = to_json(res.a);
    j["b"] = to_json(res.b);
    j["objective"] = res.objective;
    j["grad_norm"] = res.grad_norm;
    j["iterations"] = res.iterations;
    j["start_index"] = res.start_index;
    j["converged"] = res.converged;
    j["multistart_spread"] = res.multistart_spread;
    return j;
}

} // namespace ordstat
