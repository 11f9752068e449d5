#include "ordstat/prediction.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <string>

#include "ordstat/errors.hpp"
#include "ordstat/linalg.hpp"

namespace ordstat {

namespace {

int target_position(const MomentSlice& slice, int s) {
    auto it = std::find(slice.targets.begin(), slice.targets.end(), s);
    if (it == slice.targets.end())
        throw DomainError("index " + std::to_string(s) + " is not a slice target");
    return static_cast<int>(it - slice.targets.begin());
}

// Theorem-route coefficient row for target position k:
// a = S^-1 w + (1/D)(A V2 - B V3) S^-1 1 + (1/D)(B V1 - A V3) S^-1 alpha.
Eigen::VectorXd closed_form_row(const AuxQuantities& aux, int k) {
    const double ca = (aux.A(k) * aux.v2 - aux.B(k) * aux.v3) / aux.delta;
    const double cb = (aux.B(k) * aux.v1 - aux.A(k) * aux.v3) / aux.delta;
    return aux.R.col(k) + ca * aux.p + cb * aux.q;
}

MomentSlice subslice(const MomentSlice& slice, int pos_a, int pos_b) {
    MomentSlice s;
    s.n = slice.n;
    s.r = slice.r;
    s.targets = {slice.targets[pos_a], slice.targets[pos_b]};
    s.alpha_obs = slice.alpha_obs;
    s.sigma_obs = slice.sigma_obs;
    s.omega.resize(slice.r, 2);
    s.omega.col(0) = slice.omega.col(pos_a);
    s.omega.col(1) = slice.omega.col(pos_b);
    s.omega_tt.resize(2, 2);
    s.omega_tt(0, 0) = slice.omega_tt(pos_a, pos_a);
    s.omega_tt(0, 1) = slice.omega_tt(pos_a, pos_b);
    s.omega_tt(1, 0) = slice.omega_tt(pos_b, pos_a);
    s.omega_tt(1, 1) = slice.omega_tt(pos_b, pos_b);
    s.alpha_targets.resize(2);
    s.alpha_targets(0) = slice.alpha_targets(pos_a);
    s.alpha_targets(1) = slice.alpha_targets(pos_b);
    return s;
}

} // namespace

LinearPredictor marginal_blup(const CensoredSample& sample, const MomentSlice& slice,
                              const BlueResult& blue_result, int s) {
    sample.validate();
    if (sample.r() != slice.r) throw DomainError("sample r does not match slice r");
    const int k = target_position(slice, s);
    const AuxQuantities aux = aux_quantities(slice);
    const BlueCoefficients bc = blue_coefficients(aux);

    // value straight from the marginal formula
    const Eigen::VectorXd resid = sample.values -
                                  blue_result.mu_hat * Eigen::VectorXd::Ones(slice.r) -
                                  blue_result.sigma_hat * slice.alpha_obs;
    LinearPredictor out;
    out.value = blue_result.mu_hat + blue_result.sigma_hat * slice.alpha_targets(k) +
                aux.R.col(k).dot(resid);

    // implied coefficient vector: expand mu^ and sigma^ as linear forms in X
    out.coefficients = aux.R.col(k) + aux.A(k) * bc.mu + aux.B(k) * bc.sigma;
    return out;
}

MspeMatrix mspe_matrix(const MomentSlice& slice, const AuxQuantities& aux) {
    const int l = static_cast<int>(slice.targets.size());
    if (l < 1) throw DomainError("mspe_matrix: slice has no targets");
    MspeMatrix m;
    m.targets = slice.targets;
    m.w.resize(l, l);
    for (int i = 0; i < l; ++i) {
        for (int j = i; j < l; ++j) {
            const double qf = (aux.A(i) * aux.v2 * aux.A(j) -
                               aux.v3 * (aux.A(i) * aux.B(j) + aux.B(i) * aux.A(j)) +
                               aux.B(i) * aux.v1 * aux.B(j)) /
                              aux.delta;
            const double w = slice.omega_tt(i, j) - slice.omega.col(i).dot(aux.R.col(j)) + qf;
            m.w(i, j) = w;
            m.w(j, i) = w;
        }
    }
    Cholesky chol(m.w); // PD required; throws naming the pivot
    return m;
}

PredictorCoefficients simultaneous_coefficients(const MomentSlice& slice,
                                                const AuxQuantities& aux) {
    const int l = static_cast<int>(slice.targets.size());
    PredictorCoefficients pc;
    pc.targets = slice.targets;
    pc.coeffs.resize(l, slice.r);
    for (int k = 0; k < l; ++k) pc.coeffs.row(k) = closed_form_row(aux, k).transpose();
    return pc;
}

PredictionSet simultaneous_blup(const CensoredSample& sample, const MomentSlice& slice) {
    sample.validate();
    if (sample.r() != slice.r) throw DomainError("sample r does not match slice r");
    if (slice.targets.empty()) throw DomainError("simultaneous_blup: slice has no targets");

    const AuxQuantities aux = aux_quantities(slice);
    const int l = static_cast<int>(slice.targets.size());

    PredictionSet set;
    set.coefficients = simultaneous_coefficients(slice, aux);
    set.predictions = set.coefficients.coeffs * sample.values;
    set.mspe = mspe_matrix(slice, aux);
    set.blue = blue(sample, slice, aux);

#ifndef NDEBUG
    // the simultaneous rows are the marginal predictors (equivalence theorem)
    for (int k = 0; k < l; ++k) {
        const LinearPredictor mk = marginal_blup(sample, slice, set.blue, slice.targets[k]);
        assert((mk.coefficients - set.coefficients.coeffs.row(k).transpose()).cwiseAbs().maxCoeff() <
               1e-10);
    }
#endif
    return set;
}

PredictionSet joint_blup_pair(const CensoredSample& sample, const MomentSlice& slice,
                              int s, int t) {
    if (!(s < t)) throw DomainError("joint_blup_pair requires s < t");
    const int pos_s = target_position(slice, s);
    const int pos_t = target_position(slice, t);
    return simultaneous_blup(sample, subslice(slice, pos_s, pos_t));
}

LinearPredictor combo_predictor(const CensoredSample& sample, const MomentSlice& slice,
                                const ComboSpec& combo) {
    sample.validate();
    if (sample.r() != slice.r) throw DomainError("sample r does not match slice r");
    if (!(combo.s < combo.t)) throw DomainError("combo requires s < t");
    const int pos_s = target_position(slice, combo.s);
    const int pos_t = target_position(slice, combo.t);

    const AuxQuantities aux = aux_quantities(slice);
    const double l = combo.l_weight, k = combo.k_weight;

    // multipliers from the two unbiasedness constraints:
    //   lam1 V1 + lam2 V3 = l A_s + k A_t
    //   lam1 V3 + lam2 V2 = l B_s + k B_t
    const double rhs1 = l * aux.A(pos_s) + k * aux.A(pos_t);
    const double rhs2 = l * aux.B(pos_s) + k * aux.B(pos_t);
    const double lam1 = (aux.v2 * rhs1 - aux.v3 * rhs2) / aux.delta;
    const double lam2 = (aux.v1 * rhs2 - aux.v3 * rhs1) / aux.delta;

    LinearPredictor out;
    out.coefficients =
        l * aux.R.col(pos_s) + k * aux.R.col(pos_t) + lam1 * aux.p + lam2 * aux.q;
    out.value = out.coefficients.dot(sample.values);

#ifndef NDEBUG
    const Eigen::VectorXd combined =
        l * closed_form_row(aux, pos_s) + k * closed_form_row(aux, pos_t);
    assert((out.coefficients - combined).cwiseAbs().maxCoeff() < 1e-10);
#endif
    return out;
}

std::string render_prediction_table(const PredictionSet& set) {
    std::string out;
    char buf[128];
    out += " target  prediction\n";
    for (int k = 0; k < set.predictions.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%7d  %10.4f\n", set.coefficients.targets[k],
                      set.predictions(k));
        out += buf;
    }
    out += "\nMSPE matrix (unit-free; multiply by sigma^2):\n";
    for (int i = 0; i < set.mspe.w.rows(); ++i) {
        for (int j = 0; j < set.mspe.w.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), " %8.4f", set.mspe.w(i, j));
            out += buf;
        }
        out += "\n";
    }
    std::snprintf(buf, sizeof(buf),
                  "\nmu_hat = %.4f  sigma_hat = %.4f  (Var/sigma^2: mu %.4f, sigma %.4f, cov %.4f)\n",
                  set.blue.mu_hat, set.blue.sigma_hat, set.blue.var_mu_unit,
                  set.blue.var_sigma_unit, set.blue.cov_unit);
    out += buf;
    return out;
}

} // namespace ordstat
