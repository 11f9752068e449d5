#ifndef ORDSTAT_PREDICTION_HPP
#define ORDSTAT_PREDICTION_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ordstat/estimation.hpp"
#include "ordstat/moments.hpp"

namespace ordstat {

// Rows are the coefficient vectors a_i' of the predictors X~_{s_i} = a_i'X.
// Every row satisfies a'1 = 1 and a'alpha = alpha_{s_i}.
struct PredictorCoefficients {
    std::vector<int> targets;
    Eigen::MatrixXd coeffs; // l x r
};

// Unit-free MSPE matrix of the predictor set; multiply by sigma^2 for
// data-units^2.  Symmetric positive definite.
struct MspeMatrix {
    std::vector<int> targets;
    Eigen::MatrixXd w; // l x l
};

struct PredictionSet {
    PredictorCoefficients coefficients;
    Eigen::VectorXd predictions; // data units, = coeffs * observed values
    MspeMatrix mspe;
    BlueResult blue;
};

// Y = l*X_{s:n} + k*X_{t:n} with fixed weights.
struct ComboSpec {
    int s = 0, t = 0;
    double l_weight = 0.0, k_weight = 0.0;
};

struct LinearPredictor {
    Eigen::VectorXd coefficients;
    double value = 0.0;
};

// Marginal predictor of X_{s:n}: value evaluated directly as
// mu^ + sigma^ alpha_s + omega_s' S^-1 (X - mu^ 1 - sigma^ alpha), plus the
// implied coefficient vector on X.  s must be one of the slice targets.
LinearPredictor marginal_blup(const CensoredSample& sample, const MomentSlice& slice,
                              const BlueResult& blue_result, int s);

// Joint determinant-minimizing predictors of the pair (s, t); both indices
// must be slice targets.  Coefficient rows come from the closed form; the
// 2x2 MSPE matrix is attached.
PredictionSet joint_blup_pair(const CensoredSample& sample, const MomentSlice& slice,
                              int s, int t);

// Simultaneous predictors of every slice target.
PredictionSet simultaneous_blup(const CensoredSample& sample, const MomentSlice& slice);

// Coefficient rows alone (they depend on the moments, not the data).
PredictorCoefficients simultaneous_coefficients(const MomentSlice& slice,
                                                const AuxQuantities& aux);

// W_ij = omega_{s_i s_j} - omega_i' S^-1 omega_j
//        + [A_i B_i] [V1 V3; V3 V2]^-1 [A_j B_j]'.
// Throws PrecisionError (naming the pivot) if the result is not PD.
MspeMatrix mspe_matrix(const MomentSlice& slice, const AuxQuantities& aux);

// Optimal predictor of l*X_s + k*X_t solved directly from its own Lagrangian
// (equals l*a + k*b from the joint pair).
LinearPredictor combo_predictor(const CensoredSample& sample, const MomentSlice& slice,
                                const ComboSpec& combo);

// Fixed-point text rendering (4 decimals): predictions column followed by
// the unit-free MSPE matrix.
std::string render_prediction_table(const PredictionSet& set);

} // namespace ordstat

#endif
