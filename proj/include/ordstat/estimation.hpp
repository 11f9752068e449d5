#ifndef ORDSTAT_ESTIMATION_HPP
#define ORDSTAT_ESTIMATION_HPP

#include <Eigen/Dense>

#include "ordstat/moments.hpp"

namespace ordstat {

// Type-II right censored observations: the r smallest of n, in data units,
// strictly increasing.
struct CensoredSample {
    int n = 0;
    Eigen::VectorXd values; // length r

    int r() const { return static_cast<int>(values.size()); }

    // 2 <= r <= n, strictly increasing values (ties rejected).
    void validate() const;
};

// V1 = 1'S^-1 1, V2 = a'S^-1 a, V3 = 1'S^-1 a over the observed block,
// plus the per-target scalars A_{s_i} = 1 - 1'S^-1 w_{s_i} and
// B_{s_i} = alpha_{s_i} - a'S^-1 w_{s_i}.  The solve products p = S^-1 1,
// q = S^-1 a and R = S^-1 omega are kept because every predictor reuses
// them; all solves go through one Cholesky factorization of sigma_obs.
struct AuxQuantities {
    double v1 = 0.0, v2 = 0.0, v3 = 0.0;
    double delta = 0.0;           // v1*v2 - v3^2
    Eigen::VectorXd A;            // length l
    Eigen::VectorXd B;            // length l
    Eigen::VectorXd p;            // S^-1 1
    Eigen::VectorXd q;            // S^-1 alpha_obs
    Eigen::MatrixXd R;            // r x l, S^-1 omega
};

// Location/scale BLUEs and their unit-free (co)variances.  Multiply the
// unit-free entries by sigma^2 for data-units^2 values.
struct BlueResult {
    double mu_hat = 0.0;
    double sigma_hat = 0.0;
    double var_mu_unit = 0.0;     // V2 / delta
    double var_sigma_unit = 0.0;  // V1 / delta
    double cov_unit = 0.0;        // -V3 / delta
    double delta = 0.0;
};

// Coefficient vectors of the BLUEs as linear forms in the observed X.
struct BlueCoefficients {
    Eigen::VectorXd mu;     // c'1 = 1, c'alpha = 0
    Eigen::VectorXd sigma;  // c'1 = 0, c'alpha = 1
};

// Throws DegenerateDesignError when delta <= 1e-12 * V1 * V2.
AuxQuantities aux_quantities(const MomentSlice& slice);

BlueCoefficients blue_coefficients(const AuxQuantities& aux);

BlueResult blue(const CensoredSample& sample, const MomentSlice& slice);
BlueResult blue(const CensoredSample& sample, const MomentSlice& slice,
                const AuxQuantities& aux);

} // namespace ordstat

#endif
