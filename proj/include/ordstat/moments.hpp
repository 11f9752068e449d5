#ifndef ORDSTAT_MOMENTS_HPP
#define ORDSTAT_MOMENTS_HPP

#include <vector>

#include <Eigen/Dense>

#include "ordstat/distributions.hpp"
#include "ordstat/exec.hpp"

namespace ordstat {

enum class Provenance { ClosedForm, Quadrature };

// Means alpha_i = E[Z_{i:n}] and covariances sigma_ij = Cov(Z_{i:n}, Z_{j:n})
// of all n standardized order statistics of one family.  Immutable after
// construction and safe to share across threads.
struct MomentTable {
    Family family = Family::StandardNormal;
    int n = 0;
    Eigen::VectorXd alpha;   // strictly increasing
    Eigen::MatrixXd sigma;   // symmetric positive definite, all entries > 0
    Provenance provenance = Provenance::ClosedForm;
    double quad_tol = 0.0;   // 0 for closed-form tables

    // quadrature diagnostics (not serialized): largest successive-stage
    // difference among converged entries, and the quantile-argument clip.
    double achieved_tol = 0.0;
    double clip_delta = 0.0;
};

// Observed/unobserved partition of a MomentTable for a Type-II right
// censored sample with r observed values and future targets s_1 < ... < s_l.
struct MomentSlice {
    int n = 0;
    int r = 0;
    std::vector<int> targets;     // 1-based, each in (r, n]
    Eigen::VectorXd alpha_obs;    // length r
    Eigen::MatrixXd sigma_obs;    // r x r
    Eigen::MatrixXd omega;        // r x l, column i is omega_{s_i}
    Eigen::MatrixXd omega_tt;     // l x l, (i,j) entry is omega_{s_i s_j}
    Eigen::VectorXd alpha_targets;
};

// Closed forms.  1 <= n <= 1000.
MomentTable exponential_moments(int n);
MomentTable uniform_moments(int n);

// Quantile-space Gauss-Legendre quadrature with node doubling from
// spec.quad_points (>= 16) up to a 4096-node-per-dimension cap, stopping a
// moment's refinement once successive stages differ by less than the
// tolerance (quad_tol for covariance entries, quad_tol/10 for means).
// Covariances need a double integral, so n is capped at 50.
// Throws PrecisionError if some entry has not converged at the node cap or
// the assembled matrix fails its PD check.
MomentTable quadrature_moments(const DistributionSpec& spec, int n,
                               Exec exec = Exec::Parallel);

// Partition `table` for r observed values and the given future targets.
// r == n is allowed only with an empty target list (estimation-only slice).
MomentSlice slice(const MomentTable& table, int r, const std::vector<int>& targets);

// Invariant check: alpha strictly increasing, all sigma entries positive,
// sigma positive definite.  Throws PrecisionError naming what failed.
void validate_table(const MomentTable& table);

} // namespace ordstat

#endif
