#ifndef ORDSTAT_LINALG_HPP
#define ORDSTAT_LINALG_HPP

#include <Eigen/Dense>

namespace ordstat {

// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
// Hand-rolled rather than Eigen::LLT so a failed factorization can report
// the offending pivot value and index.
class Cholesky {
public:
    // Throws PrecisionError (with pivot index and value) if A is not PD.
    explicit Cholesky(const Eigen::MatrixXd& A);

    Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
    Eigen::MatrixXd solve(const Eigen::MatrixXd& B) const;

    double smallest_pivot() const { return smallest_pivot_; }
    const Eigen::MatrixXd& factor() const { return L_; }

private:
    Eigen::MatrixXd L_;
    double smallest_pivot_;
};

// True iff A admits a Cholesky factorization (all pivots > 0).
bool is_positive_definite(const Eigen::MatrixXd& A);

// Orthonormal basis of the nullspace of the 2 x r constraint matrix
// [1'; alpha'] (columns 3..r of the full Q factor of [1 alpha]).
// Returns an r x (r-2) matrix; r == 2 yields zero columns.
Eigen::MatrixXd constraint_nullspace(const Eigen::VectorXd& alpha_obs);

// Minimum-norm c with c'1 = c0 and c'alpha = c1.
Eigen::VectorXd constraint_particular(const Eigen::VectorXd& alpha_obs,
                                      double c0, double c1);

} // namespace ordstat

#endif
