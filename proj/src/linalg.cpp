#include "ordstat/linalg.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ordstat/errors.hpp"

namespace ordstat {

Cholesky::Cholesky(const Eigen::MatrixXd& A) {
    const auto n = A.rows();
    L_.setZero(n, n);
    smallest_pivot_ = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
        double d = A(j, j) - L_.row(j).head(j).squaredNorm();
        if (d <= 0.0) {
            throw PrecisionError("matrix is not positive definite: pivot " +
                                 std::to_string(d) + " at index " + std::to_string(j + 1));
        }
        smallest_pivot_ = std::min(smallest_pivot_, d);
        L_(j, j) = std::sqrt(d);
        for (Eigen::Index i = j + 1; i < n; ++i) {
            double sum = L_.row(i).head(j).dot(L_.row(j).head(j));
            L_(i, j) = (A(i, j) - sum) / L_(j, j);
        }
    }
}

Eigen::VectorXd Cholesky::solve(const Eigen::VectorXd& b) const {
    const auto n = b.size();
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i)
        y(i) = (b(i) - L_.row(i).head(i).dot(y.head(i))) / L_(i, i);
    Eigen::VectorXd x(n);
    for (Eigen::Index i = n - 1; i >= 0; --i)
        x(i) = (y(i) - L_.col(i).tail(n - i - 1).dot(x.tail(n - i - 1))) / L_(i, i);
    return x;
}

Eigen::MatrixXd Cholesky::solve(const Eigen::MatrixXd& B) const {
    Eigen::MatrixXd X(B.rows(), B.cols());
    for (Eigen::Index c = 0; c < B.cols(); ++c)
        X.col(c) = solve(Eigen::VectorXd(B.col(c)));
    return X;
}

bool is_positive_definite(const Eigen::MatrixXd& A) {
    try {
        Cholesky chol(A);
        return true;
    } catch (const PrecisionError&) {
        return false;
    }
}

Eigen::MatrixXd constraint_nullspace(const Eigen::VectorXd& alpha_obs) {
    const auto r = alpha_obs.size();
    Eigen::MatrixXd M(r, 2);
    M.col(0).setOnes();
    M.col(1) = alpha_obs;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
    Eigen::MatrixXd Q = qr.householderQ();
    return Q.rightCols(r - 2);
}

Eigen::VectorXd constraint_particular(const Eigen::VectorXd& alpha_obs,
                                      double c0, double c1) {
    const auto r = alpha_obs.size();
    Eigen::MatrixXd M(r, 2);
    M.col(0).setOnes();
    M.col(1) = alpha_obs;
    Eigen::Matrix2d G = M.transpose() * M;
    Eigen::Vector2d rhs(c0, c1);
    return M * G.ldlt().solve(rhs);
}

} // namespace ordstat
