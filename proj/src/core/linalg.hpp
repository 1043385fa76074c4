#ifndef GGLOPT_CORE_LINALG_HPP_
#define GGLOPT_CORE_LINALG_HPP_

#include <Eigen/Dense>
#include <vector>

namespace gglopt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using MatrixList = std::vector<Matrix>;

// Spectral decomposition A = Q diag(d) Q^T of a symmetric matrix,
// eigenvalues in ascending order, Q orthogonal.
struct EigenDecomposition {
  Vector eigenvalues;
  Matrix eigenvectors;

  Matrix reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose();
  }
};

// Throws NumericError if the iteration fails.
EigenDecomposition decompose_symmetric(const Matrix& a);

// Largest absolute difference |A_ij - A_ji|.
double max_asymmetry(const Matrix& a);

// X <- (X + X^T)/2, guards against round-off drift in iterates.
void symmetrize(Matrix& a);

// log det of a positive definite matrix via Cholesky.
// Throws DomainError (carrying `instance`) when the factorization fails.
double logdet_pd(const Matrix& a, int instance = -1);

// Inverse of a positive definite matrix via Cholesky; DomainError on failure.
Matrix inverse_pd(const Matrix& a, int instance = -1);

// Frobenius norm over a list of matrices, treating the list as one stacked
// variable: sqrt(sum_k ||A_k||_F^2).
double stacked_norm(const MatrixList& as);

double stacked_diff_norm(const MatrixList& as, const MatrixList& bs);

}  // namespace gglopt

#endif  // GGLOPT_CORE_LINALG_HPP_
