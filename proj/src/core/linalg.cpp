#include "core/linalg.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace gglopt {

EigenDecomposition decompose_symmetric(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
  if (solver.info() != Eigen::Success) {
    throw NumericError("symmetric eigendecomposition did not converge");
  }
  return EigenDecomposition{solver.eigenvalues(), solver.eigenvectors()};
}

double max_asymmetry(const Matrix& a) {
  return (a - a.transpose()).cwiseAbs().maxCoeff();
}

void symmetrize(Matrix& a) {
  a = 0.5 * (a + a.transpose()).eval();
}

double logdet_pd(const Matrix& a, int instance) {
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw DomainError("matrix is not positive definite" +
                          (instance >= 0 ? " (instance " + std::to_string(instance) + ")" : ""),
                      instance);
  }
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

Matrix inverse_pd(const Matrix& a, int instance) {
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw DomainError("matrix is not positive definite" +
                          (instance >= 0 ? " (instance " + std::to_string(instance) + ")" : ""),
                      instance);
  }
  return llt.solve(Matrix::Identity(a.rows(), a.cols()));
}

double stacked_norm(const MatrixList& as) {
  double sq = 0.0;
  for (const Matrix& a : as) sq += a.squaredNorm();
  return std::sqrt(sq);
}

double stacked_diff_norm(const MatrixList& as, const MatrixList& bs) {
  double sq = 0.0;
  for (std::size_t k = 0; k < as.size(); ++k) sq += (as[k] - bs[k]).squaredNorm();
  return std::sqrt(sq);
}

}  // namespace gglopt
