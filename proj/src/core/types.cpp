#include "core/types.hpp"

#include <cmath>
#include <sstream>

#include "core/errors.hpp"

namespace gglopt {

const char* family_name(PenaltyFamily family) {
  switch (family) {
    case PenaltyFamily::SGL: return "SGL";
    case PenaltyFamily::GGL: return "GGL";
    case PenaltyFamily::FGL: return "FGL";
  }
  return "?";
}

std::vector<Violation> validate_input(const CovarianceSet& cov) {
  std::vector<Violation> out;
  const int k_count = cov.instances();
  if (k_count == 0) {
    out.push_back({ViolationKind::Empty, -1, "no covariance matrices given"});
    return out;
  }

  const Eigen::Index p = cov.matrices[0].rows();
  if (p < 2) {
    out.push_back({ViolationKind::DimensionMismatch, 0,
                   "dimension must be at least 2, got " + std::to_string(p)});
  }

  for (int k = 0; k < k_count; ++k) {
    const Matrix& s = cov.matrices[k];
    if (s.rows() != s.cols() || s.rows() != p) {
      std::ostringstream msg;
      msg << "instance " << k << " is " << s.rows() << "x" << s.cols()
          << ", expected " << p << "x" << p;
      out.push_back({ViolationKind::DimensionMismatch, k, msg.str()});
      continue;  // remaining checks assume a square matrix of the shared size
    }
    const double asym = max_asymmetry(s);
    if (asym > kInputSymmetryTol) {
      std::ostringstream msg;
      msg << "instance " << k << " asymmetric by " << asym;
      out.push_back({ViolationKind::Asymmetry, k, msg.str()});
      continue;  // eigenvalue check expects a symmetric matrix
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(s, Eigen::EigenvaluesOnly);
    if (es.info() == Eigen::Success && es.eigenvalues().minCoeff() < kPsdEigTol) {
      std::ostringstream msg;
      msg << "instance " << k << " has eigenvalue " << es.eigenvalues().minCoeff();
      out.push_back({ViolationKind::NotPositiveSemidefinite, k, msg.str()});
    }
    if (s.diagonal().minCoeff() <= 0.0) {
      std::ostringstream msg;
      msg << "instance " << k << " has a nonpositive diagonal entry";
      out.push_back({ViolationKind::NonpositiveDiagonal, k, msg.str()});
    }
  }

  if (static_cast<int>(cov.sample_counts.size()) != k_count) {
    out.push_back({ViolationKind::BadSampleCount, -1,
                   "sample_counts has " + std::to_string(cov.sample_counts.size()) +
                       " entries for " + std::to_string(k_count) + " matrices"});
  } else {
    for (int k = 0; k < k_count; ++k) {
      if (cov.sample_counts[k] < 2) {
        out.push_back({ViolationKind::BadSampleCount, k,
                       "instance " + std::to_string(k) + " has sample count " +
                           std::to_string(cov.sample_counts[k]) + " < 2"});
      }
    }
  }
  return out;
}

void require_valid(const CovarianceSet& cov) {
  const auto violations = validate_input(cov);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "invalid covariance input:";
  for (const Violation& v : violations) msg << "\n  - " << v.message;
  throw InvalidInputError(msg.str());
}

void require_compatible(const CovarianceSet& cov, const Penalty& pen) {
  if (pen.family == PenaltyFamily::SGL && cov.instances() != 1) {
    throw InvalidInputError("SGL penalty requires a single instance, got " +
                            std::to_string(cov.instances()));
  }
  if (pen.lambda1 < 0.0 || pen.lambda2 < 0.0) {
    throw InvalidInputError("penalty weights must be nonnegative");
  }
  if (pen.latent) {
    if (static_cast<int>(pen.mu1.size()) != cov.instances()) {
      throw InvalidInputError("latent penalty needs one mu1 entry per instance");
    }
    for (double m : pen.mu1) {
      if (m < 0.0) throw InvalidInputError("mu1 entries must be nonnegative");
    }
  }
}

namespace {

double l1_offdiag(const Matrix& a) {
  return a.cwiseAbs().sum() - a.diagonal().cwiseAbs().sum();
}

}  // namespace

double penalty_value(const Penalty& pen, const MatrixList& theta) {
  const int k_count = static_cast<int>(theta.size());
  const Eigen::Index p = theta.empty() ? 0 : theta[0].rows();
  double value = 0.0;
  for (const Matrix& t : theta) value += pen.lambda1 * l1_offdiag(t);
  if (pen.family == PenaltyFamily::GGL) {
    for (Eigen::Index i = 0; i < p; ++i) {
      for (Eigen::Index j = 0; j < p; ++j) {
        if (i == j) continue;
        double sq = 0.0;
        for (int k = 0; k < k_count; ++k) sq += theta[k](i, j) * theta[k](i, j);
        value += pen.lambda2 * std::sqrt(sq);
      }
    }
  } else if (pen.family == PenaltyFamily::FGL) {
    for (int k = 1; k < k_count; ++k) {
      value += pen.lambda2 * l1_offdiag(theta[k] - theta[k - 1]);
    }
  }
  return value;
}

double objective(const CovarianceSet& cov, const Penalty& pen, const MatrixList& theta,
                 const MatrixList& lowrank) {
  const int k_count = cov.instances();
  double value = 0.0;
  for (int k = 0; k < k_count; ++k) {
    const Matrix diff =
        lowrank.empty() ? theta[k] : Matrix(theta[k] - lowrank[k]);
    value += -logdet_pd(diff, k) + (cov.matrices[k].cwiseProduct(diff)).sum();
    if (pen.latent && !lowrank.empty()) {
      value += pen.mu1[k] * lowrank[k].trace();
    }
  }
  return value + penalty_value(pen, theta);
}

}  // namespace gglopt
