#include "core/prox.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace gglopt {

double soft_threshold(double v, double tau) {
  const double mag = std::abs(v) - tau;
  if (mag <= 0.0) return 0.0;
  return v < 0.0 ? -mag : mag;
}

Vector group_soft_threshold(const Vector& v, double tau) {
  const double norm = v.norm();
  if (norm <= tau) return Vector::Zero(v.size());
  return v * (1.0 - tau / norm);
}

Matrix prox_log_det(const Matrix& a, double beta) {
  const EigenDecomposition ed = decompose_symmetric(a);
  Vector phi(ed.eigenvalues.size());
  for (Eigen::Index i = 0; i < phi.size(); ++i) {
    const double d = ed.eigenvalues[i];
    phi[i] = 0.5 * (d + std::sqrt(d * d + 4.0 * beta));
  }
  return ed.eigenvectors * phi.asDiagonal() * ed.eigenvectors.transpose();
}

// Direct 1-D total variation denoising, following L. Condat, "A direct
// algorithm for 1D total variation denoising" (2013). One forward sweep with
// segment fusion driven by running bounds on the dual variable.
void prox_tv_1d(const double* v, double* out, int n, double tau) {
  if (n <= 0) return;
  if (n == 1 || tau <= 0.0) {
    std::copy(v, v + n, out);
    return;
  }

  int k = 0;       // current sample
  int k0 = 0;      // start of the segment being built
  int kminus = 0;  // last position where the lower dual bound was active
  int kplus = 0;   // last position where the upper dual bound was active
  double vmin = v[0] - tau;  // candidate segment values
  double vmax = v[0] + tau;
  double umin = tau;  // dual accumulators
  double umax = -tau;

  for (;;) {
    while (k == n - 1) {  // right boundary
      if (umin < 0.0) {  // vmin too high: a downward jump ends the segment
        do out[k0++] = vmin; while (k0 <= kminus);
        k = kminus = k0;
        vmin = v[k];
        umin = tau;
        umax = vmin + tau - vmax;
      } else if (umax > 0.0) {  // vmax too low: upward jump
        do out[k0++] = vmax; while (k0 <= kplus);
        k = kplus = k0;
        vmax = v[k];
        umax = -tau;
        umin = vmax - tau - vmin;
      } else {  // tube respected to the end: flush the last segment
        vmin += umin / (k - k0 + 1);
        do out[k0++] = vmin; while (k0 <= k);
        return;
      }
    }
    umin += v[k + 1] - vmin;
    umax += v[k + 1] - vmax;
    if (umin < -tau) {  // lower bound violated: emit segment at vmin
      do out[k0++] = vmin; while (k0 <= kminus);
      k = kminus = kplus = k0;
      vmin = v[k];
      vmax = v[k] + 2.0 * tau;
      umin = tau;
      umax = -tau;
    } else if (umax > tau) {  // upper bound violated: emit segment at vmax
      do out[k0++] = vmax; while (k0 <= kplus);
      k = kminus = kplus = k0;
      vmax = v[k];
      vmin = v[k] - 2.0 * tau;
      umin = tau;
      umax = -tau;
    } else {  // keep growing the segment
      ++k;
      if (umin >= tau) {
        vmin += (umin - tau) / (k - k0 + 1);
        umin = tau;
        kminus = k;
      }
      if (umax <= -tau) {
        vmax += (umax + tau) / (k - k0 + 1);
        umax = -tau;
        kplus = k;
      }
    }
  }
}

Vector prox_tv_1d(const Vector& v, double tau) {
  Vector out(v.size());
  prox_tv_1d(v.data(), out.data(), static_cast<int>(v.size()), tau);
  return out;
}

Vector prox_sparse_group(const Vector& v, double l1, double l2) {
  Vector shrunk(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) shrunk[i] = soft_threshold(v[i], l1);
  return group_soft_threshold(shrunk, l2);
}

Vector prox_fused_l1(const Vector& v, double l1, double l2) {
  Vector fused = prox_tv_1d(v, l2);
  for (Eigen::Index i = 0; i < fused.size(); ++i) fused[i] = soft_threshold(fused[i], l1);
  return fused;
}

Matrix prox_nuclear_psd(const Matrix& a, double tau) {
  const EigenDecomposition ed = decompose_symmetric(a);
  Vector shrunk(ed.eigenvalues.size());
  for (Eigen::Index i = 0; i < shrunk.size(); ++i) {
    shrunk[i] = std::max(ed.eigenvalues[i] - tau, 0.0);
  }
  return ed.eigenvectors * shrunk.asDiagonal() * ed.eigenvectors.transpose();
}

}  // namespace gglopt
