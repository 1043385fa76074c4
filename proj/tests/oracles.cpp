#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "core/prox.hpp"

namespace testoracle {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRatio = 0.381966011250105;  // 2 - golden ratio

// Golden-section refinement of a bracketing triple a < b < c with
// f(b) <= min(f(a), f(c)). Probes the larger subinterval, keeps the stretch
// a unimodal minimum must lie in. Tolerates +inf at the interval ends.
double triple_golden(const ScalarFn& f, double a, double b, double c, double fb, double tol) {
  for (int it = 0; it < 300 && (c - a) > tol; ++it) {
    const bool probe_left = (b - a) > (c - b);
    const double x = probe_left ? b - kRatio * (b - a) : b + kRatio * (c - b);
    const double fx = f(x);
    if (fx < fb) {
      if (x < b) {
        c = b;
      } else {
        a = b;
      }
      b = x;
      fb = fx;
    } else {
      if (x < b) {
        a = x;
      } else {
        c = x;
      }
    }
  }
  return b;
}

// Root of a nondecreasing function with g(lo) < 0 <= g(hi). Bisection uses
// sign information only, so it keeps full floating-point precision where
// function-value comparisons flatten out near a minimum.
double bisect_increasing(const ScalarFn& g, double lo, double hi) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double golden_min(const ScalarFn& f, double lo, double hi, double tol) {
  double b = lo + 0.5 * (hi - lo);
  double fb = f(b);
  for (const double frac : {0.25, 0.75}) {
    const double x = lo + frac * (hi - lo);
    const double fx = f(x);
    if (fx < fb) {
      b = x;
      fb = fx;
    }
  }
  return triple_golden(f, lo, b, hi, fb, tol);
}

double line_min(const ScalarFn& f, double x0, double step, double tol) {
  double b = x0;
  double fb = f(b);
  double s = step;
  double a = b - s;
  double c = b + s;
  double fa = f(a);
  double fc = f(c);
  for (int it = 0; it < 200 && (fa < fb || fc < fb); ++it) {
    if (fa < fb) {
      c = b;
      fc = fb;
      b = a;
      fb = fa;
      s *= 2.0;
      a = b - s;
      fa = f(a);
    } else {
      a = b;
      fa = fb;
      b = c;
      fb = fc;
      s *= 2.0;
      c = b + s;
      fc = f(c);
    }
  }
  return triple_golden(f, a, b, c, fb, tol);
}

double shrink_scalar_oracle(double v, double tau) {
  const double span = std::abs(v) + tau + 1.0;
  const auto g = [&](double x) {
    const double sign = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
    return x - v + tau * sign;
  };
  return bisect_increasing(g, -span, span);
}

Vector shrink_qp(const Vector& v, double l1, double tv, double l2) {
  const int n = static_cast<int>(v.size());
  const int m = n > 1 ? n - 1 : 0;
  Vector u = Vector::Zero(n);
  Vector w = Vector::Zero(m);
  Vector z = Vector::Zero(n);

  // (D^T w)_i = w_{i-1} - w_i with out-of-range terms zero, where
  // (D x)_j = x_{j+1} - x_j.
  const auto dt_w = [&](int i) {
    double r = 0.0;
    if (i > 0) r += w[i - 1];
    if (i < m) r -= w[i];
    return r;
  };

  for (int sweep = 0; sweep < 500000; ++sweep) {
    double change = 0.0;

    if (l1 > 0.0) {
      for (int i = 0; i < n; ++i) {
        const double r = v[i] - z[i] - dt_w(i);
        const double next = std::clamp(r, -l1, l1);
        change = std::max(change, std::abs(next - u[i]));
        u[i] = next;
      }
    }

    if (tv > 0.0 && m > 0) {
      Vector e(n);
      for (int i = 0; i < n; ++i) e[i] = v[i] - u[i] - z[i] - dt_w(i);
      for (int j = 0; j < m; ++j) {
        // Exact minimization over w_j of (1/2)||e + old contribution||^2:
        // the coordinate Hessian is 2, the gradient is e_j - e_{j+1}.
        const double next = std::clamp(w[j] - 0.5 * (e[j] - e[j + 1]), -tv, tv);
        const double delta = next - w[j];
        if (delta != 0.0) {
          e[j] += delta;
          e[j + 1] -= delta;
          w[j] = next;
          change = std::max(change, std::abs(delta));
        }
      }
    }

    if (l2 > 0.0) {
      Vector r(n);
      for (int i = 0; i < n; ++i) r[i] = v[i] - u[i] - dt_w(i);
      const double norm = r.norm();
      const Vector next = norm <= l2 ? r : Vector(r * (l2 / norm));
      change = std::max(change, (next - z).cwiseAbs().maxCoeff());
      z = next;
    }

    if (change < 1e-15) break;
  }

  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = v[i] - u[i] - z[i] - dt_w(i);
  return x;
}

void jacobi_eigensymm(const Matrix& a_in, Vector& values, Matrix& vectors) {
  const int n = static_cast<int>(a_in.rows());
  Matrix a = (a_in + a_in.transpose()) / 2.0;
  Matrix v = Matrix::Identity(n, n);
  const double scale = std::max(1.0, a.norm());

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (std::sqrt(2.0 * off) <= 1e-14 * scale) break;

    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-17 * scale) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t =
            (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(tau * tau + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });
  values.resize(n);
  vectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    values[k] = a(order[k], order[k]);
    vectors.col(k) = v.col(order[k]);
  }
}

Matrix logdet_prox_oracle(const Matrix& a, double beta) {
  Vector d;
  Matrix q;
  jacobi_eigensymm(a, d, q);
  Vector x(d.size());
  for (int i = 0; i < d.size(); ++i) {
    const double di = d[i];
    // Stationarity of -beta log t + (t - d)^2/2 on t > 0: t - d - beta/t = 0,
    // strictly increasing, so bisect its sign change.
    const auto g = [&](double t) { return t - di - beta / t; };
    double hi = std::abs(di) + 2.0 * std::sqrt(beta) + 2.0;
    while (g(hi) <= 0.0) hi *= 2.0;
    x[i] = bisect_increasing(g, std::min(1e-12, 1e-6 * hi), hi);
  }
  return q * x.asDiagonal() * q.transpose();
}

Matrix nuclear_prox_oracle(const Matrix& a, double tau) {
  Vector d;
  Matrix q;
  jacobi_eigensymm(a, d, q);
  Vector x(d.size());
  for (int i = 0; i < d.size(); ++i) x[i] = std::max(d[i] - tau, 0.0);
  return q * x.asDiagonal() * q.transpose();
}

namespace {

int uf_find(std::vector<int>& parent, int i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

}  // namespace

std::vector<int> union_find_components(const BoolMatrix& adjacency) {
  const int n = static_cast<int>(adjacency.rows());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!adjacency(i, j)) continue;
      const int ri = uf_find(parent, i);
      const int rj = uf_find(parent, j);
      if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
    }
  }
  std::vector<int> labels(n, -1);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    const int root = uf_find(parent, i);
    if (labels[root] < 0) labels[root] = next++;
    labels[i] = labels[root];
  }
  return labels;
}

namespace {

double smooth_objective(const gglopt::CovarianceSet& cov, const MatrixList& theta) {
  double f = 0.0;
  for (std::size_t k = 0; k < theta.size(); ++k) {
    const Eigen::LLT<Matrix> llt(theta[k]);
    if (llt.info() != Eigen::Success) return kInf;
    double logdet = 0.0;
    const auto& l = llt.matrixLLT();
    for (int i = 0; i < theta[k].rows(); ++i) logdet += std::log(l(i, i));
    f += -2.0 * logdet + (cov.matrices[k].array() * theta[k].array()).sum();
  }
  return f;
}

double penalty_objective(const gglopt::Penalty& pen, const MatrixList& theta) {
  const int kc = static_cast<int>(theta.size());
  const int p = static_cast<int>(theta[0].rows());
  double l1_sum = 0.0;
  double extra = 0.0;
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      if (i == j) continue;
      double sq = 0.0;
      for (int k = 0; k < kc; ++k) {
        const double t = theta[k](i, j);
        l1_sum += std::abs(t);
        sq += t * t;
        if (pen.family == gglopt::PenaltyFamily::FGL && k > 0)
          extra += std::abs(t - theta[k - 1](i, j));
      }
      if (pen.family == gglopt::PenaltyFamily::GGL) extra += std::sqrt(sq);
    }
  }
  const double l2 = pen.family == gglopt::PenaltyFamily::SGL ? 0.0 : pen.lambda2;
  return pen.lambda1 * l1_sum + l2 * extra;
}

MatrixList prox_gradient_step(const MatrixList& theta, const MatrixList& grad, double step,
                              const gglopt::Penalty& pen) {
  const int kc = static_cast<int>(theta.size());
  const int p = static_cast<int>(theta[0].rows());
  MatrixList cand(kc, Matrix(p, p));
  for (int k = 0; k < kc; ++k)
    for (int i = 0; i < p; ++i) cand[k](i, i) = theta[k](i, i) - step * grad[k](i, i);
  Vector g(kc);
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      for (int k = 0; k < kc; ++k) g[k] = theta[k](i, j) - step * grad[k](i, j);
      Vector shrunk;
      switch (pen.family) {
        case gglopt::PenaltyFamily::SGL:
          shrunk = g;
          for (int k = 0; k < kc; ++k)
            shrunk[k] = gglopt::soft_threshold(g[k], step * pen.lambda1);
          break;
        case gglopt::PenaltyFamily::GGL:
          shrunk = gglopt::prox_sparse_group(g, step * pen.lambda1, step * pen.lambda2);
          break;
        case gglopt::PenaltyFamily::FGL:
          shrunk = gglopt::prox_fused_l1(g, step * pen.lambda1, step * pen.lambda2);
          break;
      }
      for (int k = 0; k < kc; ++k) {
        cand[k](i, j) = shrunk[k];
        cand[k](j, i) = shrunk[k];
      }
    }
  }
  return cand;
}

}  // namespace

double proximal_gradient_objective(const gglopt::CovarianceSet& cov, const gglopt::Penalty& pen,
                                   int max_iter, double rel_tol, MatrixList* theta_out) {
  const int kc = cov.instances();
  const int p = cov.dim();
  MatrixList theta(kc, Matrix::Identity(p, p));
  double step = 1.0;
  double obj = smooth_objective(cov, theta) + penalty_objective(pen, theta);
  int stable = 0;

  for (int it = 0; it < max_iter; ++it) {
    MatrixList grad(kc);
    for (int k = 0; k < kc; ++k) {
      const Eigen::LLT<Matrix> llt(theta[k]);
      grad[k] = cov.matrices[k] - llt.solve(Matrix::Identity(p, p));
    }
    const double fs = smooth_objective(cov, theta);

    MatrixList cand;
    double fc = kInf;
    while (step > 1e-18) {
      cand = prox_gradient_step(theta, grad, step, pen);
      fc = smooth_objective(cov, cand);
      if (std::isfinite(fc)) {
        double linear = 0.0;
        double dist = 0.0;
        for (int k = 0; k < kc; ++k) {
          linear += (grad[k].array() * (cand[k] - theta[k]).array()).sum();
          dist += (cand[k] - theta[k]).squaredNorm();
        }
        const double bound = fs + linear + dist / (2.0 * step);
        if (fc <= bound + 1e-12 * (1.0 + std::abs(bound))) break;
      }
      step /= 2.0;
    }
    if (!std::isfinite(fc)) break;

    theta = std::move(cand);
    const double next = fc + penalty_objective(pen, theta);
    if (std::abs(next - obj) <= rel_tol * std::max(1.0, std::abs(next))) {
      if (++stable >= 25) {
        obj = next;
        break;
      }
    } else {
      stable = 0;
    }
    obj = next;
    step = std::min(step * 1.25, 1e6);
  }

  if (theta_out) *theta_out = theta;
  return obj;
}

double coordinate_descent_sgl(const Matrix& s, double lambda1, int max_sweeps,
                              Matrix* theta_out) {
  const int p = static_cast<int>(s.rows());
  Matrix t = Matrix::Identity(p, p);

  const auto full = [&](const Matrix& m) {
    const Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success) return kInf;
    double logdet = 0.0;
    const auto& l = llt.matrixLLT();
    for (int i = 0; i < p; ++i) logdet += std::log(l(i, i));
    double off = 0.0;
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j)
        if (i != j) off += std::abs(m(i, j));
    return -2.0 * logdet + (s.array() * m.array()).sum() + lambda1 * off;
  };

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double change = 0.0;
    for (int i = 0; i < p; ++i) {
      for (int j = i; j < p; ++j) {
        const double cur = t(i, j);
        const auto along = [&](double val) {
          Matrix m = t;
          m(i, j) = val;
          m(j, i) = val;
          return full(m);
        };
        const double best = line_min(along, cur, 0.25 * (1.0 + std::abs(cur)), 1e-13);
        if (along(best) < along(cur)) {
          t(i, j) = best;
          t(j, i) = best;
          change = std::max(change, std::abs(best - cur));
        }
      }
    }
    if (change < 1e-14) break;
  }

  if (theta_out) *theta_out = t;
  return full(t);
}

}  // namespace testoracle
