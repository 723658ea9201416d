#include "fac/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fac {

QrPivotResult qr_column_pivot(const Matrix& a) {
  if (a.rows() < 1 || a.cols() < 1) throw NonFiniteInput("empty matrix");
  if (!a.allFinite()) throw NonFiniteInput("matrix contains NaN/Inf");

  const Eigen::Index n = a.rows();
  const Eigen::Index p = a.cols();
  const Eigen::Index t = std::min(n, p);

  Matrix r = a;
  std::vector<int> perm(p);
  std::iota(perm.begin(), perm.end(), 0);

  std::vector<Vector> reflectors;
  reflectors.reserve(t);

  for (Eigen::Index k = 0; k < t; ++k) {
    // Greedy pivot: remaining column of largest norm, lowest original
    // index on exact ties.
    Eigen::Index best = k;
    double best_norm2 = r.col(k).tail(n - k).squaredNorm();
    for (Eigen::Index j = k + 1; j < p; ++j) {
      const double n2 = r.col(j).tail(n - k).squaredNorm();
      if (n2 > best_norm2 || (n2 == best_norm2 && perm[j] < perm[best])) {
        best = j;
        best_norm2 = n2;
      }
    }
    if (best != k) {
      r.col(k).swap(r.col(best));
      std::swap(perm[k], perm[best]);
    }

    Vector x = r.col(k).tail(n - k);
    const double xnorm = x.norm();
    if (xnorm == 0.0) {
      reflectors.emplace_back(Vector::Zero(n - k));
      continue;
    }
    const double alpha = x(0) >= 0.0 ? -xnorm : xnorm;
    Vector v = x;
    v(0) -= alpha;
    const double vnorm = v.norm();
    if (vnorm > 0.0) {
      v /= vnorm;
      r.block(k, k, n - k, p - k).noalias() -=
          2.0 * v * (v.transpose() * r.block(k, k, n - k, p - k));
    }
    reflectors.push_back(std::move(v));
    r(k, k) = alpha;
    if (k + 1 < n) r.col(k).tail(n - k - 1).setZero();
  }

  // Q = H_0 H_1 ... H_{t-1}, accumulated by applying reflectors to I
  // in reverse order.
  Matrix q = Matrix::Identity(n, n);
  for (Eigen::Index k = t - 1; k >= 0; --k) {
    const Vector& v = reflectors[k];
    if (v.size() == 0 || v.squaredNorm() == 0.0) continue;
    q.block(k, 0, n - k, n).noalias() -=
        2.0 * v * (v.transpose() * q.block(k, 0, n - k, n));
  }

  return {std::move(q), std::move(r), std::move(perm)};
}

DimensionSelection find_important_dimensions(const Matrix& omega, double nu) {
  if (omega.rows() < 2) throw NonFiniteInput("rollout needs at least 2 rows");
  if (!omega.allFinite()) throw NonFiniteInput("rollout contains NaN/Inf");
  if (!(nu > 0.0 && nu < 1.0)) throw DomainError("nu must lie in (0,1)");

  Matrix centered = omega.rowwise() - omega.colwise().mean();
  // Relative tolerance: exact-constant columns leave rounding residue of
  // order eps * |omega| after centering.
  const double scale = std::max(1.0, omega.cwiseAbs().maxCoeff());
  if (centered.colwise().norm().maxCoeff() <= 1e-12 * scale)
    throw DegenerateRollout("all rollout columns are constant");

  const QrPivotResult qr = qr_column_pivot(centered);
  const Eigen::Index t = std::min(centered.rows(), centered.cols());

  DimensionSelection sel;
  const double top = std::abs(qr.r(0, 0));
  for (Eigen::Index i = 0; i < t; ++i) {
    const double piv = std::abs(qr.r(i, i));
    if (i == 0 || piv >= nu * top) {
      sel.kappa.push_back(qr.perm[i]);
      sel.pivots.push_back(piv);
    }
  }
  return sel;
}

}  // namespace fac
