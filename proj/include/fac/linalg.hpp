#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fac/errors.hpp"

namespace fac {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Column-pivoted QR factorization A[:, perm] = q * r.
struct QrPivotResult {
  Matrix q;                  // rows x rows, orthonormal
  Matrix r;                  // rows x cols, upper trapezoidal
  std::vector<int> perm;     // column permutation, perm[i] = original index
                             // of the i-th pivoted column
};

/// Significant state dimensions chosen from the initial rollout.
struct DimensionSelection {
  std::vector<int> kappa;    // original state-dimension indices, pivot order
  std::vector<double> pivots;  // |diag(R)| values, non-increasing
};

/// Rank-revealing QR by Householder reflections with greedy column pivoting
/// on remaining column norms (Businger-Golub). Ties in pivot magnitude break
/// toward the lower original column index.
QrPivotResult qr_column_pivot(const Matrix& a);

/// Mean-centers the columns of omega, factors with qr_column_pivot, and keeps
/// the original indices of pivoted columns whose |diag(R)| is at least
/// nu times the largest. Always keeps at least the top pivot.
///
/// Indices are returned in pivot order, i.e. the permutation is read as a
/// map from pivot position to original state dimension.
DimensionSelection find_important_dimensions(const Matrix& omega, double nu);

}  // namespace fac
