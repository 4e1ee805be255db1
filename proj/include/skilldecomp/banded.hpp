#pragma once

#include <Eigen/Core>

#include "skilldecomp/types.hpp"

namespace skilldecomp {

/// Symmetric banded matrix, lower band stored column-major:
/// entry (j + k, j) lives at band(k, j) for 0 <= k <= bandwidth.
class BandedMatrix {
 public:
  BandedMatrix() = default;
  BandedMatrix(int n, int bandwidth)
      : n_(n), bw_(bandwidth), band_(Matrix::Zero(bandwidth + 1, n)) {}

  int size() const { return n_; }
  int bandwidth() const { return bw_; }

  double operator()(int row, int col) const {
    if (row < col) std::swap(row, col);
    int k = row - col;
    return k > bw_ ? 0.0 : band_(k, col);
  }
  void set(int row, int col, double v) {
    if (row < col) std::swap(row, col);
    band_(row - col, col) = v;
  }
  void add(int row, int col, double v) {
    if (row < col) std::swap(row, col);
    band_(row - col, col) += v;
  }

  Matrix dense() const;

  Matrix& storage() { return band_; }
  const Matrix& storage() const { return band_; }

 private:
  int n_ = 0;
  int bw_ = 0;
  Matrix band_;
};

/// LDL^T factorization of a symmetric banded matrix without pivoting.
/// Valid for positive definite and symmetric quasi-definite matrices; both
/// arise here (penalized normal equations and their saddle-point
/// augmentations). O(n * bandwidth^2).
class BandedLDLT {
 public:
  explicit BandedLDLT(const BandedMatrix& m);

  bool healthy() const { return healthy_; }

  Vector solve(const Vector& rhs) const;
  Matrix solve(const Matrix& rhs) const;

  /// log |det M| = sum log |d_i|.
  double log_abs_det() const;

  /// Entries of M^{-1} restricted to the band of M (Takahashi equations).
  BandedMatrix band_inverse() const;

  const Vector& diag() const { return d_; }

 private:
  int n_ = 0;
  int bw_ = 0;
  Matrix l_;   // unit lower band, same layout as BandedMatrix
  Vector d_;
  bool healthy_ = true;
};

}  // namespace skilldecomp
