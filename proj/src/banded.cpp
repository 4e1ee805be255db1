#include "skilldecomp/banded.hpp"

#include <cmath>

namespace skilldecomp {

Matrix BandedMatrix::dense() const {
  Matrix out = Matrix::Zero(n_, n_);
  for (int j = 0; j < n_; ++j)
    for (int k = 0; k <= bw_ && j + k < n_; ++k) {
      out(j + k, j) = band_(k, j);
      out(j, j + k) = band_(k, j);
    }
  return out;
}

BandedLDLT::BandedLDLT(const BandedMatrix& m)
    : n_(m.size()), bw_(m.bandwidth()), l_(m.storage()), d_(n_) {
  // In-place banded LDL^T. Column j of l_ ends up holding L(j..j+bw, j).
  for (int j = 0; j < n_; ++j) {
    double dj = l_(0, j);
    int k0 = std::max(0, j - bw_);
    for (int k = k0; k < j; ++k) dj -= l_(j - k, k) * l_(j - k, k) * d_(k);
    d_(j) = dj;
    if (dj == 0.0 || !std::isfinite(dj)) {
      healthy_ = false;
      d_(j) = dj == 0.0 ? 1e-300 : dj;
    }
    int imax = std::min(n_ - 1, j + bw_);
    for (int i = j + 1; i <= imax; ++i) {
      double v = l_(i - j, j);
      int kk0 = std::max(0, i - bw_);
      for (int k = std::max(k0, kk0); k < j; ++k) v -= l_(i - k, k) * l_(j - k, k) * d_(k);
      l_(i - j, j) = v / d_(j);
    }
    l_(0, j) = 1.0;
  }
}

Vector BandedLDLT::solve(const Vector& rhs) const {
  Vector x = rhs;
  for (int j = 0; j < n_; ++j) {
    int imax = std::min(n_ - 1, j + bw_);
    for (int i = j + 1; i <= imax; ++i) x(i) -= l_(i - j, j) * x(j);
  }
  x.array() /= d_.array();
  for (int j = n_ - 1; j >= 0; --j) {
    int imax = std::min(n_ - 1, j + bw_);
    for (int i = j + 1; i <= imax; ++i) x(j) -= l_(i - j, j) * x(i);
  }
  return x;
}

Matrix BandedLDLT::solve(const Matrix& rhs) const {
  Matrix out(rhs.rows(), rhs.cols());
  for (int c = 0; c < rhs.cols(); ++c) out.col(c) = solve(Vector(rhs.col(c)));
  return out;
}

double BandedLDLT::log_abs_det() const {
  double s = 0;
  for (int i = 0; i < n_; ++i) s += std::log(std::abs(d_(i)));
  return s;
}

BandedMatrix BandedLDLT::band_inverse() const {
  BandedMatrix z(n_, bw_);
  auto zget = [&](int r, int c) { return r >= c ? z(r, c) : z(c, r); };
  for (int c = n_ - 1; c >= 0; --c) {
    int rmax = std::min(n_ - 1, c + bw_);
    for (int r = rmax; r > c; --r) {
      double s = 0;
      for (int k = c + 1; k <= rmax; ++k) s += l_(k - c, c) * zget(k, r);
      z.set(r, c, -s);
    }
    double s = 1.0 / d_(c);
    for (int k = c + 1; k <= rmax; ++k) s -= l_(k - c, c) * z(k, c);
    z.set(c, c, s);
  }
  return z;
}

}  // namespace skilldecomp
