#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tqb/error.hpp"

namespace tqb {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Square band matrix in LAPACK general-band layout: column j holds rows
/// max(0, j-ku)..min(n-1, j+kl), preceded by kl spare rows that receive the
/// fill produced by row interchanges during factorization.
template <typename Scalar>
class BandedMatrix {
 public:
  BandedMatrix(int n, int kl, int ku)
      : n_(n), kl_(kl), ku_(ku), ld_(2 * kl + ku + 1),
        ab_(static_cast<std::size_t>(ld_) * static_cast<std::size_t>(n), Scalar(0)) {
    if (n <= 0 || kl < 0 || ku < 0)
      throw Error(Errc::invalid_argument, "band matrix needs n > 0 and kl, ku >= 0");
  }

  int rows() const { return n_; }
  int kl() const { return kl_; }
  int ku() const { return ku_; }
  int leading_dim() const { return ld_; }

  bool in_band(int i, int j) const {
    return i >= 0 && j >= 0 && i < n_ && j < n_ && i - j <= kl_ && j - i <= ku_;
  }

  Scalar operator()(int i, int j) const { return in_band(i, j) ? at(i, j) : Scalar(0); }

  /// Writable reference to a structural band entry.
  Scalar& ref(int i, int j) {
    if (!in_band(i, j))
      throw Error(Errc::dimension_mismatch, "entry (" + std::to_string(i) + ", " +
                                                std::to_string(j) + ") is outside the band");
    return at(i, j);
  }

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> to_dense() const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> d =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n_, n_);
    for (int j = 0; j < n_; ++j)
      for (int i = std::max(0, j - ku_); i <= std::min(n_ - 1, j + kl_); ++i) d(i, j) = at(i, j);
    return d;
  }

  VectorX<Scalar> multiply(const VectorX<Scalar>& x) const {
    if (x.size() != n_) throw Error(Errc::dimension_mismatch, "band product size mismatch");
    VectorX<Scalar> y = VectorX<Scalar>::Zero(n_);
    for (int j = 0; j < n_; ++j)
      for (int i = std::max(0, j - ku_); i <= std::min(n_ - 1, j + kl_); ++i)
        y[i] += at(i, j) * x[j];
    return y;
  }

  Scalar norm_inf() const {
    Scalar best(0);
    for (int i = 0; i < n_; ++i) {
      Scalar row(0);
      for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j)
        row += std::abs(at(i, j));
      best = std::max(best, row);
    }
    return best;
  }

  /// Raw storage; entry (r, j) of the band array sits at data()[r + j*ld].
  const std::vector<Scalar>& storage() const { return ab_; }
  std::vector<Scalar>& storage() { return ab_; }

 private:
  Scalar& at(int i, int j) {
    return ab_[static_cast<std::size_t>(kl_ + ku_ + i - j) +
               static_cast<std::size_t>(j) * static_cast<std::size_t>(ld_)];
  }
  const Scalar& at(int i, int j) const {
    return ab_[static_cast<std::size_t>(kl_ + ku_ + i - j) +
               static_cast<std::size_t>(j) * static_cast<std::size_t>(ld_)];
  }

  int n_;
  int kl_;
  int ku_;
  int ld_;
  std::vector<Scalar> ab_;
};

/// In-band LU with partial pivoting (the gbtf2 scheme). U occupies the
/// top kl+ku+1 band rows, the multipliers of L the bottom kl rows.
template <typename Scalar>
class BandedLU {
 public:
  static constexpr double kPivotFloor = 1e-300;

  explicit BandedLU(BandedMatrix<Scalar> a) : lu_(std::move(a)), pivots_(lu_.rows()) {
    const int n = lu_.rows();
    const int kl = lu_.kl();
    const int kv = lu_.kl() + lu_.ku();
    auto& ab = lu_.storage();
    const std::size_t ld = static_cast<std::size_t>(lu_.leading_dim());
    auto e = [&](int r, int j) -> Scalar& {
      return ab[static_cast<std::size_t>(r) + static_cast<std::size_t>(j) * ld];
    };

    int ju = 0;
    for (int j = 0; j < n; ++j) {
      const int km = std::min(kl, n - 1 - j);
      int p = 0;
      Scalar best = std::abs(e(kv, j));
      for (int i = 1; i <= km; ++i)
        if (std::abs(e(kv + i, j)) > best) {
          best = std::abs(e(kv + i, j));
          p = i;
        }
      pivots_[static_cast<std::size_t>(j)] = j + p;
      if (!(best >= Scalar(kPivotFloor)))
        throw Error(Errc::singular_matrix,
                    "singular matrix: pivot column " + std::to_string(j) + " vanishes");
      ju = std::max(ju, std::min(j + lu_.ku() + p, n - 1));
      if (p != 0)
        for (int c = j; c <= ju; ++c) std::swap(e(kv + p - (c - j), c), e(kv - (c - j), c));
      const Scalar inv = Scalar(1) / e(kv, j);
      for (int i = 1; i <= km; ++i) e(kv + i, j) *= inv;
      for (int c = j + 1; c <= ju; ++c) {
        const Scalar pivot_row = e(kv - (c - j), c);
        if (pivot_row == Scalar(0)) continue;
        for (int i = 1; i <= km; ++i) e(kv + i - (c - j), c) -= e(kv + i, j) * pivot_row;
      }
    }
  }

  int size() const { return lu_.rows(); }

  VectorX<Scalar> solve(VectorX<Scalar> b) const {
    const int n = lu_.rows();
    if (b.size() != n)
      throw Error(Errc::dimension_mismatch, "right-hand side has " + std::to_string(b.size()) +
                                                " entries, expected " + std::to_string(n));
    const int kl = lu_.kl();
    const int kv = lu_.kl() + lu_.ku();
    const auto& ab = lu_.storage();
    const std::size_t ld = static_cast<std::size_t>(lu_.leading_dim());
    auto e = [&](int r, int j) {
      return ab[static_cast<std::size_t>(r) + static_cast<std::size_t>(j) * ld];
    };

    for (int j = 0; j < n; ++j) {
      const int l = pivots_[static_cast<std::size_t>(j)];
      if (l != j) std::swap(b[l], b[j]);
      const int km = std::min(kl, n - 1 - j);
      for (int i = 1; i <= km; ++i) b[j + i] -= e(kv + i, j) * b[j];
    }
    for (int j = n - 1; j >= 0; --j) {
      b[j] /= e(kv, j);
      for (int i = std::max(0, j - kv); i < j; ++i) b[i] -= e(kv + i - j, j) * b[j];
    }
    return b;
  }

  const BandedMatrix<Scalar>& factors() const { return lu_; }
  const std::vector<int>& pivots() const { return pivots_; }

 private:
  BandedMatrix<Scalar> lu_;
  std::vector<int> pivots_;
};

template <typename Scalar>
BandedLU<Scalar> lu_factor(BandedMatrix<Scalar> a) {
  return BandedLU<Scalar>(std::move(a));
}

template <typename Scalar>
VectorX<Scalar> solve(const BandedLU<Scalar>& lu, const VectorX<Scalar>& b) {
  return lu.solve(b);
}

/// Dense Gaussian elimination with partial pivoting; reference solver for the
/// banded path.
template <typename Scalar>
VectorX<Scalar> dense_gauss_solve(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a,
                                  VectorX<Scalar> b) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || b.size() != n)
    throw Error(Errc::dimension_mismatch, "dense solve needs a square system");
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index p = k;
    for (Eigen::Index i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    if (!(std::abs(a(p, k)) >= Scalar(BandedLU<Scalar>::kPivotFloor)))
      throw Error(Errc::singular_matrix, "singular matrix in dense elimination");
    if (p != k) {
      a.row(k).swap(a.row(p));
      std::swap(b[k], b[p]);
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const Scalar factor = a(i, k) / a(k, k);
      a.row(i).tail(n - k) -= factor * a.row(k).tail(n - k);
      b[i] -= factor * b[k];
    }
  }
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    Scalar acc = b[k];
    for (Eigen::Index j = k + 1; j < n; ++j) acc -= a(k, j) * b[j];
    b[k] = acc / a(k, k);
  }
  return b;
}

}  // namespace tqb
