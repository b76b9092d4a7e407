// Test-only reference computations, kept independent of the library's
// evaluation paths: determinants go through LU here (the library uses
// log-pivot LDLT), projections through Householder QR (the library uses
// successive subtraction), and inverses are formed explicitly.
#ifndef SATSEL_TESTS_ORACLES_HPP
#define SATSEL_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "satsel/core.hpp"
#include "satsel/rng.hpp"

namespace oracles {

using satsel::Index;
using satsel::Matrix;
using satsel::Vector;

inline Matrix rows_of(const Matrix& f, const std::vector<Index>& idx) {
  Matrix out(static_cast<Index>(idx.size()), f.cols());
  for (Index i = 0; i < out.rows(); ++i) out.row(i) = f.row(idx[static_cast<std::size_t>(i)]);
  return out;
}

// phi_D via |det F(S)|^{2/m} for |S| = m, else det(F'F)^{1/m} via LU.
inline double phi_d(const Matrix& f, const std::vector<Index>& idx) {
  const Matrix fs = rows_of(f, idx);
  const auto m = static_cast<double>(f.cols());
  if (fs.rows() == f.cols()) {
    const double det = Eigen::FullPivLU<Matrix>(fs).determinant();
    return std::pow(std::abs(det), 2.0 / m);
  }
  const Matrix info = fs.transpose() * fs;
  const double det = Eigen::FullPivLU<Matrix>(info).determinant();
  return det <= 0.0 ? 0.0 : std::pow(det, 1.0 / m);
}

// phi_A from the raw eigenvalue formula; 0 when any eigenvalue is tiny.
inline double phi_a(const Matrix& f, const std::vector<Index>& idx) {
  const Matrix fs = rows_of(f, idx);
  const Matrix info = fs.transpose() * fs;
  const Eigen::SelfAdjointEigenSolver<Matrix> es(info, Eigen::EigenvaluesOnly);
  double inv_sum = 0.0;
  for (Index i = 0; i < info.rows(); ++i) {
    const double lambda = es.eigenvalues()(i);
    if (lambda < 1e-12 * es.eigenvalues().maxCoeff()) return 0.0;
    inv_sum += 1.0 / lambda;
  }
  return 1.0 / inv_sum;
}

// Exhaustive D-optimal s-subset by recursive enumeration.
inline double brute_force_phi_d(const Matrix& f, Index s) {
  std::vector<Index> comb;
  double best = 0.0;
  const std::function<void(Index)> rec = [&](Index from) {
    if (static_cast<Index>(comb.size()) == s) {
      best = std::max(best, phi_d(f, comb));
      return;
    }
    for (Index i = from; i <= f.rows() - (s - static_cast<Index>(comb.size())); ++i) {
      comb.push_back(i);
      rec(i + 1);
      comb.pop_back();
    }
  };
  rec(0);
  return best;
}

// Squared norms of every row's projection onto the orthogonal
// complement of span{rows of f at `selected`}, via a QR basis.
inline Vector projected_sq_norms(const Matrix& f, const std::vector<Index>& selected) {
  const Index n = f.rows();
  Vector out(n);
  if (selected.empty()) {
    out = f.rowwise().squaredNorm();
    return out;
  }
  const Matrix sel = rows_of(f, selected).transpose();  // m x j
  const Eigen::HouseholderQR<Matrix> qr(sel);
  const Matrix q = Matrix(qr.householderQ())
                       .leftCols(static_cast<Index>(selected.size()));
  for (Index i = 0; i < n; ++i) {
    const Vector r = f.row(i).transpose() - q * (q.transpose() * f.row(i).transpose());
    out(i) = r.squaredNorm();
  }
  return out;
}

// Determinant route for the RGH step: argmax over remaining rows of
// det(M(S) + f f' + delta I), determinant by LU; lowest index on ties.
inline Index rgh_pick_by_det(const Matrix& f, const std::vector<Index>& selected,
                             double delta) {
  const Index m = f.cols();
  Matrix base = delta * Matrix::Identity(m, m);
  for (Index i : selected) base += f.row(i).transpose() * f.row(i);
  Index best = -1;
  double best_det = -1.0;
  std::vector<char> used(static_cast<std::size_t>(f.rows()), 0);
  for (Index i : selected) used[static_cast<std::size_t>(i)] = 1;
  for (Index i = 0; i < f.rows(); ++i) {
    if (used[static_cast<std::size_t>(i)]) continue;
    const Matrix cand = base + f.row(i).transpose() * f.row(i);
    const double det = Eigen::FullPivLU<Matrix>(cand).determinant();
    if (best < 0 || det > best_det) {
      best = i;
      best_det = det;
    }
  }
  return best;
}

// Eigenvalue route for the A-optimal greedy step: argmax over remaining
// rows of (sum over the r+1 largest eigenvalues of 1/lambda)^{-1},
// where r = rank(M(S)).
inline Index a_opt_pick_by_eigen(const Matrix& f, const std::vector<Index>& selected) {
  const Index m = f.cols();
  Matrix base = Matrix::Zero(m, m);
  for (Index i : selected) base += f.row(i).transpose() * f.row(i);
  const Eigen::SelfAdjointEigenSolver<Matrix> es0(base, Eigen::EigenvaluesOnly);
  const double lmax = std::max(es0.eigenvalues().maxCoeff(), 0.0);
  Index rank = 0;
  for (Index i = 0; i < m; ++i) {
    if (es0.eigenvalues()(i) > 1e-12 * lmax && es0.eigenvalues()(i) > 0.0) ++rank;
  }
  std::vector<char> used(static_cast<std::size_t>(f.rows()), 0);
  for (Index i : selected) used[static_cast<std::size_t>(i)] = 1;
  Index best = -1;
  double best_value = -1.0;
  for (Index i = 0; i < f.rows(); ++i) {
    if (used[static_cast<std::size_t>(i)]) continue;
    const Matrix cand = base + f.row(i).transpose() * f.row(i);
    const Eigen::SelfAdjointEigenSolver<Matrix> es(cand, Eigen::EigenvaluesOnly);
    // eigenvalues ascending; take the rank+1 largest
    double inv_sum = 0.0;
    bool positive = true;
    for (Index t = 0; t <= rank; ++t) {
      const double lambda = es.eigenvalues()(m - 1 - t);
      if (lambda <= 0.0) {
        positive = false;
        break;
      }
      inv_sum += 1.0 / lambda;
    }
    const double value = positive ? 1.0 / inv_sum : 0.0;
    if (best < 0 || value > best_value) {
      best = i;
      best_value = value;
    }
  }
  return best;
}

// Leverage scores through an explicit inverse.
inline Vector leverages_by_inverse(const Matrix& f) {
  const Matrix inv = (f.transpose() * f).inverse();
  Vector out(f.rows());
  for (Index i = 0; i < f.rows(); ++i) out(i) = f.row(i) * inv * f.row(i).transpose();
  return out;
}

// Kumar-Yildirim efficiency bound pi / (4 m Gamma(1+m/2)^{2/m}).
inline double kym_bound(Index m) {
  const auto md = static_cast<double>(m);
  return std::numbers::pi /
         (4.0 * md * std::exp((2.0 / md) * std::lgamma(1.0 + md / 2.0)));
}

inline Matrix gaussian_rows(Index n, Index m, satsel::Rng& rng) {
  Matrix f(n, m);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < m; ++j) f(i, j) = rng.normal();
  }
  return f;
}

}  // namespace oracles

#endif
