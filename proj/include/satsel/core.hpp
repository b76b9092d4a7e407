#ifndef SATSEL_CORE_HPP
#define SATSEL_CORE_HPP

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "satsel/errors.hpp"

namespace satsel {

using Index = Eigen::Index;
// Row-major storage: regressors are rows, and every data sweep in the
// selection loops walks them row by row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Optimality criterion: D (det^{1/m}) or A (inverse sum of inverse eigenvalues).
enum class Criterion { D, A };

/// The universe of n regressors f_1..f_n in R^m, held as the rows of an
/// n x m dense matrix. Immutable after construction.
class RegressorSet {
public:
  /// Takes the n x m row matrix; requires 2 <= m <= n and finite entries.
  explicit RegressorSet(Matrix rows);

  Index n() const noexcept { return data_.rows(); }
  Index m() const noexcept { return data_.cols(); }
  const Matrix& data() const noexcept { return data_; }
  Eigen::RowVectorXd row(Index i) const { return data_.row(i); }

  /// True when the rows span R^m. Computed from a rank-revealing
  /// decomposition on every call, O(n m^2); never assumed.
  bool nonsingular() const;

  /// Sub-universe formed by the given rows, in the given order.
  RegressorSet gather(std::span<const Index> indices) const;

private:
  Matrix data_;
};

/// An ordered list of distinct row indices into a RegressorSet. The
/// order records selection order.
class Subset {
public:
  Subset() = default;
  /// Validates distinctness and range against a universe of n rows.
  Subset(std::vector<Index> indices, Index n);

  Index size() const noexcept { return static_cast<Index>(indices_.size()); }
  bool empty() const noexcept { return indices_.empty(); }
  const std::vector<Index>& indices() const noexcept { return indices_; }
  Index operator[](Index i) const { return indices_[static_cast<std::size_t>(i)]; }

  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

private:
  std::vector<Index> indices_;
};

/// Symmetric positive-semidefinite m x m information matrix M(S).
/// Construction validates symmetry (1e-10 relative) and eigenvalue
/// nonnegativity (down to -1e-9 * lambda_max).
class InfoMatrix {
public:
  explicit InfoMatrix(Matrix m);

  Index dim() const noexcept { return mat_.rows(); }
  const Matrix& matrix() const noexcept { return mat_; }

private:
  Matrix mat_;
};

/// M(S) = sum of f f' over the subset; the zero matrix for an empty S.
InfoMatrix info_matrix(const RegressorSet& set, const Subset& subset);

/// det^{1/m}(M), exactly 0 when M is singular under the scale-relative
/// tolerance det(M) < 1e-12 * (trace(M)/m)^m.
double d_criterion(const InfoMatrix& m);

/// (sum of 1/lambda_i)^{-1}, 0 for singular M under the same tolerance.
double a_criterion(const InfoMatrix& m);

/// Leverage scores h_i = f_i' M(F)^{-1} f_i; they sum to m.
/// Throws SingularUniverseError when M(F) is singular.
Vector leverage_scores(const RegressorSet& set);

/// Numerical rank of the |S| x m matrix F(S) from a column-pivoted QR.
Index orthogonal_rank(const RegressorSet& set, const Subset& subset);

namespace detail {

// Relative pivot threshold for rank decisions. Chosen so that universes
// with condition numbers up to ~1e10 still count as full rank while
// round-off from exact linear dependence (~1e-16 relative) does not.
inline constexpr double kRankPivotTol = 1e-12;

// det(M) < kDetTolFactor * (trace(M)/m)^m declares M singular.
inline constexpr double kDetTolFactor = 1e-12;

// Criterion values on raw matrices; used by hot loops that build M(S)
// without the InfoMatrix validation pass.
double d_value(const Matrix& m);
double a_value(const Matrix& m);
bool is_singular(const Matrix& m);

// Numerical rank of an arbitrary rows x cols matrix.
Index matrix_rank(const Matrix& a);

// Rows of `data` at `indices`, in order; validates the index list.
Matrix gather_rows(const Matrix& data, std::span<const Index> indices, Index n);

double criterion_value(const Matrix& m, Criterion c);

}  // namespace detail

}  // namespace satsel

#endif
