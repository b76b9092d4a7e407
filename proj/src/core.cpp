#include "satsel/core.hpp"

#include <cmath>
#include <unordered_set>

namespace satsel {

RegressorSet::RegressorSet(Matrix rows) : data_(std::move(rows)) {
  if (data_.cols() < 2 || data_.rows() < data_.cols()) {
    throw Error("regressor set requires 2 <= m <= n, got n=" +
                std::to_string(data_.rows()) + " m=" + std::to_string(data_.cols()));
  }
  if (!data_.allFinite()) {
    throw Error("regressor set contains non-finite entries");
  }
}

bool RegressorSet::nonsingular() const {
  return detail::matrix_rank(data_) == m();
}

RegressorSet RegressorSet::gather(std::span<const Index> indices) const {
  return RegressorSet(detail::gather_rows(data_, indices, n()));
}

Subset::Subset(std::vector<Index> indices, Index n) : indices_(std::move(indices)) {
  std::unordered_set<Index> seen;
  seen.reserve(indices_.size());
  for (Index i : indices_) {
    if (i < 0 || i >= n) {
      throw InvalidSubsetError("subset index " + std::to_string(i) +
                               " out of range [0, " + std::to_string(n) + ")");
    }
    if (!seen.insert(i).second) {
      throw InvalidSubsetError("duplicate subset index " + std::to_string(i));
    }
  }
}

InfoMatrix::InfoMatrix(Matrix m) : mat_(std::move(m)) {
  if (mat_.rows() != mat_.cols()) {
    throw Error("information matrix must be square");
  }
  for (Index i = 0; i < mat_.rows(); ++i) {
    for (Index j = i + 1; j < mat_.cols(); ++j) {
      const double a = mat_(i, j), b = mat_(j, i);
      if (std::abs(a - b) > 1e-10 * (1.0 + std::abs(a))) {
        throw Error("information matrix is not symmetric at (" +
                    std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(mat_, Eigen::EigenvaluesOnly);
  const double lmax = es.eigenvalues().maxCoeff();
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin < -1e-9 * std::max(lmax, 0.0)) {
    throw Error("information matrix is not positive semidefinite");
  }
}

InfoMatrix info_matrix(const RegressorSet& set, const Subset& subset) {
  Matrix m = Matrix::Zero(set.m(), set.m());
  for (Index i : subset) {
    if (i < 0 || i >= set.n()) {
      throw InvalidSubsetError("subset index " + std::to_string(i) + " out of range");
    }
    m.selfadjointView<Eigen::Lower>().rankUpdate(set.data().row(i).transpose());
  }
  m.triangularView<Eigen::StrictlyUpper>() = m.transpose();
  return InfoMatrix(std::move(m));
}

double d_criterion(const InfoMatrix& m) { return detail::d_value(m.matrix()); }

double a_criterion(const InfoMatrix& m) { return detail::a_value(m.matrix()); }

Vector leverage_scores(const RegressorSet& set) {
  const Matrix& f = set.data();
  Matrix m = Matrix::Zero(set.m(), set.m());
  m.selfadjointView<Eigen::Lower>().rankUpdate(f.transpose());
  m.triangularView<Eigen::StrictlyUpper>() = m.transpose();
  if (detail::is_singular(m)) {
    throw SingularUniverseError("leverage scores need a nonsingular universe");
  }
  const Eigen::LLT<Matrix> llt(m);
  // h_i = ||L^{-1} f_i||^2
  Matrix x = f.transpose();
  llt.matrixL().solveInPlace(x);
  return x.colwise().squaredNorm().transpose();
}

Index orthogonal_rank(const RegressorSet& set, const Subset& subset) {
  if (subset.empty()) return 0;
  const Matrix rows = detail::gather_rows(set.data(), subset.indices(), set.n());
  return detail::matrix_rank(rows);
}

namespace detail {

namespace {

// Log-determinant from an LDLT; returns false when a pivot is not positive.
bool log_det_psd(const Matrix& m, double& log_det) {
  const Eigen::LDLT<Matrix> ldlt(m);
  if (ldlt.info() != Eigen::Success) return false;
  log_det = 0.0;
  for (Index i = 0; i < m.rows(); ++i) {
    const double d = ldlt.vectorD()(i);
    if (d <= 0.0) return false;
    log_det += std::log(d);
  }
  return true;
}

bool singular_by_det_rule(double log_det, double trace, Index m) {
  if (trace <= 0.0) return true;
  const double scale = trace / static_cast<double>(m);
  return log_det < std::log(kDetTolFactor) + static_cast<double>(m) * std::log(scale);
}

}  // namespace

double d_value(const Matrix& m) {
  double log_det = 0.0;
  if (!log_det_psd(m, log_det)) return 0.0;
  if (singular_by_det_rule(log_det, m.trace(), m.rows())) return 0.0;
  return std::exp(log_det / static_cast<double>(m.rows()));
}

double a_value(const Matrix& m) {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  double log_det = 0.0, inv_sum = 0.0;
  for (Index i = 0; i < m.rows(); ++i) {
    const double lambda = es.eigenvalues()(i);
    if (lambda <= 0.0) return 0.0;
    log_det += std::log(lambda);
    inv_sum += 1.0 / lambda;
  }
  if (singular_by_det_rule(log_det, m.trace(), m.rows())) return 0.0;
  return 1.0 / inv_sum;
}

bool is_singular(const Matrix& m) {
  double log_det = 0.0;
  if (!log_det_psd(m, log_det)) return true;
  return singular_by_det_rule(log_det, m.trace(), m.rows());
}

Index matrix_rank(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  qr.setThreshold(kRankPivotTol);
  return qr.rank();
}

Matrix gather_rows(const Matrix& data, std::span<const Index> indices, Index n) {
  Matrix out(static_cast<Index>(indices.size()), data.cols());
  Index r = 0;
  for (Index i : indices) {
    if (i < 0 || i >= n) {
      throw InvalidSubsetError("row index " + std::to_string(i) + " out of range");
    }
    out.row(r++) = data.row(i);
  }
  return out;
}

double criterion_value(const Matrix& m, Criterion c) {
  return c == Criterion::D ? d_value(m) : a_value(m);
}

}  // namespace detail

}  // namespace satsel
