#include "satsel/heuristics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace satsel {

namespace detail {

namespace {

// Row-major working storage for the projection loops: every hot pass is
// row-centric, so one fused sweep touches each cache line once.
using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowsRef = Eigen::Map<RowMatrix>;

// Working copy of the rows in a capacity-keeping buffer; plain Eigen
// members would reallocate (and page-fault inside timed regions)
// whenever consecutive calls alternate between instance sizes.
RowsRef scratch_copy(const Matrix& rows_in) {
  thread_local std::vector<double> buffer;
  const auto need = static_cast<std::size_t>(rows_in.size());
  if (buffer.size() < need) buffer.resize(need);
  RowsRef rows(buffer.data(), rows_in.rows(), rows_in.cols());
  rows = rows_in;
  return rows;
}

// argmax over unpicked entries; strict > keeps the lowest index on ties.
Index masked_argmax(const Vector& v, const std::vector<char>& picked) {
  Index best = -1;
  double best_value = 0.0;
  for (Index i = 0; i < v.size(); ++i) {
    if (picked[static_cast<std::size_t>(i)]) continue;
    if (best < 0 || v(i) > best_value) {
      best = i;
      best_value = v(i);
    }
  }
  return best;
}

// When every incremental norm is down at round-off level, replace them
// with norms recomputed from the projected rows so the span decision
// sees eps^2-level residue instead of eps-level recurrence noise.
Index verified_argmax(Vector& v2, const RowsRef& rows, double scale,
                      const std::vector<char>& picked) {
  Index best = masked_argmax(v2, picked);
  if (best >= 0 && v2(best) <= kSpanRecheckTol * scale) {
    for (Index i = 0; i < v2.size(); ++i) {
      if (!picked[static_cast<std::size_t>(i)]) v2(i) = rows.row(i).squaredNorm();
    }
    best = masked_argmax(v2, picked);
  }
  return best;
}

// One fused sweep of the Gram-Schmidt update against the chosen row:
// scalar products, row updates, and the norm recurrence together.
void project_out(RowsRef& rows, Vector& v2, const std::vector<char>& picked,
                 Index best) {
  const Eigen::RowVectorXd f = rows.row(best);
  const double inv_norm2 = 1.0 / v2(best);
  const Index n = rows.rows();
  for (Index i = 0; i < n; ++i) {
    if (picked[static_cast<std::size_t>(i)]) continue;
    const double scp = rows.row(i).dot(f);
    rows.row(i) -= (scp * inv_norm2) * f;
    const double updated = v2(i) - scp * scp * inv_norm2;
    v2(i) = updated > 0.0 ? updated : 0.0;
  }
}

}  // namespace

StepResult rnd_steps(Index n, Index steps, Rng& rng) {
  StepResult res;
  res.picks.reserve(static_cast<std::size_t>(steps));
  if (steps * 2 >= n) {
    // partial Fisher-Yates
    std::vector<Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Index{0});
    for (Index j = 0; j < steps; ++j) {
      const auto pick = j + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - j)));
      std::swap(idx[static_cast<std::size_t>(j)], idx[static_cast<std::size_t>(pick)]);
      res.picks.push_back(idx[static_cast<std::size_t>(j)]);
    }
  } else {
    // rejection; O(steps) expected when steps << n
    std::unordered_set<Index> taken;
    taken.reserve(static_cast<std::size_t>(steps) * 2);
    while (static_cast<Index>(res.picks.size()) < steps) {
      const auto i = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
      if (taken.insert(i).second) res.picks.push_back(i);
    }
  }
  res.values.assign(static_cast<std::size_t>(steps), 1.0);
  return res;
}

StepResult rnd_leverage_steps(const Matrix& rows, Index steps, Rng& rng) {
  const Index n = rows.rows();
  const Index m = rows.cols();
  Matrix info = Matrix::Zero(m, m);
  info.selfadjointView<Eigen::Lower>().rankUpdate(rows.transpose());
  info.triangularView<Eigen::StrictlyUpper>() = info.transpose();
  if (is_singular(info)) {
    throw SingularUniverseError("leverage sampling needs a nonsingular universe");
  }
  const Eigen::LLT<Matrix> llt(info);
  Matrix x = rows.transpose();
  llt.matrixL().solveInPlace(x);
  Vector weights = x.colwise().squaredNorm().transpose();

  StepResult res;
  double total = weights.sum();
  for (Index j = 0; j < steps; ++j) {
    const double target = rng.uniform() * total;
    double cum = 0.0;
    Index pick = -1;
    for (Index i = 0; i < n; ++i) {
      if (weights(i) <= 0.0) continue;
      cum += weights(i);
      pick = i;
      if (cum > target) break;
    }
    if (pick < 0) break;  // only zero-leverage rows left
    res.picks.push_back(pick);
    res.values.push_back(weights(pick));
    total -= weights(pick);
    weights(pick) = 0.0;
  }
  return res;
}

StepResult rgh_steps(const Matrix& rows, Index steps, double delta) {
  if (delta <= 0.0) throw std::invalid_argument("rgh: delta must be positive");
  const Index n = rows.rows();
  const Index m = rows.cols();
  Matrix info = delta * Matrix::Identity(m, m);
  std::vector<char> picked(static_cast<std::size_t>(n), 0);
  StepResult res;
  for (Index step = 0; step < steps; ++step) {
    // scores f'(M + delta I)^{-1} f via the Cholesky factor, as in the
    // reference implementation; O(n m^2) per step.
    const Eigen::LLT<Matrix> llt(info);
    Matrix x = rows.transpose();
    llt.matrixL().solveInPlace(x);
    const Vector scores = x.colwise().squaredNorm().transpose();
    const Index best = masked_argmax(scores, picked);
    if (best < 0) break;  // no rows left
    picked[static_cast<std::size_t>(best)] = 1;
    res.picks.push_back(best);
    res.values.push_back(scores(best));
    info.selfadjointView<Eigen::Lower>().rankUpdate(rows.row(best).transpose());
    info.triangularView<Eigen::StrictlyUpper>() = info.transpose();
  }
  return res;
}

StepResult gkm_steps(const Matrix& rows_in, Index steps) {
  RowsRef rows = scratch_copy(rows_in);
  const Index n = rows.rows();
  Vector v2 = rows.rowwise().squaredNorm();
  const double scale = v2.maxCoeff();
  const double tol = kSpanTolSq * scale;
  std::vector<char> picked(static_cast<std::size_t>(n), 0);
  StepResult res;
  for (Index step = 0; step < steps; ++step) {
    const Index best = verified_argmax(v2, rows, scale, picked);
    if (best < 0 || v2(best) <= tol) {
      res.exhausted = true;
      break;
    }
    res.picks.push_back(best);
    res.values.push_back(v2(best));
    picked[static_cast<std::size_t>(best)] = 1;
    if (step + 1 == steps) break;
    project_out(rows, v2, picked, best);
  }
  return res;
}

StepResult gkm_randomized_steps(const Matrix& rows_in, Index steps, double alpha,
                                Rng& rng) {
  if (alpha <= 0.0) throw std::invalid_argument("randomized gkm: alpha must be positive");
  RowsRef rows = scratch_copy(rows_in);
  const Index n = rows.rows();
  Vector v2 = rows.rowwise().squaredNorm();
  const double scale = v2.maxCoeff();
  const double tol = kSpanTolSq * scale;
  std::vector<char> picked(static_cast<std::size_t>(n), 0);
  Vector weights(n);
  StepResult res;
  for (Index step = 0; step < steps; ++step) {
    const Index top = verified_argmax(v2, rows, scale, picked);
    if (top < 0 || v2(top) <= tol) {
      res.exhausted = true;
      break;
    }
    // sampling weights v^alpha, rescaled by the current maximum so the
    // powers stay representable for any alpha
    const double vmax = v2(top);
    double total = 0.0;
    for (Index i = 0; i < n; ++i) {
      double w = 0.0;
      if (!picked[static_cast<std::size_t>(i)] && v2(i) > tol) {
        w = std::exp(alpha * (std::log(v2(i)) - std::log(vmax)));
      }
      weights(i) = w;
      total += w;
    }
    const double target = rng.uniform() * total;
    double cum = 0.0;
    Index best = -1;
    for (Index i = 0; i < n; ++i) {
      if (weights(i) <= 0.0) continue;
      cum += weights(i);
      best = i;
      if (cum > target) break;
    }
    res.picks.push_back(best);
    res.values.push_back(v2(best));
    picked[static_cast<std::size_t>(best)] = 1;
    if (step + 1 == steps) break;
    project_out(rows, v2, picked, best);
  }
  return res;
}

StepResult kym_steps(const Matrix& rows, Index steps, Rng& rng) {
  const Index n = rows.rows();
  const Index m = rows.cols();
  Matrix proj = Matrix::Identity(m, m);  // projector onto the complement
  std::vector<char> picked(static_cast<std::size_t>(n), 0);
  const double scale = std::sqrt(rows.rowwise().squaredNorm().maxCoeff());
  const double tol = kDirectionScoreTol * scale;
  Vector z(m);
  StepResult res;
  for (Index step = 0; step < steps; ++step) {
    // Draw b isotropically in the complement; re-draw when every score
    // is negligible, which re-rolls an unlucky direction. Persistent
    // failure means the remaining rows lie in the current span.
    Index best = -1;
    double best_score = 0.0;
    for (int attempt = 0; attempt < 100 && best < 0; ++attempt) {
      for (Index i = 0; i < m; ++i) z(i) = rng.normal();
      Vector b = proj * z;
      const double norm = b.norm();
      if (norm < 1e-12) continue;
      b /= norm;
      const Vector scores = (rows * b).cwiseAbs();
      const Index candidate = masked_argmax(scores, picked);
      if (candidate >= 0 && scores(candidate) > tol) {
        best = candidate;
        best_score = scores(candidate);
      }
    }
    if (best < 0) {
      res.exhausted = true;
      break;
    }
    picked[static_cast<std::size_t>(best)] = 1;
    res.picks.push_back(best);
    res.values.push_back(best_score);
    if (step + 1 == steps) break;
    const Vector ftilde = proj * rows.row(best).transpose();
    proj.noalias() -= (ftilde * ftilde.transpose()) / ftilde.squaredNorm();
  }
  return res;
}

StepResult gkm_a_opt_steps(const Matrix& rows, Index steps) {
  const Index n = rows.rows();
  const Index m = rows.cols();
  Matrix info = Matrix::Zero(m, m);
  const Vector norms2 = rows.rowwise().squaredNorm();
  const double tol = kSpanTolSq * norms2.maxCoeff();
  std::vector<char> picked(static_cast<std::size_t>(n), 0);
  StepResult res;
  for (Index step = 0; step < steps; ++step) {
    // Split the eigendecomposition of M into its range (P, M^+) and
    // kernel; scores are f'(I-P)f / (1 + f'M^+ f). The numerator is
    // evaluated through the residual vector, not a difference of norms,
    // so nearly-dependent universes keep their tiny out-of-span mass.
    const Eigen::SelfAdjointEigenSolver<Matrix> es(info);
    const double lmax = es.eigenvalues().maxCoeff();
    const double eig_tol = 1e-12 * std::max(lmax, 0.0);
    std::vector<Index> range_dims;
    for (Index i = 0; i < m; ++i) {
      if (es.eigenvalues()(i) > eig_tol && es.eigenvalues()(i) > 0.0) {
        range_dims.push_back(i);
      }
    }
    const auto r = static_cast<Index>(range_dims.size());
    Matrix basis(m, r);
    Vector inv_lambda(r);
    for (Index i = 0; i < r; ++i) {
      basis.col(i) = es.eigenvectors().col(range_dims[static_cast<std::size_t>(i)]);
      inv_lambda(i) = 1.0 / es.eigenvalues()(range_dims[static_cast<std::size_t>(i)]);
    }
    const Matrix coords = basis.transpose() * rows.transpose();      // r x n
    const Matrix residual = rows.transpose() - basis * coords;       // m x n
    Index best = -1;
    double best_score = 0.0;
    for (Index i = 0; i < n; ++i) {
      if (picked[static_cast<std::size_t>(i)]) continue;
      const double numer = residual.col(i).squaredNorm();
      if (numer <= tol) continue;
      const double denom =
          1.0 + coords.col(i).cwiseAbs2().dot(inv_lambda);
      const double score = numer / denom;
      if (best < 0 || score > best_score) {
        best = i;
        best_score = score;
      }
    }
    if (best < 0) {
      res.exhausted = true;
      break;
    }
    picked[static_cast<std::size_t>(best)] = 1;
    res.picks.push_back(best);
    res.values.push_back(best_score);
    info.selfadjointView<Eigen::Lower>().rankUpdate(rows.row(best).transpose());
    info.triangularView<Eigen::StrictlyUpper>() = info.transpose();
  }
  return res;
}

StepResult method_steps(Method method, const Matrix& rows, Index steps,
                        const HeuristicConfig& cfg, Rng& rng) {
  switch (method) {
    case Method::rnd: return rnd_steps(rows.rows(), steps, rng);
    case Method::rnd_leverage: return rnd_leverage_steps(rows, steps, rng);
    case Method::rgh: return rgh_steps(rows, steps, cfg.delta);
    case Method::gkm: return gkm_steps(rows, steps);
    case Method::gkm_randomized:
      return gkm_randomized_steps(rows, steps, cfg.alpha, rng);
    case Method::kym: return kym_steps(rows, steps, rng);
    case Method::gkm_a_opt: return gkm_a_opt_steps(rows, steps);
  }
  throw std::invalid_argument("unknown method");
}

}  // namespace detail

namespace {

using Clock = std::chrono::steady_clock;

SelectionTrace make_trace(const RegressorSet& set, detail::StepResult&& res,
                          Clock::time_point t0, const char* name) {
  if (static_cast<Index>(res.picks.size()) < set.m()) {
    throw RankDeficientError(
        std::string(name) + ": universe has rank " + std::to_string(res.picks.size()) +
            " < " + std::to_string(set.m()),
        static_cast<std::int64_t>(res.picks.size()));
  }
  SelectionTrace trace;
  trace.subset = Subset(std::move(res.picks), set.n());
  trace.step_values = std::move(res.values);
  trace.elapsed_s = std::chrono::duration<double>(Clock::now() - t0).count();
  return trace;
}

}  // namespace

SelectionTrace rnd_saturated(const RegressorSet& set, Rng& rng) {
  const auto t0 = Clock::now();
  return make_trace(set, detail::rnd_steps(set.n(), set.m(), rng), t0, "rnd");
}

SelectionTrace rnd_leverage_saturated(const RegressorSet& set, Rng& rng) {
  const auto t0 = Clock::now();
  return make_trace(set, detail::rnd_leverage_steps(set.data(), set.m(), rng), t0,
                    "rnd_leverage");
}

SelectionTrace rgh(const RegressorSet& set, const HeuristicConfig& cfg) {
  const auto t0 = Clock::now();
  return make_trace(set, detail::rgh_steps(set.data(), set.m(), cfg.delta), t0, "rgh");
}

SelectionTrace gkm(const RegressorSet& set) {
  const auto t0 = Clock::now();
  return make_trace(set, detail::gkm_steps(set.data(), set.m()), t0, "gkm");
}

SelectionTrace gkm_randomized(const RegressorSet& set, const HeuristicConfig& cfg,
                              Rng& rng) {
  const auto t0 = Clock::now();
  return make_trace(
      set, detail::gkm_randomized_steps(set.data(), set.m(), cfg.alpha, rng), t0,
      "gkm_randomized");
}

SelectionTrace kym(const RegressorSet& set, Rng& rng) {
  const auto t0 = Clock::now();
  return make_trace(set, detail::kym_steps(set.data(), set.m(), rng), t0, "kym");
}

SelectionTrace gkm_a_opt(const RegressorSet& set) {
  const auto t0 = Clock::now();
  return make_trace(set, detail::gkm_a_opt_steps(set.data(), set.m()), t0,
                    "gkm_a_opt");
}

bool method_is_randomized(Method m) {
  switch (m) {
    case Method::rnd:
    case Method::rnd_leverage:
    case Method::gkm_randomized:
    case Method::kym:
      return true;
    case Method::rgh:
    case Method::gkm:
    case Method::gkm_a_opt:
      return false;
  }
  return false;
}

std::string method_name(Method m) {
  switch (m) {
    case Method::rnd: return "rnd";
    case Method::rnd_leverage: return "rndl";
    case Method::rgh: return "rgh";
    case Method::gkm: return "gkm";
    case Method::gkm_randomized: return "gkmr";
    case Method::kym: return "kym";
    case Method::gkm_a_opt: return "gkma";
  }
  return "?";
}

SelectionTrace run_method(const RegressorSet& set, Method method,
                          const HeuristicConfig& cfg, Rng& rng) {
  const auto t0 = Clock::now();
  return make_trace(set, detail::method_steps(method, set.data(), set.m(), cfg, rng),
                    t0, method_name(method).c_str());
}

}  // namespace satsel
