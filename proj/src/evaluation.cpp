#include "satsel/evaluation.hpp"

#include <cmath>

namespace satsel {

namespace detail {

std::uint64_t binomial_capped(Index n, Index s, std::uint64_t cap) {
  if (s < 0 || s > n) return 0;
  s = std::min(s, n - s);
  // factor-by-factor with running division keeps intermediates integral
  unsigned __int128 acc = 1;
  for (Index i = 1; i <= s; ++i) {
    acc = acc * static_cast<unsigned __int128>(n - s + i) / static_cast<unsigned __int128>(i);
    if (acc > cap) return cap + 1;
  }
  return static_cast<std::uint64_t>(acc);
}

void for_each_combination(Index n, Index s,
                          const std::function<void(std::span<const Index>)>& visit) {
  if (s == 0 || s > n) return;
  std::vector<Index> comb(static_cast<std::size_t>(s));
  for (Index i = 0; i < s; ++i) comb[static_cast<std::size_t>(i)] = i;
  for (;;) {
    visit(std::span<const Index>(comb));
    Index i = s - 1;
    while (i >= 0 && comb[static_cast<std::size_t>(i)] == n - s + i) --i;
    if (i < 0) break;
    ++comb[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < s; ++j) {
      comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

}  // namespace detail

BruteForceResult brute_force_optimal(const RegressorSet& set, Index s, Criterion c) {
  const Index n = set.n();
  const Index m = set.m();
  if (s < 1 || s > n) {
    throw InfeasibleSizeError("brute force: size " + std::to_string(s) +
                              " infeasible for n = " + std::to_string(n));
  }
  const auto count = detail::binomial_capped(n, s, detail::kEnumerationGuard);
  if (count > detail::kEnumerationGuard) {
    throw InstanceTooLargeError("brute force: C(" + std::to_string(n) + "," +
                                std::to_string(s) + ") exceeds the 1e7 guard");
  }

  Matrix info(m, m);
  std::vector<Index> best;
  double best_value = -1.0;
  detail::for_each_combination(n, s, [&](std::span<const Index> comb) {
    info.setZero();
    for (Index i : comb) {
      info.selfadjointView<Eigen::Lower>().rankUpdate(set.data().row(i).transpose());
    }
    info.triangularView<Eigen::StrictlyUpper>() = info.transpose();
    const double value = detail::criterion_value(info, c);
    if (value > best_value) {  // strict: keeps the lexicographically first
      best_value = value;
      best.assign(comb.begin(), comb.end());
    }
  });
  return BruteForceResult{Subset(std::move(best), n), best_value};
}

ApproximateDesign approx_design_optimum(const RegressorSet& set, double tol,
                                        std::uint64_t max_iterations) {
  if (tol <= 0.0) throw std::invalid_argument("approx design: tol must be positive");
  const Matrix& f = set.data();
  const Index n = set.n();
  const Index m = set.m();
  const auto md = static_cast<double>(m);

  Vector w = Vector::Constant(n, 1.0 / static_cast<double>(n));
  Matrix info(m, m);
  Matrix x;
  double gap = std::numeric_limits<double>::infinity();
  bool certified = false;

  for (std::uint64_t iter = 0; iter <= max_iterations; ++iter) {
    info.setZero();
    info.selfadjointView<Eigen::Lower>().rankUpdate(
        (f.array().colwise() * w.array().sqrt()).matrix().transpose());
    info.triangularView<Eigen::StrictlyUpper>() = info.transpose();
    if (iter == 0 && detail::is_singular(info)) {
      throw SingularUniverseError("approximate design needs a nonsingular universe");
    }
    const Eigen::LLT<Matrix> llt(info);
    x = f.transpose();
    llt.matrixL().solveInPlace(x);
    const Vector scores = x.colwise().squaredNorm().transpose();
    const double max_score = scores.maxCoeff();
    gap = max_score / md - 1.0;
    if (max_score <= md * (1.0 + tol)) {
      certified = true;
      break;
    }
    w = w.cwiseProduct(scores) / md;
    w /= w.sum();
  }
  if (!certified) {
    throw ConvergenceFailureError(
        "approximate design: certificate gap " + std::to_string(gap) +
            " after the iteration cap",
        gap);
  }

  // sparse clean-up: drop numerically dead support points
  for (Index i = 0; i < n; ++i) {
    if (w(i) < 1e-14) w(i) = 0.0;
  }
  w /= w.sum();
  info.setZero();
  info.selfadjointView<Eigen::Lower>().rankUpdate(
      (f.array().colwise() * w.array().sqrt()).matrix().transpose());
  info.triangularView<Eigen::StrictlyUpper>() = info.transpose();
  return ApproximateDesign{std::move(w), detail::d_value(info)};
}

EfficiencyReport efficiency_report(const RegressorSet& set, const Subset& subset,
                                   Index s, bool with_oracle, double tol) {
  if (subset.size() != s) {
    throw InvalidSubsetError("efficiency report: |S| = " +
                             std::to_string(subset.size()) + " != s = " +
                             std::to_string(s));
  }
  EfficiencyReport report;
  report.phi = d_criterion(info_matrix(set, subset));
  const ApproximateDesign design = approx_design_optimum(set, tol);
  report.phi_star_s = static_cast<double>(s) * design.value;
  report.eff_lower = report.phi / report.phi_star_s;
  if (with_oracle) {
    const auto oracle = brute_force_optimal(set, s, Criterion::D);
    report.phi_opt = oracle.value;
    report.eff_exact = report.phi / oracle.value;
  }
  if (report.eff_exact) {
    // phi <= phi_opt <= phi*_s (1+tol); slack only from the certificate
    if (*report.eff_exact > 1.0 + 1e-9 ||
        report.eff_lower > *report.eff_exact * (1.0 + tol) + 1e-12) {
      throw Error("efficiency report violates the bound chain");
    }
  }
  return report;
}

}  // namespace satsel
