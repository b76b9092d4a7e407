#ifndef SATSEL_EVALUATION_HPP
#define SATSEL_EVALUATION_HPP

#include <cstdint>
#include <functional>
#include <optional>

#include "satsel/core.hpp"

namespace satsel {

/// A probability measure over the rows of F together with the criterion
/// value det^{1/m} of its information matrix.
struct ApproximateDesign {
  Vector weights;
  double value = 0.0;
};

struct EfficiencyReport {
  double phi = 0.0;
  std::optional<double> phi_opt;
  double phi_star_s = 0.0;
  std::optional<double> eff_exact;
  double eff_lower = 0.0;
};

struct BruteForceResult {
  Subset subset;
  double value = 0.0;
};

/// Exhaustive search over all s-element subsets; returns the
/// lexicographically smallest maximizer. Guarded by C(n,s) <= 1e7.
BruteForceResult brute_force_optimal(const RegressorSet& set, Index s, Criterion c);

/// D-optimal approximate design by multiplicative weight updates
/// xi_i <- xi_i h_i(xi)/m from the uniform start, stopped at the
/// equivalence-theorem certificate max_i h_i(xi) <= m (1+tol), which
/// guarantees value(xi) >= value(xi*)/(1+tol). Weights below 1e-14 are
/// zeroed and the rest renormalized on termination.
ApproximateDesign approx_design_optimum(const RegressorSet& set, double tol = 1e-5,
                                        std::uint64_t max_iterations = 1000000);

/// Assemble phi(S), the upper bound phi*_s = s * value(xi*), and, when
/// with_oracle is set, the exact optimum and exact efficiency.
EfficiencyReport efficiency_report(const RegressorSet& set, const Subset& subset,
                                   Index s, bool with_oracle, double tol = 1e-5);

namespace detail {

inline constexpr std::uint64_t kEnumerationGuard = 10000000;

// C(n, s) capped at `cap` (returns cap + 1 on overflow past it).
std::uint64_t binomial_capped(Index n, Index s, std::uint64_t cap);

// Visit all s-element index combinations of [0, n) in lexicographic
// order. The visitor receives the current combination.
void for_each_combination(Index n, Index s,
                          const std::function<void(std::span<const Index>)>& visit);

}  // namespace detail

}  // namespace satsel

#endif
