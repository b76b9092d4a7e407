#ifndef SATSEL_HEURISTICS_HPP
#define SATSEL_HEURISTICS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "satsel/core.hpp"
#include "satsel/rng.hpp"

namespace satsel {

struct HeuristicConfig {
  double delta = 1e-4;   ///< ridge for the regularized greedy heuristic
  double alpha = 1.0;    ///< randomization exponent for randomized GKM
  std::uint64_t seed = 0;
  Criterion criterion = Criterion::D;
};

/// Result of one heuristic invocation: the ordered picks, the selection
/// score of each pick (projected squared norm for GKM variants, the
/// ridge score for RGH, |f'b| for KYM, the leverage score for weighted
/// sampling, 1 for uniform sampling), and the wall-clock time spent.
struct SelectionTrace {
  Subset subset;
  std::vector<double> step_values;
  double elapsed_s = 0.0;
  std::vector<Index> pool;  ///< pre-selected sub-universe, when one was drawn
};

/// Uniform random saturated subset; may be singular.
SelectionTrace rnd_saturated(const RegressorSet& set, Rng& rng);

/// Sequential sampling without replacement, each draw weighted by the
/// leverage scores of the full set. Requires a nonsingular universe.
SelectionTrace rnd_leverage_saturated(const RegressorSet& set, Rng& rng);

/// Regularized greedy heuristic: each step adds the regressor maximizing
/// f'(M + delta*I)^{-1} f. Deterministic; the output can be singular.
/// With delta held fixed the scores are not invariant under a rescaling
/// of the regressors, unlike the projection-based methods.
SelectionTrace rgh(const RegressorSet& set, const HeuristicConfig& cfg = {});

/// Galil-Kiefer method by successive projection: each step picks the row
/// with the largest squared norm, then projects all rows onto the
/// orthogonal complement of the pick. Nonsingular output whenever the
/// universe is nonsingular; throws RankDeficientError otherwise.
SelectionTrace gkm(const RegressorSet& set);

/// GKM with randomized picks, probability proportional to the projected
/// squared norm raised to cfg.alpha. Never picks rows inside the span.
SelectionTrace gkm_randomized(const RegressorSet& set, const HeuristicConfig& cfg,
                              Rng& rng);

/// Kumar-Yildirim method: each step draws a random direction b in the
/// orthogonal complement of the current span and picks argmax |f'b|.
SelectionTrace kym(const RegressorSet& set, Rng& rng);

/// Greedy A-optimality variant of the GKM: maximizes
/// f'(I - P)f / (1 + f'M^+ f) at each step.
SelectionTrace gkm_a_opt(const RegressorSet& set);

enum class Method {
  rnd,
  rnd_leverage,
  rgh,
  gkm,
  gkm_randomized,
  kym,
  gkm_a_opt,
};

bool method_is_randomized(Method m);
std::string method_name(Method m);

/// Dispatch a saturated run of any method. rng is untouched by the
/// deterministic methods.
SelectionTrace run_method(const RegressorSet& set, Method method,
                          const HeuristicConfig& cfg, Rng& rng);

namespace detail {

// Squared-norm threshold, relative to the largest initial squared row
// norm, below which a projected row counts as lying in the current span.
// Set so that universes of condition number ~1e10 (projected squared
// norms ~1e-20 relative) remain selectable while round-off residue of
// exact dependence (~1e-30 relative) does not.
inline constexpr double kSpanTolSq = 1e-24;

// The incremental norm recurrence of the projection loop carries
// round-off of order eps * scale, far above kSpanTolSq. Candidate
// values below this trigger a recomputation of the norms from the
// projected rows themselves, whose residue is of order eps^2 * scale,
// before the span decision is made.
inline constexpr double kSpanRecheckTol = 1e-10;

// Relative threshold on |f'b| for KYM, in units of the largest row norm.
inline constexpr double kDirectionScoreTol = 1e-13;

// Kernel result; `exhausted` means the method stopped early because no
// remaining row scored above the span tolerance.
struct StepResult {
  std::vector<Index> picks;
  std::vector<double> values;
  bool exhausted = false;
};

// All kernels operate on a raw row matrix (no RegressorSet invariants)
// and perform at most `steps` picks; strategies reuse them on
// sub-universes whose row count may be below the dimension.
StepResult rnd_steps(Index n, Index steps, Rng& rng);
StepResult rnd_leverage_steps(const Matrix& rows, Index steps, Rng& rng);
StepResult rgh_steps(const Matrix& rows, Index steps, double delta);
StepResult gkm_steps(const Matrix& rows, Index steps);
StepResult gkm_randomized_steps(const Matrix& rows, Index steps, double alpha,
                                Rng& rng);
StepResult kym_steps(const Matrix& rows, Index steps, Rng& rng);
StepResult gkm_a_opt_steps(const Matrix& rows, Index steps);

StepResult method_steps(Method method, const Matrix& rows, Index steps,
                        const HeuristicConfig& cfg, Rng& rng);

}  // namespace detail

}  // namespace satsel

#endif
