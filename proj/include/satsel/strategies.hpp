#ifndef SATSEL_STRATEGIES_HPP
#define SATSEL_STRATEGIES_HPP

#include <optional>

#include "satsel/heuristics.hpp"

namespace satsel {

/// Run budget for multi_run: a fixed number of runs, a wall-clock limit,
/// or both (whichever is exhausted first).
struct RunBudget {
  std::optional<std::uint64_t> runs;
  std::optional<double> seconds;
};

struct StrategyConfig {
  Index s = 0;       ///< target subset size
  Index b = 1;       ///< batch size of the general-size scheme
  Index k = 50;      ///< pre-selection multiplier (sub-universe size k*m)
  RunBudget budget;  ///< multi_run budget
  Method base = Method::gkm;
  HeuristicConfig heuristic;
  bool preselect = false;  ///< wrap each multi_run base run in pre-selection
};

/// General-size greedy scheme: repeated passes of the base heuristic on
/// the not-yet-selected rows, with the base state reset after every m
/// picks; a final premature pass when fewer than m picks remain. Within
/// a pass the projection-based heuristics re-score after every pick
/// regardless of the batch size b, which therefore does not change the
/// output; random samplers draw their batch without re-scoring (which
/// matches their sequential distribution).
SelectionTrace general_size(const RegressorSet& set, const StrategyConfig& cfg,
                            Rng& rng);

/// Draw a uniform k*m-row sub-universe, run the saturated base heuristic
/// on it, and map the picks back; the draw is recorded in the trace pool.
SelectionTrace preselect(const RegressorSet& set, const StrategyConfig& cfg,
                         Rng& rng);

struct ProfilePoint {
  std::uint64_t run_index = 0;
  double cumulative_s = 0.0;
  double best_value = 0.0;
  std::optional<double> best_eff;  ///< filled by callers that know phi*
};

struct MultiRunResult {
  SelectionTrace best;
  double best_value = 0.0;
  std::vector<ProfilePoint> profile;
  std::uint64_t attempts = 0;
};

/// Run the (randomized) base repeatedly, each run on the RNG stream
/// split(run_index), and keep the best subset under cfg.heuristic's
/// criterion; ties go to the earlier run. Runs are never aborted
/// mid-flight; a wall-clock budget is checked between runs.
MultiRunResult multi_run(const RegressorSet& set, const StrategyConfig& cfg,
                         Rng& rng);

}  // namespace satsel

#endif
