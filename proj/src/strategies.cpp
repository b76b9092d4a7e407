#include "satsel/strategies.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

namespace satsel {

namespace {

using Clock = std::chrono::steady_clock;

double subset_value(const RegressorSet& set, const Subset& subset, Criterion c) {
  Matrix m = Matrix::Zero(set.m(), set.m());
  for (Index i : subset) {
    m.selfadjointView<Eigen::Lower>().rankUpdate(set.data().row(i).transpose());
  }
  m.triangularView<Eigen::StrictlyUpper>() = m.transpose();
  return detail::criterion_value(m, c);
}

}  // namespace

SelectionTrace general_size(const RegressorSet& set, const StrategyConfig& cfg,
                            Rng& rng) {
  const Index n = set.n();
  const Index m = set.m();
  if (cfg.s < 1) throw std::invalid_argument("general_size: s must be >= 1");
  if (cfg.s > n) {
    throw InfeasibleSizeError("requested size " + std::to_string(cfg.s) +
                              " exceeds universe size " + std::to_string(n));
  }
  if (cfg.b < 1 || cfg.b > cfg.s) {
    throw std::invalid_argument("general_size: need 1 <= b <= s");
  }

  const auto t0 = Clock::now();
  std::vector<Index> remaining(static_cast<std::size_t>(n));
  std::iota(remaining.begin(), remaining.end(), Index{0});
  SelectionTrace trace;
  std::vector<Index> picks;
  picks.reserve(static_cast<std::size_t>(cfg.s));

  while (static_cast<Index>(picks.size()) < cfg.s) {
    const Index take =
        std::min({m, cfg.s - static_cast<Index>(picks.size()),
                  static_cast<Index>(remaining.size())});
    const Matrix sub = detail::gather_rows(set.data(), remaining, n);
    auto res = detail::method_steps(cfg.base, sub, take, cfg.heuristic, rng);
    if (res.picks.empty()) {
      // Every remaining row is numerically zero; fill in index order so
      // the requested size is met (they add nothing to the criterion).
      for (Index local = 0;
           local < static_cast<Index>(remaining.size()) &&
           static_cast<Index>(picks.size()) < cfg.s;
           ++local) {
        picks.push_back(remaining[static_cast<std::size_t>(local)]);
        trace.step_values.push_back(0.0);
      }
      break;
    }
    std::vector<Index> taken_local = res.picks;
    for (std::size_t i = 0; i < res.picks.size(); ++i) {
      picks.push_back(remaining[static_cast<std::size_t>(res.picks[i])]);
      trace.step_values.push_back(res.values[i]);
    }
    std::sort(taken_local.begin(), taken_local.end(), std::greater<>());
    for (Index local : taken_local) {
      remaining.erase(remaining.begin() + local);
    }
  }

  trace.subset = Subset(std::move(picks), n);
  trace.elapsed_s = std::chrono::duration<double>(Clock::now() - t0).count();
  return trace;
}

SelectionTrace preselect(const RegressorSet& set, const StrategyConfig& cfg,
                         Rng& rng) {
  const Index n = set.n();
  const Index m = set.m();
  if (cfg.k < 1) throw std::invalid_argument("preselect: k must be >= 1");
  const Index pool_size = cfg.k * m;
  if (pool_size > n) {
    throw InfeasibleSizeError("pre-selection of " + std::to_string(pool_size) +
                              " rows exceeds universe size " + std::to_string(n));
  }
  const auto t0 = Clock::now();
  auto draw = detail::rnd_steps(n, pool_size, rng);
  const RegressorSet sub = set.gather(draw.picks);
  auto res = detail::method_steps(cfg.base, sub.data(), m, cfg.heuristic, rng);
  if (static_cast<Index>(res.picks.size()) < m) {
    throw RankDeficientError(
        "pre-selected sub-universe has rank " + std::to_string(res.picks.size()) +
            " < " + std::to_string(m),
        static_cast<std::int64_t>(res.picks.size()));
  }
  SelectionTrace trace;
  std::vector<Index> picks;
  picks.reserve(res.picks.size());
  for (Index local : res.picks) {
    picks.push_back(draw.picks[static_cast<std::size_t>(local)]);
  }
  trace.subset = Subset(std::move(picks), n);
  trace.step_values = std::move(res.values);
  trace.pool = std::move(draw.picks);
  trace.elapsed_s = std::chrono::duration<double>(Clock::now() - t0).count();
  return trace;
}

MultiRunResult multi_run(const RegressorSet& set, const StrategyConfig& cfg,
                         Rng& rng) {
  if (!cfg.preselect && !method_is_randomized(cfg.base)) {
    throw std::invalid_argument(
        "multi_run: base must be randomized or preselect-wrapped");
  }
  if (!cfg.budget.runs && !cfg.budget.seconds) {
    throw std::invalid_argument("multi_run: budget required");
  }
  if (cfg.budget.runs && *cfg.budget.runs == 0) {
    throw std::invalid_argument("multi_run: run budget must be >= 1");
  }
  const Index s = cfg.s > 0 ? cfg.s : set.m();
  if (cfg.preselect && s != set.m()) {
    throw std::invalid_argument("multi_run: pre-selection is defined for s = m");
  }

  const auto t0 = Clock::now();
  MultiRunResult out;
  bool have_best = false;

  for (std::uint64_t run = 0;; ++run) {
    if (cfg.budget.runs && run >= *cfg.budget.runs) break;
    const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    if (run > 0 && cfg.budget.seconds && elapsed >= *cfg.budget.seconds) break;

    Rng stream = rng.split(run);
    double value = 0.0;
    SelectionTrace trace;
    bool ok = true;
    try {
      if (cfg.preselect) {
        trace = preselect(set, cfg, stream);
      } else if (s == set.m()) {
        trace = run_method(set, cfg.base, cfg.heuristic, stream);
      } else {
        StrategyConfig one = cfg;
        one.s = s;
        trace = general_size(set, one, stream);
      }
    } catch (const RankDeficientError&) {
      ok = false;  // e.g. an unlucky pre-selection draw; count and move on
    }
    if (ok) {
      value = subset_value(set, trace.subset, cfg.heuristic.criterion);
      if (!have_best || value > out.best_value) {
        have_best = true;
        out.best = trace;
        out.best_value = value;
      }
    }
    ++out.attempts;
    out.profile.push_back(ProfilePoint{
        run, std::chrono::duration<double>(Clock::now() - t0).count(),
        out.best_value, std::nullopt});
  }

  if (!have_best || out.best_value <= 0.0) {
    throw AllRunsSingularError(
        "no nonsingular subset in " + std::to_string(out.attempts) + " runs",
        out.attempts);
  }
  return out;
}

}  // namespace satsel
