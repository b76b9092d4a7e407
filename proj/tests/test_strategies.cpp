#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "oracles.hpp"
#include "satsel/bench.hpp"
#include "satsel/strategies.hpp"

using namespace satsel;

namespace {

double phi_of(const RegressorSet& set, const Subset& s) {
  return d_criterion(info_matrix(set, s));
}

}  // namespace

TEST_CASE("general_size with s = m, b = 1 reproduces the base bit for bit") {
  Rng gen(3);
  const RegressorSet set(oracles::gaussian_rows(30, 4, gen));
  StrategyConfig cfg;
  cfg.s = 4;
  cfg.base = Method::gkm;
  Rng rng(5);
  const auto composite = general_size(set, cfg, rng);
  const auto direct = gkm(set);
  CHECK(composite.subset.indices() == direct.subset.indices());
  CHECK(composite.step_values == direct.step_values);

  // same for a randomized base under the same stream
  cfg.base = Method::kym;
  Rng r1(7), r2(7);
  const auto via_scheme = general_size(set, cfg, r1);
  const auto via_base = kym(set, r2);
  CHECK(via_scheme.subset.indices() == via_base.subset.indices());
}

TEST_CASE("general_size picks the strong basis first, then the weak one") {
  Matrix f(6, 3);
  f.setZero();
  for (Index i = 0; i < 3; ++i) f(i, i) = 2.0;       // scaled basis
  for (Index i = 0; i < 3; ++i) f(3 + i, i) = 1.0;   // unit basis
  StrategyConfig cfg;
  cfg.s = 6;
  cfg.base = Method::gkm;
  Rng rng(11);
  const auto trace = general_size(RegressorSet(f), cfg, rng);
  const std::set<Index> first_pass(trace.subset.begin(), trace.subset.begin() + 3);
  const std::set<Index> second_pass(trace.subset.begin() + 3, trace.subset.end());
  CHECK(first_pass == std::set<Index>{0, 1, 2});
  CHECK(second_pass == std::set<Index>{3, 4, 5});
}

TEST_CASE("general_size with s = 1 picks the max-norm row under gkm") {
  Rng gen(13);
  Matrix f = oracles::gaussian_rows(20, 3, gen);
  f.row(7) *= 10.0;  // clear max
  StrategyConfig cfg;
  cfg.s = 1;
  cfg.base = Method::gkm;
  Rng rng(17);
  const auto trace = general_size(RegressorSet(f), cfg, rng);
  CHECK(trace.subset.indices() == std::vector<Index>{7});
}

TEST_CASE("general_size premature stop for s < m") {
  Rng gen(19);
  const Matrix f = oracles::gaussian_rows(15, 4, gen);
  StrategyConfig cfg;
  cfg.s = 2;
  cfg.base = Method::gkm;
  Rng rng(23);
  const auto partial = general_size(RegressorSet(f), cfg, rng);
  const auto full = gkm(RegressorSet(f));
  CHECK(partial.subset.indices() ==
        std::vector<Index>(full.subset.begin(), full.subset.begin() + 2));
}

TEST_CASE("general_size rejects infeasible sizes") {
  const RegressorSet set(Matrix::Identity(4, 4));
  StrategyConfig cfg;
  cfg.s = 5;
  Rng rng(29);
  CHECK_THROWS_AS(general_size(set, cfg, rng), InfeasibleSizeError);
}

TEST_CASE("general_size can exceed the universe rank by restarting passes") {
  Matrix f(4, 3);
  f << 1, 0, 0,
       0, 1, 0,
       1, 1, 0,
       2, -1, 0;  // rank 2
  StrategyConfig cfg;
  cfg.s = 4;
  cfg.base = Method::gkm;
  Rng rng(31);
  const auto trace = general_size(RegressorSet(f), cfg, rng);
  CHECK(trace.subset.size() == 4);
}

TEST_CASE("preselect with km = n matches the base heuristic's subset") {
  Rng gen(37);
  const RegressorSet set(oracles::gaussian_rows(40, 4, gen));
  StrategyConfig cfg;
  cfg.k = 10;  // k*m = n
  cfg.base = Method::gkm;
  Rng rng(41);
  const auto pre = preselect(set, cfg, rng);
  const auto direct = gkm(set);
  CHECK(std::set<Index>(pre.subset.begin(), pre.subset.end()) ==
        std::set<Index>(direct.subset.begin(), direct.subset.end()));
  CHECK(pre.pool.size() == 40);
}

TEST_CASE("preselect is deterministic under a fixed seed") {
  Rng gen(43);
  const RegressorSet set(oracles::gaussian_rows(200, 4, gen));
  StrategyConfig cfg;
  cfg.k = 5;
  cfg.base = Method::kym;
  Rng r1(47), r2(47);
  const auto a = preselect(set, cfg, r1);
  const auto b = preselect(set, cfg, r2);
  CHECK(a.subset.indices() == b.subset.indices());
  CHECK(a.pool == b.pool);
}

TEST_CASE("preselect rejects pools larger than the universe") {
  const RegressorSet set(Matrix::Identity(8, 4));
  StrategyConfig cfg;
  cfg.k = 3;  // 12 > 8
  Rng rng(53);
  CHECK_THROWS_AS(preselect(set, cfg, rng), InfeasibleSizeError);
}

TEST_CASE("preselect on the 6-cube never hits a singular pool") {
  // a k*m = 60-row draw cannot fit inside any hyperplane of {-1,1}^6
  // (each contains at most 32 points), so failures are impossible; the
  // p^k bound of the pre-selection analysis is trivially respected
  const RegressorSet cube = gen_hypercube(6);
  StrategyConfig cfg;
  cfg.k = 10;
  cfg.base = Method::gkm;
  Rng gen(59);
  int failures = 0;
  for (int t = 0; t < 10000; ++t) {
    Rng rng = gen.split(static_cast<std::uint64_t>(t));
    try {
      const auto trace = preselect(cube, cfg, rng);
      if (phi_of(cube, trace.subset) == 0.0) ++failures;
    } catch (const RankDeficientError&) {
      ++failures;
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("preselect equals the base heuristic run on its pool") {
  Rng gen(61);
  const RegressorSet set = gen_wishart_normal(5000, 6, gen);
  StrategyConfig cfg;
  cfg.k = 50;
  cfg.base = Method::gkm;
  for (int seed = 0; seed < 5; ++seed) {
    Rng r1 = gen.split(static_cast<std::uint64_t>(seed));
    const auto pre = preselect(set, cfg, r1);
    const RegressorSet pool = set.gather(pre.pool);
    const auto base = gkm(pool);
    for (Index j = 0; j < set.m(); ++j) {
      CHECK(pre.subset[j] == pre.pool[static_cast<std::size_t>(base.subset[j])]);
    }
    CHECK(pre.step_values == base.step_values);
  }
}

TEST_CASE("multi_run with a single-run budget equals the first stream") {
  Rng gen(67);
  const RegressorSet set(oracles::gaussian_rows(30, 4, gen));
  StrategyConfig cfg;
  cfg.base = Method::kym;
  cfg.budget.runs = 1;
  Rng r1(71), r2(71);
  const auto result = multi_run(set, cfg, r1);
  Rng first_stream = r2.split(0);
  const auto direct = kym(set, first_stream);
  CHECK(result.best.subset.indices() == direct.subset.indices());
  CHECK(result.attempts == 1);
}

TEST_CASE("multi_run over rnd on the 3-cube finds a nonsingular subset") {
  const RegressorSet cube = gen_hypercube(3);
  StrategyConfig cfg;
  cfg.base = Method::rnd;
  cfg.budget.runs = 20;
  Rng gen(73);
  for (int trial = 0; trial < 10000; ++trial) {
    Rng rng = gen.split(static_cast<std::uint64_t>(trial));
    const auto result = multi_run(cube, cfg, rng);  // throws if all 20 fail
    CHECK(result.best_value > 0.0);
  }
}

TEST_CASE("multi_run profile best values are nondecreasing and end at the best") {
  Rng gen(79);
  const RegressorSet set(oracles::gaussian_rows(40, 4, gen));
  StrategyConfig cfg;
  cfg.base = Method::rnd;
  cfg.budget.runs = 50;
  Rng rng(83);
  const auto result = multi_run(set, cfg, rng);
  for (std::size_t i = 1; i < result.profile.size(); ++i) {
    CHECK(result.profile[i].best_value >= result.profile[i - 1].best_value);
    CHECK(result.profile[i].cumulative_s >= result.profile[i - 1].cumulative_s);
  }
  CHECK(result.profile.back().best_value == result.best_value);
  CHECK(result.profile.size() == 50);
}

TEST_CASE("multi_run raises when every run is singular") {
  Matrix collinear(3, 2);
  collinear << 1, 0, 2, 0, 3, 0;
  const RegressorSet set(collinear);
  StrategyConfig cfg;
  cfg.base = Method::rnd;
  cfg.budget.runs = 8;
  Rng rng(89);
  CHECK_THROWS_AS(multi_run(set, cfg, rng), AllRunsSingularError);
  try {
    Rng rng2(89);
    multi_run(set, cfg, rng2);
  } catch (const AllRunsSingularError& e) {
    CHECK(e.attempts() == 8);
  }
}

TEST_CASE("multi_run time budget stops between runs") {
  Rng gen(97);
  const RegressorSet set(oracles::gaussian_rows(50, 4, gen));
  StrategyConfig cfg;
  cfg.base = Method::kym;
  cfg.budget.seconds = 0.05;
  Rng rng(101);
  const auto result = multi_run(set, cfg, rng);
  CHECK(result.attempts >= 1);
  // the run that crossed the budget is never aborted, so the recorded
  // time lands at (or a scheduling quantum before) the budget
  CHECK(result.profile.back().cumulative_s >= 0.04);
}

TEST_CASE("multi_run rejects deterministic bases and empty budgets") {
  const RegressorSet set(Matrix::Identity(4, 4));
  StrategyConfig cfg;
  cfg.base = Method::gkm;
  cfg.budget.runs = 3;
  Rng rng(103);
  CHECK_THROWS_AS(multi_run(set, cfg, rng), std::invalid_argument);
  cfg.base = Method::rnd;
  cfg.budget = RunBudget{};
  CHECK_THROWS_AS(multi_run(set, cfg, rng), std::invalid_argument);
}

TEST_CASE("the ln(2)/P run count puts the median best at the target") {
  // On {-1,1}^4, enumerate all 1820 saturated subsets to get the exact
  // distribution of phi; choose a target with appreciable tail mass P,
  // run N = ceil(ln 2 / P) uniform draws and check the empirical median
  // of the best value meets the target.
  const RegressorSet cube = gen_hypercube(4);
  std::vector<double> values;
  detail::for_each_combination(16, 4, [&](std::span<const Index> comb) {
    values.push_back(
        d_criterion(info_matrix(cube, Subset({comb.begin(), comb.end()}, 16))));
  });
  std::sort(values.begin(), values.end());
  const double target = values[static_cast<std::size_t>(values.size() * 0.8)];
  const double tail = static_cast<double>(std::count_if(
                          values.begin(), values.end(),
                          [&](double v) { return v >= target; })) /
                      static_cast<double>(values.size());
  const auto runs = static_cast<std::uint64_t>(std::ceil(std::log(2.0) / tail));

  StrategyConfig cfg;
  cfg.base = Method::rnd;
  cfg.budget.runs = runs;
  Rng gen(107);
  int hits = 0;
  const int trials = 1001;
  for (int t = 0; t < trials; ++t) {
    Rng rng = gen.split(static_cast<std::uint64_t>(t));
    try {
      if (multi_run(cube, cfg, rng).best_value >= target) ++hits;
    } catch (const AllRunsSingularError&) {
    }
  }
  CHECK(hits * 2 >= trials);  // empirical median >= target
}
