#ifndef SATSEL_BENCH_HPP
#define SATSEL_BENCH_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "satsel/evaluation.hpp"
#include "satsel/strategies.hpp"

namespace satsel {

struct InstanceSpec {
  enum class Kind { wishart_normal, hypercube, csv_file };
  Kind kind = Kind::wishart_normal;
  Index n = 0;           ///< wishart row count
  int dim = 0;           ///< wishart d (rows live in R^{d+1}) or hypercube m
  std::uint64_t seed = 0;
  std::string path;      ///< csv_file source
};

std::string kind_name(InstanceSpec::Kind kind);

/// Parse "wishart:n=100000,d=10[,seed=7]", "hypercube:m=4" or
/// "csv:path=F.csv".
InstanceSpec parse_instance_spec(const std::string& text);

/// Covariance from W_d(I_d, d) and the lifted rows (x_i', 1)'.
struct WishartInstance {
  Matrix sigma;
  RegressorSet set;
};

WishartInstance gen_wishart_normal_instance(Index n, int d, Rng& rng);
RegressorSet gen_wishart_normal(Index n, int d, Rng& rng);

/// All 2^m sign vectors in lexicographic order; 2 <= m <= 20.
RegressorSet gen_hypercube(int m);

/// Materialize a spec (loads the file for csv_file kinds).
RegressorSet realize_instance(const InstanceSpec& spec);

struct SingularProbability {
  std::uint64_t singular = 0;
  std::uint64_t total = 0;
  double value() const {
    return static_cast<double>(singular) / static_cast<double>(total);
  }
};

/// Exact enumeration of P(uniform s-subset of F is singular);
/// guarded by C(n,s) <= 1e7.
SingularProbability singular_probability_exact(const RegressorSet& set, Index s);

/// Monte-Carlo estimate with the given number of trials.
SingularProbability singular_probability_mc(const RegressorSet& set, Index s,
                                            std::uint64_t trials, Rng& rng);

enum class BenchMethod { RND, RNDl, RGH, GKM, GKMr, KYM, GKMf, KYMf };

std::string bench_method_name(BenchMethod method);
BenchMethod parse_bench_method(const std::string& name);
bool bench_method_is_randomized(BenchMethod method);

struct BenchConfig {
  int repetitions = 21;
  std::uint64_t seed = 0;
  double tol = 1e-3;        ///< certificate tolerance for the phi* bound
  bool with_efficiency = true;
  int threads = 1;
  int k = 50;               ///< pre-selection multiplier for GKMf/KYMf
  /// Evict the CPU caches before every timed cell. Scaling comparisons
  /// across working-set sizes want this: with warm caches, a size that
  /// happens to fit in cache measures at cache speed while the next
  /// size streams from memory, and the ratio reflects the machine's
  /// cache capacity instead of the algorithm.
  bool evict_caches = false;
  HeuristicConfig heuristic;
};

struct BenchResult {
  std::string method;
  std::string kind;
  Index n = 0;
  Index m = 0;
  std::uint64_t seed = 0;
  int rep = 0;
  double elapsed_s = 0.0;
  double phi = 0.0;
  double eff_lower = 0.0;
  std::optional<double> eff_exact;
  bool singular = false;
};

/// Run each method x instance x repetition; only the selection itself is
/// timed. Results are appended to the CSV at `csv_path` when non-empty.
std::vector<BenchResult> run_benchmark(const std::vector<InstanceSpec>& specs,
                                       const std::vector<BenchMethod>& methods,
                                       const BenchConfig& cfg,
                                       const std::string& csv_path = {});

void write_results_csv(std::ostream& out, const std::vector<BenchResult>& results);
std::vector<BenchResult> read_results_csv(std::istream& in);

/// Time-profile of the multi-run best efficiency for one randomized
/// method, written as run_index,cumulative_s,best_eff rows.
std::vector<ProfilePoint> run_profile(const InstanceSpec& spec, BenchMethod method,
                                      double budget_seconds, const BenchConfig& cfg,
                                      const std::string& csv_path = {});

}  // namespace satsel

#endif
