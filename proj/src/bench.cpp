#include "satsel/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "satsel/io.hpp"

namespace satsel {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t parse_u64(const std::string& text) {
  std::size_t used = 0;
  const auto v = std::stoull(text, &used);
  if (used != text.size()) throw std::invalid_argument("bad integer '" + text + "'");
  return v;
}

}  // namespace

std::string kind_name(InstanceSpec::Kind kind) {
  switch (kind) {
    case InstanceSpec::Kind::wishart_normal: return "wishart";
    case InstanceSpec::Kind::hypercube: return "hypercube";
    case InstanceSpec::Kind::csv_file: return "csv";
  }
  return "?";
}

InstanceSpec parse_instance_spec(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  InstanceSpec spec;
  if (head == "wishart") {
    spec.kind = InstanceSpec::Kind::wishart_normal;
  } else if (head == "hypercube") {
    spec.kind = InstanceSpec::Kind::hypercube;
  } else if (head == "csv") {
    spec.kind = InstanceSpec::Kind::csv_file;
  } else {
    throw std::invalid_argument("unknown instance kind '" + head + "'");
  }
  std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  std::stringstream ss(rest);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("bad spec item '" + item + "', want key=value");
    }
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "n") {
      spec.n = static_cast<Index>(parse_u64(value));
    } else if (key == "d" || key == "m") {
      spec.dim = static_cast<int>(parse_u64(value));
    } else if (key == "seed") {
      spec.seed = parse_u64(value);
    } else if (key == "path") {
      spec.path = value;
    } else {
      throw std::invalid_argument("unknown spec key '" + key + "'");
    }
  }
  return spec;
}

WishartInstance gen_wishart_normal_instance(Index n, int d, Rng& rng) {
  if (d < 1 || n < d + 1) {
    throw std::invalid_argument("wishart instance needs n >= d+1 >= 2");
  }
  Matrix g(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) g(i, j) = rng.normal();
  }
  Matrix sigma = g.transpose() * g;
  const Eigen::LLT<Matrix> llt(sigma);
  Matrix rows(n, d + 1);
  Vector z(d);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) z(j) = rng.normal();
    rows.row(i).head(d) = (llt.matrixL() * z).transpose();
    rows(i, d) = 1.0;
  }
  return WishartInstance{std::move(sigma), RegressorSet(std::move(rows))};
}

RegressorSet gen_wishart_normal(Index n, int d, Rng& rng) {
  return gen_wishart_normal_instance(n, d, rng).set;
}

RegressorSet gen_hypercube(int m) {
  if (m < 2 || m > 20) {
    throw InstanceTooLargeError("hypercube m must be in [2, 20], got " +
                                std::to_string(m));
  }
  const Index n = Index{1} << m;
  Matrix rows(n, m);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < m; ++j) {
      rows(i, j) = ((i >> (m - 1 - j)) & 1) ? 1.0 : -1.0;
    }
  }
  return RegressorSet(std::move(rows));
}

RegressorSet realize_instance(const InstanceSpec& spec) {
  switch (spec.kind) {
    case InstanceSpec::Kind::wishart_normal: {
      Rng rng(spec.seed);
      return gen_wishart_normal(spec.n, spec.dim, rng);
    }
    case InstanceSpec::Kind::hypercube:
      return gen_hypercube(spec.dim);
    case InstanceSpec::Kind::csv_file:
      return RegressorSet(read_matrix_csv_file(spec.path));
  }
  throw std::invalid_argument("unknown instance kind");
}

namespace {

double subset_phi(const RegressorSet& set, const std::vector<Index>& picks) {
  Matrix info = Matrix::Zero(set.m(), set.m());
  for (Index i : picks) {
    info.selfadjointView<Eigen::Lower>().rankUpdate(set.data().row(i).transpose());
  }
  info.triangularView<Eigen::StrictlyUpper>() = info.transpose();
  return detail::d_value(info);
}

// Sweep a buffer larger than any plausible last-level cache.
void evict_cpu_caches() {
  constexpr std::size_t kBytes = std::size_t{320} * 1024 * 1024;
  thread_local std::vector<std::uint64_t> junk(kBytes / sizeof(std::uint64_t), 1);
  volatile std::uint64_t sink = 0;
  for (std::size_t i = 0; i < junk.size(); i += 8) {
    junk[i] += 1;
    sink = sink + junk[i];
  }
  (void)sink;
}

}  // namespace

SingularProbability singular_probability_exact(const RegressorSet& set, Index s) {
  if (s < 1 || s > set.n()) {
    throw InfeasibleSizeError("singular probability: size " + std::to_string(s) +
                              " infeasible for n = " + std::to_string(set.n()));
  }
  const auto count =
      detail::binomial_capped(set.n(), s, detail::kEnumerationGuard);
  if (count > detail::kEnumerationGuard) {
    throw InstanceTooLargeError("exact singular probability: C(n,s) exceeds the guard");
  }
  SingularProbability p;
  Matrix info(set.m(), set.m());
  detail::for_each_combination(set.n(), s, [&](std::span<const Index> comb) {
    info.setZero();
    for (Index i : comb) {
      info.selfadjointView<Eigen::Lower>().rankUpdate(set.data().row(i).transpose());
    }
    info.triangularView<Eigen::StrictlyUpper>() = info.transpose();
    ++p.total;
    if (detail::is_singular(info)) ++p.singular;
  });
  return p;
}

SingularProbability singular_probability_mc(const RegressorSet& set, Index s,
                                            std::uint64_t trials, Rng& rng) {
  if (s < 1 || s > set.n()) {
    throw InfeasibleSizeError("singular probability: size " + std::to_string(s) +
                              " infeasible for n = " + std::to_string(set.n()));
  }
  if (trials == 0) throw std::invalid_argument("monte carlo needs trials >= 1");
  SingularProbability p;
  Matrix info(set.m(), set.m());
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto draw = detail::rnd_steps(set.n(), s, rng);
    info.setZero();
    for (Index i : draw.picks) {
      info.selfadjointView<Eigen::Lower>().rankUpdate(set.data().row(i).transpose());
    }
    info.triangularView<Eigen::StrictlyUpper>() = info.transpose();
    ++p.total;
    if (detail::is_singular(info)) ++p.singular;
  }
  return p;
}

std::string bench_method_name(BenchMethod method) {
  switch (method) {
    case BenchMethod::RND: return "RND";
    case BenchMethod::RNDl: return "RNDl";
    case BenchMethod::RGH: return "RGH";
    case BenchMethod::GKM: return "GKM";
    case BenchMethod::GKMr: return "GKMr";
    case BenchMethod::KYM: return "KYM";
    case BenchMethod::GKMf: return "GKMf";
    case BenchMethod::KYMf: return "KYMf";
  }
  return "?";
}

BenchMethod parse_bench_method(const std::string& name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "rnd") return BenchMethod::RND;
  if (lower == "rndl") return BenchMethod::RNDl;
  if (lower == "rgh") return BenchMethod::RGH;
  if (lower == "gkm") return BenchMethod::GKM;
  if (lower == "gkmr") return BenchMethod::GKMr;
  if (lower == "kym") return BenchMethod::KYM;
  if (lower == "gkmf") return BenchMethod::GKMf;
  if (lower == "kymf") return BenchMethod::KYMf;
  throw std::invalid_argument("unknown method '" + name + "'");
}

bool bench_method_is_randomized(BenchMethod method) {
  switch (method) {
    case BenchMethod::RGH:
    case BenchMethod::GKM:
      return false;
    default:
      return true;
  }
}

namespace {

SelectionTrace run_bench_method(const RegressorSet& set, BenchMethod method,
                                const BenchConfig& cfg, Rng& rng) {
  StrategyConfig strat;
  strat.s = set.m();
  strat.k = cfg.k;
  strat.heuristic = cfg.heuristic;
  switch (method) {
    case BenchMethod::RND: return rnd_saturated(set, rng);
    case BenchMethod::RNDl: return rnd_leverage_saturated(set, rng);
    case BenchMethod::RGH: return rgh(set, cfg.heuristic);
    case BenchMethod::GKM: return gkm(set);
    case BenchMethod::GKMr: return gkm_randomized(set, cfg.heuristic, rng);
    case BenchMethod::KYM: return kym(set, rng);
    case BenchMethod::GKMf:
      strat.base = Method::gkm;
      return preselect(set, strat, rng);
    case BenchMethod::KYMf:
      strat.base = Method::kym;
      return preselect(set, strat, rng);
  }
  throw std::invalid_argument("unknown method");
}

// Max |det| of an m x m sign matrix equals m^{m/2} exactly when a
// Hadamard matrix of that order exists, i.e. phi_opt = m.
bool hadamard_order(Index m) { return m == 1 || m == 2 || m % 4 == 0; }

}  // namespace

std::vector<BenchResult> run_benchmark(const std::vector<InstanceSpec>& specs,
                                       const std::vector<BenchMethod>& methods,
                                       const BenchConfig& cfg,
                                       const std::string& csv_path) {
  struct Instance {
    RegressorSet set;
    double phi_star = 0.0;
    std::optional<double> phi_opt;
  };
  std::vector<Instance> instances;
  instances.reserve(specs.size());
  for (const InstanceSpec& spec : specs) {
    Instance inst{realize_instance(spec), 0.0, std::nullopt};
    if (cfg.with_efficiency) {
      inst.phi_star = static_cast<double>(inst.set.m()) *
                      approx_design_optimum(inst.set, cfg.tol).value;
      if (detail::binomial_capped(inst.set.n(), inst.set.m(),
                                  detail::kEnumerationGuard) <=
          detail::kEnumerationGuard) {
        inst.phi_opt = brute_force_optimal(inst.set, inst.set.m(), Criterion::D).value;
      } else if (spec.kind == InstanceSpec::Kind::hypercube &&
                 hadamard_order(inst.set.m())) {
        inst.phi_opt = static_cast<double>(inst.set.m());
      }
    }
    instances.push_back(std::move(inst));
  }

  // Cells run rep-major so drifting host load spreads evenly across
  // specs and methods instead of skewing whichever block ran last.
  struct Cell {
    std::size_t spec_index;
    std::size_t method_index;
    int rep;
  };
  std::vector<Cell> cells;
  std::vector<BenchResult> results;
  for (int rep = 0; rep < cfg.repetitions; ++rep) {
    for (std::size_t si = 0; si < specs.size(); ++si) {
      for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        cells.push_back(Cell{si, mi, rep});
        BenchResult r;
        r.method = bench_method_name(methods[mi]);
        r.kind = kind_name(specs[si].kind);
        r.n = instances[si].set.n();
        r.m = instances[si].set.m();
        r.seed = specs[si].seed;
        r.rep = rep;
        results.push_back(std::move(r));
      }
    }
  }

  Rng master(cfg.seed);
  auto run_cell = [&](std::size_t cell_index) {
    const Cell& cell = cells[cell_index];
    const Instance& inst = instances[cell.spec_index];
    BenchResult& r = results[cell_index];
    Rng rng = master.split(cell.spec_index).split(cell.method_index)
                  .split(static_cast<std::uint64_t>(cell.rep));
    if (cfg.evict_caches) evict_cpu_caches();
    double phi = 0.0;
    const auto t0 = Clock::now();
    try {
      const SelectionTrace trace =
          run_bench_method(inst.set, methods[cell.method_index], cfg, rng);
      r.elapsed_s = std::chrono::duration<double>(Clock::now() - t0).count();
      phi = subset_phi(inst.set, trace.subset.indices());
    } catch (const RankDeficientError&) {
      r.elapsed_s = std::chrono::duration<double>(Clock::now() - t0).count();
      phi = 0.0;
    }
    r.phi = phi;
    r.singular = phi == 0.0;
    if (cfg.with_efficiency && inst.phi_star > 0.0) {
      r.eff_lower = phi / inst.phi_star;
      if (inst.phi_opt) r.eff_exact = phi / *inst.phi_opt;
    }
  };

  const int threads = std::max(1, cfg.threads);
  if (threads == 1) {
    for (std::size_t c = 0; c < cells.size(); ++c) run_cell(c);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t c = next.fetch_add(1);
          if (c >= cells.size()) return;
          run_cell(c);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) throw IoError("cannot write results CSV '" + csv_path + "'");
    write_results_csv(out, results);
  }
  return results;
}

void write_results_csv(std::ostream& out, const std::vector<BenchResult>& results) {
  out << "method,kind,n,m,seed,rep,elapsed_s,phi,eff_lower,eff_exact,singular\n";
  for (const auto& r : results) {
    out << r.method << ',' << r.kind << ',' << r.n << ',' << r.m << ',' << r.seed
        << ',' << r.rep << ',' << format_double(r.elapsed_s) << ','
        << format_double(r.phi) << ',' << format_double(r.eff_lower) << ','
        << (r.eff_exact ? format_double(*r.eff_exact) : std::string{}) << ','
        << (r.singular ? '1' : '0') << '\n';
  }
}

std::vector<BenchResult> read_results_csv(std::istream& in) {
  std::vector<BenchResult> results;
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty results CSV");
  if (line != "method,kind,n,m,seed,rep,elapsed_s,phi,eff_lower,eff_exact,singular") {
    throw IoError("unexpected results CSV header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t next = line.find(',', pos);
      if (next == std::string::npos) next = line.size();
      cells.push_back(line.substr(pos, next - pos));
      pos = next + 1;
      if (next == line.size()) break;
    }
    if (cells.size() != 11) {
      throw IoError("bad results CSV row: " + line);
    }
    BenchResult r;
    r.method = cells[0];
    r.kind = cells[1];
    r.n = static_cast<Index>(parse_u64(cells[2]));
    r.m = static_cast<Index>(parse_u64(cells[3]));
    r.seed = parse_u64(cells[4]);
    r.rep = static_cast<int>(parse_u64(cells[5]));
    r.elapsed_s = std::stod(cells[6]);
    r.phi = std::stod(cells[7]);
    r.eff_lower = std::stod(cells[8]);
    if (!cells[9].empty()) r.eff_exact = std::stod(cells[9]);
    r.singular = cells[10] == "1";
    results.push_back(std::move(r));
  }
  return results;
}

std::vector<ProfilePoint> run_profile(const InstanceSpec& spec, BenchMethod method,
                                      double budget_seconds, const BenchConfig& cfg,
                                      const std::string& csv_path) {
  if (!bench_method_is_randomized(method)) {
    throw std::invalid_argument("profile needs a randomized method, got " +
                                bench_method_name(method));
  }
  if (budget_seconds <= 0.0) {
    throw std::invalid_argument("profile budget must be positive");
  }
  const RegressorSet set = realize_instance(spec);
  const double phi_star =
      static_cast<double>(set.m()) * approx_design_optimum(set, cfg.tol).value;

  StrategyConfig strat;
  strat.s = set.m();
  strat.k = cfg.k;
  strat.heuristic = cfg.heuristic;
  strat.budget.seconds = budget_seconds;
  switch (method) {
    case BenchMethod::RND: strat.base = Method::rnd; break;
    case BenchMethod::RNDl: strat.base = Method::rnd_leverage; break;
    case BenchMethod::GKMr: strat.base = Method::gkm_randomized; break;
    case BenchMethod::KYM: strat.base = Method::kym; break;
    case BenchMethod::GKMf:
      strat.base = Method::gkm;
      strat.preselect = true;
      break;
    case BenchMethod::KYMf:
      strat.base = Method::kym;
      strat.preselect = true;
      break;
    default:
      throw std::invalid_argument("profile needs a randomized method");
  }

  Rng rng(cfg.seed);
  auto result = multi_run(set, strat, rng);
  for (auto& point : result.profile) {
    point.best_eff = point.best_value / phi_star;
  }
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) throw IoError("cannot write profile CSV '" + csv_path + "'");
    out << "run_index,cumulative_s,best_eff\n";
    for (const auto& point : result.profile) {
      out << point.run_index << ',' << format_double(point.cumulative_s) << ','
          << format_double(*point.best_eff) << '\n';
    }
  }
  return result.profile;
}

}  // namespace satsel
