#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "satsel/bench.hpp"
#include "satsel/io.hpp"

namespace {

using namespace satsel;

struct SelectMethod {
  Method base = Method::gkm;
  bool preselect = false;
};

SelectMethod parse_select_method(const std::string& name) {
  if (name == "rnd") return {Method::rnd, false};
  if (name == "rndl") return {Method::rnd_leverage, false};
  if (name == "rgh") return {Method::rgh, false};
  if (name == "gkm") return {Method::gkm, false};
  if (name == "gkmr") return {Method::gkm_randomized, false};
  if (name == "kym") return {Method::kym, false};
  if (name == "gkma") return {Method::gkm_a_opt, false};
  if (name == "gkmf") return {Method::gkm, true};
  if (name == "kymf") return {Method::kym, true};
  throw std::invalid_argument("unknown method '" + name + "'");
}

Criterion parse_criterion(const std::string& name) {
  if (name == "d") return Criterion::D;
  if (name == "a") return Criterion::A;
  throw std::invalid_argument("criterion must be 'd' or 'a'");
}

void write_text(const std::string& path, const std::string& body) {
  if (path.empty() || path == "-") {
    std::cout << body;
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << body;
}

std::vector<Index> parse_index_list(const std::string& text) {
  std::vector<Index> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(static_cast<Index>(std::stoll(item)));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"satsel: D-efficient saturated subset selection"};
  app.name("satsel");
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "print help for every subcommand");

  // generate
  auto* cmd_generate = app.add_subcommand(
      "generate", "generate an instance and write it as a matrix CSV");
  std::string gen_spec;
  std::optional<std::uint64_t> gen_seed;
  std::string gen_out;
  cmd_generate->add_option("--spec", gen_spec,
                           "instance spec: wishart:n=..,d=..[,seed=..] or hypercube:m=..")
      ->required();
  cmd_generate->add_option("--seed", gen_seed, "override the spec seed");
  cmd_generate->add_option("--out", gen_out, "output matrix CSV path ('-' for stdout)");

  // select
  auto* cmd_select =
      app.add_subcommand("select", "select a subset from a matrix CSV");
  std::string sel_in, sel_method = "gkm", sel_out, sel_criterion = "d";
  bool sel_header = false;
  std::uint64_t sel_seed = 0;
  double sel_delta = 1e-4, sel_alpha = 1.0;
  std::optional<Index> sel_size;
  Index sel_batch = 1, sel_k = 50;
  std::optional<std::uint64_t> sel_runs;
  std::optional<double> sel_budget;
  cmd_select->add_option("--in", sel_in, "input matrix CSV")->required();
  cmd_select->add_flag("--header", sel_header, "skip the first CSV line");
  cmd_select->add_option(
      "--method", sel_method,
      "one of rnd, rndl, rgh, gkm, gkmr, kym, gkma, gkmf, kymf");
  cmd_select->add_option("--seed", sel_seed, "RNG master seed");
  cmd_select->add_option("--delta", sel_delta, "RGH regularization");
  cmd_select->add_option("--alpha", sel_alpha, "randomized-GKM exponent");
  cmd_select->add_option("--size", sel_size, "subset size s (default m)");
  cmd_select->add_option("--batch", sel_batch, "batch size of the general-size scheme");
  cmd_select->add_option("--k", sel_k, "pre-selection multiplier for gkmf/kymf");
  cmd_select->add_option("--criterion", sel_criterion, "criterion for multi-run best-of: d or a");
  cmd_select->add_option("--runs", sel_runs, "multi-run count budget");
  cmd_select->add_option("--budget-seconds", sel_budget, "multi-run time budget");
  cmd_select->add_option("--out", sel_out, "output JSON path ('-' for stdout)");
  std::string sel_profile_out;
  cmd_select->add_option("--profile-out", sel_profile_out,
                         "also write the multi-run profile CSV here");

  // evaluate
  auto* cmd_evaluate =
      app.add_subcommand("evaluate", "efficiency report for a given subset");
  std::string eval_in, eval_subset, eval_subset_file, eval_out;
  bool eval_header = false, eval_oracle = false;
  double eval_tol = 1e-5;
  cmd_evaluate->add_option("--in", eval_in, "input matrix CSV")->required();
  cmd_evaluate->add_flag("--header", eval_header, "skip the first CSV line");
  cmd_evaluate->add_option("--subset", eval_subset, "comma-separated row indices");
  cmd_evaluate->add_option("--subset-file", eval_subset_file,
                           "JSON file with an 'indices' array (select output)");
  cmd_evaluate->add_flag("--oracle", eval_oracle,
                         "also run the brute-force oracle (guarded)");
  cmd_evaluate->add_option("--tol", eval_tol, "approximate-design certificate tolerance");
  cmd_evaluate->add_option("--out", eval_out, "output JSON path ('-' for stdout)");

  // bench
  auto* cmd_bench = app.add_subcommand("bench", "timing/efficiency benchmark table");
  std::vector<std::string> bench_specs;
  std::string bench_methods = "gkm,kym,rnd", bench_out;
  int bench_reps = 21;
  std::uint64_t bench_seed = 0;
  double bench_tol = 1e-3, bench_delta = 1e-4, bench_alpha = 1.0;
  int bench_threads = static_cast<int>(std::thread::hardware_concurrency());
  Index bench_k = 50;
  bool bench_no_eff = false;
  cmd_bench->add_option("--spec", bench_specs, "instance spec (repeatable)")
      ->required();
  cmd_bench->add_option("--methods", bench_methods, "comma list of methods");
  cmd_bench->add_option("--reps", bench_reps, "repetitions per cell");
  cmd_bench->add_option("--seed", bench_seed, "RNG master seed");
  cmd_bench->add_option("--tol", bench_tol, "phi* certificate tolerance");
  cmd_bench->add_option("--delta", bench_delta, "RGH regularization");
  cmd_bench->add_option("--alpha", bench_alpha, "randomized-GKM exponent");
  cmd_bench->add_option("--k", bench_k, "pre-selection multiplier");
  cmd_bench->add_option("--threads", bench_threads, "parallel cells (default: cores)");
  cmd_bench->add_flag("--no-eff", bench_no_eff, "skip efficiency evaluation");
  cmd_bench->add_option("--out", bench_out, "output results CSV")->required();

  // profile
  auto* cmd_profile =
      app.add_subcommand("profile", "multi-run best-efficiency time profile");
  std::string prof_spec, prof_method = "rnd", prof_out;
  double prof_budget = 1.0, prof_tol = 1e-3, prof_alpha = 1.0;
  std::uint64_t prof_seed = 0;
  Index prof_k = 50;
  cmd_profile->add_option("--spec", prof_spec, "instance spec")->required();
  cmd_profile->add_option("--method", prof_method,
                          "randomized method: rnd, rndl, gkmr, kym, gkmf, kymf");
  cmd_profile->add_option("--budget-seconds", prof_budget, "time budget");
  cmd_profile->add_option("--seed", prof_seed, "RNG master seed");
  cmd_profile->add_option("--tol", prof_tol, "phi* certificate tolerance");
  cmd_profile->add_option("--alpha", prof_alpha, "randomized-GKM exponent");
  cmd_profile->add_option("--k", prof_k, "pre-selection multiplier");
  cmd_profile->add_option("--out", prof_out, "output profile CSV")->required();

  // singular-prob
  auto* cmd_singular = app.add_subcommand(
      "singular-prob", "probability that a uniform random subset is singular");
  std::optional<int> sing_hypercube;
  std::string sing_in;
  bool sing_header = false, sing_exact = false;
  std::optional<std::uint64_t> sing_mc;
  std::optional<Index> sing_size;
  std::uint64_t sing_seed = 0;
  cmd_singular->add_option("--hypercube", sing_hypercube, "use the {-1,1}^m universe");
  cmd_singular->add_option("--in", sing_in, "input matrix CSV");
  cmd_singular->add_flag("--header", sing_header, "skip the first CSV line");
  cmd_singular->add_flag("--exact", sing_exact, "exact enumeration (guarded)");
  cmd_singular->add_option("--mc", sing_mc, "Monte-Carlo trial count");
  cmd_singular->add_option("--size", sing_size, "subset size s (default m)");
  cmd_singular->add_option("--seed", sing_seed, "RNG seed for Monte-Carlo mode");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*cmd_generate) {
      InstanceSpec spec = parse_instance_spec(gen_spec);
      if (gen_seed) spec.seed = *gen_seed;
      const RegressorSet set = realize_instance(spec);
      if (gen_out.empty() || gen_out == "-") {
        write_matrix_csv(std::cout, set.data());
      } else {
        write_matrix_csv_file(gen_out, set.data());
      }
    } else if (*cmd_select) {
      const RegressorSet set(read_matrix_csv_file(sel_in, sel_header));
      const SelectMethod method = parse_select_method(sel_method);
      HeuristicConfig hc;
      hc.delta = sel_delta;
      hc.alpha = sel_alpha;
      hc.seed = sel_seed;
      hc.criterion = parse_criterion(sel_criterion);
      StrategyConfig sc;
      sc.s = sel_size.value_or(set.m());
      sc.b = sel_batch;
      sc.k = sel_k;
      sc.base = method.base;
      sc.preselect = method.preselect;
      sc.heuristic = hc;
      Rng rng(sel_seed);

      if (method.preselect && sel_size && *sel_size != set.m()) {
        throw std::invalid_argument("pre-selected methods produce saturated subsets;"
                                    " --size is not supported with gkmf/kymf");
      }
      SelectionTrace trace;
      if (sel_runs || sel_budget) {
        sc.budget.runs = sel_runs;
        sc.budget.seconds = sel_budget;
        const auto result = multi_run(set, sc, rng);
        trace = result.best;
        if (!sel_profile_out.empty()) {
          std::ofstream profile(sel_profile_out);
          if (!profile) throw IoError("cannot write '" + sel_profile_out + "'");
          write_multi_run_profile_csv(profile, result.profile);
        }
      } else if (method.preselect) {
        trace = preselect(set, sc, rng);
      } else if (sc.s != set.m()) {
        trace = general_size(set, sc, rng);
      } else {
        trace = run_method(set, method.base, hc, rng);
      }
      const double phi = hc.criterion == Criterion::D
                             ? d_criterion(info_matrix(set, trace.subset))
                             : a_criterion(info_matrix(set, trace.subset));
      write_text(sel_out, trace_to_json(trace, phi).dump(2) + "\n");
    } else if (*cmd_evaluate) {
      const RegressorSet set(read_matrix_csv_file(eval_in, eval_header));
      std::vector<Index> indices;
      if (!eval_subset.empty()) {
        indices = parse_index_list(eval_subset);
      } else if (!eval_subset_file.empty()) {
        std::ifstream in(eval_subset_file);
        if (!in) throw IoError("cannot open subset file '" + eval_subset_file + "'");
        nlohmann::json j;
        in >> j;
        indices = j.at("indices").get<std::vector<Index>>();
      } else {
        throw std::invalid_argument("evaluate needs --subset or --subset-file");
      }
      const Subset subset(indices, set.n());
      const auto report =
          efficiency_report(set, subset, subset.size(), eval_oracle, eval_tol);
      write_text(eval_out, report_to_json(report).dump(2) + "\n");
    } else if (*cmd_bench) {
      std::vector<InstanceSpec> specs;
      for (const auto& s : bench_specs) specs.push_back(parse_instance_spec(s));
      std::vector<BenchMethod> methods;
      std::stringstream ss(bench_methods);
      std::string item;
      while (std::getline(ss, item, ',')) methods.push_back(parse_bench_method(item));
      BenchConfig cfg;
      cfg.repetitions = bench_reps;
      cfg.seed = bench_seed;
      cfg.tol = bench_tol;
      cfg.with_efficiency = !bench_no_eff;
      cfg.threads = std::max(1, bench_threads);
      cfg.k = static_cast<int>(bench_k);
      cfg.heuristic.delta = bench_delta;
      cfg.heuristic.alpha = bench_alpha;
      run_benchmark(specs, methods, cfg, bench_out);
    } else if (*cmd_profile) {
      const InstanceSpec spec = parse_instance_spec(prof_spec);
      BenchConfig cfg;
      cfg.seed = prof_seed;
      cfg.tol = prof_tol;
      cfg.k = static_cast<int>(prof_k);
      cfg.heuristic.alpha = prof_alpha;
      run_profile(spec, parse_bench_method(prof_method), prof_budget, cfg, prof_out);
    } else if (*cmd_singular) {
      if (!sing_hypercube && sing_in.empty()) {
        throw std::invalid_argument("singular-prob needs --hypercube M or --in F.csv");
      }
      RegressorSet set = sing_hypercube
                             ? gen_hypercube(*sing_hypercube)
                             : RegressorSet(read_matrix_csv_file(sing_in, sing_header));
      const Index s = sing_size.value_or(set.m());
      SingularProbability p;
      if (sing_exact) {
        p = singular_probability_exact(set, s);
      } else if (sing_mc) {
        Rng rng(sing_seed);
        p = singular_probability_mc(set, s, *sing_mc, rng);
      } else {
        throw std::invalid_argument("singular-prob needs --exact or --mc N");
      }
      std::printf("%.15g\n", p.value());
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const satsel::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
