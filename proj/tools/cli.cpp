// Copyright 2026 The pnf Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pnf/analysis.hpp"
#include "pnf/error.hpp"
#include "pnf/exact.hpp"
#include "pnf/format.hpp"
#include "pnf/mechanisms.hpp"
#include "pnf/optimality.hpp"
#include "pnf/rng.hpp"
#include "pnf/simplex.hpp"
#include "pnf/tasks.hpp"

namespace pnf::cli {

namespace {

using Json = nlohmann::ordered_json;

// Raised for bad flag combinations detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json num(double value) {
  if (!std::isfinite(value)) return nullptr;
  return round_significant(value);
}

Json num_array(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(num(v[i]));
  return out;
}

Json pmf_json(const SelectionDistribution& dist) {
  Json out;
  out["probs"] = num_array(dist.probs);
  out["method"] = to_string(dist.method);
  if (dist.method == PmfMethod::kNoisyMaxQuadrature) {
    out["normalization_defect"] = num(dist.normalization_defect);
  }
  return out;
}

std::string csv_field(double value) { return format_number(value); }

struct Globals {
  double epsilon = 1.0;
  double delta = 1.0;
  bool monotonic = false;
  std::optional<std::uint64_t> seed;
  std::string format;
  std::string output;

  PrivacyParams params() const {
    return PrivacyParams(epsilon, delta, monotonic);
  }
  std::uint64_t resolved_seed() const {
    if (seed) return *seed;
    if (const char* env = std::getenv("PNF_SEED")) {
      char* end = nullptr;
      const unsigned long long value = std::strtoull(env, &end, 10);
      if (end == env || *end != '\0') {
        throw UsageError("PNF_SEED must be a non-negative integer");
      }
      return value;
    }
    return kDefaultSeed;
  }
  bool csv(const char* fallback) const {
    return (format.empty() ? std::string(fallback) : format) == "csv";
  }
};

struct ScoreInput {
  std::string inline_scores;
  std::string file;

  QualityScores load() const {
    if (inline_scores.empty() == file.empty()) {
      throw UsageError("give exactly one of --scores or --scores-file");
    }
    std::vector<double> values;
    auto parse = [&](const std::string& token, int line) {
      const std::size_t first = token.find_first_not_of(" \t\r");
      if (first == std::string::npos) return;
      const std::string text = token.substr(first);
      char* end = nullptr;
      const double v = std::strtod(text.c_str(), &end);
      const std::string rest(end);
      if (end == text.c_str() ||
          rest.find_first_not_of(" \t\r") != std::string::npos) {
        throw ParseError("cannot parse score '" + text + "'" +
                             (line > 0 ? " on line " + std::to_string(line)
                                       : std::string()),
                         line);
      }
      values.push_back(v);
    };
    if (!inline_scores.empty()) {
      std::stringstream ss(inline_scores);
      std::string token;
      while (std::getline(ss, token, ',')) parse(token, 0);
    } else {
      std::ifstream in(file);
      if (!in) throw InvalidArgument("cannot open " + file);
      std::string line;
      int line_no = 0;
      while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line[0] == '#') continue;
        parse(line, line_no);
      }
    }
    if (values.empty()) throw InvalidArgument("no scores given");
    return QualityScores(Vector::Map(values.data(), values.size()));
  }
};

void add_score_options(CLI::App* cmd, ScoreInput& input) {
  cmd->add_option("--scores", input.inline_scores,
                  "comma-separated quality scores");
  cmd->add_option("--scores-file", input.file,
                  "file with one score per line ('#' starts a comment)");
}

// ---------------------------------------------------------------- sample

struct SampleArgs {
  ScoreInput scores;
  std::string sampler = "pf";
  std::size_t count = 1;
};

void run_sample(const Globals& g, const SampleArgs& a, std::ostream& out) {
  const QualityScores q = a.scores.load();
  const PrivacyParams params = g.params();
  const SamplerKind kind = parse_sampler(a.sampler);
  const std::uint64_t seed = g.resolved_seed();
  const std::vector<Index> draws = sample_many(kind, q, params, a.count, seed);
  if (g.csv("json")) {
    out << "draw,index\n";
    for (std::size_t i = 0; i < draws.size(); ++i) {
      out << i + 1 << ',' << draws[i] + 1 << '\n';
    }
    return;
  }
  Json j;
  j["mechanism"] = to_string(target_mechanism(kind));
  j["sampler"] = to_string(kind);
  j["epsilon"] = num(params.epsilon);
  j["delta"] = num(params.delta);
  j["seed"] = seed;
  j["count"] = draws.size();
  Json indices = Json::array();
  for (const Index d : draws) indices.push_back(d + 1);
  j["indices"] = std::move(indices);
  j["frequencies"] = num_array(empirical_pmf(draws, q.size()));
  j["pmf"] = pmf_json(exact_pmf(target_mechanism(kind), q, params));
  out << j.dump(2) << '\n';
}

// --------------------------------------------------------------- analyze

struct AnalyzeArgs {
  ScoreInput scores;
  bool noisy_max = false;
};

void run_analyze(const Globals& g, const AnalyzeArgs& a, std::ostream& out) {
  const QualityScores q = a.scores.load();
  const PrivacyParams params = g.params();
  const DominanceReport dom = check_dominance(q, params);
  if (g.csv("json")) {
    out << "t,pf_ccdf,em_ccdf\n";
    for (const auto& row : dom.table) {
      out << csv_field(row[0]) << ',' << csv_field(row[1]) << ','
          << csv_field(row[2]) << '\n';
    }
    return;
  }
  Json j;
  j["n"] = q.size();
  j["epsilon"] = num(params.epsilon);
  j["delta"] = num(params.delta);
  j["pmfs"]["pf"] = pmf_json(pmf_pf_dp(q, params));
  j["pmfs"]["em"] = pmf_json(pmf_exponential(q, params));
  j["expected_error"]["pf"] = num(dom.pf_expected_error);
  j["expected_error"]["em"] = num(dom.em_expected_error);
  if (a.noisy_max) {
    const SelectionDistribution rnm = pmf_noisy_max(q, params);
    j["pmfs"]["rnm"] = pmf_json(rnm);
    j["expected_error"]["rnm"] = num(expected_error(rnm, q));
  }
  j["ratio"] = num(dom.ratio);
  Json ccdf = Json::array();
  for (const auto& row : dom.table) {
    ccdf.push_back({{"t", num(row[0])}, {"pf", num(row[1])},
                    {"em", num(row[2])}});
  }
  j["ccdf"] = std::move(ccdf);
  j["dominance"] = {{"holds", dom.holds()},
                    {"max_violation", num(dom.max_ccdf_violation)}};
  out << j.dump(2) << '\n';
}

// ------------------------------------------------------------- worstcase

struct WorstCaseArgs {
  Index n = 2;
  int points = 121;
  double p_min = 1e-6;
};

void run_worstcase(const Globals& g, const WorstCaseArgs& a,
                   std::ostream& out) {
  if (a.n < 2) throw InvalidArgument("worstcase needs n >= 2");
  if (a.points < 2) throw InvalidArgument("need at least two grid points");
  if (!(a.p_min > 0.0 && a.p_min < 1.0)) {
    throw InvalidArgument("--p-min must lie in (0, 1)");
  }
  const PrivacyParams params = g.params();
  std::vector<double> grid;
  for (int i = 0; i < a.points; ++i) {
    grid.push_back(i + 1 == a.points
                       ? 1.0
                       : std::exp(std::log(a.p_min) * (1.0 - i / (a.points - 1.0))));
  }
  const WorstCaseCurve em =
      worst_case_curve(Mechanism::kExponential, a.n, params, grid);
  const WorstCaseCurve pf =
      worst_case_curve(Mechanism::kPermuteAndFlip, a.n, params, grid);
  const LowerBound lb = lower_bound(a.n, params);
  auto row_at = [&](double p) {
    const double e = worst_case_value(Mechanism::kExponential, p, a.n, params);
    const double f = worst_case_value(Mechanism::kPermuteAndFlip, p, a.n, params);
    return std::array<double, 4>{p, e, f, error_ratio(e, f)};
  };

  if (g.csv("csv")) {
    out << "kind,p,em_error,pf_error,ratio\n";
    auto emit = [&](const char* kind, const std::array<double, 4>& r) {
      out << kind << ',' << csv_field(r[0]) << ',' << csv_field(r[1]) << ','
          << csv_field(r[2]) << ',' << csv_field(r[3]) << '\n';
    };
    for (const double p : grid) emit("grid", row_at(p));
    emit("em_max", row_at(em.maximizer.p));
    emit("pf_max", row_at(pf.maximizer.p));
    emit("p_one_over_n", row_at(1.0 / static_cast<double>(a.n)));
    out << "pf_lower_bound," << csv_field(1.0 / static_cast<double>(a.n))
        << ",," << csv_field(lb.bound) << ",\n";
    return;
  }
  Json j;
  j["n"] = a.n;
  j["epsilon"] = num(params.epsilon);
  j["delta"] = num(params.delta);
  Json rows = Json::array();
  for (const double p : grid) {
    const auto r = row_at(p);
    rows.push_back({{"p", num(r[0])}, {"em_error", num(r[1])},
                    {"pf_error", num(r[2])}, {"ratio", num(r[3])}});
  }
  j["curve"] = std::move(rows);
  j["maximizer"]["em"] = {{"p", num(em.maximizer.p)},
                          {"value", num(em.maximizer.value)}};
  j["maximizer"]["pf"] = {{"p", num(pf.maximizer.p)},
                          {"value", num(pf.maximizer.value)}};
  j["lower_bound"] = {{"bound", num(lb.bound)},
                      {"pf_error_at_p_one_over_n", num(lb.exact_pf)},
                      {"upper", num(lb.upper)},
                      {"holds", lb.holds()}};
  out << j.dump(2) << '\n';
}

// ------------------------------------------------------------ optimality

struct OptimalityArgs {
  Index n = 2;
  int k = 1;
  std::string export_lp;
};

void run_optimality(const Globals& g, const OptimalityArgs& a,
                    std::ostream& out) {
  const PrivacyParams params = g.params();
  const LatticeLp lp = build_lp(a.n, a.k, params);
  if (!a.export_lp.empty()) {
    std::ofstream file(a.export_lp);
    if (!file) throw InvalidArgument("cannot write " + a.export_lp);
    write_lp_format(lp.model, file);
  }
  const LpSolution solution = solve_lp(lp.model);
  if (solution.status != LpStatus::kOptimal) {
    throw SolverError("lattice LP is " + to_string(solution.status));
  }
  const double optimal_error = std::max(0.0, -solution.objective);
  const double pf_error = pf_lattice_objective(a.n, a.k, params);
  const double em_error =
      lattice_expected_error(Mechanism::kExponential, a.n, a.k, params);
  const DualSolution dual = dual_solve(a.n, a.k, params);
  const DualCheckReport check = dual_feasibility_check(dual);
  const double gap = std::abs(dual.objective - solution.objective);
  const GoldenRatioCheck golden = golden_ratio_threshold(params.epsilon);

  if (g.csv("json")) {
    out << "quantity,value\n"
        << "lp_optimum," << csv_field(solution.objective) << '\n'
        << "pf_error," << csv_field(pf_error) << '\n'
        << "em_error," << csv_field(em_error) << '\n'
        << "pf_ratio," << csv_field(error_ratio(pf_error, optimal_error))
        << '\n'
        << "em_ratio," << csv_field(error_ratio(em_error, optimal_error))
        << '\n'
        << "dual_objective," << csv_field(dual.objective) << '\n'
        << "duality_gap," << csv_field(gap) << '\n'
        << "series," << csv_field(golden.series) << '\n';
    return;
  }
  Json j;
  j["n"] = a.n;
  j["k"] = a.k;
  j["epsilon"] = num(params.epsilon);
  j["delta"] = num(params.delta);
  j["lattice_vectors"] = lp.lattice.size();
  j["variables"] = lp.model.num_variables();
  j["equality_rows"] = lp.num_equality_rows;
  j["privacy_rows"] = lp.num_privacy_rows;
  j["lp"] = {{"status", to_string(solution.status)},
             {"optimum", num(solution.objective)},
             {"optimal_error", num(optimal_error)},
             {"iterations", solution.iterations},
             {"max_primal_residual", num(solution.max_primal_residual)}};
  j["pf"] = {{"error", num(pf_error)},
             {"ratio", num(error_ratio(pf_error, optimal_error))}};
  j["em"] = {{"error", num(em_error)},
             {"ratio", num(error_ratio(em_error, optimal_error))}};
  j["dual"] = {{"objective", num(dual.objective)},
               {"duality_gap", num(gap)},
               {"feasible", check.feasible()},
               {"bounds_hold", check.bounds_hold()},
               {"max_tightness_residual", num(check.max_tightness_residual)},
               {"max_bound_violation", num(check.max_bound_violation)}};
  j["threshold"] = {{"threshold", num(golden.threshold)},
                    {"series", num(golden.series)},
                    {"holds", golden.holds}};
  out << j.dump(2) << '\n';
}

// ------------------------------------------------------------ experiment

struct ExperimentArgs {
  std::string histogram;
  bool synthetic = false;
  std::string task = "mode";
  std::vector<double> grid = {0.001, 0.002, 0.005, 0.01, 0.02,
                              0.05,  0.1,   0.2,   0.5,  1.0};
  std::vector<std::string> mechanisms = {"pf", "em"};
  bool find_eps = false;
  double target = 0.0;
  std::string mechanism = "em";
};

void run_experiment(const Globals& g, const ExperimentArgs& a,
                    std::ostream& out) {
  if (a.histogram.empty() == !a.synthetic) {
    throw UsageError("give exactly one of --histogram or --synthetic");
  }
  const Histogram h =
      a.synthetic ? power_law_histogram() : load_histogram(a.histogram);
  const Task task = parse_task(a.task);

  if (a.find_eps) {
    const Mechanism m = parse_mechanism(a.mechanism);
    const double eps = epsilon_for_target_error(h, task, m, a.target);
    const QualityScores q = task_scores(h, task);
    const double achieved =
        expected_error(exact_pmf(m, q, PrivacyParams(eps)), q);
    if (g.csv("csv")) {
      out << "task,mechanism,target,epsilon,expected_error\n"
          << to_string(task) << ',' << to_string(m) << ','
          << csv_field(a.target) << ',' << csv_field(eps) << ','
          << csv_field(achieved) << '\n';
    } else {
      Json j = {{"task", to_string(task)},
                {"mechanism", to_string(m)},
                {"target", num(a.target)},
                {"epsilon", num(eps)},
                {"expected_error", num(achieved)}};
      out << j.dump(2) << '\n';
    }
    return;
  }

  std::vector<Mechanism> mechs;
  for (const auto& name : a.mechanisms) mechs.push_back(parse_mechanism(name));
  for (const double eps : a.grid) {
    if (!(eps > 0.0) || !std::isfinite(eps)) {
      throw InvalidArgument("epsilon grid values must be positive");
    }
  }
  const auto rows = sweep_experiment(h, task, a.grid, mechs);
  if (g.csv("csv")) {
    write_experiment_csv(rows, out);
    return;
  }
  Json list = Json::array();
  for (const auto& row : rows) {
    list.push_back({{"epsilon", num(row.epsilon)},
                    {"mechanism", to_string(row.mechanism)},
                    {"task", to_string(row.task)},
                    {"expected_error", num(row.expected_error)},
                    {"ratio_vs_pf", num(row.ratio_vs_pf)}});
  }
  out << Json{{"rows", std::move(list)}}.dump(2) << '\n';
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string suite;
  std::optional<Index> n;
  std::optional<int> k;
  int trials = 0;
  ScoreInput scores;
};

struct Check {
  std::string name;
  bool pass;
  double value;
  double tolerance;
};

std::vector<Check> verify_suite(const Globals& g, const VerifyArgs& a) {
  const std::uint64_t seed = g.resolved_seed();
  auto trials = [&](int fallback) { return a.trials > 0 ? a.trials : fallback; };
  std::vector<Check> checks;
  auto add = [&](std::string name, double value, double tol) {
    checks.push_back({std::move(name), value <= tol, value, tol});
  };

  if (a.suite == "privacy") {
    const PrivacyParams params = g.params();
    const PrivacyReport r =
        verify_privacy_on_lattice(a.n.value_or(3), a.k.value_or(3), params);
    add("max_log_ratio_minus_epsilon", r.max_log_ratio - r.bound, 1e-9);
    add("max_tightness_gap", r.max_tightness_gap, 1e-10);
  } else if (a.suite == "regularity") {
    const RegularityReport r = verify_regularity(g.params(), trials(200), seed);
    add("symmetry_max_diff", r.symmetry_max_diff, 0.0);
    add("exact_shift_max_diff", r.exact_shift_max_diff, 0.0);
    add("real_shift_max_diff", r.real_shift_max_diff, 1e-12);
    add("monotonicity_max_drop", r.monotonicity_max_drop, 1e-12);
  } else if (a.suite == "recurrence") {
    const PrivacyParams params = g.params();
    double worst = 0.0;
    if (!a.scores.inline_scores.empty() || !a.scores.file.empty()) {
      worst = verify_recurrence(a.scores.load(), params).max_violation();
    } else {
      Rng rng(seed);
      const Index n = a.n.value_or(5);
      const int k = a.k.value_or(3);
      for (int t = 0; t < trials(100); ++t) {
        Vector q(n);
        for (Index i = 0; i < n; ++i) {
          q[i] = -params.neighbor_step() *
                 static_cast<double>(rng.index(static_cast<std::size_t>(k) + 1));
        }
        worst = std::max(
            worst, verify_recurrence(QualityScores(q), params).max_violation());
      }
    }
    add("max_recurrence_violation", worst, 1e-12);
  } else if (a.suite == "oracles") {
    const OracleReport r = verify_oracles(trials(500), seed, a.n.value_or(9));
    add("max_permutation_diff", r.max_permutation_diff, 1e-10);
    add("max_subset_diff", r.max_subset_diff, 1e-10);
  } else if (a.suite == "dominance") {
    if (!a.scores.inline_scores.empty() || !a.scores.file.empty()) {
      const DominanceReport r = check_dominance(a.scores.load(), g.params());
      add("max_ccdf_violation", r.max_ccdf_violation, 1e-10);
      add("expected_error_excess",
          std::max(0.0, r.pf_expected_error - r.em_expected_error), 1e-10);
    } else {
      const DominanceSweep r =
          verify_dominance(trials(1000), seed, a.n.value_or(8));
      add("violations", static_cast<double>(r.violations), 0.0);
      add("max_ccdf_violation", r.max_ccdf_violation, 1e-10);
      add("max_error_violation", r.max_error_violation, 1e-10);
    }
  } else if (a.suite == "dual") {
    const PrivacyParams params = g.params();
    const Index n = a.n.value_or(3);
    const int k = a.k.value_or(3);
    const DualSolution dual = dual_solve(n, k, params);
    const DualCheckReport r = dual_feasibility_check(dual);
    const LpSolution lp = solve_lp(build_lp(n, k, params).model);
    if (lp.status != LpStatus::kOptimal) {
      throw SolverError("lattice LP is " + to_string(lp.status));
    }
    add("max_tightness_residual", r.max_tightness_residual, 1e-9);
    add("max_sign_violation", r.max_sign_violation, 1e-9);
    if (r.threshold_met) add("max_bound_violation", r.max_bound_violation, 1e-9);
    add("strong_duality_gap",
        std::abs(dual.objective - lp.objective) /
            std::max(1.0, std::abs(lp.objective)),
        1e-6);
  } else {
    throw UsageError("unknown suite '" + a.suite +
                     "' (privacy|regularity|recurrence|oracles|dominance|dual)");
  }
  return checks;
}

bool run_verify(const Globals& g, const VerifyArgs& a, std::ostream& out) {
  const std::vector<Check> checks = verify_suite(g, a);
  bool pass = true;
  for (const auto& c : checks) pass = pass && c.pass;
  if (g.csv("json")) {
    out << "check,pass,value,tolerance\n";
    for (const auto& c : checks) {
      out << c.name << ',' << (c.pass ? "true" : "false") << ','
          << csv_field(c.value) << ',' << csv_field(c.tolerance) << '\n';
    }
  } else {
    Json list = Json::array();
    for (const auto& c : checks) {
      list.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"value", num(c.value)},
                      {"tolerance", num(c.tolerance)}});
    }
    Json j = {{"suite", a.suite}, {"pass", pass}, {"checks", std::move(list)}};
    out << j.dump(2) << '\n';
  }
  return pass;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Private selection: permute-and-flip, exponential mechanism "
               "and report-noisy-max"};
  app.name("pnf");
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--eps", g.epsilon, "privacy parameter epsilon (> 0)")
      ->capture_default_str();
  app.add_option("--delta", g.delta, "score sensitivity (> 0)")
      ->capture_default_str();
  app.add_flag("--monotonic", g.monotonic,
               "scores are monotonic (halves the noise scale)");
  app.add_option("--seed", g.seed,
                 "RNG seed (default: PNF_SEED, else " +
                     std::to_string(kDefaultSeed) + ")");
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--output", g.output, "write results to this file");

  SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample", "draw from a mechanism");
  add_score_options(sample_cmd, sample.scores);
  sample_cmd->add_option("--mech", sample.sampler,
                         "pf, pf-wr, em, em-rejection or rnm")
      ->capture_default_str();
  sample_cmd->add_option("--n", sample.count, "number of draws")
      ->capture_default_str();

  AnalyzeArgs analyze;
  auto* analyze_cmd =
      app.add_subcommand("analyze", "exact pmfs, errors and dominance");
  add_score_options(analyze_cmd, analyze.scores);
  analyze_cmd->add_flag("--rnm", analyze.noisy_max,
                        "include the report-noisy-max pmf");

  WorstCaseArgs worst;
  auto* worst_cmd =
      app.add_subcommand("worstcase", "worst-case error curves");
  worst_cmd->add_option("--n", worst.n, "number of candidates (>= 2)")
      ->capture_default_str();
  worst_cmd->add_option("--points", worst.points, "log-spaced grid points")
      ->capture_default_str();
  worst_cmd->add_option("--p-min", worst.p_min, "smallest coin probability")
      ->capture_default_str();

  OptimalityArgs opt;
  auto* opt_cmd =
      app.add_subcommand("optimality", "lattice LP and optimality ratios");
  opt_cmd->add_option("--n", opt.n, "number of candidates")
      ->capture_default_str();
  opt_cmd->add_option("--k", opt.k, "lattice depth")->capture_default_str();
  opt_cmd->add_option("--export-lp", opt.export_lp,
                      "also write the LP in CPLEX LP format");

  ExperimentArgs exp;
  auto* exp_cmd =
      app.add_subcommand("experiment", "mode/median epsilon sweeps");
  exp_cmd->add_option("--histogram", exp.histogram, "bin,count CSV");
  exp_cmd->add_flag("--synthetic", exp.synthetic,
                    "use the 1024-bin power-law fixture");
  exp_cmd->add_option("--task", exp.task, "mode or median")
      ->capture_default_str();
  exp_cmd->add_option("--eps-grid", exp.grid, "epsilon values")
      ->delimiter(',');
  exp_cmd->add_option("--mechs", exp.mechanisms, "mechanisms to sweep")
      ->delimiter(',');
  exp_cmd->add_flag("--find-eps", exp.find_eps,
                    "solve for the epsilon reaching --target");
  exp_cmd->add_option("--target", exp.target, "target expected error");
  exp_cmd->add_option("--mech", exp.mechanism, "mechanism for --find-eps")
      ->capture_default_str();

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
  verify_cmd
      ->add_option("suite", verify.suite,
                   "privacy, regularity, recurrence, oracles, dominance, dual")
      ->required();
  verify_cmd->add_option("--n", verify.n, "size parameter");
  verify_cmd->add_option("--k", verify.k, "lattice depth");
  verify_cmd->add_option("--trials", verify.trials, "random instances");
  add_score_options(verify_cmd, verify.scores);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  std::ostringstream buffer;
  int code = kExitOk;
  try {
    if (*sample_cmd) {
      run_sample(g, sample, buffer);
    } else if (*analyze_cmd) {
      run_analyze(g, analyze, buffer);
    } else if (*worst_cmd) {
      run_worstcase(g, worst, buffer);
    } else if (*opt_cmd) {
      run_optimality(g, opt, buffer);
    } else if (*exp_cmd) {
      run_experiment(g, exp, buffer);
    } else if (*verify_cmd) {
      if (!run_verify(g, verify, buffer)) code = kExitCheckFailed;
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const AccuracyError& e) {
    err << "internal error: " << e.what()
        << " (achieved estimate " << format_number(e.estimate()) << ")\n";
    return kExitInternalError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternalError;
  }

  if (g.output.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(g.output);
    if (!file) {
      err << "error: cannot write " << g.output << '\n';
      return kExitInputError;
    }
    file << buffer.str();
  }
  return code;
}

}  // namespace pnf::cli
