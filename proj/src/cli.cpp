// Copyright 2026 The cecd Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cecd/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "cecd/errors.hpp"
#include "cecd/params.hpp"
#include "cecd/queriability.hpp"
#include "cecd/simulator.hpp"
#include "cecd/solvers.hpp"
#include "cecd/taxonomy.hpp"
#include "json.hpp"

namespace cecd {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::SyntaxError, "cannot open file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const std::string& text, const std::string& output_path,
          std::ostream& out) {
  if (output_path.empty()) {
    out << text << "\n";
    return;
  }
  std::ofstream f(output_path);
  if (!f) {
    throw Error(Errc::SyntaxError, "cannot write file: " + output_path);
  }
  f << text << "\n";
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::NoFeasibleDesign: return 3;
    case Errc::TooLarge: return 4;
    default: return 2;
  }
}

double total_cost(const Taxonomy& t, const ParamSet& p) {
  double total = 0.0;
  for (const auto& n : t.nodes()) {
    if (n != t.root() && !t.is_dummy(n)) total += p.w_of(n);
  }
  return total;
}

struct CommonInputs {
  std::string taxonomy_path;
  std::string params_path;
  std::string output_path;
  std::uint64_t seed = 0;
};

SolveResult run_solver(const std::string& solver, const Taxonomy& t,
                       const ParamSet& p, Budget budget,
                       const SolveOptions& opts) {
  if (solver == "exhaustive") {
    return exhaustive(t, p, budget, ExhaustiveMode::QM, opts);
  }
  if (solver == "pm") return pm_baseline(t, p, budget, opts);
  if (solver == "levelwise") return level_wise(t, p, budget, opts);
  if (solver == "dp") return dp_solve(t, p, budget, opts);
  throw Error(Errc::SyntaxError, "unknown solver: " + solver);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"cost-effective conceptual design toolkit"};
  app.require_subcommand(1);

  CommonInputs common;
  std::string solver = "exhaustive";
  double budget_value = 0.0;
  bool budget_fraction = false;
  double epsilon = 0.1;
  bool exact_ints = false;
  bool disjoint = false;
  bool partition_only = false;
  bool strict_zero_drop = false;
  int max_exhaustive_nodes = 20;

  auto add_common = [&](CLI::App* cmd, bool with_params) {
    cmd->add_option("--taxonomy", common.taxonomy_path, "taxonomy JSON file")
        ->required();
    if (with_params) {
      cmd->add_option("--params", common.params_path, "params JSON file")
          ->required();
    }
    cmd->add_option("--output", common.output_path, "output path (default stdout)");
    cmd->add_option("--seed", common.seed, "random seed");
  };

  auto* cmd_validate = app.add_subcommand("validate", "check a taxonomy document");
  add_common(cmd_validate, false);

  auto* cmd_optimize = app.add_subcommand("optimize", "solve the budgeted design problem");
  add_common(cmd_optimize, true);
  cmd_optimize->add_option("--budget", budget_value, "budget in cost units")->required();
  cmd_optimize->add_flag("--budget-fraction", budget_fraction,
                         "interpret --budget as a fraction of the total cost");
  cmd_optimize->add_option("--solver", solver, "exhaustive|pm|levelwise|dp");
  cmd_optimize->add_option("--epsilon", epsilon, "scaling factor for dp");
  cmd_optimize->add_flag("--exact-ints", exact_ints, "dp without scaling (integer params)");
  cmd_optimize->add_flag("--disjoint", disjoint,
                         "restrict exhaustive search to disjoint designs");
  cmd_optimize->add_flag("--partition-only", partition_only, "suppress the free term");
  cmd_optimize->add_flag("--strict-zero-drop", strict_zero_drop,
                         "drop concepts whose scaled u or d is zero");
  cmd_optimize->add_option("--max-exhaustive-nodes", max_exhaustive_nodes,
                           "node cap for enumeration solvers");

  std::string design_path;
  auto* cmd_evaluate = app.add_subcommand("evaluate", "score a design");
  add_common(cmd_evaluate, true);
  cmd_evaluate->add_option("--design", design_path, "design JSON file")->required();
  cmd_evaluate->add_flag("--partition-only", partition_only, "suppress the free term");

  std::vector<double> budgets;
  std::vector<std::string> solvers;
  std::vector<double> epsilons;
  std::string format = "json";
  auto* cmd_sweep = app.add_subcommand("sweep", "grid of budgets x solvers x epsilons");
  add_common(cmd_sweep, true);
  cmd_sweep->add_option("--budgets", budgets, "budget grid")->required()->delimiter(',');
  cmd_sweep->add_option("--solvers", solvers, "solver grid")->required()->delimiter(',');
  cmd_sweep->add_option("--epsilons", epsilons, "epsilon grid (dp only)")->delimiter(',');
  cmd_sweep->add_flag("--budget-fraction", budget_fraction,
                      "interpret budgets as fractions of the total cost");
  cmd_sweep->add_option("--format", format, "json|csv");
  cmd_sweep->add_option("--max-exhaustive-nodes", max_exhaustive_nodes,
                        "node cap for enumeration solvers");

  std::string corpus_path;
  double error_rate = 0.05;
  double confidence = 0.95;
  auto* cmd_estimate = app.add_subcommand("estimate", "estimate frequencies from a corpus");
  add_common(cmd_estimate, false);
  cmd_estimate->add_option("--corpus", corpus_path, "corpus JSON-lines file")->required();
  cmd_estimate->add_option("--error", error_rate, "target estimation error");
  cmd_estimate->add_option("--confidence", confidence, "confidence level");

  std::string corpus_spec_path;
  std::string designs_path;
  int k = 3;
  int trials = 1000;
  int n_queries = 500;
  bool filter_flag = false;
  auto* cmd_simulate = app.add_subcommand("simulate", "Monte-Carlo retrieval check");
  add_common(cmd_simulate, true);
  cmd_simulate->add_option("--corpus-spec", corpus_spec_path, "corpus spec JSON file")
      ->required();
  cmd_simulate->add_option("--designs", designs_path, "JSON list of designs")->required();
  cmd_simulate->add_option("--k", k, "precision cutoff");
  cmd_simulate->add_option("--trials", trials, "Monte-Carlo trials");
  cmd_simulate->add_option("--queries", n_queries, "workload size");
  cmd_simulate->add_flag("--filter-insensitive", filter_flag,
                         "drop queries whose ranking cannot change");

  try {
    std::vector<const char*> argv;
    argv.push_back("cecd");
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help and friends
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (cmd_validate->parsed()) {
      Taxonomy t = parse_taxonomy(slurp(common.taxonomy_path));
      ValidationReport report = validate(t);
      nlohmann::json doc;
      doc["errors"] = nlohmann::json::array();
      for (const auto& e : report.errors) {
        doc["errors"].push_back({{"code", e.code}, {"message", e.message}});
      }
      doc["warnings"] = nlohmann::json::array();
      for (const auto& w : report.warnings) {
        doc["warnings"].push_back({{"code", w.code}, {"message", w.message}});
      }
      emit(doc.dump(2), common.output_path, out);
      return report.ok() ? 0 : 2;
    }

    if (cmd_optimize->parsed()) {
      Taxonomy t = parse_taxonomy(slurp(common.taxonomy_path));
      ParamSet p = parse_params(slurp(common.params_path), t);
      if (budget_value < 0.0) {
        throw Error(Errc::InvalidParams, "budget must be nonnegative");
      }
      Budget budget{budget_fraction ? budget_value * total_cost(t, p)
                                    : budget_value};
      SolveOptions opts;
      opts.epsilon = epsilon;
      opts.exact_ints = exact_ints;
      opts.max_exhaustive_nodes = max_exhaustive_nodes;
      opts.strict_zero_drop = strict_zero_drop;
      opts.eval.include_free_term = !partition_only;
      SolveResult result =
          (solver == "exhaustive" && disjoint)
              ? exhaustive(t, p, budget, ExhaustiveMode::DisjointQM, opts)
              : run_solver(solver, t, p, budget, opts);
      emit(serialize_result(result), common.output_path, out);
      return 0;
    }

    if (cmd_evaluate->parsed()) {
      Taxonomy t = parse_taxonomy(slurp(common.taxonomy_path));
      ParamSet p = parse_params(slurp(common.params_path), t);
      Design s = parse_design(slurp(design_path), t);
      EvalOptions opts;
      opts.include_free_term = !partition_only;
      Evaluation ev = evaluate_design(t, p, s, opts);
      emit(serialize_evaluation(ev), common.output_path, out);
      return 0;
    }

    if (cmd_sweep->parsed()) {
      if (budgets.empty() || solvers.empty()) {
        err << "error: empty budget or solver grid\n";
        return 2;
      }
      if (format != "json" && format != "csv") {
        err << "error: --format must be json or csv\n";
        return 2;
      }
      if (epsilons.empty()) epsilons.push_back(0.1);
      Taxonomy t = parse_taxonomy(slurp(common.taxonomy_path));
      ParamSet p = parse_params(slurp(common.params_path), t);
      double cost_total = total_cost(t, p);

      nlohmann::json rows = nlohmann::json::array();
      for (double raw_budget : budgets) {
        Budget budget{budget_fraction ? raw_budget * cost_total : raw_budget};
        for (const auto& sv : solvers) {
          std::vector<double> eps_grid =
              sv == "dp" ? epsilons : std::vector<double>{0.0};
          for (double eps : eps_grid) {
            nlohmann::json row;
            row["budget"] = raw_budget;
            row["solver"] = sv;
            if (sv == "dp") {
              row["epsilon"] = eps;
            } else {
              row["epsilon"] = nullptr;
            }
            auto start = std::chrono::steady_clock::now();
            try {
              SolveOptions opts;
              opts.epsilon = eps;
              opts.max_exhaustive_nodes = max_exhaustive_nodes;
              SolveResult r = run_solver(sv, t, p, budget, opts);
              row["qu"] = r.qu;
              row["cost"] = r.cost;
              row["status"] = "ok";
            } catch (const Error& e) {
              row["qu"] = nullptr;
              row["cost"] = nullptr;
              row["status"] = errc_name(e.code());
            }
            auto end = std::chrono::steady_clock::now();
            row["millis"] =
                std::chrono::duration_cast<std::chrono::milliseconds>(end - start)
                    .count();
            rows.push_back(std::move(row));
          }
        }
      }

      if (format == "json") {
        emit(rows.dump(2), common.output_path, out);
      } else {
        std::ostringstream csv;
        csv << "budget,solver,epsilon,qu,cost,millis,status\n";
        for (const auto& row : rows) {
          csv << row["budget"].get<double>() << "," << row["solver"].get<std::string>()
              << ",";
          if (!row["epsilon"].is_null()) csv << row["epsilon"].get<double>();
          csv << ",";
          if (!row["qu"].is_null()) csv << row["qu"].get<double>();
          csv << ",";
          if (!row["cost"].is_null()) csv << row["cost"].get<double>();
          csv << "," << row["millis"].get<std::int64_t>() << ","
              << row["status"].get<std::string>() << "\n";
        }
        std::string text = csv.str();
        text.pop_back();  // emit() appends the trailing newline
        emit(text, common.output_path, out);
      }
      return 0;
    }

    if (cmd_estimate->parsed()) {
      Taxonomy t = parse_taxonomy(slurp(common.taxonomy_path));
      CorpusSample corpus = parse_corpus_jsonl(slurp(corpus_path), t);
      if (corpus.documents.empty()) {
        throw Error(Errc::EmptySample, "corpus has no documents");
      }
      int want = required_sample_size(error_rate, confidence);

      nlohmann::json doc;
      CorpusSample sampled;
      if (static_cast<int>(corpus.documents.size()) <= want) {
        sampled = corpus;
        doc["warning"] = "corpus smaller than required sample size; using all documents";
      } else {
        std::vector<size_t> idx(corpus.documents.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::mt19937_64 rng(common.seed);
        std::shuffle(idx.begin(), idx.end(), rng);
        for (int i = 0; i < want; ++i) {
          sampled.documents.push_back(corpus.documents[idx[i]]);
        }
      }
      doc["sample_size"] = sampled.documents.size();
      doc["d"] = estimate_frequencies(sampled, t);
      emit(doc.dump(2), common.output_path, out);
      return 0;
    }

    if (cmd_simulate->parsed()) {
      Taxonomy t = parse_taxonomy(slurp(common.taxonomy_path));
      ParamSet p = parse_params(slurp(common.params_path), t);
      CorpusSpec spec = parse_corpus_spec(slurp(corpus_spec_path), t);
      CorpusSample corpus = generate_corpus(t, spec);

      nlohmann::json designs_doc;
      try {
        designs_doc = nlohmann::json::parse(slurp(designs_path));
      } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::SyntaxError, std::string("invalid designs JSON: ") + e.what());
      }
      if (!designs_doc.is_array()) {
        throw Error(Errc::SyntaxError, "designs file must be a JSON list");
      }
      std::vector<Design> designs;
      for (const auto& entry : designs_doc) {
        designs.push_back(parse_design(entry.dump(), t));
      }

      // Query popularities follow u, normalized over leaves.
      std::map<ConceptId, double> u;
      double total = 0.0;
      for (const auto& leaf : t.leaves()) {
        u[leaf] = p.u_of(leaf);
        total += u[leaf];
      }
      if (total <= 0.0) {
        throw Error(Errc::DegenerateParams, "all popularities are zero");
      }
      for (auto& [_, v] : u) v /= total;

      Workload w = generate_workload(t, corpus, u, n_queries, common.seed);
      if (filter_flag) w = filter_insensitive(t, corpus, w);
      if (w.queries.empty()) {
        throw Error(Errc::EmptyWorkload, "no queries left after filtering");
      }

      SimReport report;
      report.k = k;
      report.trials = trials;
      report.seed = common.seed;
      std::vector<std::pair<double, double>> rows;
      for (const auto& s : designs) {
        SimRow row;
        row.design = s;
        row.qu = evaluate_design(t, p, s).qu;
        row.mean_pk = simulate_pk(t, corpus, w, s, p, k, trials, common.seed);
        rows.emplace_back(row.qu, row.mean_pk);
        report.per_design.push_back(std::move(row));
      }
      if (rows.size() >= 3) report.spearman_rho = spearman_rho(rows);
      emit(serialize_report(report), common.output_path, out);
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << errc_name(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  err << "error: no command\n";
  return 2;
}

}  // namespace cecd
