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

#ifndef CECD_SOLVERS_HPP
#define CECD_SOLVERS_HPP

#include <string>
#include <vector>

#include "cecd/params.hpp"
#include "cecd/queriability.hpp"
#include "cecd/taxonomy.hpp"
#include "json.hpp"

namespace cecd {

enum class SolverKind { Exhaustive, PM, LevelWise, Dp };

enum class ExhaustiveMode {
  QM,          // all feasible designs
  DisjointQM,  // designs with no ancestor/descendant pair
};

struct SolveOptions {
  double epsilon = 0.1;            // scaling factor for dp_solve
  bool exact_ints = false;         // dp_solve: no scaling, integer params
  int max_exhaustive_nodes = 20;   // node cap for enumeration solvers
  bool strict_zero_drop = false;   // drop concepts with scaled u or d of zero
  EvalOptions eval;                // scoring options shared with evaluators
};

struct SolveResult {
  Design design;
  double qu = 0.0;    // evaluator's score of `design`, re-verified post-solve
  double cost = 0.0;  // sum of w over `design`, <= budget
  SolverKind solver = SolverKind::Exhaustive;
  nlohmann::json diagnostics;
};

const char* solver_name(SolverKind kind);

// Global optimum by enumerating every feasible non-empty design. Ties break
// toward lower cost, then the lexicographically smallest sorted id list.
// Throws TooLarge above the node cap and NoFeasibleDesign when no single
// concept is affordable.
SolveResult exhaustive(const Taxonomy& t, const ParamSet& p, Budget b,
                       ExhaustiveMode mode, const SolveOptions& opts = {});

// Popularity-maximization baseline: enumerates feasible designs and keeps
// the one maximizing sum over partitions of pr(P) * sum of u over the
// partition's leaves. Reported qu is the true queriability of that design.
SolveResult pm_baseline(const Taxonomy& t, const ParamSet& p, Budget b,
                        const SolveOptions& opts = {});

struct FlatItem {
  ConceptId id;
  double value = 0.0;
  double cost = 0.0;
};

// Budgeted selection over a flat set: the better, by value sum, of greedy by
// value/cost ratio and the best affordable single item. An approximation,
// not an exact knapsack.
std::set<ConceptId> flat_select(const std::vector<FlatItem>& items, Budget b);

// Greedy solver restricted to single-depth candidate sets (values are
// derived popularities) plus the most-popular-leaf fallback; candidates are
// ranked by true queriability and the winner is topped up with
// fill_residual when that helps. DAG input is accepted as a heuristic using
// longest-path levels.
SolveResult level_wise(const Taxonomy& t, const ParamSet& p, Budget b,
                       const SolveOptions& opts = {});

// Adds unselected concepts in descending derived-popularity/cost ratio while
// they fit the leftover budget.
Design fill_residual(const Taxonomy& t, const ParamSet& p, const Design& s,
                     Budget b);

// Pseudo-polynomial dynamic program over the binarized tree with integer
// scaling (identity scaling in exact_ints mode, where the result matches the
// exhaustive optimum). Never returns dummy nodes; re-scores candidates with
// the unscaled parameters before answering.
SolveResult dp_solve(const Taxonomy& t, const ParamSet& p, Budget b,
                     const SolveOptions& opts = {});

std::string serialize_result(const SolveResult& r);

}  // namespace cecd

#endif  // CECD_SOLVERS_HPP
