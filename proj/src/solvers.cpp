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

#include "cecd/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>

#include "cecd/errors.hpp"

namespace cecd {

namespace {

constexpr double kCostTolerance = 1e-9;

std::vector<ConceptId> selectable_concepts(const Taxonomy& t) {
  std::vector<ConceptId> out;
  for (const auto& n : t.nodes()) {
    if (n != t.root() && !t.is_dummy(n)) out.push_back(n);
  }
  return out;
}

double design_cost(const ParamSet& p, const Design& s) {
  double cost = 0.0;
  for (const auto& c : s.selected) cost += p.w_of(c);
  return cost;
}

std::vector<ConceptId> sorted_ids(const Design& s) {
  return std::vector<ConceptId>(s.selected.begin(), s.selected.end());
}

// (score desc, cost asc, sorted id list asc); returns true when a beats b.
bool better(double score_a, double cost_a, const Design& a, double score_b,
            double cost_b, const Design& b) {
  if (score_a != score_b) return score_a > score_b;
  if (cost_a != cost_b) return cost_a < cost_b;
  return sorted_ids(a) < sorted_ids(b);
}

double cheapest_selectable(const Taxonomy& t, const ParamSet& p) {
  double cheapest = std::numeric_limits<double>::infinity();
  for (const auto& c : selectable_concepts(t)) {
    cheapest = std::min(cheapest, p.w_of(c));
  }
  return cheapest;
}

void require_feasible(const Taxonomy& t, const ParamSet& p, Budget b) {
  if (cheapest_selectable(t, p) > b.value + kCostTolerance) {
    throw Error(Errc::NoFeasibleDesign,
                "no single concept is affordable within the budget");
  }
}

double empty_design_score(const Taxonomy& t, const ParamSet& p,
                          const EvalOptions& eval) {
  return evaluate_design(t, p, Design{}, eval).qu;
}

}  // namespace

const char* solver_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::Exhaustive: return "exhaustive";
    case SolverKind::PM: return "pm";
    case SolverKind::LevelWise: return "levelwise";
    case SolverKind::Dp: return "dp";
  }
  return "unknown";
}

namespace {

struct EnumerationBest {
  bool found = false;
  double objective = 0.0;  // enumeration objective (queriability or PM)
  double cost = 0.0;
  Design design;
};

// Enumerates every non-empty, affordable design (optionally disjoint) and
// keeps the objective maximizer under the standard tie-break.
template <typename Objective>
EnumerationBest enumerate_designs(const Taxonomy& t, const ParamSet& p,
                                  Budget b, bool disjoint, int node_cap,
                                  Objective&& objective,
                                  std::uint64_t* evaluated) {
  if (static_cast<int>(t.nodes().size()) > node_cap) {
    throw Error(Errc::TooLarge,
                "taxonomy has " + std::to_string(t.nodes().size()) +
                    " nodes; enumeration cap is " + std::to_string(node_cap));
  }
  require_feasible(t, p, b);

  auto concepts = selectable_concepts(t);
  size_t m = concepts.size();
  if (m > 62) {
    throw Error(Errc::TooLarge, "enumeration over more than 62 concepts");
  }
  std::vector<double> costs(m);
  for (size_t i = 0; i < m; ++i) costs[i] = p.w_of(concepts[i]);

  // Ancestor pairs among selectable concepts, for the disjoint restriction.
  std::vector<std::vector<bool>> related;
  if (disjoint) {
    related.assign(m, std::vector<bool>(m, false));
    for (size_t i = 0; i < m; ++i) {
      for (size_t j = 0; j < m; ++j) {
        if (i != j && t.is_ancestor(concepts[i], concepts[j])) {
          related[i][j] = true;
          related[j][i] = true;
        }
      }
    }
  }

  EnumerationBest best;
  std::uint64_t masks = std::uint64_t{1} << m;
  for (std::uint64_t mask = 1; mask < masks; ++mask) {
    double cost = 0.0;
    bool feasible = true;
    for (size_t i = 0; i < m && feasible; ++i) {
      if (mask & (std::uint64_t{1} << i)) {
        cost += costs[i];
        if (cost > b.value + kCostTolerance) feasible = false;
      }
    }
    if (!feasible) continue;

    if (disjoint) {
      bool ok = true;
      for (size_t i = 0; i < m && ok; ++i) {
        if (!(mask & (std::uint64_t{1} << i))) continue;
        for (size_t j = i + 1; j < m && ok; ++j) {
          if ((mask & (std::uint64_t{1} << j)) && related[i][j]) ok = false;
        }
      }
      if (!ok) continue;
    }

    Design s;
    for (size_t i = 0; i < m; ++i) {
      if (mask & (std::uint64_t{1} << i)) s.selected.insert(concepts[i]);
    }
    double score = objective(s);
    if (evaluated) ++*evaluated;
    if (!best.found ||
        better(score, cost, s, best.objective, best.cost, best.design)) {
      best.found = true;
      best.objective = score;
      best.cost = cost;
      best.design = std::move(s);
    }
  }
  if (!best.found) {
    throw Error(Errc::NoFeasibleDesign, "no feasible non-empty design");
  }
  return best;
}

}  // namespace

SolveResult exhaustive(const Taxonomy& t, const ParamSet& p, Budget b,
                       ExhaustiveMode mode, const SolveOptions& opts) {
  std::uint64_t evaluated = 0;
  auto best = enumerate_designs(
      t, p, b, mode == ExhaustiveMode::DisjointQM, opts.max_exhaustive_nodes,
      [&](const Design& s) { return evaluate_design(t, p, s, opts.eval).qu; },
      &evaluated);

  SolveResult result;
  result.design = best.design;
  result.qu = evaluate_design(t, p, result.design, opts.eval).qu;
  result.cost = best.cost;
  result.solver = SolverKind::Exhaustive;
  result.diagnostics["mode"] =
      mode == ExhaustiveMode::DisjointQM ? "disjoint_qm" : "qm";
  result.diagnostics["designs_evaluated"] = evaluated;
  result.diagnostics["empty_design_qu"] = empty_design_score(t, p, opts.eval);
  return result;
}

SolveResult pm_baseline(const Taxonomy& t, const ParamSet& p, Budget b,
                        const SolveOptions& opts) {
  bool tree = t.kind() == TaxonomyKind::Tree;
  auto pm_objective = [&](const Design& s) {
    PartitionMap pm = tree ? partitions_tree(t, s) : allparts(t, s);
    double total = 0.0;
    for (const auto& [key, leaves] : pm.partition_of) {
      double popularity = 0.0;
      for (const auto& leaf : leaves) popularity += p.u_of(leaf);
      // Accuracy enters the tree form only, mirroring the evaluators.
      total += tree ? p.pr_of(key.front()) * popularity : popularity;
    }
    return total;
  };

  std::uint64_t evaluated = 0;
  auto best = enumerate_designs(t, p, b, /*disjoint=*/false,
                                opts.max_exhaustive_nodes, pm_objective,
                                &evaluated);

  SolveResult result;
  result.design = best.design;
  result.qu = evaluate_design(t, p, result.design, opts.eval).qu;
  result.cost = best.cost;
  result.solver = SolverKind::PM;
  result.diagnostics["pm_objective"] = best.objective;
  result.diagnostics["designs_evaluated"] = evaluated;
  result.diagnostics["empty_design_qu"] = empty_design_score(t, p, opts.eval);
  return result;
}

std::set<ConceptId> flat_select(const std::vector<FlatItem>& items, Budget b) {
  std::vector<const FlatItem*> by_ratio;
  for (const auto& item : items) {
    if (item.value < 0.0 || item.cost <= 0.0) {
      throw Error(Errc::InvalidParams,
                  "flat_select items need value >= 0 and cost > 0");
    }
    by_ratio.push_back(&item);
  }
  std::sort(by_ratio.begin(), by_ratio.end(),
            [](const FlatItem* a, const FlatItem* b) {
              double ra = a->value / a->cost;
              double rb = b->value / b->cost;
              if (ra != rb) return ra > rb;
              return a->id < b->id;
            });

  std::set<ConceptId> greedy;
  double greedy_value = 0.0;
  double spent = 0.0;
  for (const auto* item : by_ratio) {
    if (spent + item->cost <= b.value + kCostTolerance) {
      greedy.insert(item->id);
      greedy_value += item->value;
      spent += item->cost;
    }
  }

  const FlatItem* single = nullptr;
  for (const auto& item : items) {
    if (item.cost > b.value + kCostTolerance) continue;
    if (!single || item.value > single->value ||
        (item.value == single->value && item.id < single->id)) {
      single = &item;
    }
  }

  if (!single) return {};
  std::set<ConceptId> single_set{single->id};
  if (greedy_value > single->value) return greedy;
  if (greedy_value < single->value) return single_set;
  return std::min(greedy, single_set);
}

Design fill_residual(const Taxonomy& t, const ParamSet& p, const Design& s,
                     Budget b) {
  double spent = design_cost(p, s);
  if (spent > b.value + kCostTolerance) {
    throw Error(Errc::InvalidDesign, "design already exceeds the budget");
  }

  struct Entry {
    ConceptId id;
    double ratio;
    double cost;
  };
  std::vector<Entry> remaining;
  for (const auto& c : selectable_concepts(t)) {
    if (s.selected.count(c)) continue;
    double w = p.w_of(c);
    remaining.push_back({c, derived_popularity(t, p, c) / w, w});
  }
  std::sort(remaining.begin(), remaining.end(), [](const Entry& a, const Entry& b) {
    if (a.ratio != b.ratio) return a.ratio > b.ratio;
    return a.id < b.id;
  });

  Design out = s;
  for (const auto& e : remaining) {
    if (spent + e.cost <= b.value + kCostTolerance) {
      out.selected.insert(e.id);
      spent += e.cost;
    }
  }
  return out;
}

SolveResult level_wise(const Taxonomy& t, const ParamSet& p, Budget b,
                       const SolveOptions& opts) {
  auto concepts = selectable_concepts(t);
  if (concepts.empty()) {
    throw Error(Errc::NoFeasibleDesign, "taxonomy has no selectable concept");
  }
  require_feasible(t, p, b);

  struct Candidate {
    Design design;
    std::string label;
  };
  std::vector<Candidate> candidates;

  // One candidate per depth level, selected by derived popularity.
  int h = t.height();
  for (int level = 1; level <= h; ++level) {
    std::vector<FlatItem> items;
    for (const auto& c : concepts) {
      if (t.depth_of(c) == level) {
        items.push_back({c, derived_popularity(t, p, c), p.w_of(c)});
      }
    }
    if (items.empty()) continue;
    auto picked = flat_select(items, b);
    if (picked.empty()) continue;
    candidates.push_back({Design{std::move(picked)}, "level " + std::to_string(level)});
  }

  // Most popular leaf concept only.
  {
    ConceptId best_leaf;
    double best_u = -1.0;
    for (const auto& leaf : t.leaves()) {
      double u = p.u_of(leaf);
      if (u > best_u) {  // leaves are lex ordered, so ties keep the smallest id
        best_u = u;
        best_leaf = leaf;
      }
    }
    if (best_u >= 0.0 && p.w_of(best_leaf) <= b.value + kCostTolerance) {
      candidates.push_back({Design{{best_leaf}}, "max leaf"});
    }
  }

  if (candidates.empty()) {
    throw Error(Errc::NoFeasibleDesign, "no level candidate fits the budget");
  }

  const Candidate* chosen = nullptr;
  double chosen_qu = 0.0, chosen_cost = 0.0;
  for (const auto& cand : candidates) {
    double qu = evaluate_design(t, p, cand.design, opts.eval).qu;
    double cost = design_cost(p, cand.design);
    if (!chosen || better(qu, cost, cand.design, chosen_qu, chosen_cost,
                          chosen->design)) {
      chosen = &cand;
      chosen_qu = qu;
      chosen_cost = cost;
    }
  }

  SolveResult result;
  result.design = chosen->design;
  result.qu = chosen_qu;
  result.cost = chosen_cost;
  result.solver = SolverKind::LevelWise;
  result.diagnostics["candidate_chosen"] = chosen->label;
  result.diagnostics["candidates"] = candidates.size();
  if (t.kind() == TaxonomyKind::Dag) {
    result.diagnostics["dag_heuristic"] = true;
  }
  result.diagnostics["empty_design_qu"] = empty_design_score(t, p, opts.eval);

  // Spend leftover budget if that helps; keep the better of the two designs.
  Design filled = fill_residual(t, p, result.design, b);
  if (filled.selected != result.design.selected) {
    double filled_qu = evaluate_design(t, p, filled, opts.eval).qu;
    double filled_cost = design_cost(p, filled);
    std::vector<ConceptId> added;
    for (const auto& c : filled.selected) {
      if (!result.design.selected.count(c)) added.push_back(c);
    }
    if (better(filled_qu, filled_cost, filled, result.qu, result.cost,
               result.design)) {
      result.design = std::move(filled);
      result.qu = filled_qu;
      result.cost = filled_cost;
      result.diagnostics["residual_added"] = added;
    } else {
      result.diagnostics["residual_rejected"] = added;
    }
  }
  return result;
}

namespace {

// One partial solution over a subtree: selected concepts cost `cost` in true
// units (`scaled_cost` in lambda_w units), leave unassigned leaves carrying
// total scaled popularity-frequency mass `n_mass` (sum of u*d) and frequency
// `f_mass` (sum of d), and collect `q` queriability from partitions closed
// inside the subtree. Candidates per (n_mass, f_mass) form a Pareto
// staircase over (cost, q); a nonempty sub-design is never pruned by an
// empty one so that the best non-empty answer survives.
struct DpCand {
  double cost = 0.0;
  std::int64_t scaled_cost = 0;
  std::int64_t n_mass = 0;
  std::int64_t f_mass = 0;
  double q = 0.0;
  bool nonempty = false;
  bool picked = false;
  int left = -1;
  int right = -1;
};

struct DpParams {
  std::map<ConceptId, std::int64_t> u, d, w;
  std::map<ConceptId, double> pr;
  double lambda_w = 1.0;
};

void prune(std::vector<DpCand>& cands) {
  std::sort(cands.begin(), cands.end(), [](const DpCand& a, const DpCand& b) {
    if (a.n_mass != b.n_mass) return a.n_mass < b.n_mass;
    if (a.f_mass != b.f_mass) return a.f_mass < b.f_mass;
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.q != b.q) return a.q > b.q;
    if (a.nonempty != b.nonempty) return a.nonempty;
    if (a.left != b.left) return a.left < b.left;
    return a.right < b.right;
  });

  std::vector<DpCand> kept;
  kept.reserve(cands.size());
  size_t group_start = 0;
  while (group_start < cands.size()) {
    size_t group_end = group_start;
    while (group_end < cands.size() &&
           cands[group_end].n_mass == cands[group_start].n_mass &&
           cands[group_end].f_mass == cands[group_start].f_mass) {
      ++group_end;
    }
    double best_any = -std::numeric_limits<double>::infinity();
    double best_nonempty = -std::numeric_limits<double>::infinity();
    for (size_t i = group_start; i < group_end; ++i) {
      const DpCand& c = cands[i];
      double bar = c.nonempty ? best_nonempty : std::max(best_any, best_nonempty);
      if (c.q <= bar) continue;  // dominated: earlier entry has cost <=, q >=
      kept.push_back(c);
      best_any = std::max(best_any, c.q);
      if (c.nonempty) best_nonempty = std::max(best_nonempty, c.q);
    }
    group_start = group_end;
  }
  cands.swap(kept);
}

}  // namespace

SolveResult dp_solve(const Taxonomy& t, const ParamSet& p, Budget b,
                     const SolveOptions& opts) {
  if (t.kind() != TaxonomyKind::Tree) {
    throw Error(Errc::NotATree, "dp_solve requires a tree taxonomy");
  }
  require_feasible(t, p, b);

  DpParams dp;
  std::set<ConceptId> excluded;  // leaves treated as absent (strict mode)
  std::set<ConceptId> unselectable;
  if (opts.exact_ints) {
    if (!p.integer_mode()) {
      throw Error(Errc::InvalidParams,
                  "exact mode requires integer u, d and w values");
    }
    for (const auto& leaf : t.leaves()) {
      dp.u[leaf] = static_cast<std::int64_t>(p.u_of(leaf));
      dp.d[leaf] = static_cast<std::int64_t>(p.d_of(leaf));
      if (dp.u[leaf] == 0 && dp.d[leaf] == 0) unselectable.insert(leaf);
    }
    for (const auto& c : selectable_concepts(t)) {
      dp.w[c] = static_cast<std::int64_t>(p.w_of(c));
    }
    dp.lambda_w = 1.0;
  } else {
    ScaledParamSet scaled = scale(p, t, opts.epsilon, b);
    dp.u = scaled.u;
    dp.d = scaled.d;
    dp.w = scaled.w;
    dp.lambda_w = scaled.lambda_w;
    unselectable = scaled.negligible;
    if (opts.strict_zero_drop) {
      // Replicates removing every concept whose scaled u or d is zero: such
      // leaves contribute no mass and cannot be selected.
      for (const auto& leaf : scaled.zero_u) excluded.insert(leaf);
      for (const auto& leaf : scaled.zero_d) excluded.insert(leaf);
      for (const auto& leaf : excluded) unselectable.insert(leaf);
    }
  }
  for (const auto& c : selectable_concepts(t)) dp.pr[c] = p.pr_of(c);

  Taxonomy bt = binarize(t, b.value);

  // Bottom-up over a postorder of the binarized tree.
  std::vector<ConceptId> order;
  {
    std::vector<std::pair<ConceptId, bool>> stack{{bt.root(), false}};
    while (!stack.empty()) {
      auto [node, expanded] = stack.back();
      stack.pop_back();
      if (expanded) {
        order.push_back(node);
        continue;
      }
      stack.emplace_back(node, true);
      for (const auto& ch : bt.children(node)) stack.emplace_back(ch, false);
    }
  }

  std::map<ConceptId, std::vector<DpCand>> table;
  std::uint64_t cells = 0;

  for (const auto& node : order) {
    std::vector<DpCand> cands;
    const auto& kids = bt.children(node);

    if (kids.empty()) {
      // Leaf base cases: left unassigned it carries its u*d and d mass;
      // selected it closes the singleton partition worth pr * u.
      DpCand unpicked;
      if (!excluded.count(node)) {
        unpicked.n_mass = dp.u.at(node) * dp.d.at(node);
        unpicked.f_mass = dp.d.at(node);
      }
      cands.push_back(unpicked);

      if (!unselectable.count(node) && p.w_of(node) <= b.value + kCostTolerance) {
        DpCand picked;
        picked.cost = p.w_of(node);
        picked.scaled_cost = dp.w.at(node);
        // A selected leaf closes the singleton partition worth pr * u; a
        // zero-frequency leaf contributes nothing, matching the evaluator.
        picked.q = p.d_of(node) > 0.0
                       ? dp.pr.at(node) * static_cast<double>(dp.u.at(node))
                       : 0.0;
        picked.nonempty = true;
        picked.picked = true;
        cands.push_back(picked);
      }
    } else {
      // Merge children (cross product of their candidate lists).
      const auto& left = table.at(kids[0]);
      if (kids.size() == 1) {
        for (size_t i = 0; i < left.size(); ++i) {
          DpCand m = left[i];
          m.picked = false;
          m.left = static_cast<int>(i);
          m.right = -1;
          cands.push_back(m);
        }
      } else {
        const auto& right = table.at(kids[1]);
        for (size_t i = 0; i < left.size(); ++i) {
          for (size_t j = 0; j < right.size(); ++j) {
            if (left[i].cost + right[j].cost > b.value + kCostTolerance) continue;
            DpCand m;
            m.cost = left[i].cost + right[j].cost;
            m.scaled_cost = left[i].scaled_cost + right[j].scaled_cost;
            m.n_mass = left[i].n_mass + right[j].n_mass;
            m.f_mass = left[i].f_mass + right[j].f_mass;
            m.q = left[i].q + right[j].q;
            m.nonempty = left[i].nonempty || right[j].nonempty;
            m.left = static_cast<int>(i);
            m.right = static_cast<int>(j);
            cands.push_back(m);
          }
        }
      }

      // Annotating this node closes a partition over the subtree's
      // unassigned leaves: it contributes pr * N / F with the frequency
      // accumulator F standing in for d(P).
      bool selectable = node != bt.root() && !bt.is_dummy(node);
      if (selectable && p.w_of(node) <= b.value + kCostTolerance) {
        size_t merged = cands.size();
        double w_true = p.w_of(node);
        std::int64_t w_scaled = dp.w.at(node);
        double pr_node = dp.pr.at(node);
        for (size_t i = 0; i < merged; ++i) {
          DpCand m = cands[i];
          if (m.cost + w_true > b.value + kCostTolerance) continue;
          m.cost += w_true;
          m.scaled_cost += w_scaled;
          m.q += m.f_mass > 0
                     ? pr_node * static_cast<double>(m.n_mass) /
                           static_cast<double>(m.f_mass)
                     : 0.0;
          m.n_mass = 0;
          m.f_mass = 0;
          m.nonempty = true;
          m.picked = true;
          cands.push_back(m);
        }
      }
    }

    prune(cands);
    cells += cands.size();
    table[node] = std::move(cands);
  }

  // Reconstruct the selected set behind one root candidate.
  auto reconstruct = [&](const DpCand& root_cand) {
    Design design;
    struct Frame {
      const ConceptId* node;
      const DpCand* cand;
    };
    std::vector<Frame> stack{{&bt.root(), &root_cand}};
    while (!stack.empty()) {
      auto [node, cand] = stack.back();
      stack.pop_back();
      if (cand->picked) design.selected.insert(*node);
      const auto& kids = bt.children(*node);
      if (cand->left >= 0 && !kids.empty()) {
        stack.push_back({&kids[0], &table.at(kids[0])[cand->left]});
      }
      if (cand->right >= 0 && kids.size() > 1) {
        stack.push_back({&kids[1], &table.at(kids[1])[cand->right]});
      }
    }
    return design;
  };

  // Final selection per the root rule (partition score plus unassigned mass
  // as the free term), re-scored with the unscaled parameters so scaling
  // noise cannot misrank the frontier. Only non-empty designs qualify.
  const std::vector<DpCand>& roots = table.at(bt.root());
  bool found = false;
  Design best_design;
  double best_qu = 0.0, best_cost = 0.0;
  double best_scaled = -std::numeric_limits<double>::infinity();
  for (const auto& cand : roots) {
    if (!cand.nonempty) continue;
    Design design = reconstruct(cand);
    double qu = evaluate_design(t, p, design, opts.eval).qu;
    double cost = design_cost(p, design);
    double scaled_score =
        cand.q + (opts.eval.include_free_term ? static_cast<double>(cand.n_mass)
                                              : 0.0);
    best_scaled = std::max(best_scaled, scaled_score);
    if (!found ||
        better(qu, cost, design, best_qu, best_cost, best_design)) {
      found = true;
      best_design = std::move(design);
      best_qu = qu;
      best_cost = cost;
    }
  }
  SolveResult result;
  if (!found) {
    // Every scoring concept was dropped (zero scaled mass); fall back to the
    // cheapest affordable concept so a feasible instance still yields a
    // non-empty design.
    ConceptId pick;
    double cheapest = std::numeric_limits<double>::infinity();
    for (const auto& c : selectable_concepts(t)) {
      double w = p.w_of(c);
      if (w <= b.value + kCostTolerance && w < cheapest) {
        cheapest = w;
        pick = c;
      }
    }
    best_design = Design{{pick}};
    best_qu = evaluate_design(t, p, best_design, opts.eval).qu;
    best_cost = cheapest;
    result.diagnostics["fallback_single"] = pick;
  }

  result.design = std::move(best_design);
  result.qu = best_qu;
  result.cost = best_cost;
  result.solver = SolverKind::Dp;
  result.diagnostics["cells"] = cells;
  result.diagnostics["epsilon"] =
      opts.exact_ints ? nlohmann::json("exact") : nlohmann::json(opts.epsilon);
  result.diagnostics["scaled_objective"] = best_scaled;
  result.diagnostics["binarized_nodes"] = bt.nodes().size();
  result.diagnostics["empty_design_qu"] = empty_design_score(t, p, opts.eval);

  Design filled = fill_residual(t, p, result.design, b);
  if (filled.selected != result.design.selected) {
    double filled_qu = evaluate_design(t, p, filled, opts.eval).qu;
    double filled_cost = design_cost(p, filled);
    std::vector<ConceptId> added;
    for (const auto& c : filled.selected) {
      if (!result.design.selected.count(c)) added.push_back(c);
    }
    if (better(filled_qu, filled_cost, filled, result.qu, result.cost,
               result.design)) {
      result.design = std::move(filled);
      result.qu = filled_qu;
      result.cost = filled_cost;
      result.diagnostics["residual_added"] = added;
    } else {
      result.diagnostics["residual_rejected"] = added;
    }
  }
  return result;
}

std::string serialize_result(const SolveResult& r) {
  nlohmann::json doc;
  doc["design"] = r.design.selected;
  doc["qu"] = r.qu;
  doc["cost"] = r.cost;
  doc["solver"] = solver_name(r.solver);
  doc["diagnostics"] = r.diagnostics;
  return doc.dump(2);
}

}  // namespace cecd
