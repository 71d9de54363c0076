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

#include "cecd/queriability.hpp"

#include <algorithm>
#include <deque>

#include "cecd/errors.hpp"
#include "json.hpp"

namespace cecd {

void check_design(const Taxonomy& t, const Design& s) {
  for (const auto& c : s.selected) {
    if (!t.contains(c)) {
      throw Error(Errc::UnknownConcept, "design references unknown concept " + c);
    }
    if (c == t.root()) {
      throw Error(Errc::InvalidDesign, "design may not contain the root");
    }
    if (t.is_dummy(c)) {
      throw Error(Errc::InvalidDesign, "design may not contain dummy node " + c);
    }
  }
}

PartitionMap partitions_tree(const Taxonomy& t, const Design& s) {
  if (t.kind() != TaxonomyKind::Tree) {
    throw Error(Errc::NotATree, "partitions_tree requires a tree taxonomy");
  }
  check_design(t, s);

  PartitionMap pm;
  for (const auto& leaf : t.leaves()) {
    // Walk up toward the root; the first selected node governs the leaf.
    ConceptId cur = leaf;
    bool assigned = false;
    while (true) {
      if (s.selected.count(cur)) {
        pm.partition_of[{cur}].insert(leaf);
        assigned = true;
        break;
      }
      if (cur == t.root()) break;
      cur = t.parents(cur)[0];
    }
    if (!assigned) pm.free.insert(leaf);
  }
  return pm;
}

std::set<ConceptId> full_ancestor_set(const Taxonomy& t, const Design& s,
                                      const ConceptId& leaf) {
  check_design(t, s);
  if (!t.contains(leaf)) {
    throw Error(Errc::UnknownConcept, "unknown concept: " + leaf);
  }
  if (!t.is_leaf(leaf)) {
    throw Error(Errc::NotALeaf, leaf + " is not a leaf concept");
  }
  if (s.selected.count(leaf)) return {leaf};

  // Selected proper ancestors of the leaf.
  std::set<ConceptId> selected_ancestors;
  {
    std::set<ConceptId> seen;
    std::deque<ConceptId> queue{leaf};
    while (!queue.empty()) {
      ConceptId n = queue.front();
      queue.pop_front();
      if (!seen.insert(n).second) continue;
      for (const auto& p : t.parents(n)) {
        if (s.selected.count(p)) selected_ancestors.insert(p);
        queue.push_back(p);
      }
    }
  }

  // Keep A unless some other selected ancestor of the leaf is a proper
  // descendant of A.
  std::set<ConceptId> direct;
  for (const auto& a : selected_ancestors) {
    bool shadowed = false;
    for (const auto& b : selected_ancestors) {
      if (a != b && t.is_ancestor(a, b)) {
        shadowed = true;
        break;
      }
    }
    if (!shadowed) direct.insert(a);
  }
  return direct;
}

PartitionMap allparts(const Taxonomy& t, const Design& s) {
  check_design(t, s);
  PartitionMap pm;
  for (const auto& leaf : t.leaves()) {
    auto fas = full_ancestor_set(t, s, leaf);
    if (fas.empty()) {
      pm.free.insert(leaf);
    } else {
      PartitionKey key(fas.begin(), fas.end());
      pm.partition_of[key].insert(leaf);
    }
  }
  return pm;
}

namespace {

Evaluation evaluate_partitions(const ParamSet& p, const Design& s,
                               const PartitionMap& pm, bool apply_accuracy,
                               const EvalOptions& opts) {
  Evaluation ev;

  for (const auto& [key, leaves] : pm.partition_of) {
    PartitionBreakdown part;
    part.key = key;
    part.leaves.assign(leaves.begin(), leaves.end());

    double mass = 0.0;  // sum of u(C) d(C) over the partition
    double d_sum = 0.0;
    for (const auto& leaf : leaves) {
      mass += p.u_of(leaf) * p.d_of(leaf);
      d_sum += p.d_of(leaf);
    }

    double d_p = d_sum;
    if (opts.frequency_policy == PartitionFrequencyPolicy::Explicit) {
      auto it = opts.explicit_frequency.find(key);
      if (it == opts.explicit_frequency.end()) {
        std::string key_str;
        for (const auto& c : key) key_str += (key_str.empty() ? "" : ",") + c;
        throw Error(Errc::MissingIntersectionFrequency,
                    "no explicit frequency for partition {" + key_str + "}");
      }
      d_p = it->second;
    }

    double accuracy = 1.0;
    if (apply_accuracy) accuracy = p.pr_of(key.front());

    part.d = d_p;
    part.contribution = d_p > 0.0 ? accuracy * mass / d_p : 0.0;
    ev.qu += part.contribution;
    ev.partitions.push_back(std::move(part));
  }

  ev.free.assign(pm.free.begin(), pm.free.end());
  for (const auto& leaf : pm.free) {
    ev.free_term += p.u_of(leaf) * p.d_of(leaf);
  }
  if (opts.include_free_term) ev.qu += ev.free_term;

  // Selected concepts that govern no leaf.
  std::set<ConceptId> governing;
  for (const auto& [key, _] : pm.partition_of) {
    governing.insert(key.begin(), key.end());
  }
  for (const auto& c : s.selected) {
    if (!governing.count(c)) ev.empty_partitions.push_back(c);
  }
  return ev;
}

}  // namespace

Evaluation queriability_tree(const Taxonomy& t, const ParamSet& p,
                             const Design& s, const EvalOptions& opts) {
  auto pm = partitions_tree(t, s);
  return evaluate_partitions(p, s, pm, /*apply_accuracy=*/true, opts);
}

Evaluation queriability_dag(const Taxonomy& t, const ParamSet& p,
                            const Design& s, const EvalOptions& opts) {
  auto pm = allparts(t, s);
  return evaluate_partitions(p, s, pm, /*apply_accuracy=*/false, opts);
}

Evaluation evaluate_design(const Taxonomy& t, const ParamSet& p,
                           const Design& s, const EvalOptions& opts) {
  return t.kind() == TaxonomyKind::Tree ? queriability_tree(t, p, s, opts)
                                        : queriability_dag(t, p, s, opts);
}

std::string serialize_evaluation(const Evaluation& ev) {
  nlohmann::json doc;
  doc["qu"] = ev.qu;
  doc["partitions"] = nlohmann::json::array();
  for (const auto& part : ev.partitions) {
    doc["partitions"].push_back({{"key", part.key},
                                 {"leaves", part.leaves},
                                 {"d", part.d},
                                 {"contribution", part.contribution}});
  }
  doc["free"] = ev.free;
  doc["free_term"] = ev.free_term;
  doc["empty_partitions"] = ev.empty_partitions;
  return doc.dump(2);
}

Design parse_design(const std::string& text, const Taxonomy& t) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::SyntaxError, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("selected") ||
      !doc["selected"].is_array()) {
    throw Error(Errc::SyntaxError, "design document must be {\"selected\": [ids]}");
  }
  Design s;
  for (const auto& entry : doc["selected"]) {
    if (!entry.is_string()) {
      throw Error(Errc::SyntaxError, "selected entries must be strings");
    }
    s.selected.insert(entry.get<std::string>());
  }
  check_design(t, s);
  return s;
}

std::string serialize_design(const Design& s) {
  nlohmann::json doc;
  doc["selected"] = s.selected;
  return doc.dump();
}

}  // namespace cecd
