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

#ifndef CECD_QUERIABILITY_HPP
#define CECD_QUERIABILITY_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "cecd/params.hpp"
#include "cecd/taxonomy.hpp"

namespace cecd {

// The decision variable: a set of selected non-root, non-dummy concepts.
// May be empty for evaluation baselines; solvers never return an empty
// design while any concept is affordable.
struct Design {
  std::set<ConceptId> selected;

  bool operator==(const Design& other) const {
    return selected == other.selected;
  }
};

// Partition keys are sorted concept-id vectors: a singleton (the governing
// selected concept) for trees, a full-ancestor-set for DAGs.
using PartitionKey = std::vector<ConceptId>;

struct PartitionMap {
  std::map<PartitionKey, std::set<ConceptId>> partition_of;
  std::set<ConceptId> free;
};

// How to obtain d(P) for a DAG partition. The frequency of a concept
// intersection is not derivable from leaf frequencies, so either the caller
// supplies it explicitly or we approximate it by the sum over the
// partition's leaves (the default).
enum class PartitionFrequencyPolicy { SumOfLeaves, Explicit };

struct EvalOptions {
  bool include_free_term = true;
  PartitionFrequencyPolicy frequency_policy =
      PartitionFrequencyPolicy::SumOfLeaves;
  // Required when frequency_policy == Explicit: d values per partition key.
  std::map<PartitionKey, double> explicit_frequency;
};

struct PartitionBreakdown {
  PartitionKey key;
  std::vector<ConceptId> leaves;
  double d = 0.0;
  double contribution = 0.0;
};

struct Evaluation {
  double qu = 0.0;
  std::vector<PartitionBreakdown> partitions;
  std::vector<ConceptId> free;
  double free_term = 0.0;
  // Selected concepts whose partition is empty: they contribute nothing and
  // waste budget.
  std::vector<ConceptId> empty_partitions;
};

// Throws InvalidDesign when s contains the root, a dummy node, or an id not
// in the taxonomy.
void check_design(const Taxonomy& t, const Design& s);

// Assigns each leaf to its unique lowest selected ancestor (itself when
// selected); leaves with no selected ancestor are free. Tree taxonomies only.
PartitionMap partitions_tree(const Taxonomy& t, const Design& s);

// Direct selected ancestors of a leaf: {leaf} when the leaf is selected,
// otherwise the selected ancestors A such that no selected ancestor of the
// leaf is a proper descendant of A. Empty set means the leaf is free.
std::set<ConceptId> full_ancestor_set(const Taxonomy& t, const Design& s,
                                      const ConceptId& leaf);

// Groups leaves by identical full-ancestor-set. Works on DAGs and on trees
// viewed as DAGs; at most one partition per leaf.
PartitionMap allparts(const Taxonomy& t, const Design& s);

// Queriability of a tree design:
//   sum over selected P of pr(P)/d(P) * sum_{C in part(P)} u(C) d(C)
//   plus sum over free leaves of u(C) d(C)
// with d(P) the total frequency of the partition's leaves. Partitions with
// d(P) = 0 contribute 0.
Evaluation queriability_tree(const Taxonomy& t, const ParamSet& p,
                             const Design& s, const EvalOptions& opts = {});

// DAG variant over full-ancestor-set partitions; annotation accuracy does
// not enter this form.
Evaluation queriability_dag(const Taxonomy& t, const ParamSet& p,
                            const Design& s, const EvalOptions& opts = {});

// Dispatches on t.kind().
Evaluation evaluate_design(const Taxonomy& t, const ParamSet& p,
                           const Design& s, const EvalOptions& opts = {});

std::string serialize_evaluation(const Evaluation& ev);

Design parse_design(const std::string& text, const Taxonomy& t);
std::string serialize_design(const Design& s);

}  // namespace cecd

#endif  // CECD_QUERIABILITY_HPP
