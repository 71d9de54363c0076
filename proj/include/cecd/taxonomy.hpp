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

#ifndef CECD_TAXONOMY_HPP
#define CECD_TAXONOMY_HPP

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace cecd {

// Concepts are referred to by their string id. Ids are case-sensitive,
// non-empty, and contain no whitespace.
using ConceptId = std::string;

enum class TaxonomyKind { Tree, Dag };

struct ValidationIssue {
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> errors;
  std::vector<ValidationIssue> warnings;

  bool ok() const { return errors.empty(); }
};

// A rooted taxonomy of concepts with superclass->subclass edges. Trees and
// DAGs share the representation; `kind` records which invariants hold.
// Instances are immutable after construction, so concurrent read-only use
// is safe.
class Taxonomy {
 public:
  // Builds a taxonomy without enforcing structural invariants. Use
  // parse_taxonomy() for validated construction; validate() reports problems
  // of taxonomies assembled directly from parts.
  static Taxonomy from_parts(ConceptId root, std::vector<ConceptId> nodes,
                             std::vector<std::pair<ConceptId, ConceptId>> edges);

  const ConceptId& root() const { return root_; }
  const std::vector<ConceptId>& nodes() const { return nodes_; }
  const std::vector<std::pair<ConceptId, ConceptId>>& edges() const {
    return edges_;
  }
  TaxonomyKind kind() const { return kind_; }

  // Nodes introduced by binarize(); never leaves, never selectable.
  const std::set<ConceptId>& dummy_nodes() const { return dummy_nodes_; }
  // Cost obligation recorded for dummy nodes (total budget + 1).
  double dummy_cost() const { return dummy_cost_; }

  bool contains(const ConceptId& c) const;
  bool is_leaf(const ConceptId& c) const;
  bool is_dummy(const ConceptId& c) const {
    return dummy_nodes_.count(c) > 0;
  }

  // Children/parents in lexicographic order. Unknown ids raise UnknownConcept.
  const std::vector<ConceptId>& children(const ConceptId& c) const;
  const std::vector<ConceptId>& parents(const ConceptId& c) const;

  // Leaf concepts (childless, non-root) in lexicographic order.
  std::vector<ConceptId> leaves() const;

  // Depth of c: edge distance from the root for trees; for DAGs the longest
  // path from the root, so no node shares a level with one of its ancestors.
  int depth_of(const ConceptId& c) const;

  // Largest depth over all nodes.
  int height() const;

  // Set of leaves reachable from c (c itself when c is a leaf).
  std::set<ConceptId> leaf_descendants(const ConceptId& c) const;

  // True when a is a proper ancestor of b.
  bool is_ancestor(const ConceptId& a, const ConceptId& b) const;

 private:
  friend Taxonomy binarize(const Taxonomy& t, double total_budget);

  void index();

  ConceptId root_;
  std::vector<ConceptId> nodes_;                          // lex sorted
  std::vector<std::pair<ConceptId, ConceptId>> edges_;    // sorted
  TaxonomyKind kind_ = TaxonomyKind::Tree;
  std::set<ConceptId> dummy_nodes_;
  double dummy_cost_ = 0.0;

  std::map<ConceptId, std::vector<ConceptId>> children_;
  std::map<ConceptId, std::vector<ConceptId>> parents_;
  std::map<ConceptId, int> depth_;
};

// Parses the JSON taxonomy document
//   {"root": id, "nodes": [{"id": str}], "edges": [[parent, child]]}
// Unknown keys are rejected. Kind is inferred: Tree iff every non-root node
// has exactly one parent. Throws SyntaxError, CycleError or MultiRootError.
Taxonomy parse_taxonomy(const std::string& text);

// Canonical JSON form; parse_taxonomy(serialize_taxonomy(t)) == t.
std::string serialize_taxonomy(const Taxonomy& t);

// Structural sanity report. Errors make the taxonomy unusable by solvers;
// warnings flag degenerate shapes (e.g. an internal node with one child).
ValidationReport validate(const Taxonomy& t);

// Rewrites a tree so that every node has at most two children by inserting
// dummy internal nodes (balanced, children packed in lexicographic order).
// Dummy ids are "<parent>#k"; a collision with a declared id is an error.
// Leaves and per-node leaf_descendants are unchanged; node count at most
// doubles. Dummies carry a cost obligation of total_budget + 1.
Taxonomy binarize(const Taxonomy& t, double total_budget);

}  // namespace cecd

#endif  // CECD_TAXONOMY_HPP
