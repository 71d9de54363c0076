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

#include "cecd/taxonomy.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

#include "cecd/errors.hpp"
#include "json.hpp"

namespace cecd {

namespace {

bool valid_id(const ConceptId& id) {
  if (id.empty()) return false;
  for (char ch : id) {
    if (std::isspace(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

}  // namespace

Taxonomy Taxonomy::from_parts(
    ConceptId root, std::vector<ConceptId> nodes,
    std::vector<std::pair<ConceptId, ConceptId>> edges) {
  Taxonomy t;
  t.root_ = std::move(root);
  t.nodes_ = std::move(nodes);
  t.edges_ = std::move(edges);
  std::sort(t.nodes_.begin(), t.nodes_.end());
  t.nodes_.erase(std::unique(t.nodes_.begin(), t.nodes_.end()),
                 t.nodes_.end());
  std::sort(t.edges_.begin(), t.edges_.end());
  t.edges_.erase(std::unique(t.edges_.begin(), t.edges_.end()),
                 t.edges_.end());
  t.index();
  return t;
}

void Taxonomy::index() {
  children_.clear();
  parents_.clear();
  depth_.clear();
  for (const auto& n : nodes_) {
    children_[n];
    parents_[n];
  }
  for (const auto& [parent, child] : edges_) {
    children_[parent].push_back(child);
    parents_[child].push_back(parent);
  }
  // Edges were sorted, so adjacency lists come out lexicographic.

  kind_ = TaxonomyKind::Tree;
  for (const auto& n : nodes_) {
    if (n != root_ && parents_[n].size() != 1) {
      kind_ = TaxonomyKind::Dag;
      break;
    }
  }

  // Longest-path depths via one pass over a topological order. Leaves depth
  // computation best-effort here; cycles are caught by parse/validate.
  std::map<ConceptId, int> pending;
  std::deque<ConceptId> queue;
  for (const auto& n : nodes_) {
    pending[n] = static_cast<int>(parents_[n].size());
    if (pending[n] == 0) queue.push_back(n);
  }
  while (!queue.empty()) {
    ConceptId n = queue.front();
    queue.pop_front();
    int d = 0;
    for (const auto& p : parents_[n]) {
      auto it = depth_.find(p);
      if (it != depth_.end()) d = std::max(d, it->second + 1);
    }
    depth_[n] = (n == root_) ? 0 : d;
    for (const auto& ch : children_[n]) {
      if (--pending[ch] == 0) queue.push_back(ch);
    }
  }
}

bool Taxonomy::contains(const ConceptId& c) const {
  return std::binary_search(nodes_.begin(), nodes_.end(), c);
}

bool Taxonomy::is_leaf(const ConceptId& c) const {
  if (c == root_) return false;
  auto it = children_.find(c);
  return it != children_.end() && it->second.empty();
}

const std::vector<ConceptId>& Taxonomy::children(const ConceptId& c) const {
  auto it = children_.find(c);
  if (it == children_.end()) {
    throw Error(Errc::UnknownConcept, "unknown concept: " + c);
  }
  return it->second;
}

const std::vector<ConceptId>& Taxonomy::parents(const ConceptId& c) const {
  auto it = parents_.find(c);
  if (it == parents_.end()) {
    throw Error(Errc::UnknownConcept, "unknown concept: " + c);
  }
  return it->second;
}

std::vector<ConceptId> Taxonomy::leaves() const {
  std::vector<ConceptId> out;
  for (const auto& n : nodes_) {
    if (is_leaf(n)) out.push_back(n);
  }
  return out;
}

int Taxonomy::depth_of(const ConceptId& c) const {
  auto it = depth_.find(c);
  if (it == depth_.end()) {
    throw Error(Errc::UnknownConcept, "unknown concept: " + c);
  }
  return it->second;
}

int Taxonomy::height() const {
  int h = 0;
  for (const auto& [_, d] : depth_) h = std::max(h, d);
  return h;
}

std::set<ConceptId> Taxonomy::leaf_descendants(const ConceptId& c) const {
  if (!contains(c)) {
    throw Error(Errc::UnknownConcept, "unknown concept: " + c);
  }
  std::set<ConceptId> out;
  std::set<ConceptId> seen;
  std::deque<ConceptId> queue{c};
  while (!queue.empty()) {
    ConceptId n = queue.front();
    queue.pop_front();
    if (!seen.insert(n).second) continue;
    if (is_leaf(n)) {
      out.insert(n);
      continue;
    }
    for (const auto& ch : children_.at(n)) queue.push_back(ch);
  }
  return out;
}

bool Taxonomy::is_ancestor(const ConceptId& a, const ConceptId& b) const {
  if (a == b) return false;
  std::set<ConceptId> seen;
  std::deque<ConceptId> queue{b};
  while (!queue.empty()) {
    ConceptId n = queue.front();
    queue.pop_front();
    if (!seen.insert(n).second) continue;
    for (const auto& p : parents_.at(n)) {
      if (p == a) return true;
      queue.push_back(p);
    }
  }
  return false;
}

namespace {

// Throws CycleError / MultiRootError for structures parse_taxonomy rejects.
void check_rooted_acyclic(const Taxonomy& t) {
  // Kahn's algorithm; leftovers witness a cycle.
  std::map<ConceptId, int> pending;
  std::deque<ConceptId> queue;
  size_t visited = 0;
  for (const auto& n : t.nodes()) {
    pending[n] = static_cast<int>(t.parents(n).size());
    if (pending[n] == 0) queue.push_back(n);
  }
  while (!queue.empty()) {
    ConceptId n = queue.front();
    queue.pop_front();
    ++visited;
    for (const auto& ch : t.children(n)) {
      if (--pending[ch] == 0) queue.push_back(ch);
    }
  }
  if (visited != t.nodes().size()) {
    throw Error(Errc::CycleError, "edge set contains a cycle");
  }

  std::vector<ConceptId> parentless;
  for (const auto& n : t.nodes()) {
    if (t.parents(n).empty()) parentless.push_back(n);
  }
  if (parentless.size() != 1) {
    std::ostringstream msg;
    msg << "expected exactly one parentless node, found " << parentless.size();
    throw Error(Errc::MultiRootError, msg.str());
  }
  if (parentless[0] != t.root()) {
    throw Error(Errc::MultiRootError,
                "declared root " + t.root() + " has a parent; parentless node is " +
                    parentless[0]);
  }
}

}  // namespace

Taxonomy parse_taxonomy(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::SyntaxError, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw Error(Errc::SyntaxError, "taxonomy document must be a JSON object");
  }
  for (const auto& [key, _] : doc.items()) {
    if (key != "root" && key != "nodes" && key != "edges") {
      throw Error(Errc::SyntaxError, "unknown key in taxonomy document: " + key);
    }
  }
  if (!doc.contains("root") || !doc["root"].is_string()) {
    throw Error(Errc::SyntaxError, "missing or non-string \"root\"");
  }
  if (!doc.contains("nodes") || !doc["nodes"].is_array()) {
    throw Error(Errc::SyntaxError, "missing or non-array \"nodes\"");
  }
  if (!doc.contains("edges") || !doc["edges"].is_array()) {
    throw Error(Errc::SyntaxError, "missing or non-array \"edges\"");
  }

  ConceptId root = doc["root"].get<std::string>();
  std::vector<ConceptId> nodes;
  for (const auto& entry : doc["nodes"]) {
    if (!entry.is_object() || !entry.contains("id") || !entry["id"].is_string() ||
        entry.size() != 1) {
      throw Error(Errc::SyntaxError, "node entries must be {\"id\": str}");
    }
    ConceptId id = entry["id"].get<std::string>();
    if (!valid_id(id)) {
      throw Error(Errc::SyntaxError, "invalid concept id: \"" + id + "\"");
    }
    nodes.push_back(std::move(id));
  }
  std::set<ConceptId> declared(nodes.begin(), nodes.end());
  if (declared.size() != nodes.size()) {
    throw Error(Errc::SyntaxError, "duplicate node id");
  }
  if (!declared.count(root)) {
    throw Error(Errc::SyntaxError, "root \"" + root + "\" is not a declared node");
  }

  std::vector<std::pair<ConceptId, ConceptId>> edges;
  for (const auto& entry : doc["edges"]) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
        !entry[1].is_string()) {
      throw Error(Errc::SyntaxError, "edge entries must be [parent, child]");
    }
    ConceptId parent = entry[0].get<std::string>();
    ConceptId child = entry[1].get<std::string>();
    if (!declared.count(parent) || !declared.count(child)) {
      throw Error(Errc::SyntaxError,
                  "edge references undeclared node: [" + parent + ", " + child + "]");
    }
    if (parent == child) {
      throw Error(Errc::CycleError, "self edge on " + parent);
    }
    edges.emplace_back(std::move(parent), std::move(child));
  }

  Taxonomy t = Taxonomy::from_parts(std::move(root), std::move(nodes),
                                    std::move(edges));
  check_rooted_acyclic(t);
  return t;
}

std::string serialize_taxonomy(const Taxonomy& t) {
  nlohmann::json doc;
  doc["root"] = t.root();
  doc["nodes"] = nlohmann::json::array();
  for (const auto& n : t.nodes()) {
    doc["nodes"].push_back({{"id", n}});
  }
  doc["edges"] = nlohmann::json::array();
  for (const auto& [parent, child] : t.edges()) {
    doc["edges"].push_back({parent, child});
  }
  return doc.dump(2);
}

ValidationReport validate(const Taxonomy& t) {
  ValidationReport report;
  std::set<ConceptId> declared(t.nodes().begin(), t.nodes().end());

  if (!declared.count(t.root())) {
    report.errors.push_back({"undeclared_root",
                             "root " + t.root() + " is not a declared node"});
  }

  for (const auto& [parent, child] : t.edges()) {
    for (const auto& endpoint : {parent, child}) {
      if (!declared.count(endpoint)) {
        report.errors.push_back(
            {"undeclared_node", "edge references undeclared node " + endpoint});
      }
    }
  }
  if (!report.errors.empty()) return report;

  std::vector<ConceptId> parentless;
  for (const auto& n : t.nodes()) {
    if (t.parents(n).empty()) parentless.push_back(n);
  }
  if (parentless.size() != 1 || parentless[0] != t.root()) {
    report.errors.push_back(
        {"multi_root", "taxonomy must have exactly one parentless node, the root"});
  }

  // Cycle check (Kahn).
  {
    std::map<ConceptId, int> pending;
    std::deque<ConceptId> queue;
    size_t visited = 0;
    for (const auto& n : t.nodes()) {
      pending[n] = static_cast<int>(t.parents(n).size());
      if (pending[n] == 0) queue.push_back(n);
    }
    while (!queue.empty()) {
      ConceptId n = queue.front();
      queue.pop_front();
      ++visited;
      for (const auto& ch : t.children(n)) {
        if (--pending[ch] == 0) queue.push_back(ch);
      }
    }
    if (visited != t.nodes().size()) {
      report.errors.push_back({"cycle", "edge set contains a cycle"});
    }
  }
  if (!report.errors.empty()) return report;

  if (t.kind() == TaxonomyKind::Tree) {
    for (const auto& n : t.nodes()) {
      if (n != t.root() && t.parents(n).size() != 1) {
        report.errors.push_back(
            {"tree_invariant", n + " has multiple parents in a tree taxonomy"});
      }
    }
  }

  for (const auto& d : t.dummy_nodes()) {
    if (!declared.count(d)) {
      report.errors.push_back({"undeclared_node", "dummy node " + d + " undeclared"});
    } else if (t.is_leaf(d)) {
      report.errors.push_back({"dummy_leaf", "dummy node " + d + " is a leaf"});
    }
  }

  for (const auto& n : t.nodes()) {
    if (t.children(n).size() == 1) {
      report.warnings.push_back(
          {"single_child", "internal node " + n + " has exactly one child"});
    }
  }

  return report;
}

Taxonomy binarize(const Taxonomy& t, double total_budget) {
  if (t.kind() != TaxonomyKind::Tree) {
    throw Error(Errc::NotATree, "binarize requires a tree taxonomy");
  }

  std::set<ConceptId> declared(t.nodes().begin(), t.nodes().end());
  std::vector<ConceptId> nodes = t.nodes();
  std::vector<std::pair<ConceptId, ConceptId>> edges;
  std::set<ConceptId> dummies = t.dummy_nodes();

  for (const auto& n : t.nodes()) {
    const auto& kids = t.children(n);
    if (kids.size() <= 2) {
      for (const auto& ch : kids) edges.emplace_back(n, ch);
      continue;
    }
    // Pack the k children as leaves of a balanced full binary tree rooted
    // at n. Dummy ids are "<parent>#k", checked against declared ids.
    int counter = 0;
    std::function<ConceptId(size_t, size_t)> build =
        [&](size_t lo, size_t hi) -> ConceptId {
      if (hi - lo == 1) return kids[lo];
      ConceptId id;
      if (lo == 0 && hi == kids.size()) {
        id = n;
      } else {
        id = n + "#" + std::to_string(counter++);
        if (declared.count(id)) {
          throw Error(Errc::SyntaxError,
                      "dummy id " + id + " collides with a declared concept");
        }
        nodes.push_back(id);
        dummies.insert(id);
      }
      size_t mid = lo + (hi - lo + 1) / 2;
      edges.emplace_back(id, build(lo, mid));
      edges.emplace_back(id, build(mid, hi));
      return id;
    };
    build(0, kids.size());
  }

  Taxonomy out = Taxonomy::from_parts(t.root(), std::move(nodes), std::move(edges));
  out.dummy_nodes_ = std::move(dummies);
  out.dummy_cost_ = total_budget + 1.0;
  return out;
}

}  // namespace cecd
