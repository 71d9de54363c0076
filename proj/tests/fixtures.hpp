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

#ifndef CECD_TESTS_FIXTURES_HPP
#define CECD_TESTS_FIXTURES_HPP

#include <random>
#include <string>

#include "cecd/params.hpp"
#include "cecd/taxonomy.hpp"

namespace cecd::testing {

// R -> A -> {L1, L2}, R -> L3.
inline Taxonomy tiny_tree() {
  return parse_taxonomy(R"({
    "root": "R",
    "nodes": [{"id": "R"}, {"id": "A"}, {"id": "L1"}, {"id": "L2"}, {"id": "L3"}],
    "edges": [["R", "A"], ["R", "L3"], ["A", "L1"], ["A", "L2"]]
  })");
}

inline ParamSet tiny_params() {
  ParamSet p;
  p.u = {{"L1", 0.5}, {"L2", 0.3}, {"L3", 0.2}};
  p.d = {{"L1", 0.4}, {"L2", 0.4}, {"L3", 0.2}};
  p.w = {{"A", 1.0}, {"L1", 1.0}, {"L2", 1.0}, {"L3", 1.0}};
  return p;
}

inline ParamSet tiny_int_params() {
  ParamSet p;
  p.u = {{"L1", 5.0}, {"L2", 3.0}, {"L3", 2.0}};
  p.d = {{"L1", 2.0}, {"L2", 2.0}, {"L3", 1.0}};
  p.w = {{"A", 1.0}, {"L1", 1.0}, {"L2", 1.0}, {"L3", 1.0}};
  return p;
}

// DBpedia-style fragment: thing -> agent/place, agent -> person/organization,
// person -> {politician, artist, athlete}, organization -> {school,
// legislature}, place -> populated_place -> {state, city}.
inline Taxonomy dbpedia_fragment() {
  return parse_taxonomy(R"({
    "root": "thing",
    "nodes": [
      {"id": "thing"}, {"id": "agent"}, {"id": "place"}, {"id": "person"},
      {"id": "organization"}, {"id": "politician"}, {"id": "artist"},
      {"id": "athlete"}, {"id": "school"}, {"id": "legislature"},
      {"id": "populated_place"}, {"id": "state"}, {"id": "city"}
    ],
    "edges": [
      ["thing", "agent"], ["thing", "place"], ["agent", "person"],
      ["agent", "organization"], ["person", "politician"], ["person", "artist"],
      ["person", "athlete"], ["organization", "school"],
      ["organization", "legislature"], ["place", "populated_place"],
      ["populated_place", "state"], ["populated_place", "city"]
    ]
  })");
}

// DAG gap instance: C0 -> C1/C2/C3; C1 -> C4; C2 -> C5, C6; C3 -> C6, C7.
inline Taxonomy gap_dag() {
  return parse_taxonomy(R"({
    "root": "C0",
    "nodes": [
      {"id": "C0"}, {"id": "C1"}, {"id": "C2"}, {"id": "C3"},
      {"id": "C4"}, {"id": "C5"}, {"id": "C6"}, {"id": "C7"}
    ],
    "edges": [
      ["C0", "C1"], ["C0", "C2"], ["C0", "C3"], ["C1", "C4"],
      ["C2", "C5"], ["C2", "C6"], ["C3", "C6"], ["C3", "C7"]
    ]
  })");
}

// Parameters from the gap instance with scale M; internal concepts cost 1,
// leaves cost budget+1 so only internal concepts are affordable.
inline ParamSet gap_params(double m_scale, double budget) {
  ParamSet p;
  p.u = {{"C4", 4.0}, {"C5", 1.0}, {"C6", m_scale}, {"C7", 1.0}};
  p.d = {{"C4", 1.0}, {"C5", m_scale}, {"C6", 1.0}, {"C7", m_scale}};
  p.w = {{"C1", 1.0}, {"C2", 1.0}, {"C3", 1.0},
         {"C4", budget + 1.0}, {"C5", budget + 1.0}, {"C6", budget + 1.0},
         {"C7", budget + 1.0}};
  return p;
}

// schema.org fragment where hospital has two parents.
inline Taxonomy schema_org_fragment() {
  return parse_taxonomy(R"({
    "root": "thing",
    "nodes": [
      {"id": "thing"}, {"id": "place"}, {"id": "organization"},
      {"id": "movie_theater"}, {"id": "hospital"}, {"id": "local_business"},
      {"id": "airline"}, {"id": "ngo"}
    ],
    "edges": [
      ["thing", "place"], ["thing", "organization"],
      ["place", "movie_theater"], ["place", "hospital"],
      ["organization", "local_business"], ["organization", "airline"],
      ["organization", "ngo"], ["local_business", "hospital"]
    ]
  })");
}

// Random tree over `n` nodes: node i attaches to a uniformly random earlier
// node (subject to the fan-out cap). Node ids are n00..nXX, so lexicographic
// and insertion order agree.
inline Taxonomy random_tree(std::mt19937_64& rng, int n, int max_fanout = 8) {
  std::vector<ConceptId> ids;
  for (int i = 0; i < n; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "n%02d", i);
    ids.emplace_back(buf);
  }
  std::vector<int> fanout(n, 0);
  std::vector<std::pair<ConceptId, ConceptId>> edges;
  for (int i = 1; i < n; ++i) {
    int parent;
    do {
      parent = static_cast<int>(rng() % static_cast<unsigned>(i));
    } while (fanout[parent] >= max_fanout);
    ++fanout[parent];
    edges.emplace_back(ids[parent], ids[i]);
  }
  return Taxonomy::from_parts(ids[0], ids, edges);
}

// Integer parameters with u, d, w uniform in 1..hi.
inline ParamSet random_int_params(std::mt19937_64& rng, const Taxonomy& t,
                                  int hi = 10) {
  std::uniform_int_distribution<int> dist(1, hi);
  ParamSet p;
  for (const auto& leaf : t.leaves()) {
    p.u[leaf] = dist(rng);
    p.d[leaf] = dist(rng);
  }
  for (const auto& n : t.nodes()) {
    if (n != t.root()) p.w[n] = dist(rng);
  }
  return p;
}

// Real parameters with u, d in [lo, 1] and w in [0.05, 1].
inline ParamSet random_real_params(std::mt19937_64& rng, const Taxonomy& t,
                                   double lo = 0.01) {
  std::uniform_real_distribution<double> ud(lo, 1.0);
  std::uniform_real_distribution<double> wd(0.05, 1.0);
  ParamSet p;
  for (const auto& leaf : t.leaves()) {
    p.u[leaf] = ud(rng);
    p.d[leaf] = ud(rng);
  }
  for (const auto& n : t.nodes()) {
    if (n != t.root()) p.w[n] = wd(rng);
  }
  return p;
}

// Budget admitting at least one concept: uniform over [min w, sum w].
inline double random_budget(std::mt19937_64& rng, const Taxonomy& t,
                            const ParamSet& p) {
  double min_w = 0.0, total = 0.0;
  bool first = true;
  for (const auto& n : t.nodes()) {
    if (n == t.root()) continue;
    double w = p.w_of(n);
    min_w = first ? w : std::min(min_w, w);
    first = false;
    total += w;
  }
  std::uniform_real_distribution<double> dist(min_w, total);
  return dist(rng);
}

}  // namespace cecd::testing

#endif  // CECD_TESTS_FIXTURES_HPP
