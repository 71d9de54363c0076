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

#ifndef CECD_SIMULATOR_HPP
#define CECD_SIMULATOR_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cecd/params.hpp"
#include "cecd/queriability.hpp"
#include "cecd/taxonomy.hpp"

namespace cecd {

// Distribution over per-document mention counts; when present it enforces a
// minimum number of distinct mentions per document (drawn proportionally to
// the leaf probabilities), which biases the empirical fractions upward.
struct MentionsPerDoc {
  enum class Kind { Fixed, Uniform } kind = Kind::Fixed;
  int fixed = 1;
  int lo = 1, hi = 1;
};

struct CorpusSpec {
  int num_docs = 0;
  std::map<ConceptId, double> leaf_doc_probability;  // target d values
  std::optional<MentionsPerDoc> mentions_per_doc;
  std::uint64_t seed = 0;
};

struct Query {
  ConceptId concept_id;
  std::set<std::string> relevant_docs;  // nonempty
};

struct Workload {
  std::vector<Query> queries;
};

struct SimRow {
  Design design;
  double qu = 0.0;
  double mean_pk = 0.0;
};

struct SimReport {
  std::vector<SimRow> per_design;
  std::optional<double> spearman_rho;  // needs at least 3 rows
  int k = 0;
  int trials = 0;
  std::uint64_t seed = 0;
};

CorpusSpec parse_corpus_spec(const std::string& text, const Taxonomy& t);

// Mentions each leaf in each document independently with its target
// probability, so empirical per-leaf fractions converge to the spec values.
// Deterministic under the spec seed.
CorpusSample generate_corpus(const Taxonomy& t, const CorpusSpec& spec);

// Queries drawn with concept proportional to u (which must sum to 1 over
// leaves); each query gets one relevant document sampled uniformly among the
// documents mentioning its concept. Throws ConceptUnpopulated when a drawn
// concept appears in no document.
Workload generate_workload(const Taxonomy& t, const CorpusSample& corpus,
                           const std::map<ConceptId, double>& u,
                           int n_queries, std::uint64_t seed);

// Mean p@k over queries and trials under uniform random ranking within each
// query's candidate pool: the documents mentioning any leaf of the partition
// governing the query concept, or the whole corpus for free concepts. Each
// pool membership is independently replaced by a non-pool document with
// probability 1 - pr of the governing concept. Deterministic under seed;
// trials use derived per-trial seeds, so execution order cannot change the
// result.
double simulate_pk(const Taxonomy& t, const CorpusSample& corpus,
                   const Workload& w, const Design& s, const ParamSet& p,
                   int k, int trials, std::uint64_t seed);

// Closed-form expectation of the above for pr == 1 designs (used to
// cross-check the sampler).
double expected_pk(const Taxonomy& t, const CorpusSample& corpus,
                   const Workload& w, const Design& s, int k);

// Spearman rank correlation with average ranks for ties; needs >= 3 rows.
double spearman_rho(const std::vector<std::pair<double, double>>& rows);

// Drops queries whose candidate pool under full leaf annotation is the
// whole corpus (their ranking cannot change).
Workload filter_insensitive(const Taxonomy& t, const CorpusSample& corpus,
                            const Workload& w);

std::string serialize_report(const SimReport& report);

}  // namespace cecd

#endif  // CECD_SIMULATOR_HPP
