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

#ifndef CECD_PARAMS_HPP
#define CECD_PARAMS_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cecd/taxonomy.hpp"

namespace cecd {

struct Budget {
  double value = 0.0;
};

// Per-concept numeric parameters: query popularity u and document frequency d
// live on leaves; annotation accuracy pr and cost w on every selectable
// concept. pr defaults to 1.0 when absent. Immutable by convention once
// bound to a taxonomy.
struct ParamSet {
  std::map<ConceptId, double> u;   // leaves
  std::map<ConceptId, double> d;   // leaves
  std::map<ConceptId, double> pr;  // non-root concepts, defaulted
  std::map<ConceptId, double> w;   // non-root concepts

  double u_of(const ConceptId& c) const;
  double d_of(const ConceptId& c) const;
  double pr_of(const ConceptId& c) const;  // 1.0 when absent
  double w_of(const ConceptId& c) const;

  // True iff every u, d and w value is an integer.
  bool integer_mode() const;
};

// Integer-scaled view of a ParamSet: x̂ = floor(x / λ) with λ = ε·x_max/n.
struct ScaledParamSet {
  double epsilon = 0.0;
  double lambda_u = 0.0, lambda_d = 0.0, lambda_w = 0.0;
  std::map<ConceptId, std::int64_t> u;  // leaves
  std::map<ConceptId, std::int64_t> d;  // leaves
  std::map<ConceptId, std::int64_t> w;  // non-root concepts
  std::int64_t budget = 0;              // floor(B / λ_w)

  // Leaves whose scaled u or d floored to zero, and the subset where both did.
  // Concepts in `negligible` cannot affect any objective and are dropped from
  // solver consideration.
  std::set<ConceptId> zero_u, zero_d, negligible;
};

// One sampled document collection: ids with the set of leaf concepts each
// document mentions.
struct CorpusSample {
  struct Document {
    std::string id;
    std::set<ConceptId> mentions;
  };
  std::vector<Document> documents;
};

// Parses the params document {"u": {id: num}, "d": {...}, "pr": {...},
// "w": {...}} and validates it against the taxonomy: u/d keys must be
// leaves, pr/w keys non-root concepts, every leaf must carry u and d,
// every non-root concept must carry w. Workload mass attached to internal
// concepts is rejected, not redistributed.
ParamSet parse_params(const std::string& text, const Taxonomy& t);

std::string serialize_params(const ParamSet& p);

// Parses JSON-lines {"doc": str, "mentions": [leaf ids]}; mentions must be
// leaves of t.
CorpusSample parse_corpus_jsonl(const std::string& text, const Taxonomy& t);

// Sum of u over the leaf descendants of c (u(c) itself when c is a leaf).
double derived_popularity(const Taxonomy& t, const ParamSet& p,
                          const ConceptId& c);

// Bayesian m-estimate smoothing of raw counts:
//   smoothed(C) = (P(C) + m·prior(C)) / (m + Σ_C P(C))
// where P are the raw frequency proportions. All outputs strictly positive
// when m > 0 and the prior is positive.
std::map<ConceptId, double> smooth_popularities(
    const std::map<ConceptId, double>& raw_counts, double m,
    const std::map<ConceptId, double>& prior);

// Uniform prior over the given keys.
std::map<ConceptId, double> uniform_prior(const std::vector<ConceptId>& keys);

// Per-leaf document fractions from a sample, smoothed with the m-estimate
// (m = 1, uniform prior over leaves).
std::map<ConceptId, double> estimate_frequencies(const CorpusSample& sample,
                                                 const Taxonomy& t);

// Sample size for estimating a proportion within +/- error at the given
// confidence: floor(z^2 / (4 error^2)); 384 documents at (0.05, 0.95).
int required_sample_size(double error, double confidence);

// Scales u, d, w (and the budget) to integers with λ_x = ε·x_max/n, n the
// node count. Throws DegenerateParams when all u or all d are zero.
ScaledParamSet scale(const ParamSet& p, const Taxonomy& t, double epsilon,
                     Budget b);

}  // namespace cecd

#endif  // CECD_PARAMS_HPP
