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

#include "cecd/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "cecd/errors.hpp"
#include "json.hpp"

namespace cecd {

namespace {

double lookup(const std::map<ConceptId, double>& m, const ConceptId& c,
              const char* what) {
  auto it = m.find(c);
  if (it == m.end()) {
    throw Error(Errc::UnknownConcept,
                std::string("no ") + what + " entry for concept " + c);
  }
  return it->second;
}

bool is_integral(double x) { return std::floor(x) == x; }

// floor(x / lambda) with a relative nudge so that mathematically-integral
// quotients (e.g. 3 / 0.2) do not land one below due to rounding.
std::int64_t scaled_floor(double x, double lambda) {
  double q = x / lambda;
  return static_cast<std::int64_t>(std::floor(q + 1e-9 * (1.0 + std::fabs(q))));
}

std::map<ConceptId, double> read_number_map(const nlohmann::json& obj,
                                            const char* field) {
  std::map<ConceptId, double> out;
  for (const auto& [key, value] : obj.items()) {
    if (!value.is_number()) {
      throw Error(Errc::SyntaxError, std::string(field) + "[" + key +
                                         "] must be a number");
    }
    out[key] = value.get<double>();
  }
  return out;
}

}  // namespace

double ParamSet::u_of(const ConceptId& c) const { return lookup(u, c, "u"); }
double ParamSet::d_of(const ConceptId& c) const { return lookup(d, c, "d"); }
double ParamSet::w_of(const ConceptId& c) const { return lookup(w, c, "w"); }

double ParamSet::pr_of(const ConceptId& c) const {
  auto it = pr.find(c);
  return it == pr.end() ? 1.0 : it->second;
}

bool ParamSet::integer_mode() const {
  for (const auto* m : {&u, &d, &w}) {
    for (const auto& [_, v] : *m) {
      if (!is_integral(v)) return false;
    }
  }
  return true;
}

ParamSet parse_params(const std::string& text, const Taxonomy& t) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::SyntaxError, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw Error(Errc::SyntaxError, "params document must be a JSON object");
  }
  for (const auto& [key, _] : doc.items()) {
    if (key != "u" && key != "d" && key != "pr" && key != "w") {
      throw Error(Errc::SyntaxError, "unknown key in params document: " + key);
    }
  }

  ParamSet p;
  if (doc.contains("u")) p.u = read_number_map(doc["u"], "u");
  if (doc.contains("d")) p.d = read_number_map(doc["d"], "d");
  if (doc.contains("pr")) p.pr = read_number_map(doc["pr"], "pr");
  if (doc.contains("w")) p.w = read_number_map(doc["w"], "w");

  // u and d attach to leaf concepts only; mass on internal concepts is an
  // error rather than being silently redistributed.
  for (const auto* m : {&p.u, &p.d}) {
    const char* what = (m == &p.u) ? "u" : "d";
    for (const auto& [c, v] : *m) {
      if (!t.contains(c)) {
        throw Error(Errc::UnknownConcept,
                    std::string(what) + " entry for unknown concept " + c);
      }
      if (!t.is_leaf(c)) {
        throw Error(Errc::InvalidParams,
                    std::string(what) + " entry for non-leaf concept " + c);
      }
      if (v < 0.0) {
        throw Error(Errc::InvalidParams,
                    std::string(what) + "(" + c + ") must be nonnegative");
      }
    }
  }
  for (const auto& leaf : t.leaves()) {
    if (!p.u.count(leaf)) {
      throw Error(Errc::InvalidParams, "missing u entry for leaf " + leaf);
    }
    if (!p.d.count(leaf)) {
      throw Error(Errc::InvalidParams, "missing d entry for leaf " + leaf);
    }
  }

  for (const auto& [c, v] : p.pr) {
    if (!t.contains(c)) {
      throw Error(Errc::UnknownConcept, "pr entry for unknown concept " + c);
    }
    if (v <= 0.0 || v > 1.0) {
      throw Error(Errc::InvalidParams, "pr(" + c + ") must be in (0, 1]");
    }
  }
  for (const auto& [c, v] : p.w) {
    if (!t.contains(c)) {
      throw Error(Errc::UnknownConcept, "w entry for unknown concept " + c);
    }
    if (v <= 0.0) {
      throw Error(Errc::InvalidParams, "w(" + c + ") must be positive");
    }
  }
  for (const auto& n : t.nodes()) {
    if (n == t.root() || t.is_dummy(n)) continue;
    if (!p.w.count(n)) {
      throw Error(Errc::InvalidParams, "missing w entry for concept " + n);
    }
  }
  return p;
}

std::string serialize_params(const ParamSet& p) {
  nlohmann::json doc;
  doc["u"] = p.u;
  doc["d"] = p.d;
  doc["pr"] = p.pr;
  doc["w"] = p.w;
  return doc.dump(2);
}

CorpusSample parse_corpus_jsonl(const std::string& text, const Taxonomy& t) {
  CorpusSample sample;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::SyntaxError, "corpus line " + std::to_string(lineno) +
                                         ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("doc") || !doc["doc"].is_string() ||
        !doc.contains("mentions") || !doc["mentions"].is_array()) {
      throw Error(Errc::SyntaxError,
                  "corpus line " + std::to_string(lineno) +
                      ": expected {\"doc\": str, \"mentions\": [ids]}");
    }
    CorpusSample::Document d;
    d.id = doc["doc"].get<std::string>();
    for (const auto& m : doc["mentions"]) {
      if (!m.is_string()) {
        throw Error(Errc::SyntaxError, "corpus line " + std::to_string(lineno) +
                                           ": mentions must be strings");
      }
      ConceptId c = m.get<std::string>();
      if (!t.contains(c) || !t.is_leaf(c)) {
        throw Error(Errc::InvalidParams,
                    "corpus line " + std::to_string(lineno) + ": mention " + c +
                        " is not a leaf concept");
      }
      d.mentions.insert(std::move(c));
    }
    sample.documents.push_back(std::move(d));
  }
  return sample;
}

double derived_popularity(const Taxonomy& t, const ParamSet& p,
                          const ConceptId& c) {
  double total = 0.0;
  for (const auto& leaf : t.leaf_descendants(c)) total += p.u_of(leaf);
  return total;
}

std::map<ConceptId, double> smooth_popularities(
    const std::map<ConceptId, double>& raw_counts, double m,
    const std::map<ConceptId, double>& prior) {
  double total = 0.0;
  for (const auto& [_, v] : raw_counts) {
    if (v < 0.0) {
      throw Error(Errc::InvalidParams, "negative count in workload");
    }
    total += v;
  }
  if (total == 0.0 && m == 0.0) {
    throw Error(Errc::EmptyWorkload, "all counts zero and m = 0");
  }

  // Proportions sum to 1 when any mass is present, so the denominator is
  // m + 1; with an empty workload only the prior survives.
  double proportion_sum = total > 0.0 ? 1.0 : 0.0;
  std::map<ConceptId, double> out;
  for (const auto& [c, v] : raw_counts) {
    double proportion = total > 0.0 ? v / total : 0.0;
    auto it = prior.find(c);
    double prior_c = it == prior.end() ? 0.0 : it->second;
    out[c] = (proportion + m * prior_c) / (m + proportion_sum);
  }
  return out;
}

std::map<ConceptId, double> uniform_prior(const std::vector<ConceptId>& keys) {
  std::map<ConceptId, double> prior;
  if (keys.empty()) return prior;
  double p = 1.0 / static_cast<double>(keys.size());
  for (const auto& k : keys) prior[k] = p;
  return prior;
}

std::map<ConceptId, double> estimate_frequencies(const CorpusSample& sample,
                                                 const Taxonomy& t) {
  if (sample.documents.empty()) {
    throw Error(Errc::EmptySample, "cannot estimate frequencies from an empty sample");
  }
  auto leaves = t.leaves();
  std::map<ConceptId, double> raw;
  for (const auto& leaf : leaves) raw[leaf] = 0.0;
  for (const auto& doc : sample.documents) {
    for (const auto& m : doc.mentions) raw[m] += 1.0;
  }
  double n = static_cast<double>(sample.documents.size());
  double fraction_sum = 0.0;
  for (auto& [_, v] : raw) {
    v /= n;
    fraction_sum += v;
  }

  // m-estimate with m = 1 and a uniform prior, applied to the raw fractions.
  auto prior = uniform_prior(leaves);
  std::map<ConceptId, double> out;
  for (const auto& [c, fraction] : raw) {
    out[c] = (fraction + prior[c]) / (1.0 + fraction_sum);
  }
  return out;
}

int required_sample_size(double error, double confidence) {
  if (error <= 0.0 || error >= 1.0 || confidence <= 0.0 || confidence >= 1.0) {
    throw Error(Errc::InvalidParams,
                "error and confidence must lie strictly between 0 and 1");
  }
  boost::math::normal_distribution<double> normal;
  double z = boost::math::quantile(normal, 0.5 + confidence / 2.0);
  return static_cast<int>(std::floor(z * z * 0.25 / (error * error) + 1e-9));
}

ScaledParamSet scale(const ParamSet& p, const Taxonomy& t, double epsilon,
                     Budget b) {
  if (epsilon <= 0.0 || epsilon >= 1.0) {
    throw Error(Errc::InvalidParams, "epsilon must lie in (0, 1)");
  }
  double u_max = 0.0, d_max = 0.0, w_max = 0.0;
  for (const auto& leaf : t.leaves()) {
    u_max = std::max(u_max, p.u_of(leaf));
    d_max = std::max(d_max, p.d_of(leaf));
  }
  for (const auto& n : t.nodes()) {
    if (n == t.root() || t.is_dummy(n)) continue;
    w_max = std::max(w_max, p.w_of(n));
  }
  if (u_max <= 0.0) {
    throw Error(Errc::DegenerateParams, "all popularities are zero");
  }
  if (d_max <= 0.0) {
    throw Error(Errc::DegenerateParams, "all frequencies are zero");
  }
  if (w_max <= 0.0) {
    throw Error(Errc::DegenerateParams, "all costs are zero");
  }

  double n_nodes = static_cast<double>(t.nodes().size());
  ScaledParamSet s;
  s.epsilon = epsilon;
  s.lambda_u = epsilon * u_max / n_nodes;
  s.lambda_d = epsilon * d_max / n_nodes;
  s.lambda_w = epsilon * w_max / n_nodes;

  for (const auto& leaf : t.leaves()) {
    s.u[leaf] = scaled_floor(p.u_of(leaf), s.lambda_u);
    s.d[leaf] = scaled_floor(p.d_of(leaf), s.lambda_d);
    if (s.u[leaf] == 0) s.zero_u.insert(leaf);
    if (s.d[leaf] == 0) s.zero_d.insert(leaf);
    if (s.u[leaf] == 0 && s.d[leaf] == 0) s.negligible.insert(leaf);
  }
  for (const auto& n : t.nodes()) {
    if (n == t.root() || t.is_dummy(n)) continue;
    s.w[n] = scaled_floor(p.w_of(n), s.lambda_w);
  }
  s.budget = scaled_floor(b.value, s.lambda_w);
  return s;
}

}  // namespace cecd
