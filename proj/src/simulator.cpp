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

#include "cecd/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cecd/errors.hpp"
#include "json.hpp"

namespace cecd {

namespace {

// SplitMix64 step; derives independent per-trial seeds from (seed, index).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

CorpusSpec parse_corpus_spec(const std::string& text, const Taxonomy& t) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::SyntaxError, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw Error(Errc::SyntaxError, "corpus spec must be a JSON object");
  }
  for (const auto& [key, _] : doc.items()) {
    if (key != "num_docs" && key != "leaf_doc_probability" && key != "seed" &&
        key != "mentions_per_doc") {
      throw Error(Errc::SyntaxError, "unknown key in corpus spec: " + key);
    }
  }
  CorpusSpec spec;
  if (!doc.contains("num_docs") || !doc["num_docs"].is_number_integer() ||
      doc["num_docs"].get<int>() <= 0) {
    throw Error(Errc::SyntaxError, "num_docs must be a positive integer");
  }
  spec.num_docs = doc["num_docs"].get<int>();
  if (!doc.contains("leaf_doc_probability") ||
      !doc["leaf_doc_probability"].is_object()) {
    throw Error(Errc::SyntaxError, "missing leaf_doc_probability object");
  }
  for (const auto& [leaf, v] : doc["leaf_doc_probability"].items()) {
    if (!t.contains(leaf) || !t.is_leaf(leaf)) {
      throw Error(Errc::InvalidParams,
                  "leaf_doc_probability key " + leaf + " is not a leaf");
    }
    double prob = v.get<double>();
    if (prob <= 0.0 || prob > 1.0) {
      throw Error(Errc::InvalidParams,
                  "leaf_doc_probability[" + leaf + "] must be in (0, 1]");
    }
    spec.leaf_doc_probability[leaf] = prob;
  }
  if (doc.contains("seed")) spec.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("mentions_per_doc")) {
    const auto& m = doc["mentions_per_doc"];
    MentionsPerDoc dist;
    if (m.is_object() && m.contains("fixed")) {
      dist.kind = MentionsPerDoc::Kind::Fixed;
      dist.fixed = m["fixed"].get<int>();
      if (dist.fixed <= 0) {
        throw Error(Errc::InvalidParams, "mentions_per_doc.fixed must be positive");
      }
    } else if (m.is_object() && m.contains("uniform")) {
      dist.kind = MentionsPerDoc::Kind::Uniform;
      dist.lo = m["uniform"][0].get<int>();
      dist.hi = m["uniform"][1].get<int>();
      if (dist.lo <= 0 || dist.hi < dist.lo) {
        throw Error(Errc::InvalidParams, "mentions_per_doc.uniform range invalid");
      }
    } else {
      throw Error(Errc::SyntaxError,
                  "mentions_per_doc must be {\"fixed\": k} or {\"uniform\": [lo, hi]}");
    }
    spec.mentions_per_doc = dist;
  }
  return spec;
}

CorpusSample generate_corpus(const Taxonomy& t, const CorpusSpec& spec) {
  for (const auto& [leaf, _] : spec.leaf_doc_probability) {
    if (!t.contains(leaf) || !t.is_leaf(leaf)) {
      throw Error(Errc::InvalidParams, leaf + " is not a leaf concept");
    }
  }

  std::vector<std::pair<ConceptId, double>> probs(
      spec.leaf_doc_probability.begin(), spec.leaf_doc_probability.end());
  double prob_total = 0.0;
  for (const auto& [_, prob] : probs) prob_total += prob;

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  CorpusSample sample;
  sample.documents.reserve(spec.num_docs);
  for (int i = 0; i < spec.num_docs; ++i) {
    CorpusSample::Document doc;
    doc.id = "d" + std::to_string(i);
    for (const auto& [leaf, prob] : probs) {
      if (unit(rng) < prob) doc.mentions.insert(leaf);
    }
    if (spec.mentions_per_doc) {
      int want = spec.mentions_per_doc->kind == MentionsPerDoc::Kind::Fixed
                     ? spec.mentions_per_doc->fixed
                     : std::uniform_int_distribution<int>(
                           spec.mentions_per_doc->lo,
                           spec.mentions_per_doc->hi)(rng);
      want = std::min(want, static_cast<int>(probs.size()));
      while (static_cast<int>(doc.mentions.size()) < want) {
        double x = unit(rng) * prob_total;
        for (const auto& [leaf, prob] : probs) {
          x -= prob;
          if (x <= 0.0) {
            doc.mentions.insert(leaf);
            break;
          }
        }
      }
    }
    sample.documents.push_back(std::move(doc));
  }
  return sample;
}

Workload generate_workload(const Taxonomy& t, const CorpusSample& corpus,
                           const std::map<ConceptId, double>& u,
                           int n_queries, std::uint64_t seed) {
  double total = 0.0;
  for (const auto& [leaf, v] : u) {
    if (!t.contains(leaf) || !t.is_leaf(leaf)) {
      throw Error(Errc::InvalidParams, "u key " + leaf + " is not a leaf");
    }
    total += v;
  }
  if (std::fabs(total - 1.0) > 1e-6) {
    throw Error(Errc::InvalidParams, "u must sum to 1 over leaves");
  }

  std::map<ConceptId, std::vector<const std::string*>> docs_by_leaf;
  for (const auto& doc : corpus.documents) {
    for (const auto& m : doc.mentions) docs_by_leaf[m].push_back(&doc.id);
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Workload w;
  w.queries.reserve(n_queries);
  for (int i = 0; i < n_queries; ++i) {
    double x = unit(rng) * total;
    ConceptId drawn;
    for (const auto& [leaf, v] : u) {
      x -= v;
      if (x <= 0.0) {
        drawn = leaf;
        break;
      }
    }
    if (drawn.empty()) drawn = u.rbegin()->first;

    auto it = docs_by_leaf.find(drawn);
    if (it == docs_by_leaf.end() || it->second.empty()) {
      throw Error(Errc::ConceptUnpopulated,
                  "no document mentions concept " + drawn);
    }
    std::uniform_int_distribution<size_t> pick(0, it->second.size() - 1);
    Query q;
    q.concept_id = drawn;
    q.relevant_docs.insert(*it->second[pick(rng)]);
    w.queries.push_back(std::move(q));
  }
  return w;
}

namespace {

struct QueryPool {
  std::size_t pool_size = 0;
  std::size_t relevant_in_pool = 0;
  double accuracy = 1.0;  // pr of the governing concept; 1.0 for free pools
  bool free = false;
};

// Pools depend only on (taxonomy, corpus, design), not on the trial; the
// uniform-ranking model then needs only each pool's size and its relevant
// membership counts.
std::vector<QueryPool> build_pools(const Taxonomy& t, const CorpusSample& corpus,
                                   const Workload& w, const Design& s,
                                   const ParamSet& p) {
  check_design(t, s);
  bool tree = t.kind() == TaxonomyKind::Tree;
  PartitionMap pm = tree ? partitions_tree(t, s) : allparts(t, s);

  std::map<ConceptId, const PartitionKey*> governor;
  for (const auto& [key, leaves] : pm.partition_of) {
    for (const auto& leaf : leaves) governor[leaf] = &key;
  }

  std::map<ConceptId, std::set<std::string>> docs_by_leaf;
  for (const auto& doc : corpus.documents) {
    for (const auto& m : doc.mentions) docs_by_leaf[m].insert(doc.id);
  }

  // Pool per distinct partition; free queries search the whole corpus.
  std::map<const PartitionKey*, std::set<std::string>> pool_docs;
  for (const auto& [key, leaves] : pm.partition_of) {
    auto& docs = pool_docs[&key];
    for (const auto& leaf : leaves) {
      const auto& mentioned = docs_by_leaf[leaf];
      docs.insert(mentioned.begin(), mentioned.end());
    }
  }

  std::vector<QueryPool> pools;
  pools.reserve(w.queries.size());
  for (const auto& q : w.queries) {
    if (!t.contains(q.concept_id) || !t.is_leaf(q.concept_id)) {
      throw Error(Errc::NotALeaf, "query concept " + q.concept_id + " is not a leaf");
    }
    QueryPool qp;
    auto it = governor.find(q.concept_id);
    if (it == governor.end()) {
      qp.free = true;
      qp.pool_size = corpus.documents.size();
      qp.relevant_in_pool = q.relevant_docs.size();
    } else {
      const auto& docs = pool_docs[it->second];
      qp.pool_size = docs.size();
      for (const auto& rel : q.relevant_docs) {
        if (docs.count(rel)) ++qp.relevant_in_pool;
      }
      // Accuracy applies in the tree form only, matching the evaluators.
      if (tree) qp.accuracy = p.pr_of(it->second->front());
    }
    pools.push_back(qp);
  }
  return pools;
}

}  // namespace

double simulate_pk(const Taxonomy& t, const CorpusSample& corpus,
                   const Workload& w, const Design& s, const ParamSet& p,
                   int k, int trials, std::uint64_t seed) {
  if (k < 1 || trials < 1) {
    throw Error(Errc::InvalidParams, "k and trials must be at least 1");
  }
  if (w.queries.empty()) {
    throw Error(Errc::EmptyWorkload, "workload has no queries");
  }
  auto pools = build_pools(t, corpus, w, s, p);

  // Uniform random ranking within the pool is sampled by drawing each
  // relevant document's rank directly; annotation noise ejects a relevant
  // document from the pool with probability 1 - pr (its replacement is a
  // non-relevant document either way).
  double total = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(trial)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double trial_sum = 0.0;
    for (const auto& qp : pools) {
      if (qp.pool_size == 0) continue;
      std::uniform_int_distribution<std::size_t> rank(0, qp.pool_size - 1);
      std::vector<std::size_t> taken;
      int hits = 0;
      for (std::size_t r = 0; r < qp.relevant_in_pool; ++r) {
        if (qp.accuracy < 1.0 && unit(rng) >= qp.accuracy) continue;  // ejected
        std::size_t pos;
        do {
          pos = rank(rng);
        } while (std::find(taken.begin(), taken.end(), pos) != taken.end());
        taken.push_back(pos);
        if (pos < static_cast<std::size_t>(k)) ++hits;
      }
      trial_sum += static_cast<double>(hits) / static_cast<double>(k);
    }
    total += trial_sum / static_cast<double>(w.queries.size());
  }
  return total / static_cast<double>(trials);
}

double expected_pk(const Taxonomy& t, const CorpusSample& corpus,
                   const Workload& w, const Design& s, int k) {
  if (k < 1) throw Error(Errc::InvalidParams, "k must be at least 1");
  ParamSet unused;
  auto pools = build_pools(t, corpus, w, s, unused);
  double total = 0.0;
  for (const auto& qp : pools) {
    if (qp.pool_size == 0) continue;
    double n = static_cast<double>(qp.pool_size);
    double r = static_cast<double>(qp.relevant_in_pool);
    total += r * std::min<double>(k, n) / (n * static_cast<double>(k));
  }
  return total / static_cast<double>(w.queries.size());
}

double spearman_rho(const std::vector<std::pair<double, double>>& rows) {
  if (rows.size() < 3) {
    throw Error(Errc::TooFewRows, "spearman correlation needs at least 3 rows");
  }
  auto ranks = [](std::vector<double> values) {
    std::vector<size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](size_t a, size_t b) { return values[a] < values[b]; });
    std::vector<double> rank(values.size());
    size_t i = 0;
    while (i < idx.size()) {
      size_t j = i;
      while (j < idx.size() && values[idx[j]] == values[idx[i]]) ++j;
      double avg = (static_cast<double>(i) + static_cast<double>(j - 1)) / 2.0 + 1.0;
      for (size_t l = i; l < j; ++l) rank[idx[l]] = avg;
      i = j;
    }
    return rank;
  };

  std::vector<double> xs, ys;
  xs.reserve(rows.size());
  ys.reserve(rows.size());
  for (const auto& [x, y] : rows) {
    xs.push_back(x);
    ys.push_back(y);
  }
  auto rx = ranks(xs);
  auto ry = ranks(ys);

  double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / rx.size();
  double my = std::accumulate(ry.begin(), ry.end(), 0.0) / ry.size();
  double cov = 0.0, vx = 0.0, vy = 0.0;
  for (size_t i = 0; i < rx.size(); ++i) {
    cov += (rx[i] - mx) * (ry[i] - my);
    vx += (rx[i] - mx) * (rx[i] - mx);
    vy += (ry[i] - my) * (ry[i] - my);
  }
  if (vx == 0.0 || vy == 0.0) return 0.0;
  return cov / std::sqrt(vx * vy);
}

Workload filter_insensitive(const Taxonomy&, const CorpusSample& corpus,
                            const Workload& w) {
  std::map<ConceptId, size_t> docs_with;
  for (const auto& doc : corpus.documents) {
    for (const auto& m : doc.mentions) ++docs_with[m];
  }
  Workload out;
  for (const auto& q : w.queries) {
    // Under full annotation the pool is exactly the concept's documents; a
    // query whose pool is still the whole corpus cannot change ranking.
    if (docs_with[q.concept_id] < corpus.documents.size()) {
      out.queries.push_back(q);
    }
  }
  return out;
}

std::string serialize_report(const SimReport& report) {
  nlohmann::json doc;
  doc["k"] = report.k;
  doc["trials"] = report.trials;
  doc["seed"] = report.seed;
  doc["rows"] = nlohmann::json::array();
  for (const auto& row : report.per_design) {
    doc["rows"].push_back({{"design", row.design.selected},
                           {"qu", row.qu},
                           {"mean_pk", row.mean_pk}});
  }
  if (report.spearman_rho) {
    doc["spearman_rho"] = *report.spearman_rho;
  } else {
    doc["spearman_rho"] = nullptr;
  }
  return doc.dump(2);
}

}  // namespace cecd
