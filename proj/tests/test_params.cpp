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

#include <cmath>
#include <random>

#include "cecd/errors.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace cecd;
using cecd::testing::random_real_params;
using cecd::testing::random_tree;
using cecd::testing::tiny_params;
using cecd::testing::tiny_tree;

TEST_CASE("derived popularity sums leaf values") {
  Taxonomy t = tiny_tree();
  ParamSet p = tiny_params();
  CHECK(derived_popularity(t, p, "A") == doctest::Approx(0.8));
  CHECK(derived_popularity(t, p, "L3") == doctest::Approx(0.2));
  CHECK(derived_popularity(t, p, "R") == doctest::Approx(1.0));
}

TEST_CASE("parse_params validates placement of entries") {
  Taxonomy t = tiny_tree();
  CHECK_THROWS_AS(parse_params(R"({"u": {"A": 0.5, "L1": 0.5}})", t), Error);
  CHECK_THROWS_AS(
      parse_params(R"({"u": {"L1": 1, "L2": 1, "L3": 1},
                       "d": {"L1": 1, "L2": 1, "L3": 1}})",
                   t),
      Error);  // missing w
  ParamSet ok = parse_params(R"({
    "u": {"L1": 0.5, "L2": 0.3, "L3": 0.2},
    "d": {"L1": 0.4, "L2": 0.4, "L3": 0.2},
    "w": {"A": 1, "L1": 1, "L2": 1, "L3": 1}
  })",
                             t);
  CHECK(ok.pr_of("A") == 1.0);  // defaulted
  CHECK(ok.integer_mode() == false);
}

TEST_CASE("m-estimate smoothing") {
  auto prior = uniform_prior({"a", "b"});

  SUBCASE("direct evaluation") {
    auto s = smooth_popularities({{"a", 3.0}, {"b", 1.0}}, 1.0, prior);
    CHECK(s["a"] == doctest::Approx(0.625));
    CHECK(s["b"] == doctest::Approx(0.375));
  }
  SUBCASE("prior-only when all counts are zero") {
    auto s = smooth_popularities({{"a", 0.0}, {"b", 0.0}}, 1.0, prior);
    CHECK(s["a"] == doctest::Approx(0.5));
    CHECK(s["b"] == doctest::Approx(0.5));
  }
  SUBCASE("single concept normalizes to one") {
    auto s = smooth_popularities({{"a", 7.0}}, 2.5, uniform_prior({"a"}));
    CHECK(s["a"] == doctest::Approx(1.0));
  }
  SUBCASE("empty workload with m=0 is an error") {
    CHECK_THROWS_AS(smooth_popularities({{"a", 0.0}}, 0.0, prior), Error);
  }
  SUBCASE("smoothed values sum to one") {
    std::mt19937_64 rng(3);
    for (int iter = 0; iter < 100; ++iter) {
      std::map<ConceptId, double> raw;
      int n = 2 + static_cast<int>(rng() % 6);
      for (int i = 0; i < n; ++i) {
        raw["c" + std::to_string(i)] = static_cast<double>(rng() % 50);
      }
      std::vector<ConceptId> keys;
      for (const auto& [k, _] : raw) keys.push_back(k);
      auto s = smooth_popularities(raw, 1.0, uniform_prior(keys));
      double total = 0.0;
      bool has_mass = false;
      for (const auto& [_, v] : raw) has_mass |= v > 0.0;
      for (const auto& [_, v] : s) {
        CHECK(v > 0.0);
        total += v;
      }
      if (has_mass) CHECK(total == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("frequency estimation from a sample") {
  Taxonomy t = parse_taxonomy(R"({
    "root": "R",
    "nodes": [{"id": "R"}, {"id": "L1"}, {"id": "L2"}],
    "edges": [["R", "L1"], ["R", "L2"]]
  })");

  SUBCASE("hand-computed smoothing") {
    CorpusSample sample;
    for (int i = 0; i < 4; ++i) {
      CorpusSample::Document doc;
      doc.id = "d" + std::to_string(i);
      if (i < 2) doc.mentions.insert("L1");
      if (i >= 2) doc.mentions.insert("L2");
      sample.documents.push_back(doc);
    }
    auto d = estimate_frequencies(sample, t);
    CHECK(d["L1"] == doctest::Approx(0.5));
    CHECK(d["L2"] == doctest::Approx(0.5));
  }
  SUBCASE("unmentioned leaves stay positive") {
    CorpusSample sample;
    CorpusSample::Document doc;
    doc.id = "d0";
    doc.mentions.insert("L1");
    sample.documents.push_back(doc);
    auto d = estimate_frequencies(sample, t);
    CHECK(d["L2"] > 0.0);
    CHECK(d["L1"] < 1.0);
    CHECK(d["L1"] > d["L2"]);
  }
  SUBCASE("empty sample is an error") {
    CHECK_THROWS_AS(estimate_frequencies(CorpusSample{}, t), Error);
  }
  SUBCASE("smoothed output stays inside (0, 1)") {
    std::mt19937_64 rng(19);
    for (int iter = 0; iter < 50; ++iter) {
      CorpusSample sample;
      int docs = 1 + static_cast<int>(rng() % 20);
      for (int i = 0; i < docs; ++i) {
        CorpusSample::Document doc;
        doc.id = "d" + std::to_string(i);
        if (rng() % 2) doc.mentions.insert("L1");
        if (rng() % 2) doc.mentions.insert("L2");
        sample.documents.push_back(doc);
      }
      for (const auto& [_, v] : estimate_frequencies(sample, t)) {
        CHECK(v > 0.0);
        CHECK(v < 1.0);
      }
    }
  }
}

TEST_CASE("required sample size matches the proportion bound") {
  CHECK(required_sample_size(0.05, 0.95) == 384);
  CHECK(required_sample_size(0.1, 0.95) == 96);
  CHECK_THROWS_AS(required_sample_size(0.0, 0.95), Error);
}

TEST_CASE("scaling formulas") {
  // u_max = 10 over 5 nodes with eps 0.1 gives lambda 0.2, so u = 3 -> 15.
  Taxonomy t = parse_taxonomy(R"({
    "root": "R",
    "nodes": [{"id": "R"}, {"id": "a"}, {"id": "b"}, {"id": "c"}, {"id": "e"}],
    "edges": [["R", "a"], ["R", "b"], ["R", "c"], ["R", "e"]]
  })");
  ParamSet p;
  p.u = {{"a", 10.0}, {"b", 3.0}, {"c", 1.0}, {"e", 1.0}};
  p.d = {{"a", 10.0}, {"b", 3.0}, {"c", 1.0}, {"e", 1.0}};
  p.w = {{"a", 10.0}, {"b", 3.0}, {"c", 1.0}, {"e", 1.0}};
  ScaledParamSet s = scale(p, t, 0.1, Budget{10.0});
  CHECK(s.lambda_u == doctest::Approx(0.2));
  CHECK(s.u["b"] == 15);
  CHECK(s.u["a"] == 50);
  CHECK(s.budget == 50);

  SUBCASE("identity scaling when lambda is one") {
    // eps * u_max / n == 1 with u_max 10, n 5 requires eps = 0.5.
    ScaledParamSet id = scale(p, t, 0.5, Budget{7.0});
    CHECK(id.u["a"] == 10);
    CHECK(id.u["b"] == 3);
    CHECK(id.d["c"] == 1);
    CHECK(id.w["e"] == 1);
    CHECK(id.budget == 7);
  }
  SUBCASE("degenerate params rejected") {
    ParamSet zero = p;
    for (auto& [_, v] : zero.u) v = 0.0;
    CHECK_THROWS_AS(scale(zero, t, 0.1, Budget{1.0}), Error);
  }
}

TEST_CASE("scaling is monotone and floor-bounded") {
  std::mt19937_64 rng(17);
  for (int iter = 0; iter < 100; ++iter) {
    Taxonomy t = random_tree(rng, 3 + static_cast<int>(rng() % 10));
    ParamSet p = random_real_params(rng, t);
    double eps = 0.05 + 0.25 * (static_cast<double>(rng() % 100) / 100.0);
    ScaledParamSet s = scale(p, t, eps, Budget{1.0});
    for (const auto& a : t.leaves()) {
      // floor error bound: lambda * scaled <= value < lambda * (scaled + 1)
      CHECK(s.lambda_u * static_cast<double>(s.u[a]) <= p.u_of(a) + 1e-9);
      CHECK(p.u_of(a) < s.lambda_u * static_cast<double>(s.u[a] + 1) + 1e-9);
      for (const auto& b : t.leaves()) {
        if (p.u_of(a) <= p.u_of(b)) CHECK(s.u[a] <= s.u[b]);
        if (p.d_of(a) <= p.d_of(b)) CHECK(s.d[a] <= s.d[b]);
      }
    }
  }
}

TEST_CASE("corpus jsonl parsing") {
  Taxonomy t = tiny_tree();
  CorpusSample sample = parse_corpus_jsonl(
      "{\"doc\": \"d0\", \"mentions\": [\"L1\", \"L2\"]}\n"
      "{\"doc\": \"d1\", \"mentions\": []}\n",
      t);
  REQUIRE_EQ(sample.documents.size(), 2);
  CHECK(sample.documents[0].mentions.count("L1") == 1);
  CHECK_THROWS_AS(
      parse_corpus_jsonl("{\"doc\": \"d0\", \"mentions\": [\"A\"]}\n", t),
      Error);  // internal concept mention
}
