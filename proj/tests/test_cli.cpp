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

#include "cecd/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Sandbox {
  fs::path dir;
  Sandbox() {
    dir = fs::temp_directory_path() /
          ("cecd_cli_test_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter++));
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }

  std::string file(const std::string& name, const std::string& content) {
    fs::path p = dir / name;
    std::ofstream out(p);
    out << content;
    return p.string();
  }

  static int counter;
};

int Sandbox::counter = 0;

struct RunOutcome {
  int code;
  std::string out;
  std::string err;
  nlohmann::json json() const { return nlohmann::json::parse(out); }
};

RunOutcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cecd::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

const char* kTinyTaxonomy = R"({
  "root": "R",
  "nodes": [{"id": "R"}, {"id": "A"}, {"id": "L1"}, {"id": "L2"}, {"id": "L3"}],
  "edges": [["R", "A"], ["R", "L3"], ["A", "L1"], ["A", "L2"]]
})";

const char* kTinyIntParams = R"({
  "u": {"L1": 5, "L2": 3, "L3": 2},
  "d": {"L1": 2, "L2": 2, "L3": 1},
  "w": {"A": 1, "L1": 1, "L2": 1, "L3": 1}
})";

const char* kTinyParams = R"({
  "u": {"L1": 0.5, "L2": 0.3, "L3": 0.2},
  "d": {"L1": 0.4, "L2": 0.4, "L3": 0.2},
  "w": {"A": 1, "L1": 1, "L2": 1, "L3": 1}
})";

}  // namespace

TEST_CASE("optimize runs the dp solver in exact mode") {
  Sandbox box;
  auto taxonomy = box.file("t.json", kTinyTaxonomy);
  auto params = box.file("p.json", kTinyIntParams);
  auto r = run({"optimize", "--taxonomy", taxonomy, "--params", params,
                "--budget", "1", "--solver", "dp", "--exact-ints"});
  REQUIRE_EQ(r.code, 0);
  auto doc = r.json();
  CHECK(doc["design"] == nlohmann::json::array({"L3"}));
  CHECK(doc["qu"].get<double>() == doctest::Approx(18.0));
  CHECK(doc["solver"] == "dp");
}

TEST_CASE("optimize maps failures onto exit codes") {
  Sandbox box;
  auto taxonomy = box.file("t.json", kTinyTaxonomy);
  auto params = box.file("p.json", kTinyParams);

  SUBCASE("no feasible design is exit 3") {
    auto r = run({"optimize", "--taxonomy", taxonomy, "--params", params,
                  "--budget", "0.5", "--solver", "exhaustive"});
    CHECK_EQ(r.code, 3);
  }
  SUBCASE("enumeration cap is exit 4") {
    auto r = run({"optimize", "--taxonomy", taxonomy, "--params", params,
                  "--budget", "1", "--solver", "exhaustive",
                  "--max-exhaustive-nodes", "3"});
    CHECK_EQ(r.code, 4);
  }
  SUBCASE("parse failure is exit 2") {
    auto broken = box.file("broken.json", "{");
    auto r = run({"optimize", "--taxonomy", broken, "--params", params,
                  "--budget", "1"});
    CHECK_EQ(r.code, 2);
  }
  SUBCASE("levelwise matches the library result") {
    auto r = run({"optimize", "--taxonomy", taxonomy, "--params", params,
                  "--budget", "1", "--solver", "levelwise"});
    REQUIRE_EQ(r.code, 0);
    CHECK(r.json()["qu"].get<double>() == doctest::Approx(0.66));
    CHECK(r.json()["design"] == nlohmann::json::array({"L1"}));
  }
}

TEST_CASE("optimize and evaluate round-trip") {
  Sandbox box;
  auto taxonomy = box.file("t.json", kTinyTaxonomy);
  auto params = box.file("p.json", kTinyParams);
  auto r = run({"optimize", "--taxonomy", taxonomy, "--params", params,
                "--budget", "2", "--solver", "exhaustive"});
  REQUIRE_EQ(r.code, 0);
  auto design = box.file("design.json",
                         nlohmann::json{{"selected", r.json()["design"]}}.dump());
  auto ev = run({"evaluate", "--taxonomy", taxonomy, "--params", params,
                 "--design", design});
  REQUIRE_EQ(ev.code, 0);
  CHECK(ev.json()["qu"].get<double>() ==
        doctest::Approx(r.json()["qu"].get<double>()));
}

TEST_CASE("evaluate breaks a design into partitions") {
  Sandbox box;
  auto taxonomy = box.file("t.json", R"({
    "root": "thing",
    "nodes": [
      {"id": "thing"}, {"id": "agent"}, {"id": "person"}, {"id": "artist"},
      {"id": "politician"}, {"id": "school"}, {"id": "state"}
    ],
    "edges": [
      ["thing", "agent"], ["thing", "state"], ["agent", "person"],
      ["agent", "school"], ["person", "artist"], ["person", "politician"]
    ]
  })");
  auto params = box.file("p.json", R"({
    "u": {"artist": 0.3, "politician": 0.3, "school": 0.2, "state": 0.2},
    "d": {"artist": 0.2, "politician": 0.1, "school": 0.3, "state": 0.4},
    "w": {"agent": 1, "person": 1, "artist": 1, "politician": 1, "school": 1, "state": 1}
  })");
  auto design = box.file("d.json", R"({"selected": ["agent", "person"]})");
  auto r = run({"evaluate", "--taxonomy", taxonomy, "--params", params,
                "--design", design});
  REQUIRE_EQ(r.code, 0);
  auto doc = r.json();
  REQUIRE_EQ(doc["partitions"].size(), 2);
  CHECK(doc["partitions"][0]["key"] == nlohmann::json::array({"agent"}));
  CHECK(doc["partitions"][0]["leaves"] == nlohmann::json::array({"school"}));
  CHECK(doc["partitions"][1]["key"] == nlohmann::json::array({"person"}));
  CHECK(doc["partitions"][1]["leaves"] ==
        nlohmann::json::array({"artist", "politician"}));
  CHECK(doc["free"] == nlohmann::json::array({"state"}));
}

TEST_CASE("evaluate rejects designs containing the root") {
  Sandbox box;
  auto taxonomy = box.file("t.json", kTinyTaxonomy);
  auto params = box.file("p.json", kTinyParams);
  auto design = box.file("design.json", R"({"selected": ["R"]})");
  auto r = run({"evaluate", "--taxonomy", taxonomy, "--params", params,
                "--design", design});
  CHECK_EQ(r.code, 2);

  SUBCASE("empty design scores the free term only") {
    auto empty = box.file("empty.json", R"({"selected": []})");
    auto ev = run({"evaluate", "--taxonomy", taxonomy, "--params", params,
                   "--design", empty});
    REQUIRE_EQ(ev.code, 0);
    CHECK(ev.json()["qu"].get<double>() == doctest::Approx(0.36));
    CHECK(ev.json()["qu"] == ev.json()["free_term"]);
  }
}

TEST_CASE("budget fraction of one covers every concept") {
  Sandbox box;
  auto taxonomy = box.file("t.json", kTinyTaxonomy);
  auto params = box.file("p.json", kTinyParams);
  auto r = run({"optimize", "--taxonomy", taxonomy, "--params", params,
                "--budget", "1", "--budget-fraction", "--solver", "exhaustive"});
  REQUIRE_EQ(r.code, 0);
  CHECK(r.json()["qu"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("sweep emits one row per grid cell") {
  Sandbox box;
  auto taxonomy = box.file("t.json", kTinyTaxonomy);
  auto params = box.file("p.json", kTinyParams);

  SUBCASE("budgets x solvers") {
    auto r = run({"sweep", "--taxonomy", taxonomy, "--params", params,
                  "--budgets", "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9",
                  "--budget-fraction", "--solvers", "levelwise,dp"});
    REQUIRE_EQ(r.code, 0);
    CHECK(r.json().size() == 18);
  }
  SUBCASE("epsilon grid multiplies dp rows only") {
    auto r = run({"sweep", "--taxonomy", taxonomy, "--params", params,
                  "--budgets", "2", "--solvers", "levelwise,dp", "--epsilons",
                  "0.05,0.1,0.2,0.3"});
    REQUIRE_EQ(r.code, 0);
    CHECK(r.json().size() == 5);  // 1 levelwise + 4 dp
  }
  SUBCASE("csv format has the fixed column header") {
    auto r = run({"sweep", "--taxonomy", taxonomy, "--params", params,
                  "--budgets", "2", "--solvers", "exhaustive", "--format", "csv"});
    REQUIRE_EQ(r.code, 0);
    CHECK(r.out.rfind("budget,solver,epsilon,qu,cost,millis,status", 0) == 0);
  }
  SUBCASE("missing solver grid is a usage error") {
    auto r = run({"sweep", "--taxonomy", taxonomy, "--params", params,
                  "--budgets", "0.5"});
    CHECK_EQ(r.code, 2);
  }
  SUBCASE("per-cell failures become status rows") {
    auto r = run({"sweep", "--taxonomy", taxonomy, "--params", params,
                  "--budgets", "0.5,2", "--solvers", "exhaustive"});
    REQUIRE_EQ(r.code, 0);
    auto rows = r.json();
    CHECK(rows[0]["status"] == "no_feasible_design");
    CHECK(rows[1]["status"] == "ok");
  }
}

TEST_CASE("estimate subsamples the corpus") {
  Sandbox box;
  auto taxonomy = box.file("t.json", kTinyTaxonomy);
  std::ostringstream corpus;
  for (int i = 0; i < 600; ++i) {
    corpus << R"({"doc": "d)" << i << R"(", "mentions": [)"
           << (i % 2 == 0 ? R"("L1")" : R"("L2")") << "]}\n";
  }
  auto corpus_path = box.file("corpus.jsonl", corpus.str());

  auto r = run({"estimate", "--taxonomy", taxonomy, "--corpus", corpus_path});
  REQUIRE_EQ(r.code, 0);
  CHECK(r.json()["sample_size"] == 384);
  CHECK(r.json()["d"].contains("L3"));

  SUBCASE("identical seeds give identical estimates") {
    auto again = run({"estimate", "--taxonomy", taxonomy, "--corpus", corpus_path});
    CHECK(again.out == r.out);
  }
  SUBCASE("small corpora are used whole, with a warning") {
    std::ostringstream small;
    for (int i = 0; i < 10; ++i) {
      small << R"({"doc": "s)" << i << R"(", "mentions": ["L1"]})" << "\n";
    }
    auto small_path = box.file("small.jsonl", small.str());
    auto rr = run({"estimate", "--taxonomy", taxonomy, "--corpus", small_path});
    REQUIRE_EQ(rr.code, 0);
    CHECK(rr.json()["sample_size"] == 10);
    CHECK(rr.json().contains("warning"));
  }
}

TEST_CASE("simulate produces a report with correlation") {
  Sandbox box;
  auto taxonomy = box.file("t.json", kTinyTaxonomy);
  auto params = box.file("p.json", kTinyParams);
  auto spec = box.file("spec.json", R"({
    "num_docs": 400,
    "leaf_doc_probability": {"L1": 0.4, "L2": 0.4, "L3": 0.2},
    "seed": 5
  })");
  auto designs = box.file("designs.json", R"([
    {"selected": []},
    {"selected": ["A"]},
    {"selected": ["L1"]},
    {"selected": ["L1", "L2", "L3"]}
  ])");
  auto r = run({"simulate", "--taxonomy", taxonomy, "--params", params,
                "--corpus-spec", spec, "--designs", designs, "--k", "3",
                "--trials", "200", "--queries", "100", "--seed", "1"});
  REQUIRE_EQ(r.code, 0);
  auto doc = r.json();
  CHECK(doc["rows"].size() == 4);
  CHECK(doc["spearman_rho"].is_number());
  CHECK(doc["k"] == 3);

  SUBCASE("deterministic under the seed") {
    auto again = run({"simulate", "--taxonomy", taxonomy, "--params", params,
                      "--corpus-spec", spec, "--designs", designs, "--k", "3",
                      "--trials", "200", "--queries", "100", "--seed", "1"});
    CHECK(again.out == r.out);
  }
}

TEST_CASE("validate reports structure problems") {
  Sandbox box;
  auto good = box.file("good.json", kTinyTaxonomy);
  auto r = run({"validate", "--taxonomy", good});
  CHECK_EQ(r.code, 0);
  CHECK(r.json()["errors"].empty());

  auto chain = box.file("chain.json", R"({
    "root": "R",
    "nodes": [{"id": "R"}, {"id": "A"}, {"id": "L"}],
    "edges": [["R", "A"], ["A", "L"]]
  })");
  auto warn = run({"validate", "--taxonomy", chain});
  CHECK_EQ(warn.code, 0);
  CHECK(warn.json()["warnings"].size() == 2);
}
