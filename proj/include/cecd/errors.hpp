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

#ifndef CECD_ERRORS_HPP
#define CECD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cecd {

// Machine-readable failure codes. The CLI maps these onto exit codes:
// input/validation problems -> 2, no feasible design -> 3, size caps -> 4.
enum class Errc {
  SyntaxError,
  CycleError,
  MultiRootError,
  UnknownConcept,
  NotATree,
  NotALeaf,
  InvalidDesign,
  InvalidParams,
  TooLarge,
  NoFeasibleDesign,
  EmptyWorkload,
  EmptySample,
  DegenerateParams,
  MissingIntersectionFrequency,
  ConceptUnpopulated,
  TooFewRows,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

inline const char* errc_name(Errc code) {
  switch (code) {
    case Errc::SyntaxError: return "syntax_error";
    case Errc::CycleError: return "cycle_error";
    case Errc::MultiRootError: return "multi_root_error";
    case Errc::UnknownConcept: return "unknown_concept";
    case Errc::NotATree: return "not_a_tree";
    case Errc::NotALeaf: return "not_a_leaf";
    case Errc::InvalidDesign: return "invalid_design";
    case Errc::InvalidParams: return "invalid_params";
    case Errc::TooLarge: return "too_large";
    case Errc::NoFeasibleDesign: return "no_feasible_design";
    case Errc::EmptyWorkload: return "empty_workload";
    case Errc::EmptySample: return "empty_sample";
    case Errc::DegenerateParams: return "degenerate_params";
    case Errc::MissingIntersectionFrequency:
      return "missing_intersection_frequency";
    case Errc::ConceptUnpopulated: return "concept_unpopulated";
    case Errc::TooFewRows: return "too_few_rows";
  }
  return "unknown_error";
}

}  // namespace cecd

#endif  // CECD_ERRORS_HPP
