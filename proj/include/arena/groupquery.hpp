// Copyright 2026 The subgrad-arena Authors
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

// OR queries on the hidden signs of a MaxCoord instance, answered by one
// function evaluation at x = (1/sqrt n) sum_{i in S} e_i: the value is
// 1/sqrt(n) iff some i in S has z_i = +1, else 0 (or -1/sqrt(n) for S = [n]).

#ifndef ARENA_GROUPQUERY_HPP_
#define ARENA_GROUPQUERY_HPP_

#include <cstdint>
#include <vector>

#include "arena/instances.hpp"

namespace arena {

// Throws std::invalid_argument on an empty subset or an index out of range.
int OrQuery(const MaxCoordInstance& inst, const std::vector<Eigen::Index>& subset);

struct LearnResult {
  SignVector z_hat;            // unresolved entries default to -1
  std::vector<bool> resolved;
  std::int64_t queries_used = 0;
  bool complete = false;
};

// Adaptive splitting: probe [n], then bisect every interval known to hold
// a +1. Uses at most 2 * ones * ceil(log2 n) + 1 queries; stops early and
// reports complete = false when the budget runs out.
LearnResult LearnSignsViaOr(const MaxCoordInstance& inst, std::int64_t budget);

// Query budget that always suffices for the splitting learner.
std::int64_t SplittingQueryBound(Eigen::Index n, std::int64_t ones);

struct ExhaustiveReport {
  int n = 0;
  std::int64_t instances = 0;
  std::int64_t or_checks = 0;
  std::int64_t or_mismatches = 0;
  std::int64_t learn_failures = 0;
  std::int64_t max_queries = 0;
  bool pass = false;
};

// All 2^n sign vectors against all nonempty subsets, plus exact recovery
// by the learner for every z. 1 <= n <= 16.
ExhaustiveReport ExhaustiveOrCheck(int n);

}  // namespace arena

#endif  // ARENA_GROUPQUERY_HPP_
