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

#include "arena/groupquery.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace arena {
namespace {

class SplittingLearner {
 public:
  SplittingLearner(const MaxCoordInstance& inst, std::int64_t budget)
      : inst_(inst), budget_(budget) {
    const auto n = static_cast<std::size_t>(inst.dim());
    result_.z_hat.assign(n, -1);
    result_.resolved.assign(n, false);
  }

  LearnResult Run() {
    const Eigen::Index n = inst_.dim();
    const std::optional<int> root = Ask(0, n);
    if (!root) return Finish(false);
    if (*root == 0) {
      MarkNegative(0, n);
      return Finish(true);
    }
    return Finish(Isolate(0, n));
  }

 private:
  std::optional<int> Ask(Eigen::Index lo, Eigen::Index hi) {
    if (result_.queries_used >= budget_) return std::nullopt;
    ++result_.queries_used;
    std::vector<Eigen::Index> subset;
    subset.reserve(hi - lo);
    for (Eigen::Index i = lo; i < hi; ++i) subset.push_back(i);
    return OrQuery(inst_, subset);
  }

  void MarkNegative(Eigen::Index lo, Eigen::Index hi) {
    for (Eigen::Index i = lo; i < hi; ++i) {
      result_.z_hat[i] = -1;
      result_.resolved[i] = true;
    }
  }

  // [lo, hi) is known to contain a +1.
  bool Isolate(Eigen::Index lo, Eigen::Index hi) {
    if (hi - lo == 1) {
      result_.z_hat[lo] = 1;
      result_.resolved[lo] = true;
      return true;
    }
    const Eigen::Index mid = lo + (hi - lo) / 2;
    const std::optional<int> left = Ask(lo, mid);
    if (!left) return false;
    if (*left == 0) {
      MarkNegative(lo, mid);
      return Isolate(mid, hi);
    }
    if (!Isolate(lo, mid)) return false;
    const std::optional<int> right = Ask(mid, hi);
    if (!right) return false;
    if (*right == 0) {
      MarkNegative(mid, hi);
      return true;
    }
    return Isolate(mid, hi);
  }

  LearnResult Finish(bool complete) {
    result_.complete = complete;
    return std::move(result_);
  }

  const MaxCoordInstance& inst_;
  std::int64_t budget_;
  LearnResult result_;
};

}  // namespace

int OrQuery(const MaxCoordInstance& inst, const std::vector<Eigen::Index>& subset) {
  if (subset.empty()) throw std::invalid_argument("empty subset");
  const Eigen::Index n = inst.dim();
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  DenseVector x = DenseVector::Zero(n);
  for (Eigen::Index i : subset) {
    if (i < 0 || i >= n) throw std::invalid_argument("subset index out of range");
    x[i] = scale;
  }
  // The all-minus answer on S = [n] is -1/sqrt(n); it folds into 0.
  return std::abs(inst.Value(x) - scale) <= 1e-12 ? 1 : 0;
}

LearnResult LearnSignsViaOr(const MaxCoordInstance& inst, std::int64_t budget) {
  if (budget < 1) throw std::invalid_argument("budget must be at least 1");
  return SplittingLearner(inst, budget).Run();
}

std::int64_t SplittingQueryBound(Eigen::Index n, std::int64_t ones) {
  std::int64_t depth = 0;
  while ((Eigen::Index{1} << depth) < n) ++depth;
  return 2 * ones * depth + 1;
}

ExhaustiveReport ExhaustiveOrCheck(int n) {
  if (n < 1 || n > 16) throw std::invalid_argument("exhaustive check needs 1 <= n <= 16");
  ExhaustiveReport report;
  report.n = n;
  const std::uint32_t universe = 1u << n;
  const double epsilon = std::sqrt(0.9 / n);
  std::vector<Eigen::Index> subset;
  for (std::uint32_t zmask = 0; zmask < universe; ++zmask) {
    SignVector z(n);
    std::int64_t ones = 0;
    for (int i = 0; i < n; ++i) {
      z[i] = (zmask >> i) & 1u ? 1 : -1;
      ones += z[i] == 1;
    }
    const MaxCoordInstance inst(z, epsilon);
    ++report.instances;
    for (std::uint32_t smask = 1; smask < universe; ++smask) {
      subset.clear();
      for (int i = 0; i < n; ++i) {
        if ((smask >> i) & 1u) subset.push_back(i);
      }
      const int expected = (smask & zmask) != 0 ? 1 : 0;
      ++report.or_checks;
      if (OrQuery(inst, subset) != expected) ++report.or_mismatches;
    }
    const std::int64_t bound = SplittingQueryBound(n, ones);
    const LearnResult learned = LearnSignsViaOr(inst, bound);
    report.max_queries = std::max(report.max_queries, learned.queries_used);
    if (!learned.complete || learned.z_hat != z) ++report.learn_failures;
  }
  report.pass = report.or_mismatches == 0 && report.learn_failures == 0;
  return report;
}

}  // namespace arena
