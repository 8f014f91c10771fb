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

// Projected subgradient descent on the Euclidean ball of radius R:
//
//   x_0 = 0,  x_{t+1} = P(x_t - eta g_t),  output (1/T) sum_{t<T} x_t.
//
// With G-Lipschitz f, eta = eps and T = ceil(1/eps^2) after rescaling to
// G = R = 1, the output is eps-optimal.

#ifndef ARENA_OPTIMIZE_HPP_
#define ARENA_OPTIMIZE_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "arena/core.hpp"

namespace arena {

struct FirstOrder {
  double value = 0.0;
  DenseVector subgradient;
};

using Oracle = std::function<FirstOrder(const DenseVector&)>;

// Adapts anything with a Query(x) returning an OracleAnswer.
template <class Instance>
Oracle OracleFor(const Instance& inst) {
  return [&inst](const DenseVector& x) {
    auto answer = inst.Query(x);
    return FirstOrder{answer.value, std::move(answer.subgradient)};
  };
}

struct GdConfig {
  double eta = 0.1;
  std::int64_t iterations = 100;  // T
  double radius = 1.0;            // R
  bool store_iterates = true;     // false keeps only the running sum

  // Throws std::invalid_argument unless eta > 0, T >= 1, R > 0.
  void Validate() const;
};

struct GdTrace {
  std::vector<DenseVector> iterates;  // x_0 .. x_{T-1}, empty when streaming
  std::vector<double> values;         // f(x_t)
  std::vector<double> norms;          // |x_t|
  DenseVector averaged_output;
  std::int64_t query_count = 0;
};

// ceil(1/eps^2), guarded against 1/0.1^2 = 99.999...
std::int64_t IterationsFor(double epsilon);

// Exactly T oracle calls starting at x_0 = 0. Oracle exceptions and
// non-finite subgradients are rethrown as std::runtime_error naming the
// iteration.
GdTrace ProjectedSubgradientDescent(const Oracle& oracle, Eigen::Index dim,
                                    const GdConfig& config);

// Maps a G-Lipschitz problem on the radius-R ball to a 1-Lipschitz problem
// on the unit ball: f^(x) = f(R x) / (G R), accuracy eps / (G R).
class Rescaling {
 public:
  Rescaling(double lipschitz, double radius, double epsilon);

  double lipschitz() const { return lipschitz_; }
  double radius() const { return radius_; }
  double epsilon() const { return epsilon_; }
  double normalized_epsilon() const { return epsilon_ / (lipschitz_ * radius_); }

  Oracle Wrap(Oracle oracle) const;
  DenseVector MapBack(const DenseVector& x) const { return radius_ * x; }
  double ValueBack(double normalized_value) const {
    return normalized_value * lipschitz_ * radius_;
  }

 private:
  double lipschitz_;
  double radius_;
  double epsilon_;
};

struct SolveResult {
  GdTrace trace;  // in normalized coordinates
  DenseVector output;
  double eta = 0.0;
  std::int64_t iterations = 0;
};

// Rescale, then run with eta = eps^ and T = ceil(1/eps^^2).
SolveResult SolveToAccuracy(const Oracle& oracle, Eigen::Index dim,
                            const Rescaling& scaling, bool store_iterates = false);

struct TraceRow {
  std::int64_t t = 0;
  double value = 0.0;
  std::optional<double> gap;
  double norm = 0.0;
};

// Rows in original coordinates; gap = value - reference when known.
std::vector<TraceRow> TraceRows(const GdTrace& trace, const Rescaling& scaling,
                                std::optional<double> reference);

// Header "t,value,gap,norm"; the gap field is empty when unknown.
void WriteTraceCsv(std::ostream& out, const std::vector<TraceRow>& rows);

}  // namespace arena

#endif  // ARENA_OPTIMIZE_HPP_
