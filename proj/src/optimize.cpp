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

#include "arena/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace arena {

void GdConfig::Validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw std::invalid_argument("eta must be positive");
  if (iterations < 1) throw std::invalid_argument("T must be at least 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("radius must be positive");
  }
}

std::int64_t IterationsFor(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be positive");
  }
  return std::max<std::int64_t>(1, GuardedCeil(1.0 / (epsilon * epsilon)));
}

GdTrace ProjectedSubgradientDescent(const Oracle& oracle, Eigen::Index dim,
                                    const GdConfig& config) {
  config.Validate();
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
  GdTrace trace;
  trace.values.reserve(config.iterations);
  trace.norms.reserve(config.iterations);
  if (config.store_iterates) trace.iterates.reserve(config.iterations);

  DenseVector x = DenseVector::Zero(dim);
  DenseVector sum = DenseVector::Zero(dim);
  for (std::int64_t t = 0; t < config.iterations; ++t) {
    FirstOrder answer;
    try {
      answer = oracle(x);
    } catch (const std::exception& e) {
      throw std::runtime_error("oracle failed at iteration " + std::to_string(t) +
                               ": " + e.what());
    }
    ++trace.query_count;
    if (answer.subgradient.size() != dim || !answer.subgradient.allFinite() ||
        !std::isfinite(answer.value)) {
      throw std::runtime_error("oracle failed at iteration " + std::to_string(t) +
                               ": invalid answer");
    }
    trace.values.push_back(answer.value);
    trace.norms.push_back(x.norm());
    sum += x;
    if (config.store_iterates) trace.iterates.push_back(x);
    x = ProjectBall(x - config.eta * answer.subgradient, config.radius);
  }
  trace.averaged_output = sum / static_cast<double>(config.iterations);
  return trace;
}

Rescaling::Rescaling(double lipschitz, double radius, double epsilon)
    : lipschitz_(lipschitz), radius_(radius), epsilon_(epsilon) {
  for (double v : {lipschitz, radius, epsilon}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("rescaling parameters must be positive");
    }
  }
}

Oracle Rescaling::Wrap(Oracle oracle) const {
  const double g = lipschitz_;
  const double r = radius_;
  return [oracle = std::move(oracle), g, r](const DenseVector& x) {
    FirstOrder inner = oracle(r * x);
    return FirstOrder{inner.value / (g * r), inner.subgradient / g};
  };
}

SolveResult SolveToAccuracy(const Oracle& oracle, Eigen::Index dim,
                            const Rescaling& scaling, bool store_iterates) {
  SolveResult result;
  result.eta = scaling.normalized_epsilon();
  result.iterations = IterationsFor(result.eta);
  GdConfig config{result.eta, result.iterations, 1.0, store_iterates};
  result.trace = ProjectedSubgradientDescent(scaling.Wrap(oracle), dim, config);
  result.output = scaling.MapBack(result.trace.averaged_output);
  return result;
}

std::vector<TraceRow> TraceRows(const GdTrace& trace, const Rescaling& scaling,
                                std::optional<double> reference) {
  std::vector<TraceRow> rows;
  rows.reserve(trace.values.size());
  for (std::size_t t = 0; t < trace.values.size(); ++t) {
    TraceRow row;
    row.t = static_cast<std::int64_t>(t);
    row.value = scaling.ValueBack(trace.values[t]);
    if (reference) row.gap = row.value - *reference;
    row.norm = scaling.radius() * trace.norms[t];
    rows.push_back(row);
  }
  return rows;
}

void WriteTraceCsv(std::ostream& out, const std::vector<TraceRow>& rows) {
  out << "t,value,gap,norm\n";
  for (const TraceRow& row : rows) {
    out << row.t << ',' << FormatReal(row.value) << ',';
    if (row.gap) out << FormatReal(*row.gap);
    out << ',' << FormatReal(row.norm) << '\n';
  }
}

}  // namespace arena
