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

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "arena/instances.hpp"

namespace arena {
namespace {

FirstOrder AbsOracle(const DenseVector& x) {
  DenseVector g(1);
  g[0] = x[0] >= 0.0 ? 1.0 : -1.0;
  return {std::abs(x[0]), g};
}

TEST(IterationsFor, GuardedCeiling) {
  EXPECT_EQ(IterationsFor(0.1), 100);
  EXPECT_EQ(IterationsFor(0.2), 25);
  EXPECT_EQ(IterationsFor(0.05), 400);
  EXPECT_EQ(IterationsFor(0.3), 12);
}

TEST(Gd, AbsoluteValueInOneDimension) {
  const GdTrace trace = ProjectedSubgradientDescent(AbsOracle, 1, {0.1, 100, 1.0, true});
  EXPECT_EQ(trace.query_count, 100);
  EXPECT_EQ(trace.iterates.size(), 100u);
  EXPECT_EQ(trace.iterates[0][0], 0.0);
  EXPECT_LE(std::abs(trace.averaged_output[0]), 1.0 / (2 * 0.1 * 100) + 0.05);
  EXPECT_LE(std::abs(trace.averaged_output[0]), 0.1);
}

TEST(Gd, LinearObjectivePinsToBoundary) {
  DenseVector g(3);
  g << 1.0, 2.0, -2.0;
  g /= 3.0;
  const Oracle linear = [&](const DenseVector& x) { return FirstOrder{g.dot(x), g}; };
  const GdTrace trace = ProjectedSubgradientDescent(linear, 3, {0.2, 60, 1.0, true});
  for (std::size_t t = 10; t < trace.iterates.size(); ++t) {
    EXPECT_TRUE(trace.iterates[t].isApprox(-g, 1e-12)) << t;
    EXPECT_LE(trace.iterates[t].norm(), 1.0);
  }
}

TEST(Gd, IteratesStayInBall) {
  RngStream rng(1);
  const MaxCoordInstance inst = MaxCoordInstance::Sample(0.05, rng);
  const GdTrace trace = ProjectedSubgradientDescent(OracleFor(inst), inst.dim(),
                                                    {0.05, 400, 1.0, true});
  for (const DenseVector& x : trace.iterates) EXPECT_LE(x.norm(), 1.0);
  for (double n : trace.norms) EXPECT_LE(n, 1.0);
}

// f(x_bar) - f(x) <= R^2/(2 eta T) + eta G^2 / 2 for every x in the ball.
TEST(Gd, PotentialBound) {
  RngStream rng(2);
  for (int rep = 0; rep < 10; ++rep) {
    const MaxCoordInstance inst = MaxCoordInstance::Sample(0.1, rng);
    const double eta = rng.Uniform(0.02, 0.3);
    const std::int64_t steps = 50 + rep * 20;
    const GdTrace trace = ProjectedSubgradientDescent(OracleFor(inst), inst.dim(),
                                                      {eta, steps, 1.0, false});
    double mean_value = 0.0;
    for (double v : trace.values) mean_value += v;
    mean_value /= static_cast<double>(trace.values.size());
    const double bound = 1.0 / (2.0 * eta * steps) + eta / 2.0;
    EXPECT_LE(mean_value - inst.OptimalValue(), bound + 1e-12);
    EXPECT_LE(inst.Value(trace.averaged_output), mean_value + 1e-12);
  }
}

TEST(Gd, MaxCoordTenthIsEpsOptimal) {
  const MaxCoordInstance inst = MaxCoordInstance::Generate(0.1, 7);
  EXPECT_EQ(inst.dim(), 90);
  const Rescaling scaling(1.0, 1.0, 0.1);
  const SolveResult r = SolveToAccuracy(OracleFor(inst), inst.dim(), scaling);
  EXPECT_EQ(r.iterations, 100);
  EXPECT_EQ(r.trace.query_count, 100);
  EXPECT_LE(inst.Value(r.output) - inst.OptimalValue(), 0.1);
}

TEST(Gd, StreamingMatchesStored) {
  const MaxCoordInstance inst = MaxCoordInstance::Generate(0.2, 3);
  const GdTrace a = ProjectedSubgradientDescent(OracleFor(inst), inst.dim(), {0.2, 25, 1.0, true});
  const GdTrace b = ProjectedSubgradientDescent(OracleFor(inst), inst.dim(), {0.2, 25, 1.0, false});
  EXPECT_TRUE(b.iterates.empty());
  EXPECT_EQ(a.averaged_output, b.averaged_output);
  EXPECT_EQ(a.values, b.values);
}

TEST(Gd, ConfigValidation) {
  EXPECT_THROW((GdConfig{0.0, 10, 1.0, true}.Validate()), std::invalid_argument);
  EXPECT_THROW((GdConfig{0.1, 0, 1.0, true}.Validate()), std::invalid_argument);
  EXPECT_THROW((GdConfig{0.1, 10, -1.0, true}.Validate()), std::invalid_argument);
}

TEST(Gd, OracleFailureNamesIteration) {
  int calls = 0;
  const Oracle flaky = [&](const DenseVector& x) {
    if (++calls == 4) throw std::invalid_argument("boom");
    return AbsOracle(x);
  };
  try {
    ProjectedSubgradientDescent(flaky, 1, {0.1, 10, 1.0, true});
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("iteration 3"), std::string::npos) << e.what();
  }
  const Oracle nan_oracle = [](const DenseVector&) {
    DenseVector g(1);
    g[0] = std::nan("");
    return FirstOrder{0.0, g};
  };
  EXPECT_THROW(ProjectedSubgradientDescent(nan_oracle, 1, {0.1, 10, 1.0, true}),
               std::runtime_error);
}

TEST(Rescaling, IdentityForUnitProblem) {
  const Rescaling s(1.0, 1.0, 0.1);
  EXPECT_EQ(s.normalized_epsilon(), 0.1);
  DenseVector x(2);
  x << 0.3, -0.4;
  const FirstOrder direct = AbsOracle(x.head(1));
  const FirstOrder wrapped = s.Wrap(AbsOracle)(x.head(1));
  EXPECT_EQ(direct.value, wrapped.value);
  EXPECT_EQ(direct.subgradient, wrapped.subgradient);
  EXPECT_EQ(s.MapBack(x), x);
}

TEST(Rescaling, WrappedOracleIsOneLipschitzOnUnitBall) {
  // f(x) = 5 |x| on the radius-2 ball.
  const Oracle five_norm = [](const DenseVector& x) {
    const double n = x.norm();
    DenseVector g = n > 0.0 ? DenseVector(5.0 * x / n) : DenseVector::Zero(x.size());
    return FirstOrder{5.0 * n, g};
  };
  const Rescaling s(5.0, 2.0, 0.1);
  const Oracle wrapped = s.Wrap(five_norm);
  RngStream rng(3);
  for (int i = 0; i < 1000; ++i) {
    const DenseVector x = SampleUnitVector(4, rng) * rng.Uniform();
    EXPECT_LE(wrapped(x).subgradient.norm(), 1.0 + 1e-12);
  }
  EXPECT_NEAR(s.normalized_epsilon(), 0.01, 1e-15);
}

TEST(Rescaling, MapsGapBack) {
  // f(x) = 3 |x| on [-2, 2]; accuracy 0.3 in original units.
  const Oracle f = [](const DenseVector& x) {
    DenseVector g(1);
    g[0] = x[0] >= 0.0 ? 3.0 : -3.0;
    return FirstOrder{3.0 * std::abs(x[0]), g};
  };
  const Rescaling s(3.0, 2.0, 0.3);
  const SolveResult r = SolveToAccuracy(f, 1, s);
  EXPECT_EQ(r.iterations, IterationsFor(0.05));
  EXPECT_LE(3.0 * std::abs(r.output[0]), 0.3);
  EXPECT_LE(std::abs(r.output[0]), 2.0);
}

TEST(Trace, CsvLayout) {
  const MaxCoordInstance inst = MaxCoordInstance::Generate(0.2, 3);
  const Rescaling s(1.0, 1.0, 0.2);
  const SolveResult r = SolveToAccuracy(OracleFor(inst), inst.dim(), s);
  std::ostringstream os;
  WriteTraceCsv(os, TraceRows(r.trace, s, inst.OptimalValue()));
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,value,gap,norm");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 25);

  std::ostringstream no_ref;
  WriteTraceCsv(no_ref, TraceRows(r.trace, s, std::nullopt));
  EXPECT_NE(no_ref.str().find("0,0,,0\n"), std::string::npos) << no_ref.str().substr(0, 60);
}

}  // namespace
}  // namespace arena
