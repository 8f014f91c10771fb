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

#include "arena/wall.hpp"

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "wall_oracles.hpp"

namespace arena {
namespace {

using testing::BruteForceWall;
using testing::ClosedFormWall;
using testing::InOmega;

DenseVector Vec(std::initializer_list<double> xs) {
  DenseVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

DenseVector BallPoint(Eigen::Index n, RngStream& rng) {
  return SampleUnitVector(n, rng) * rng.Uniform();
}

WallParams SmallScaledParams(Eigen::Index n) {
  WallParams p = WallParamsFor(0.05);
  p.n = n;
  return p;
}

TEST(WallParams, FrozenAtFiveHundredths) {
  const WallParams p = WallParamsFor(0.05);
  EXPECT_EQ(p.k, 4);
  EXPECT_EQ(p.n, Eigen::Index{1} << 21);
  EXPECT_NEAR(p.delta, 0.48450052775943964, 1e-12);
  EXPECT_NEAR(p.alpha, 0.9565443272899391, 1e-12);
  EXPECT_NEAR(p.beta, 0.021076447469440714, 1e-15);
  EXPECT_NEAR(p.gamma, 0.010211549922238132, 1e-15);
}

TEST(WallParams, Invariants) {
  for (double eps : {0.05, 0.03, 0.025}) {
    const WallParams p = WallParamsFor(eps);
    EXPECT_TRUE(WallParamViolations(p).empty()) << eps;
    EXPECT_LE(p.k * p.gamma, 1.0 / (10.0 * std::sqrt(p.k)));
    EXPECT_NEAR(std::pow(p.delta, p.alpha), 0.5, 1e-12);
    const double dn = static_cast<double>(p.n);
    const double target = 32.0 * std::sqrt(p.k * std::log(dn) / dn) + 1.0 / std::sqrt(p.k);
    EXPECT_LT(std::abs(p.delta / std::log(1.0 / p.delta) - target), 1e-10);
    EXPECT_GT(p.n, 4 * p.k);
  }
}

TEST(WallParams, Errors) {
  EXPECT_THROW(WallParamsFor(0.1), std::invalid_argument);
  EXPECT_THROW(SolveDelta(10.0), std::invalid_argument);
  EXPECT_THROW(MakeWallParams(2, 2, 0.5, 0.1, 0.1, 0.05), std::invalid_argument);
  EXPECT_THROW(MakeWallParams(2, 3, 1.5, 0.1, 0.1, 0.05), std::invalid_argument);
}

TEST(WallParams, Presets) {
  const WallParams toy = ToyWallParams();
  EXPECT_EQ(toy.n, 3);
  EXPECT_EQ(toy.k, 2);
  const WallParams relaxed = RelaxedWallParams(4, 64);
  EXPECT_LT(2.0 * (1.0 + relaxed.alpha), 3.0);
}

WallInstance AxesInstance(int n, int k, const WallParams& base) {
  WallParams p = base;
  p.n = n;
  p.k = k;
  return WallInstance(OrthonormalTuple(Eigen::MatrixXd::Identity(n, k)), p);
}

TEST(Linear, Examples) {
  const WallParams p = MakeWallParams(2, 3, 0.5, 0.1, 0.05, 0.05);
  const WallInstance inst = AxesInstance(3, 2, p);
  EXPECT_DOUBLE_EQ(inst.LinearValue(DenseVector::Zero(3)), -0.05);
  EXPECT_DOUBLE_EQ(inst.LinearValue(Vec({0.0, 1.0, 0.0})), 1.0 - 2 * 0.05);
  EXPECT_DOUBLE_EQ(inst.LinearTruncated(Vec({0.0, 1.0, 0.0}), 1), -0.05);
  EXPECT_THROW(inst.LinearTruncated(DenseVector::Zero(3), 3), std::invalid_argument);
}

TEST(Linear, ReferencePoint) {
  RngStream rng(1);
  const WallInstance inst = WallInstance::Sample(SmallScaledParams(64), rng);
  EXPECT_LE(inst.LinearValue(inst.ReferencePoint()), -1.0 / std::sqrt(4.0));
}

TEST(Cone, Examples) {
  RngStream rng(2);
  const WallInstance inst = WallInstance::Sample(SmallScaledParams(64), rng);
  const DenseVector v0 = inst.basis().vector(0);
  EXPECT_TRUE(inst.InCone(v0, 0));
  EXPECT_TRUE(inst.InCone(-0.3 * v0, 0));
  EXPECT_FALSE(inst.InCone(inst.basis().vector(1), 0));
  EXPECT_FALSE(inst.InCone(DenseVector::Zero(64), 0));
}

TEST(Cone, RandomDirectionsRarelyCorrelate) {
  RngStream rng(3);
  const WallParams p = MakeWallParams(1, 20000, 0.5, 8.0 * std::sqrt(std::log(20000.0) / 20000.0),
                                      0.01, 0.05);
  const WallInstance inst = WallInstance::Sample(p, rng);
  int hits = 0;
  for (int i = 0; i < 2000; ++i) hits += inst.InCone(SampleUnitVector(p.n, rng), 0);
  EXPECT_EQ(hits, 0);
}

TEST(InnerMax, Unconstrained) {
  const std::vector<double> a = {1.0, 0.0};
  const InnerMaxResult r = InnerMaxSphereBox(a, 0.0, 1.0, 1.0);
  EXPECT_NEAR(r.value, 1.0, 1e-12);
  EXPECT_NEAR(r.coords[0], 1.0, 1e-12);
  EXPECT_FALSE(r.boundary_infeasible);
}

TEST(InnerMax, FullyClipped) {
  const std::vector<double> a = {1.0, 0.0};
  const InnerMaxResult r = InnerMaxSphereBox(a, 0.0, 1.0, 0.1);
  EXPECT_NEAR(r.value, 0.1, 1e-15);
  EXPECT_EQ(r.coords[0], 0.1);
  EXPECT_TRUE(r.boundary_infeasible);
  EXPECT_NEAR(r.Norm(), 1.0, 1e-12);
}

TEST(InnerMax, ZeroInputPutsNormInSlack) {
  const std::vector<double> a = {0.0, 0.0};
  const InnerMaxResult r = InnerMaxSphereBox(a, 0.0, 0.7, 0.2);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_NEAR(r.Norm(), 0.7, 1e-15);
}

// Brute force over the disk-box intersection: y_perp = sqrt(c^2 - |y|^2).
double GridInnerMax(const std::vector<double>& a, double rho, double c, double bound,
                    int steps) {
  const double cap = bound * c;
  double best = -1e300;
  for (int i = 0; i <= steps; ++i) {
    const double y0 = -cap + 2.0 * cap * i / steps;
    for (int j = 0; j <= steps; ++j) {
      const double y1 = -cap + 2.0 * cap * j / steps;
      const double rest = c * c - y0 * y0 - y1 * y1;
      if (rest < 0.0) continue;
      best = std::max(best, a[0] * y0 + a[1] * y1 + rho * std::sqrt(rest));
    }
  }
  return best;
}

TEST(InnerMax, MatchesGridBruteForce) {
  RngStream rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> a = {rng.Uniform(-1.0, 1.0), rng.Uniform(-1.0, 1.0)};
    const double rho = rng.Uniform(0.05, 1.0);
    const double c = rng.Uniform(0.3, 1.0);
    const double bound = rng.Uniform(0.05, 1.0);
    const InnerMaxResult r = InnerMaxSphereBox(a, rho, c, bound);
    EXPECT_NEAR(r.value, GridInnerMax(a, rho, c, bound, 1000), 1e-3) << trial;
    EXPECT_NEAR(r.Norm(), c, 1e-9);
    for (double y : r.coords) EXPECT_LE(std::abs(y), bound * c + 1e-12);
  }
}

TEST(InnerMax, Validation) {
  const std::vector<double> a = {1.0};
  EXPECT_THROW(InnerMaxSphereBox(a, 0.0, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(InnerMaxSphereBox(a, 0.0, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(InnerMaxSphereBox(a, -1.0, 1.0, 1.0), std::invalid_argument);
}

TEST(Wall, ZeroAnchor) {
  for (const WallParams& p : {WallParamsFor(0.05), ToyWallParams(), RelaxedWallParams(4, 16)}) {
    const std::vector<double> zero(p.k, 0.0);
    const WallMax w = WallFromProjections(zero, 0.0, p);
    EXPECT_NEAR(w.value, -p.alpha * p.delta, 1e-9);
    EXPECT_NEAR(w.radius, p.delta, 1e-9);
  }
}

TEST(Wall, MatchesClosedForm) {
  RngStream rng(5);
  for (const WallParams& p : {WallParamsFor(0.05), ToyWallParams(), RelaxedWallParams(4, 16)}) {
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> a(p.k);
      const double scale = rng.Uniform(0.0, 1.0);
      for (double& v : a) v = scale * rng.Normal() / std::sqrt(p.k);
      const double rho = trial % 5 == 0 ? 0.0 : rng.Uniform(0.0, 1.0);
      const double m1 = InnerMaxSphereBox(a, rho, 1.0, p.beta).value;
      EXPECT_NEAR(WallFromProjections(a, rho, p).value, ClosedFormWall(m1, p), 1e-9);
    }
  }
}

// At x~ = -sum v_i / sqrt(k) every coordinate clips at beta, so the inner
// value at c = 1 is beta sqrt(k) and, when that is below delta,
// W(x~) = -alpha delta + (1 + alpha) beta sqrt(k).
TEST(Wall, ReferencePointClosedForm) {
  const WallParams p = WallParamsFor(0.05);
  const std::vector<double> a(p.k, -1.0 / std::sqrt(p.k));
  const double expected = -p.alpha * p.delta + (1.0 + p.alpha) * p.beta * std::sqrt(p.k);
  EXPECT_NEAR(WallFromProjections(a, 0.0, p).value, expected, 1e-9);
  EXPECT_NEAR(expected, -0.38097222392575641, 1e-12);
}

TEST(Wall, ToyReferencePointBelowAnchor) {
  RngStream rng(6);
  const WallInstance inst = WallInstance::Sample(ToyWallParams(), rng);
  const double w = inst.WallValue(inst.ReferencePoint());
  EXPECT_LE(w, -1.0 / std::sqrt(2.0));
  EXPECT_NEAR(w, -0.94409703697960801, 1e-9);
  EXPECT_LE(inst.Value(inst.ReferencePoint()), -1.0 / std::sqrt(2.0));
}

TEST(Wall, ToyMatchesBruteForce) {
  RngStream rng(7);
  const WallInstance inst = WallInstance::Sample(ToyWallParams(), rng);
  for (int q = 0; q < 5; ++q) {
    const DenseVector x = BallPoint(3, rng);
    RngStream sampler = rng.Substream(q);
    const double brute = BruteForceWall(inst, x, 200000, sampler);
    const double value = inst.WallValue(x);
    EXPECT_GE(value, brute - 1e-12);
    EXPECT_NEAR(value, brute, 1e-2);
  }
}

TEST(Wall, MaximizerInOmega) {
  RngStream rng(8);
  for (const WallParams& p : {SmallScaledParams(32), ToyWallParams(), RelaxedWallParams(4, 16)}) {
    const WallInstance inst = WallInstance::Sample(p, rng);
    for (int i = 0; i < 300; ++i) {
      DenseVector x = BallPoint(p.n, rng);
      if (i % 3 == 0) x = inst.basis().matrix() * DenseVector::Random(p.k) * 0.5;
      const DenseVector y = inst.WallMaximizer(x);
      EXPECT_TRUE(InOmega(inst, y, 1e-8));
      EXPECT_NEAR(inst.Plane(y, x), inst.WallValue(x), 1e-9);
    }
  }
}

TEST(Truncation, FullTruncationAgreesInSpan) {
  RngStream rng(9);
  for (const WallParams& p : {SmallScaledParams(16), ToyWallParams(), RelaxedWallParams(4, 16)}) {
    const WallInstance inst = WallInstance::Sample(p, rng);
    for (int i = 0; i < 100; ++i) {
      DenseVector coef(p.k);
      for (int j = 0; j < p.k; ++j) coef[j] = rng.Normal();
      const DenseVector x = inst.basis().matrix() * coef.normalized() * rng.Uniform();
      EXPECT_NEAR(inst.WallTruncated(x, p.k), inst.WallValue(x), 1e-6);
      EXPECT_NEAR(inst.TruncatedValue(x, p.k), inst.Value(x), 1e-6);
    }
  }
}

// x = w + z with w in span(v_1..v_{t-1}), |z| >= delta and z outside every
// later cone: the later directions cannot matter.
TEST(Truncation, OutsideLaterConesTruncationIsExact) {
  RngStream rng(10);
  const WallParams p = RelaxedWallParams(4, 32);
  const WallInstance inst = WallInstance::Sample(p, rng);
  const Eigen::MatrixXd& v = inst.basis().matrix();
  for (int t = 2; t <= p.k; ++t) {
    for (int i = 0; i < 50; ++i) {
      DenseVector w = DenseVector::Zero(p.n);
      for (int j = 0; j < t - 1; ++j) w += rng.Normal() * 0.2 * v.col(j);
      DenseVector z(p.n);
      for (Eigen::Index j = 0; j < p.n; ++j) z[j] = rng.Normal();
      z -= v * (v.transpose() * z);
      z.normalize();
      const double zn = rng.Uniform(p.delta, 0.8);
      z *= zn;
      // Tilt z slightly toward the later directions, staying out of C_j.
      for (int j = t - 1; j < p.k; ++j) z += rng.Uniform(-0.4, 0.4) * p.beta * zn * v.col(j);
      for (int j = t - 1; j < p.k; ++j) ASSERT_FALSE(inst.InCone(z, j));
      const DenseVector x = w + z;
      EXPECT_NEAR(inst.WallValue(x), inst.WallTruncated(x, t - 1), 1e-6);
    }
  }
}

// Spot check: |z| >= delta, z outside the later cones and a later linear
// piece attaining the max imply W(x) >= N(x).
TEST(Truncation, WallDominatesWhenLaterPieceWins) {
  RngStream rng(12);
  for (const WallParams& p : {RelaxedWallParams(4, 32), SmallScaledParams(64)}) {
    const WallInstance inst = WallInstance::Sample(p, rng);
    const Eigen::MatrixXd& v = inst.basis().matrix();
    int checked = 0;
    for (int i = 0; i < 4000; ++i) {
      const int t = 2 + static_cast<int>(rng.Uniform() * (p.k - 1));
      DenseVector w = DenseVector::Zero(p.n);
      for (int j = 0; j < t - 1; ++j) w -= rng.Uniform(0.0, 0.6) * v.col(j);
      DenseVector z(p.n);
      for (Eigen::Index j = 0; j < p.n; ++j) z[j] = rng.Normal();
      z -= v * (v.transpose() * z);
      z *= rng.Uniform(p.delta, 1.0) / z.norm();
      const double zn = z.norm();
      for (int j = t - 1; j < p.k; ++j) z += rng.Uniform(-0.95, 0.95) * p.beta * zn * v.col(j);
      bool outside = z.norm() >= p.delta;
      for (int j = t - 1; j < p.k; ++j) outside = outside && !inst.InCone(z, j);
      if (!outside) continue;
      const DenseVector x = w + z;
      if (inst.LinearValue(x) == inst.LinearTruncated(x, t - 1)) continue;
      ++checked;
      ASSERT_GE(inst.WallValue(x), inst.LinearValue(x) - 1e-12) << "t=" << t;
    }
    EXPECT_GT(checked, 1000);
  }
}

TEST(Truncation, ZeroAnchor) {
  RngStream rng(11);
  const WallParams p = SmallScaledParams(16);
  const WallInstance inst = WallInstance::Sample(p, rng);
  for (int t = 1; t <= p.k; ++t) {
    EXPECT_NEAR(inst.WallTruncated(DenseVector::Zero(16), t), -p.alpha * p.delta, 1e-9);
  }
}

TEST(Combined, Anchors) {
  RngStream rng(12);
  const WallParams p = SmallScaledParams(64);
  const WallInstance inst = WallInstance::Sample(p, rng);
  EXPECT_NEAR(inst.Value(DenseVector::Zero(64)), std::max(-p.gamma, -p.alpha * p.delta), 1e-9);
}

TEST(Combined, ToyReferenceValue) {
  RngStream rng(13);
  const WallInstance inst = WallInstance::Sample(ToyWallParams(), rng);
  EXPECT_LE(inst.Value(inst.ReferencePoint()), -1.0 / std::sqrt(2.0));
}

TEST(Query, LinearBranchForTinyNegativeStep) {
  RngStream rng(15);
  const WallInstance inst = WallInstance::Sample(SmallScaledParams(64), rng);
  const DenseVector x = -1e-3 * inst.basis().vector(0);
  const OracleAnswer a = inst.Query(x);
  const auto& d = std::get<WallDisclosure>(a.disclosure);
  EXPECT_EQ(d.branch, WallBranch::kLinear);
  EXPECT_EQ(d.index, 0);
  EXPECT_TRUE(a.subgradient.isApprox(inst.basis().vector(0)));
}

TEST(Query, WallBranchSubgradient) {
  RngStream rng(16);
  const WallInstance inst = WallInstance::Sample(RelaxedWallParams(4, 16), rng);
  int wall_answers = 0;
  for (int i = 0; i < 200; ++i) {
    const DenseVector x = BallPoint(16, rng);
    const OracleAnswer a = inst.Query(x);
    EXPECT_NEAR(a.value, inst.Value(x), 1e-12);
    EXPECT_LE(a.subgradient.norm(), 3.0 + 1e-6);
    if (std::get<WallDisclosure>(a.disclosure).branch == WallBranch::kWall) ++wall_answers;
    for (int j = 0; j < 1000; ++j) {
      const DenseVector y = BallPoint(16, rng);
      ASSERT_GE(inst.Value(y), a.value + a.subgradient.dot(y - x) - 1e-8);
    }
  }
  EXPECT_GT(wall_answers, 0);
}

TEST(Query, LipschitzAtScaledParameters) {
  RngStream rng(17);
  const WallInstance inst = WallInstance::Sample(SmallScaledParams(64), rng);
  for (int i = 0; i < 2000; ++i) {
    const OracleAnswer a = inst.Query(BallPoint(64, rng));
    EXPECT_LE(a.subgradient.norm(), inst.LipschitzBound() + 1e-9);
  }
}

TEST(Json, WallRoundTrip) {
  const WallInstance inst = WallInstance::Generate(RelaxedWallParams(3, 20), 77);
  std::stringstream ss;
  WriteInstanceJson(ss, inst);
  const nlohmann::json doc = nlohmann::json::parse(ss.str());
  EXPECT_EQ(doc["family"], "wall");
  const WallInstance back = WallFromJson(doc);
  EXPECT_EQ(back.basis().matrix(), inst.basis().matrix());
  EXPECT_EQ(back.params().delta, inst.params().delta);
  EXPECT_EQ(back.params().alpha, inst.params().alpha);
  EXPECT_EQ(back.params().beta, inst.params().beta);
  EXPECT_EQ(back.params().gamma, inst.params().gamma);
  EXPECT_EQ(back.seed(), inst.seed());
}

}  // namespace
}  // namespace arena
