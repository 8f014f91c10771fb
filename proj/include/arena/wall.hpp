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

// The wall family f_V = max{p_V, W_V} where
//
//   p_V(x) = max_i <v_i,x> - (i+1) gamma                 (0-based i)
//   W_V(x) = max_{y in Omega} h(y) + <grad h(y), x - y>,  h(y) = 2|y|^(1+alpha)
//
// and Omega = {delta <= |y| <= 1, |<v_i,y>| <= beta |y| for all i}.
//
// The supporting plane at y only depends on c = |y| and <y,x>:
//
//   -2 alpha c^(1+alpha) + 2 (1+alpha) c^(alpha-1) <y,x>,
//
// so W is a 1-D search over c around an inner linear maximization over the
// sphere of radius c intersected with the box |y_i| <= beta c. The inner
// problem lives in the coordinates a_i = <v_i,x>, rho = |x - sum a_i v_i|.

#ifndef ARENA_WALL_HPP_
#define ARENA_WALL_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arena/core.hpp"
#include "arena/instances.hpp"

namespace arena {

struct WallParams {
  int k = 0;
  Eigen::Index n = 0;
  double delta = 0.0;
  double gamma = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double epsilon = 0.0;
};

// delta / ln(1/delta), increasing on (0, 1).
double DeltaMap(double delta);

// Root of DeltaMap(delta) = target in (0, 0.5]. Throws
// std::invalid_argument("epsilon out of supported range") when none exists.
double SolveDelta(double target);

// k = round(1/(100 eps^2)); n the smallest power of two >= 1e4 k^2 ln k,
// doubled until delta exists, k gamma <= 1/(10 sqrt k) and n > 4k.
WallParams WallParamsFor(double epsilon);

// Explicit parameters for small or relaxed instances; alpha = ln 2 / ln(1/delta).
WallParams MakeWallParams(int k, Eigen::Index n, double delta, double beta,
                          double gamma, double epsilon);

// n = 3, k = 2, delta = 0.7, beta = 0.1, gamma = 0.07: small enough for a
// brute-force search over Omega, with W(x~) <= -1/sqrt(k).
WallParams ToyWallParams();

// delta = 0.2, beta = 0.3, gamma = 0.05 on a chosen (k, n). alpha < 1/2, so
// the Lipschitz bound 2(1+alpha) stays below 3.
WallParams RelaxedWallParams(int k, Eigen::Index n, double epsilon = 0.05);

// Inequalities the escape and guess arguments need, each violated one named.
std::vector<std::string> WallParamViolations(const WallParams& params);

struct InnerMaxResult {
  std::vector<double> coords;  // y_i = <v_i, y>
  double perp = 0.0;           // component along the residual of x
  double slack = 0.0;          // zero-gain component orthogonal to V and x
  double value = 0.0;
  double multiplier = 0.0;     // lambda
  std::vector<int> clipped;
  bool boundary_infeasible = false;

  double Norm() const;
};

// max sum_i y_i a_i + y_perp rho over sum y_i^2 + y_perp^2 (+ slack^2) = c^2,
// |y_i| <= bound * c, y_perp >= 0. y = clip(lambda a), y_perp = lambda rho
// with lambda found by bisection and then solved exactly on the final active
// set. When rho = 0 and clipping saturates below c, the remaining norm goes
// to `slack` and boundary_infeasible is set.
InnerMaxResult InnerMaxSphereBox(std::span<const double> a, double rho,
                                 double c, double bound);

struct WallSearchOptions {
  int grid_points = 256;
  double tolerance = 1e-9;
};

struct WallMax {
  double value = 0.0;
  double radius = 0.0;  // c = |y*|
  InnerMaxResult inner;
};

// W from projections: a = (<v_i,x>), rho = residual norm.
WallMax WallFromProjections(std::span<const double> a, double rho,
                            const WallParams& params,
                            const WallSearchOptions& options = {});

// W^(t) from the split x = w + z, w in span(v_1..v_t): the inner value at
// c = 1 is max over |y| = a in span(v_1..v_t) of <y,w> + sqrt(1-a^2)|z|,
// found by golden section over a.
double TruncatedWallFromSplit(std::span<const double> w, double z_norm,
                              const WallParams& params,
                              const WallSearchOptions& options = {});

// max_{i < t} a_i - (i+1) gamma, smallest argmax.
PieceMax LinearPieces(std::span<const double> a, double gamma, int t);

class WallInstance {
 public:
  WallInstance(OrthonormalTuple basis, WallParams params,
               std::optional<std::uint64_t> seed = std::nullopt,
               WallSearchOptions options = {});

  static WallInstance Generate(const WallParams& params, std::uint64_t seed);
  static WallInstance Sample(const WallParams& params, RngStream& rng);

  Eigen::Index dim() const { return basis_.dim(); }
  int k() const { return basis_.size(); }
  const WallParams& params() const { return params_; }
  const OrthonormalTuple& basis() const { return basis_; }
  std::optional<std::uint64_t> seed() const { return seed_; }
  const WallSearchOptions& options() const { return options_; }

  double LinearValue(const DenseVector& x) const;
  double LinearTruncated(const DenseVector& x, int t) const;
  // |<v_i,x>| >= beta |x|; false at x = 0.
  bool InCone(const DenseVector& x, int i) const;

  double WallValue(const DenseVector& x) const;
  double WallTruncated(const DenseVector& x, int t) const;
  // Ambient maximizer y* of the supporting-plane problem.
  DenseVector WallMaximizer(const DenseVector& x) const;

  double Value(const DenseVector& x) const;
  double TruncatedValue(const DenseVector& x, int t) const;
  // Linear branch wins ties.
  OracleAnswer Query(const DenseVector& x) const;

  DenseVector ReferencePoint() const;
  double LipschitzBound() const { return 2.0 * (1.0 + params_.alpha); }

  // h(y) = 2|y|^(1+alpha) and the plane through (y, h(y)) evaluated at x.
  double H(double norm) const;
  double Plane(const DenseVector& y, const DenseVector& x) const;

 private:
  struct Split {
    DenseVector a;
    DenseVector residual;
    double rho = 0.0;
  };
  Split Project(const DenseVector& x, int t) const;
  DenseVector Assemble(const Split& split, const InnerMaxResult& inner) const;

  OrthonormalTuple basis_;
  WallParams params_;
  std::optional<std::uint64_t> seed_;
  WallSearchOptions options_;
  DenseVector slack_direction_;  // unit vector orthogonal to V
};

void WriteInstanceJson(std::ostream& out, const WallInstance& inst);
WallInstance WallFromJson(const nlohmann::json& doc);

}  // namespace arena

#endif  // ARENA_WALL_HPP_
