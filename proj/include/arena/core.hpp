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

// Numerical primitives shared by every module: dense vectors, seeded random
// streams, Haar sampling on spheres and Stiefel manifolds, ball projection.

#ifndef ARENA_CORE_HPP_
#define ARENA_CORE_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace arena {

inline constexpr const char* kVersion = "1.0.0";

using DenseVector = Eigen::VectorXd;

bool AllFinite(const DenseVector& v);

// Throws std::invalid_argument("invalid vector") on NaN/Inf entries.
void RequireFinite(const DenseVector& v);

// Throws std::invalid_argument naming both dimensions.
void RequireDimension(const DenseVector& x, Eigen::Index n);

// Shortest round-trip decimal form, independent of the global locale.
std::string FormatReal(double value);

// floor/ceil of a quotient that should land on an integer for "nice" decimal
// inputs (0.9 / 0.05^2 is 359.999... in binary). A relative slack of 1e-12
// absorbs that representation error.
std::int64_t GuardedFloor(double q);
std::int64_t GuardedCeil(double q);

// A reproducible stream of random numbers identified by (seed, stream id).
// Copies share no state; advancing a copy leaves the original untouched.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Independent child stream, a function of (seed, stream id, index) only,
  // so trial i draws the same numbers whichever thread runs it.
  RngStream Substream(std::uint64_t index) const;

  double Normal();
  double Uniform();  // [0, 1)
  double Uniform(double lo, double hi);
  double ChiSquared(double dof);
  std::uint64_t Bits();
  bool Coin();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

// Returns y if |y| <= radius, else radius * y / |y|.
DenseVector ProjectBall(const DenseVector& y, double radius);

// Haar-distributed unit vector (normalized i.i.d. Gaussian).
DenseVector SampleUnitVector(Eigen::Index n, RngStream& rng);

// The first `count` coordinates of a Haar unit vector in R^n, drawn without
// materializing the other n - count coordinates: `count` Gaussians plus one
// chi-square(n - count) variate for the squared norm of the remainder.
std::vector<double> SampleUnitVectorHead(std::int64_t n, int count,
                                         RngStream& rng);

// k orthonormal vectors in R^n stored as the columns of an n x k matrix.
class OrthonormalTuple {
 public:
  static constexpr double kTolerance = 1e-10;

  // Throws std::invalid_argument if the Gram matrix is off by more than
  // kTolerance.
  explicit OrthonormalTuple(Eigen::MatrixXd columns);

  Eigen::Index dim() const { return columns_.rows(); }
  int size() const { return static_cast<int>(columns_.cols()); }

  auto vector(int i) const { return columns_.col(i); }
  const Eigen::MatrixXd& matrix() const { return columns_; }

  // (<v_1, x>, ..., <v_k, x>).
  DenseVector Coefficients(const DenseVector& x) const;

  // max_ij |<v_i, v_j> - delta_ij|.
  double OrthonormalityError() const;

 private:
  Eigen::MatrixXd columns_;
};

double OrthonormalityError(const Eigen::MatrixXd& columns);

// Haar-random orthonormal k-tuple in R^n via Gaussian columns and modified
// Gram-Schmidt with one re-orthogonalization pass.
// Throws std::invalid_argument("tuple too large") when k > n.
OrthonormalTuple SampleOrthonormalTuple(Eigen::Index n, int k, RngStream& rng);

// Keeps the columns of `prefix` and appends k - prefix.cols() Haar-random
// vectors from the orthogonal complement of their span.
OrthonormalTuple ExtendOrthonormalTuple(const Eigen::MatrixXd& prefix, int k,
                                        RngStream& rng);

}  // namespace arena

#endif  // ARENA_CORE_HPP_
