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

#include "arena/core.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace arena {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 MakeEngine(std::uint64_t seed, std::uint64_t stream_id) {
  std::uint64_t state = SplitMix64(seed) ^ SplitMix64(~stream_id);
  std::vector<std::uint32_t> words;
  words.reserve(8);
  for (int i = 0; i < 4; ++i) {
    state = SplitMix64(state);
    words.push_back(static_cast<std::uint32_t>(state));
    words.push_back(static_cast<std::uint32_t>(state >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

// Removes the components of g along the first `count` columns of q, twice.
void Orthogonalize(const Eigen::MatrixXd& q, int count, DenseVector& g) {
  for (int pass = 0; pass < 2; ++pass) {
    for (int i = 0; i < count; ++i) {
      g -= q.col(i).dot(g) * q.col(i);
    }
  }
}

}  // namespace

bool AllFinite(const DenseVector& v) { return v.allFinite(); }

void RequireFinite(const DenseVector& v) {
  if (!v.allFinite()) throw std::invalid_argument("invalid vector");
}

void RequireDimension(const DenseVector& x, Eigen::Index n) {
  if (x.size() != n) {
    throw std::invalid_argument("dimension mismatch: expected " +
                                std::to_string(n) + ", got " +
                                std::to_string(x.size()));
  }
}

std::string FormatReal(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

std::int64_t GuardedFloor(double q) {
  return static_cast<std::int64_t>(std::floor(q * (1.0 + 1e-12)));
}

std::int64_t GuardedCeil(double q) {
  return static_cast<std::int64_t>(std::ceil(q * (1.0 - 1e-12)));
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(MakeEngine(seed, stream_id)) {}

RngStream RngStream::Substream(std::uint64_t index) const {
  return RngStream(seed_, SplitMix64(stream_id_ ^ SplitMix64(index + 1)));
}

double RngStream::Normal() {
  return std::normal_distribution<double>(0.0, 1.0)(engine_);
}

double RngStream::Uniform() {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

double RngStream::Uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

double RngStream::ChiSquared(double dof) {
  return std::chi_squared_distribution<double>(dof)(engine_);
}

std::uint64_t RngStream::Bits() { return engine_(); }

bool RngStream::Coin() { return (engine_() >> 63) != 0; }

DenseVector ProjectBall(const DenseVector& y, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("radius must be positive");
  }
  RequireFinite(y);
  const double norm = y.norm();
  if (norm <= radius) return y;
  DenseVector out = (radius / norm) * y;
  // Rounding can leave the result a few ulps outside; pull it back so the
  // idempotence check sees a fixed point.
  while (out.norm() > radius) out *= 1.0 - 0x1p-52;
  return out;
}

DenseVector SampleUnitVector(Eigen::Index n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("dimension must be positive");
  DenseVector g(n);
  double norm = 0.0;
  do {
    for (Eigen::Index i = 0; i < n; ++i) g[i] = rng.Normal();
    norm = g.norm();
  } while (norm == 0.0);
  return g / norm;
}

std::vector<double> SampleUnitVectorHead(std::int64_t n, int count,
                                         RngStream& rng) {
  if (n < 1 || count < 0 || count > n) {
    throw std::invalid_argument("invalid head size");
  }
  std::vector<double> head(count);
  double sq = 0.0;
  do {
    sq = 0.0;
    for (int i = 0; i < count; ++i) {
      head[i] = rng.Normal();
      sq += head[i] * head[i];
    }
    if (count < n) sq += rng.ChiSquared(static_cast<double>(n - count));
  } while (sq == 0.0);
  const double inv = 1.0 / std::sqrt(sq);
  for (double& h : head) h *= inv;
  return head;
}

double OrthonormalityError(const Eigen::MatrixXd& columns) {
  const Eigen::MatrixXd gram = columns.transpose() * columns;
  return (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols()))
      .cwiseAbs()
      .maxCoeff();
}

OrthonormalTuple::OrthonormalTuple(Eigen::MatrixXd columns)
    : columns_(std::move(columns)) {
  if (columns_.cols() < 1 || columns_.rows() < columns_.cols()) {
    throw std::invalid_argument("tuple too large");
  }
  if (!columns_.allFinite() || arena::OrthonormalityError(columns_) > kTolerance) {
    throw std::invalid_argument("vectors are not orthonormal");
  }
}

DenseVector OrthonormalTuple::Coefficients(const DenseVector& x) const {
  RequireDimension(x, dim());
  return columns_.transpose() * x;
}

double OrthonormalTuple::OrthonormalityError() const {
  return arena::OrthonormalityError(columns_);
}

OrthonormalTuple SampleOrthonormalTuple(Eigen::Index n, int k, RngStream& rng) {
  return ExtendOrthonormalTuple(Eigen::MatrixXd(n, 0), k, rng);
}

OrthonormalTuple ExtendOrthonormalTuple(const Eigen::MatrixXd& prefix, int k,
                                        RngStream& rng) {
  const Eigen::Index n = prefix.rows();
  const int fixed = static_cast<int>(prefix.cols());
  if (n < 1 || k < 1) throw std::invalid_argument("invalid tuple shape");
  if (k > n) throw std::invalid_argument("tuple too large");
  if (fixed > k) throw std::invalid_argument("prefix longer than tuple");
  if (fixed > 0 && arena::OrthonormalityError(prefix) > OrthonormalTuple::kTolerance) {
    throw std::invalid_argument("vectors are not orthonormal");
  }
  Eigen::MatrixXd q(n, k);
  q.leftCols(fixed) = prefix;
  DenseVector g(n);
  for (int j = fixed; j < k; ++j) {
    double norm = 0.0;
    do {
      for (Eigen::Index i = 0; i < n; ++i) g[i] = rng.Normal();
      Orthogonalize(q, j, g);
      norm = g.norm();
    } while (!(norm > 1e-8));
    q.col(j) = g / norm;
  }
  return OrthonormalTuple(std::move(q));
}

}  // namespace arena
