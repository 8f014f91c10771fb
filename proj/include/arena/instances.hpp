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

// Hard instance families with value/subgradient oracles:
//
//   MaxCoord   f_z(x) = max_i z_i x_i,             z in {-1,+1}^n
//   NemYud     f_V(x) = max_i <v_i,x> + (k-i) gamma |x|
//
// Indices are 0-based in code and in serialized output; piece i here is
// piece i+1 in the usual 1-based write-up, so the NemYud slope is
// (k-1-i) gamma.

#ifndef ARENA_INSTANCES_HPP_
#define ARENA_INSTANCES_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "arena/core.hpp"
#include "json.hpp"

namespace arena {

enum class Family { kMaxCoord, kNemYud, kWall };

std::string_view FamilyName(Family family);
// Throws std::invalid_argument on an unknown name.
Family ParseFamily(std::string_view name);

// What an answer reveals about the hidden parameter.
struct PrefixDisclosure {
  std::vector<Eigen::Index> prefix;  // i_1, ..., i_j in query order
};
struct PieceDisclosure {
  int index = 0;  // smallest maximizing piece
};
enum class WallBranch { kLinear, kWall };
struct WallDisclosure {
  WallBranch branch = WallBranch::kLinear;
  int index = -1;  // linear piece, or -1 on the wall branch
};
using Disclosure = std::variant<PrefixDisclosure, PieceDisclosure, WallDisclosure>;

struct OracleAnswer {
  double value = 0.0;
  DenseVector subgradient;
  Disclosure disclosure;
};

using SignVector = std::vector<int>;

// sign(a) = +1 if a >= 0 else -1.
inline int Sign(double a) { return a >= 0.0 ? 1 : -1; }

// n = floor(0.9 / eps^2). Throws std::invalid_argument when n < 1.
Eigen::Index MaxCoordDimension(double epsilon);

class MaxCoordInstance {
 public:
  // Throws std::invalid_argument unless every entry of z is +1 or -1.
  MaxCoordInstance(SignVector z, double epsilon,
                   std::optional<std::uint64_t> seed = std::nullopt);

  // Uniform random z of dimension MaxCoordDimension(epsilon).
  static MaxCoordInstance Generate(double epsilon, std::uint64_t seed);
  static MaxCoordInstance Sample(double epsilon, RngStream& rng);

  Eigen::Index dim() const { return static_cast<Eigen::Index>(z_.size()); }
  double epsilon() const { return epsilon_; }
  const SignVector& z() const { return z_; }
  std::optional<std::uint64_t> seed() const { return seed_; }

  double Value(const DenseVector& x) const;

  // Resisting oracle: scan coordinates by decreasing |x_i| (ties by index)
  // and answer with the first one whose sign agrees with z, or the last one
  // if none does. The disclosure is the scanned prefix.
  OracleAnswer Query(const DenseVector& x) const;

  // x* = -z / sqrt(n), value -1/sqrt(n).
  DenseVector Minimizer() const;
  double OptimalValue() const;

 private:
  SignVector z_;
  double epsilon_;
  std::optional<std::uint64_t> seed_;
};

// -sign(x_i) componentwise.
SignVector RecoverSigns(const DenseVector& x);

struct NemYudParams {
  int k = 0;
  double gamma = 0.0;
  Eigen::Index n = 0;
  double epsilon = 0.0;
};

// k = round(1/(100 eps^2)), gamma = 1/(10 k^1.5), n the smallest power of two
// with 8 sqrt(ln n / n) <= gamma and n > 4k.
// Throws std::invalid_argument when k < 2.
NemYudParams NemYudParamsFor(double epsilon);

// Largest n*k a generated instance may materialize.
inline constexpr std::int64_t kMaxMaterializedEntries = std::int64_t{1} << 28;

// One piece of a max over indexed affine/conic pieces.
struct PieceMax {
  double value = 0.0;
  int index = 0;
};

// max_{i < t} a_i + (k-1-i) gamma norm, smallest argmax.
PieceMax NemYudPieces(std::span<const double> a, double norm, int k,
                      double gamma, int t);

class NemYudInstance {
 public:
  NemYudInstance(OrthonormalTuple basis, double gamma, double epsilon,
                 std::optional<std::uint64_t> seed = std::nullopt);

  // Throws std::invalid_argument when n*k exceeds kMaxMaterializedEntries.
  static NemYudInstance Generate(const NemYudParams& params, std::uint64_t seed);
  static NemYudInstance Sample(const NemYudParams& params, RngStream& rng);

  Eigen::Index dim() const { return basis_.dim(); }
  int k() const { return basis_.size(); }
  double gamma() const { return gamma_; }
  double epsilon() const { return epsilon_; }
  std::optional<std::uint64_t> seed() const { return seed_; }
  const OrthonormalTuple& basis() const { return basis_; }

  double Value(const DenseVector& x) const;
  // Max over the first t pieces, 1 <= t <= k.
  double TruncatedValue(const DenseVector& x, int t) const;
  // v_i + (k-1-i) gamma x/|x| for the smallest maximizing i; at x = 0 the
  // conic part is dropped.
  OracleAnswer Query(const DenseVector& x) const;

  // x~ = -sum_i v_i / sqrt(k).
  DenseVector ReferencePoint() const;
  double LipschitzBound() const { return 1.0 + k() * gamma_; }

 private:
  OrthonormalTuple basis_;
  double gamma_;
  double epsilon_;
  std::optional<std::uint64_t> seed_;
};

// Instance documents carry "format": 1 and a "family" tag. The writers
// stream the hidden vectors so large tuples never sit in a json tree.
void WriteInstanceJson(std::ostream& out, const MaxCoordInstance& inst);
void WriteInstanceJson(std::ostream& out, const NemYudInstance& inst);
MaxCoordInstance MaxCoordFromJson(const nlohmann::json& doc);
NemYudInstance NemYudFromJson(const nlohmann::json& doc);

// Helpers shared with the wall serializer.
void WriteJsonHeader(std::ostream& out, const nlohmann::json& scalars);
void WriteRealArray(std::ostream& out, const double* data, Eigen::Index n);
void WriteBasisArray(std::ostream& out, const OrthonormalTuple& basis);
OrthonormalTuple BasisFromJson(const nlohmann::json& doc);
void RequireFormat(const nlohmann::json& doc, std::string_view family);

}  // namespace arena

#endif  // ARENA_INSTANCES_HPP_
