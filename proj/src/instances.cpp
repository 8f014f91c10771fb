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

#include "arena/instances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace arena {
namespace {

constexpr std::uint64_t kMaxCoordStream = 1;
constexpr std::uint64_t kNemYudStream = 2;

void RequireEpsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be positive");
  }
}

nlohmann::json SeedJson(std::optional<std::uint64_t> seed) {
  return seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
}

std::optional<std::uint64_t> SeedFromJson(const nlohmann::json& doc) {
  if (!doc.contains("seed") || doc.at("seed").is_null()) return std::nullopt;
  return doc.at("seed").get<std::uint64_t>();
}

}  // namespace

std::string_view FamilyName(Family family) {
  switch (family) {
    case Family::kMaxCoord:
      return "maxcoord";
    case Family::kNemYud:
      return "nemyud";
    case Family::kWall:
      return "wall";
  }
  return "unknown";
}

Family ParseFamily(std::string_view name) {
  if (name == "maxcoord") return Family::kMaxCoord;
  if (name == "nemyud") return Family::kNemYud;
  if (name == "wall") return Family::kWall;
  throw std::invalid_argument("unknown family: " + std::string(name));
}

Eigen::Index MaxCoordDimension(double epsilon) {
  RequireEpsilon(epsilon);
  const std::int64_t n = GuardedFloor(0.9 / (epsilon * epsilon));
  if (n < 1) throw std::invalid_argument("epsilon too large: n < 1");
  return static_cast<Eigen::Index>(n);
}

MaxCoordInstance::MaxCoordInstance(SignVector z, double epsilon,
                                   std::optional<std::uint64_t> seed)
    : z_(std::move(z)), epsilon_(epsilon), seed_(seed) {
  RequireEpsilon(epsilon);
  if (z_.empty()) throw std::invalid_argument("empty sign vector");
  for (int s : z_) {
    if (s != 1 && s != -1) throw std::invalid_argument("z entries must be +1 or -1");
  }
}

MaxCoordInstance MaxCoordInstance::Generate(double epsilon, std::uint64_t seed) {
  RngStream rng(seed, kMaxCoordStream);
  MaxCoordInstance inst = Sample(epsilon, rng);
  inst.seed_ = seed;
  return inst;
}

MaxCoordInstance MaxCoordInstance::Sample(double epsilon, RngStream& rng) {
  const Eigen::Index n = MaxCoordDimension(epsilon);
  SignVector z(n);
  for (int& s : z) s = rng.Coin() ? 1 : -1;
  return MaxCoordInstance(std::move(z), epsilon);
}

double MaxCoordInstance::Value(const DenseVector& x) const {
  RequireDimension(x, dim());
  RequireFinite(x);
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < dim(); ++i) best = std::max(best, z_[i] * x[i]);
  return best;
}

OracleAnswer MaxCoordInstance::Query(const DenseVector& x) const {
  RequireDimension(x, dim());
  RequireFinite(x);
  std::vector<Eigen::Index> order(dim());
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&x](Eigen::Index a, Eigen::Index b) {
    const double xa = std::abs(x[a]);
    const double xb = std::abs(x[b]);
    return xa > xb || (xa == xb && a < b);
  });
  std::size_t j = order.size() - 1;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    if (Sign(x[order[pos]]) == z_[order[pos]]) {
      j = pos;
      break;
    }
  }
  const Eigen::Index i = order[j];
  OracleAnswer answer;
  answer.value = z_[i] * x[i];
  answer.subgradient = DenseVector::Zero(dim());
  answer.subgradient[i] = z_[i];
  order.resize(j + 1);
  answer.disclosure = PrefixDisclosure{std::move(order)};
  return answer;
}

DenseVector MaxCoordInstance::Minimizer() const {
  const double scale = -1.0 / std::sqrt(static_cast<double>(dim()));
  DenseVector x(dim());
  for (Eigen::Index i = 0; i < dim(); ++i) x[i] = scale * z_[i];
  return x;
}

double MaxCoordInstance::OptimalValue() const {
  return -1.0 / std::sqrt(static_cast<double>(dim()));
}

SignVector RecoverSigns(const DenseVector& x) {
  SignVector z(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) z[i] = -Sign(x[i]);
  return z;
}

NemYudParams NemYudParamsFor(double epsilon) {
  RequireEpsilon(epsilon);
  const long k = std::lround(1.0 / (100.0 * epsilon * epsilon));
  if (k < 2) throw std::invalid_argument("epsilon too large: k < 2");
  NemYudParams p;
  p.k = static_cast<int>(k);
  p.gamma = 1.0 / (10.0 * std::pow(static_cast<double>(k), 1.5));
  p.epsilon = epsilon;
  std::int64_t n = 1;
  while (n <= 4 * k) n *= 2;
  auto satisfied = [&p](std::int64_t m) {
    const double dm = static_cast<double>(m);
    return 8.0 * std::sqrt(std::log(dm) / dm) <= p.gamma;
  };
  while (!satisfied(n)) {
    if (n >= (std::int64_t{1} << 50)) {
      throw std::invalid_argument("epsilon out of supported range");
    }
    n *= 2;
  }
  p.n = static_cast<Eigen::Index>(n);
  return p;
}

PieceMax NemYudPieces(std::span<const double> a, double norm, int k,
                      double gamma, int t) {
  if (t < 1 || t > k || static_cast<int>(a.size()) < t) {
    throw std::invalid_argument("t out of range");
  }
  PieceMax best{a[0] + (k - 1) * gamma * norm, 0};
  for (int i = 1; i < t; ++i) {
    const double g = a[i] + (k - 1 - i) * gamma * norm;
    if (g > best.value) best = {g, i};
  }
  return best;
}

NemYudInstance::NemYudInstance(OrthonormalTuple basis, double gamma,
                               double epsilon, std::optional<std::uint64_t> seed)
    : basis_(std::move(basis)), gamma_(gamma), epsilon_(epsilon), seed_(seed) {
  RequireEpsilon(epsilon);
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("gamma must be nonnegative");
  }
}

NemYudInstance NemYudInstance::Generate(const NemYudParams& params,
                                        std::uint64_t seed) {
  RngStream rng(seed, kNemYudStream);
  NemYudInstance inst = Sample(params, rng);
  inst.seed_ = seed;
  return inst;
}

NemYudInstance NemYudInstance::Sample(const NemYudParams& params,
                                      RngStream& rng) {
  if (static_cast<std::int64_t>(params.n) * params.k > kMaxMaterializedEntries) {
    throw std::invalid_argument("instance too large to materialize (n = " +
                                std::to_string(params.n) + ")");
  }
  return NemYudInstance(SampleOrthonormalTuple(params.n, params.k, rng),
                        params.gamma, params.epsilon);
}

double NemYudInstance::Value(const DenseVector& x) const {
  return TruncatedValue(x, k());
}

double NemYudInstance::TruncatedValue(const DenseVector& x, int t) const {
  if (t < 1 || t > k()) throw std::invalid_argument("t out of range");
  RequireDimension(x, dim());
  const DenseVector a = basis_.matrix().leftCols(t).transpose() * x;
  return NemYudPieces({a.data(), static_cast<std::size_t>(t)}, x.norm(), k(),
                      gamma_, t)
      .value;
}

OracleAnswer NemYudInstance::Query(const DenseVector& x) const {
  RequireDimension(x, dim());
  const DenseVector a = basis_.Coefficients(x);
  const double norm = x.norm();
  const PieceMax piece = NemYudPieces({a.data(), static_cast<std::size_t>(a.size())}, norm, k(), gamma_, k());
  OracleAnswer answer;
  answer.value = piece.value;
  answer.subgradient = basis_.vector(piece.index);
  if (norm > 0.0) {
    answer.subgradient += ((k() - 1 - piece.index) * gamma_ / norm) * x;
  }
  answer.disclosure = PieceDisclosure{piece.index};
  return answer;
}

DenseVector NemYudInstance::ReferencePoint() const {
  return -basis_.matrix().rowwise().sum() / std::sqrt(static_cast<double>(k()));
}

void WriteJsonHeader(std::ostream& out, const nlohmann::json& scalars) {
  std::string text = scalars.dump();
  text.pop_back();  // reopen the object for the streamed arrays
  out << text;
}

void WriteRealArray(std::ostream& out, const double* data, Eigen::Index n) {
  out << '[';
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i > 0) out << ',';
    out << FormatReal(data[i]);
  }
  out << ']';
}

void WriteBasisArray(std::ostream& out, const OrthonormalTuple& basis) {
  out << '[';
  for (int i = 0; i < basis.size(); ++i) {
    if (i > 0) out << ',';
    WriteRealArray(out, basis.matrix().col(i).data(), basis.dim());
  }
  out << ']';
}

OrthonormalTuple BasisFromJson(const nlohmann::json& doc) {
  const auto& rows = doc.at("V");
  const int k = doc.at("k").get<int>();
  const Eigen::Index n = doc.at("n").get<Eigen::Index>();
  if (static_cast<int>(rows.size()) != k) {
    throw std::invalid_argument("V has wrong number of vectors");
  }
  Eigen::MatrixXd m(n, k);
  for (int i = 0; i < k; ++i) {
    const auto v = rows.at(i).get<std::vector<double>>();
    if (static_cast<Eigen::Index>(v.size()) != n) {
      throw std::invalid_argument("V vector has wrong dimension");
    }
    m.col(i) = Eigen::Map<const DenseVector>(v.data(), n);
  }
  return OrthonormalTuple(std::move(m));
}

void RequireFormat(const nlohmann::json& doc, std::string_view family) {
  if (!doc.is_object() || doc.value("format", 0) != 1) {
    throw std::invalid_argument("unsupported instance format");
  }
  if (doc.value("family", std::string()) != family) {
    throw std::invalid_argument("expected family " + std::string(family));
  }
}

void WriteInstanceJson(std::ostream& out, const MaxCoordInstance& inst) {
  nlohmann::json head = {{"format", 1},
                         {"family", "maxcoord"},
                         {"n", inst.dim()},
                         {"k", nullptr},
                         {"epsilon", inst.epsilon()},
                         {"gamma", nullptr},
                         {"seed", SeedJson(inst.seed())}};
  WriteJsonHeader(out, head);
  out << ",\"z\":[";
  for (std::size_t i = 0; i < inst.z().size(); ++i) {
    if (i > 0) out << ',';
    out << inst.z()[i];
  }
  out << "]}\n";
}

void WriteInstanceJson(std::ostream& out, const NemYudInstance& inst) {
  nlohmann::json head = {{"format", 1},
                         {"family", "nemyud"},
                         {"n", inst.dim()},
                         {"k", inst.k()},
                         {"epsilon", inst.epsilon()},
                         {"gamma", inst.gamma()},
                         {"seed", SeedJson(inst.seed())}};
  WriteJsonHeader(out, head);
  out << ",\"V\":";
  WriteBasisArray(out, inst.basis());
  out << "}\n";
}

MaxCoordInstance MaxCoordFromJson(const nlohmann::json& doc) {
  RequireFormat(doc, "maxcoord");
  auto z = doc.at("z").get<SignVector>();
  if (static_cast<Eigen::Index>(z.size()) != doc.at("n").get<Eigen::Index>()) {
    throw std::invalid_argument("z has wrong dimension");
  }
  return MaxCoordInstance(std::move(z), doc.at("epsilon").get<double>(),
                          SeedFromJson(doc));
}

NemYudInstance NemYudFromJson(const nlohmann::json& doc) {
  RequireFormat(doc, "nemyud");
  return NemYudInstance(BasisFromJson(doc), doc.at("gamma").get<double>(),
                        doc.at("epsilon").get<double>(), SeedFromJson(doc));
}

}  // namespace arena
