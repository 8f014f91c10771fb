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

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace arena {
namespace {

constexpr std::uint64_t kWallStream = 3;
constexpr double kLambdaTolerance = 1e-12;
constexpr double kSplitTolerance = 1e-12;

struct Peak {
  double arg = 0.0;
  double value = 0.0;
};

// Golden-section search for the maximum of a unimodal f on [lo, hi].
template <class F>
Peak GoldenMax(F&& f, double lo, double hi, double tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = f(x1);
    }
  }
  return f1 >= f2 ? Peak{x1, f1} : Peak{x2, f2};
}

// max over c in [delta, 1] of phi(c): log-spaced grid, then golden section
// inside the bracket around the best grid point.
template <class F>
Peak MaximizeRadius(F&& phi, double delta, const WallSearchOptions& options) {
  const int points = std::max(options.grid_points, 2);
  const double log_span = -std::log(delta);
  Peak best{delta, phi(delta)};
  int best_j = 0;
  std::vector<double> grid(points);
  grid[0] = delta;
  for (int j = 1; j < points; ++j) {
    grid[j] = j == points - 1
                  ? 1.0
                  : delta * std::exp(log_span * j / (points - 1));
    const double v = phi(grid[j]);
    if (v > best.value) {
      best = {grid[j], v};
      best_j = j;
    }
  }
  const double lo = grid[std::max(best_j - 1, 0)];
  const double hi = grid[std::min(best_j + 1, points - 1)];
  const Peak refined = GoldenMax(phi, lo, hi, options.tolerance);
  if (refined.value > best.value) best = refined;
  return best;
}

double PlaneValue(const WallParams& p, double c, double inner) {
  return -2.0 * p.alpha * std::pow(c, 1.0 + p.alpha) +
         2.0 * (1.0 + p.alpha) * std::pow(c, p.alpha - 1.0) * inner;
}

void RequireFiniteSpan(std::span<const double> a) {
  for (double v : a) {
    if (!std::isfinite(v)) throw std::invalid_argument("invalid vector");
  }
}

void ValidateParams(const WallParams& p) {
  if (p.k < 1 || p.n <= p.k) throw std::invalid_argument("wall needs n > k >= 1");
  if (!(p.delta > 0.0 && p.delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  if (!(p.beta > 0.0) || !std::isfinite(p.beta)) {
    throw std::invalid_argument("beta must be positive");
  }
  if (!(p.gamma >= 0.0) || !std::isfinite(p.gamma)) {
    throw std::invalid_argument("gamma must be nonnegative");
  }
  if (!(p.alpha > 0.0) || !std::isfinite(p.alpha)) {
    throw std::invalid_argument("alpha must be positive");
  }
  if (!(p.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
}

}  // namespace

double DeltaMap(double delta) { return -delta / std::log(delta); }

double SolveDelta(double target) {
  if (!(target > 0.0) || !(target <= DeltaMap(0.5))) {
    throw std::invalid_argument("epsilon out of supported range");
  }
  double lo = 0.0;
  double hi = 0.5;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (DeltaMap(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

WallParams WallParamsFor(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be positive");
  }
  const long k = std::lround(1.0 / (100.0 * epsilon * epsilon));
  if (k < 2) throw std::invalid_argument("epsilon too large: k < 2");
  const double dk = static_cast<double>(k);
  std::int64_t n = 1;
  while (static_cast<double>(n) < 1e4 * dk * dk * std::log(dk)) n *= 2;
  for (; n <= (std::int64_t{1} << 40); n *= 2) {
    const double dn = static_cast<double>(n);
    const double s = std::sqrt(std::log(dn) / dn);
    const double target = 32.0 * std::sqrt(dk) * s + 1.0 / std::sqrt(dk);
    if (n <= 4 * k || target > DeltaMap(0.5)) continue;
    const double delta = SolveDelta(target);
    const double beta = 8.0 * s;
    const double gamma = delta * beta;
    if (dk * gamma > 1.0 / (10.0 * std::sqrt(dk))) continue;
    return MakeWallParams(static_cast<int>(k), static_cast<Eigen::Index>(n),
                          delta, beta, gamma, epsilon);
  }
  throw std::invalid_argument("epsilon out of supported range");
}

WallParams MakeWallParams(int k, Eigen::Index n, double delta, double beta,
                          double gamma, double epsilon) {
  WallParams p;
  p.k = k;
  p.n = n;
  p.delta = delta;
  p.beta = beta;
  p.gamma = gamma;
  p.epsilon = epsilon;
  p.alpha = (delta > 0.0 && delta < 1.0) ? std::log(2.0) / -std::log(delta) : 0.0;
  ValidateParams(p);
  return p;
}

WallParams ToyWallParams() { return MakeWallParams(2, 3, 0.7, 0.1, 0.07, 0.05); }

WallParams RelaxedWallParams(int k, Eigen::Index n, double epsilon) {
  return MakeWallParams(k, n, 0.2, 0.3, 0.05, epsilon);
}

std::vector<std::string> WallParamViolations(const WallParams& p) {
  std::vector<std::string> out;
  const double dk = static_cast<double>(p.k);
  const double dn = static_cast<double>(p.n);
  const double s = std::sqrt(std::log(dn) / dn);
  const double target = 32.0 * std::sqrt(dk) * s + 1.0 / std::sqrt(dk);
  if (std::abs(DeltaMap(p.delta) - target) > 1e-10) {
    out.push_back("delta / ln(1/delta) != 32 sqrt(k ln n / n) + 1/sqrt(k)");
  }
  if (std::abs(p.beta - 8.0 * s) > 1e-12 * std::max(1.0, p.beta)) {
    out.push_back("beta != 8 sqrt(ln n / n)");
  }
  if (std::abs(p.gamma - p.delta * 8.0 * s) > 1e-12) {
    out.push_back("gamma != 8 delta sqrt(ln n / n)");
  }
  if (dk * p.gamma > 1.0 / (10.0 * std::sqrt(dk))) {
    out.push_back("k gamma > 1/(10 sqrt(k))");
  }
  if (p.n <= 4 * p.k) out.push_back("n <= 4k");
  return out;
}

double InnerMaxResult::Norm() const {
  double s = perp * perp + slack * slack;
  for (double y : coords) s += y * y;
  return std::sqrt(s);
}

InnerMaxResult InnerMaxSphereBox(std::span<const double> a, double rho,
                                 double c, double bound) {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("c must be positive");
  if (!(bound > 0.0) || std::isnan(bound)) {
    throw std::invalid_argument("bound must be positive");
  }
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw std::invalid_argument("invalid vector");
  RequireFiniteSpan(a);

  const int m = static_cast<int>(a.size());
  const double cap = bound * c;
  const double c2 = c * c;
  InnerMaxResult r;
  r.coords.assign(m, 0.0);

  double total = rho * rho;
  int nonzero = 0;
  for (double v : a) {
    total += v * v;
    if (v != 0.0) ++nonzero;
  }
  if (total == 0.0) {
    r.slack = c;
    return r;
  }

  auto clip = [cap](double lambda, double v) {
    return std::copysign(std::min(lambda * std::abs(v), cap), v);
  };

  if (rho == 0.0) {
    const double saturated = nonzero * cap * cap;
    if (saturated <= c2) {
      double lambda = 0.0;
      for (int i = 0; i < m; ++i) {
        if (a[i] == 0.0) continue;
        r.coords[i] = std::copysign(cap, a[i]);
        r.value += r.coords[i] * a[i];
        r.clipped.push_back(i);
        lambda = std::max(lambda, cap / std::abs(a[i]));
      }
      r.multiplier = lambda;
      r.slack = std::sqrt(c2 - saturated);
      r.boundary_infeasible = saturated < c2;
      return r;
    }
  }

  auto norm_sq = [&](double lambda) {
    double s = lambda * lambda * rho * rho;
    for (double v : a) {
      const double y = std::min(lambda * std::abs(v), cap);
      s += y * y;
    }
    return s;
  };

  // Without clipping the norm is lambda * sqrt(total), so this lo is short.
  double lo = c / std::sqrt(total);
  double hi = lo;
  while (norm_sq(hi) < c2) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 400 && hi - lo > kLambdaTolerance * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (norm_sq(mid) < c2) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double lambda = 0.5 * (lo + hi);

  // Solve exactly on the active set the bisection settled on.
  double free_sq = rho * rho;
  int clipped = 0;
  for (double v : a) {
    if (lambda * std::abs(v) >= cap) {
      ++clipped;
    } else {
      free_sq += v * v;
    }
  }
  const double remaining = c2 - clipped * cap * cap;
  if (free_sq > 0.0 && remaining > 0.0) {
    const double exact = std::sqrt(remaining / free_sq);
    bool same_set = true;
    for (double v : a) {
      if ((exact * std::abs(v) >= cap) != (lambda * std::abs(v) >= cap)) {
        same_set = false;
        break;
      }
    }
    if (same_set) lambda = exact;
  }

  r.multiplier = lambda;
  for (int i = 0; i < m; ++i) {
    r.coords[i] = clip(lambda, a[i]);
    r.value += r.coords[i] * a[i];
    if (lambda * std::abs(a[i]) >= cap) r.clipped.push_back(i);
  }
  r.perp = lambda * rho;
  r.value += r.perp * rho;
  return r;
}

WallMax WallFromProjections(std::span<const double> a, double rho,
                            const WallParams& params,
                            const WallSearchOptions& options) {
  auto phi = [&](double c) {
    return PlaneValue(params, c, InnerMaxSphereBox(a, rho, c, params.beta).value);
  };
  const Peak peak = MaximizeRadius(phi, params.delta, options);
  WallMax out;
  out.value = peak.value;
  out.radius = peak.arg;
  out.inner = InnerMaxSphereBox(a, rho, peak.arg, params.beta);
  return out;
}

double TruncatedWallFromSplit(std::span<const double> w, double z_norm,
                              const WallParams& params,
                              const WallSearchOptions& options) {
  if (w.empty()) throw std::invalid_argument("t out of range");
  if (!(z_norm >= 0.0) || !std::isfinite(z_norm)) {
    throw std::invalid_argument("invalid vector");
  }
  RequireFiniteSpan(w);
  const double t = static_cast<double>(w.size());
  const double a_max = std::min(1.0, params.beta * std::sqrt(t));
  // Concave in a: the box-constrained part is concave in the radius and so
  // is sqrt(1 - a^2).
  auto objective = [&](double a) {
    const double known =
        a > 0.0 ? InnerMaxSphereBox(w, 0.0, a, params.beta / a).value : 0.0;
    return known + std::sqrt(std::max(0.0, 1.0 - a * a)) * z_norm;
  };
  double unit_inner = std::max(objective(0.0), objective(a_max));
  unit_inner = std::max(unit_inner,
                        GoldenMax(objective, 0.0, a_max, kSplitTolerance).value);
  // The inner value is positively homogeneous in c.
  auto phi = [&](double c) { return PlaneValue(params, c, c * unit_inner); };
  return MaximizeRadius(phi, params.delta, options).value;
}

PieceMax LinearPieces(std::span<const double> a, double gamma, int t) {
  if (t < 1 || static_cast<int>(a.size()) < t) {
    throw std::invalid_argument("t out of range");
  }
  PieceMax best{a[0] - gamma, 0};
  for (int i = 1; i < t; ++i) {
    const double g = a[i] - (i + 1) * gamma;
    if (g > best.value) best = {g, i};
  }
  return best;
}

WallInstance::WallInstance(OrthonormalTuple basis, WallParams params,
                           std::optional<std::uint64_t> seed,
                           WallSearchOptions options)
    : basis_(std::move(basis)),
      params_(params),
      seed_(seed),
      options_(options) {
  ValidateParams(params_);
  if (basis_.size() != params_.k || basis_.dim() != params_.n) {
    throw std::invalid_argument("basis shape does not match wall parameters");
  }
  if (options_.grid_points < 2 || !(options_.tolerance > 0.0)) {
    throw std::invalid_argument("invalid wall search options");
  }
  const Eigen::MatrixXd& v = basis_.matrix();
  Eigen::Index row = 0;
  v.rowwise().squaredNorm().minCoeff(&row);
  DenseVector e = DenseVector::Zero(dim());
  e[row] = 1.0;
  for (int pass = 0; pass < 2; ++pass) e -= v * (v.transpose() * e);
  slack_direction_ = e / e.norm();
}

WallInstance WallInstance::Generate(const WallParams& params, std::uint64_t seed) {
  RngStream rng(seed, kWallStream);
  WallInstance inst = Sample(params, rng);
  inst.seed_ = seed;
  return inst;
}

WallInstance WallInstance::Sample(const WallParams& params, RngStream& rng) {
  if (static_cast<std::int64_t>(params.n) * params.k > kMaxMaterializedEntries) {
    throw std::invalid_argument("instance too large to materialize (n = " +
                                std::to_string(params.n) + ")");
  }
  return WallInstance(SampleOrthonormalTuple(params.n, params.k, rng), params);
}

WallInstance::Split WallInstance::Project(const DenseVector& x, int t) const {
  if (t < 1 || t > k()) throw std::invalid_argument("t out of range");
  RequireDimension(x, dim());
  RequireFinite(x);
  Split s;
  const auto v = basis_.matrix().leftCols(t);
  s.a = v.transpose() * x;
  s.residual = x - v * s.a;
  // Second pass: for x near span(V) the rounding residual is not orthogonal
  // to V, and Assemble uses its direction.
  const DenseVector correction = v.transpose() * s.residual;
  s.residual -= v * correction;
  s.a += correction;
  s.rho = s.residual.norm();
  return s;
}

DenseVector WallInstance::Assemble(const Split& split,
                                   const InnerMaxResult& inner) const {
  DenseVector y = basis_.matrix() *
                  Eigen::Map<const DenseVector>(inner.coords.data(), k());
  if (split.rho > 0.0) y += (inner.perp / split.rho) * split.residual;
  if (inner.slack > 0.0) y += inner.slack * slack_direction_;
  return y;
}

double WallInstance::LinearValue(const DenseVector& x) const {
  return LinearTruncated(x, k());
}

double WallInstance::LinearTruncated(const DenseVector& x, int t) const {
  if (t < 1 || t > k()) throw std::invalid_argument("t out of range");
  RequireDimension(x, dim());
  const DenseVector a = basis_.matrix().leftCols(t).transpose() * x;
  return LinearPieces({a.data(), static_cast<std::size_t>(t)}, params_.gamma, t)
      .value;
}

bool WallInstance::InCone(const DenseVector& x, int i) const {
  if (i < 0 || i >= k()) throw std::invalid_argument("cone index out of range");
  RequireDimension(x, dim());
  const double norm = x.norm();
  if (norm == 0.0) return false;
  return std::abs(basis_.vector(i).dot(x)) >= params_.beta * norm;
}

double WallInstance::WallValue(const DenseVector& x) const {
  const Split s = Project(x, k());
  return WallFromProjections({s.a.data(), static_cast<std::size_t>(s.a.size())}, s.rho, params_, options_)
      .value;
}

double WallInstance::WallTruncated(const DenseVector& x, int t) const {
  const Split s = Project(x, t);
  return TruncatedWallFromSplit({s.a.data(), static_cast<std::size_t>(s.a.size())}, s.rho, params_, options_);
}

DenseVector WallInstance::WallMaximizer(const DenseVector& x) const {
  const Split s = Project(x, k());
  const WallMax w =
      WallFromProjections({s.a.data(), static_cast<std::size_t>(s.a.size())}, s.rho, params_, options_);
  return Assemble(s, w.inner);
}

double WallInstance::Value(const DenseVector& x) const {
  return std::max(LinearValue(x), WallValue(x));
}

double WallInstance::TruncatedValue(const DenseVector& x, int t) const {
  return std::max(LinearTruncated(x, t), WallTruncated(x, t));
}

OracleAnswer WallInstance::Query(const DenseVector& x) const {
  const Split s = Project(x, k());
  const std::span<const double> a(s.a.data(), s.a.size());
  const PieceMax linear = LinearPieces(a, params_.gamma, k());
  const WallMax wall = WallFromProjections(a, s.rho, params_, options_);
  OracleAnswer answer;
  if (linear.value >= wall.value) {
    answer.value = linear.value;
    answer.subgradient = basis_.vector(linear.index);
    answer.disclosure = WallDisclosure{WallBranch::kLinear, linear.index};
    return answer;
  }
  answer.value = wall.value;
  answer.subgradient = 2.0 * (1.0 + params_.alpha) *
                       std::pow(wall.radius, params_.alpha - 1.0) *
                       Assemble(s, wall.inner);
  answer.disclosure = WallDisclosure{WallBranch::kWall, -1};
  return answer;
}

DenseVector WallInstance::ReferencePoint() const {
  return -basis_.matrix().rowwise().sum() / std::sqrt(static_cast<double>(k()));
}

double WallInstance::H(double norm) const {
  return 2.0 * std::pow(norm, 1.0 + params_.alpha);
}

double WallInstance::Plane(const DenseVector& y, const DenseVector& x) const {
  RequireDimension(y, dim());
  RequireDimension(x, dim());
  const double c = y.norm();
  if (c == 0.0) throw std::invalid_argument("plane needs y != 0");
  return PlaneValue(params_, c, y.dot(x));
}

void WriteInstanceJson(std::ostream& out, const WallInstance& inst) {
  const WallParams& p = inst.params();
  nlohmann::json head = {
      {"format", 1},        {"family", "wall"},     {"n", inst.dim()},
      {"k", inst.k()},      {"epsilon", p.epsilon}, {"gamma", p.gamma},
      {"delta", p.delta},   {"alpha", p.alpha},     {"beta", p.beta},
      {"seed", inst.seed() ? nlohmann::json(*inst.seed()) : nlohmann::json(nullptr)}};
  WriteJsonHeader(out, head);
  out << ",\"V\":";
  WriteBasisArray(out, inst.basis());
  out << "}\n";
}

WallInstance WallFromJson(const nlohmann::json& doc) {
  RequireFormat(doc, "wall");
  WallParams p = MakeWallParams(doc.at("k").get<int>(), doc.at("n").get<Eigen::Index>(),
                                doc.at("delta").get<double>(), doc.at("beta").get<double>(),
                                doc.at("gamma").get<double>(),
                                doc.at("epsilon").get<double>());
  std::optional<std::uint64_t> seed;
  if (doc.contains("seed") && !doc.at("seed").is_null()) {
    seed = doc.at("seed").get<std::uint64_t>();
  }
  return WallInstance(BasisFromJson(doc), p, seed);
}

}  // namespace arena
