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

#include "arena/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <utility>

namespace arena {
namespace {

constexpr double kEscapeThreshold = 1e-9;
constexpr std::uint64_t kSetupStream = ~std::uint64_t{0};

double Mean(const std::vector<int>& v) {
  if (v.empty()) return 0.0;
  return static_cast<double>(std::accumulate(v.begin(), v.end(), std::int64_t{0})) /
         static_cast<double>(v.size());
}

// Projections of a query onto the hidden tuple plus the two residual norms
// the full and truncated evaluators need.
struct Projections {
  std::vector<double> a;
  double norm = 0.0;
  double rho = 0.0;     // |x - sum_{i<k} a_i v_i|
  double z_norm = 0.0;  // |x - sum_{i<t} a_i v_i|
};

// x = q (sum_{i<t-1} c_i v_i + c_{t-1} u) with u a fixed unit vector in the
// complement of the known directions, v_{t-1}..v_{k-1} Haar in that
// complement.
Projections DrawEscapeQuery(std::int64_t n, int k, int t,
                            const std::vector<double>& coeffs, double q,
                            RngStream& rng) {
  const int fresh = k - t + 1;
  const std::vector<double> head = SampleUnitVectorHead(n - t + 1, fresh, rng);
  Projections p;
  p.a.resize(k);
  for (int i = 0; i < t - 1; ++i) p.a[i] = q * coeffs[i];
  const double cu = q * coeffs[t - 1];
  double head_sq = 0.0;
  for (int j = 0; j < fresh; ++j) {
    p.a[t - 1 + j] = cu * head[j];
    head_sq += head[j] * head[j];
  }
  p.norm = q;
  p.rho = std::abs(cu) * std::sqrt(std::max(0.0, 1.0 - head_sq));
  p.z_norm = std::abs(cu) * std::sqrt(std::max(0.0, 1.0 - head[0] * head[0]));
  return p;
}

std::vector<double> EscapeCoefficients(int t, const RngStream& rng, bool fresh_only) {
  if (fresh_only) {
    std::vector<double> c(t, 0.0);
    c[t - 1] = 1.0;
    return c;
  }
  RngStream setup = rng.Substream(kSetupStream);
  std::vector<double> c = SampleUnitVectorHead(t, t, setup);
  return c;
}

void RequireTrials(std::uint64_t trials) {
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
}

double WallFull(const Projections& p, const WallParams& params) {
  const std::span<const double> a(p.a);
  return std::max(LinearPieces(a, params.gamma, params.k).value,
                  WallFromProjections(a, p.rho, params).value);
}

DenseVector RandomBallPoint(Eigen::Index n, RngStream& rng) {
  DenseVector d = SampleUnitVector(n, rng);
  return rng.Uniform() * d;
}

}  // namespace

void ParallelFor(std::uint64_t count, int threads,
                 const std::function<void(std::uint64_t)>& fn) {
  if (threads <= 1 || count < 2) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const auto workers = static_cast<std::uint64_t>(threads);
  std::exception_ptr error;
  std::mutex error_mutex;
  std::atomic<bool> failed{false};
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::uint64_t i = w; i < count && !failed.load(); i += workers) fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed = true;
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

std::uint64_t CountEvents(std::uint64_t trials, int threads,
                          const std::function<bool(std::uint64_t)>& event) {
  std::vector<char> hit(trials, 0);
  ParallelFor(trials, threads, [&](std::uint64_t i) { hit[i] = event(i) ? 1 : 0; });
  return static_cast<std::uint64_t>(std::count(hit.begin(), hit.end(), 1));
}

double BinomialSlack(double bound, std::uint64_t trials) {
  const double b = std::clamp(bound, 0.0, 1.0);
  const double t = static_cast<double>(trials);
  return 3.0 * std::sqrt(b * (1.0 - b) / t) + 1.0 / t;
}

bool BinomialPass(std::uint64_t successes, std::uint64_t trials, double bound) {
  if (trials == 0) return false;
  const double p = static_cast<double>(successes) / static_cast<double>(trials);
  return p < bound + BinomialSlack(bound, trials);
}

LemmaEstimate::LemmaEstimate(std::string lemma_id, std::uint64_t successes,
                             std::uint64_t trials, double theoretical_bound,
                             std::uint64_t seed, nlohmann::json parameters)
    : lemma_id_(std::move(lemma_id)),
      successes_(successes),
      trials_(trials),
      theoretical_bound_(theoretical_bound),
      seed_(seed),
      parameters_(std::move(parameters)) {
  RequireTrials(trials);
  if (successes > trials) throw std::invalid_argument("more successes than trials");
}

double LemmaEstimate::empirical_probability() const {
  return static_cast<double>(successes_) / static_cast<double>(trials_);
}

nlohmann::json LemmaEstimate::ToJson() const {
  return {{"lemma_id", lemma_id_},
          {"successes", successes_},
          {"trials", trials_},
          {"empirical_probability", empirical_probability()},
          {"theoretical_bound", theoretical_bound_},
          {"slack", slack()},
          {"seed", seed_},
          {"pass", pass()},
          {"parameters", parameters_}};
}

double RateCheck::rate() const {
  return trials == 0 ? 0.0 : static_cast<double>(events) / static_cast<double>(trials);
}

nlohmann::json RateCheck::ToJson() const {
  return {{"id", id},         {"events", events}, {"trials", trials},
          {"rate", rate()},   {"threshold", threshold}, {"pass", pass()}};
}

LemmaEstimate EstimateConcentration(std::int64_t n, double c, std::uint64_t trials,
                                    const RngStream& rng, int threads,
                                    bool full_vectors) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (!(c >= 0.0)) throw std::invalid_argument("c must be nonnegative");
  RequireTrials(trials);
  const std::uint64_t hits = CountEvents(trials, threads, [&](std::uint64_t i) {
    RngStream sub = rng.Substream(i);
    const double first = full_vectors ? SampleUnitVector(n, sub)[0]
                                      : SampleUnitVectorHead(n, 1, sub)[0];
    return std::abs(first) >= c;
  });
  const double bound = 2.0 * std::exp(-static_cast<double>(n) * c * c / 2.0);
  return LemmaEstimate(std::string(kLemmaConcentration), hits, trials, bound,
                       rng.seed(), {{"n", n}, {"c", c}, {"full_vectors", full_vectors}});
}

LemmaEstimate EstimateNemYudEscape(const NemYudParams& params, int t,
                                   std::uint64_t trials, const RngStream& rng,
                                   double query_norm, int threads, bool fresh_only) {
  if (t < 1 || t > params.k) throw std::invalid_argument("t out of range");
  RequireTrials(trials);
  const std::vector<double> coeffs = EscapeCoefficients(t, rng, fresh_only);
  const std::uint64_t escapes = CountEvents(trials, threads, [&](std::uint64_t i) {
    RngStream sub = rng.Substream(i);
    const Projections p =
        DrawEscapeQuery(params.n, params.k, t, coeffs, query_norm, sub);
    const double full = NemYudPieces(p.a, p.norm, params.k, params.gamma, params.k).value;
    const double truncated = NemYudPieces(p.a, p.norm, params.k, params.gamma, t).value;
    return std::abs(full - truncated) > kEscapeThreshold;
  });
  const double bound = std::pow(static_cast<double>(params.n), -7.0);
  return LemmaEstimate(std::string(kLemmaArgmaxEscape), escapes, trials, bound,
                       rng.seed(),
                       {{"family", "nemyud"},
                        {"epsilon", params.epsilon},
                        {"t", t},
                        {"k", params.k},
                        {"n", params.n},
                        {"gamma", params.gamma},
                        {"query_norm", query_norm},
                        {"fresh_only", fresh_only}});
}

LemmaEstimate EstimateWallEscape(const WallParams& params, int t,
                                 std::uint64_t trials, const RngStream& rng,
                                 double query_norm, int threads, bool fresh_only) {
  if (t < 1 || t > params.k) throw std::invalid_argument("t out of range");
  RequireTrials(trials);
  const std::vector<double> coeffs = EscapeCoefficients(t, rng, fresh_only);
  const std::uint64_t escapes = CountEvents(trials, threads, [&](std::uint64_t i) {
    RngStream sub = rng.Substream(i);
    const Projections p =
        DrawEscapeQuery(params.n, params.k, t, coeffs, query_norm, sub);
    const std::span<const double> known(p.a.data(), static_cast<std::size_t>(t));
    const double full = WallFull(p, params);
    const double truncated =
        std::max(LinearPieces(known, params.gamma, t).value,
                 TruncatedWallFromSplit(known, p.z_norm, params));
    return std::abs(full - truncated) > kEscapeThreshold;
  });
  const double bound = std::pow(static_cast<double>(params.n), -7.0);
  return LemmaEstimate(std::string(kLemmaWallArgmaxEscape), escapes, trials, bound,
                       rng.seed(),
                       {{"family", "wall"},
                        {"epsilon", params.epsilon},
                        {"t", t},
                        {"k", params.k},
                        {"n", params.n},
                        {"gamma", params.gamma},
                        {"delta", params.delta},
                        {"beta", params.beta},
                        {"query_norm", query_norm},
                        {"fresh_only", fresh_only}});
}

LemmaEstimate EstimateArgmaxEscape(Family family, double epsilon, int t,
                                   std::uint64_t trials, const RngStream& rng,
                                   const EscapeOptions& options, int threads) {
  switch (family) {
    case Family::kNemYud: {
      NemYudParams p = NemYudParamsFor(epsilon);
      if (options.gamma_override) p.gamma = *options.gamma_override;
      return EstimateNemYudEscape(p, t, trials, rng, options.query_norm, threads,
                                  options.fresh_only);
    }
    case Family::kWall: {
      WallParams p = WallParamsFor(epsilon);
      if (options.gamma_override) p.gamma = *options.gamma_override;
      return EstimateWallEscape(p, t, trials, rng, options.query_norm, threads,
                                  options.fresh_only);
    }
    case Family::kMaxCoord:
      break;
  }
  throw std::invalid_argument("argmax escape needs family nemyud or wall");
}

std::string_view GuessCandidateName(GuessCandidate candidate) {
  switch (candidate) {
    case GuessCandidate::kBestGuess:
      return "best-guess";
    case GuessCandidate::kHedgedGuess:
      return "hedged-guess";
    case GuessCandidate::kRandomUnit:
      return "random-unit";
    case GuessCandidate::kFullKnowledge:
      return "full-knowledge";
    case GuessCandidate::kOrigin:
      return "origin";
  }
  return "unknown";
}

LemmaEstimate EstimateGuessSuccess(Family family, double epsilon,
                                   std::uint64_t trials, const RngStream& rng,
                                   GuessCandidate candidate, int threads) {
  RequireTrials(trials);
  int k = 0;
  std::int64_t n = 0;
  std::function<double(const Projections&)> value;
  NemYudParams nemyud;
  WallParams wall;
  if (family == Family::kNemYud) {
    nemyud = NemYudParamsFor(epsilon);
    k = nemyud.k;
    n = nemyud.n;
    value = [&nemyud](const Projections& p) {
      return NemYudPieces(p.a, p.norm, nemyud.k, nemyud.gamma, nemyud.k).value;
    };
  } else if (family == Family::kWall) {
    wall = WallParamsFor(epsilon);
    k = wall.k;
    n = wall.n;
    value = [&wall](const Projections& p) { return WallFull(p, wall); };
  } else {
    throw std::invalid_argument("guess estimator needs family nemyud or wall");
  }

  const double inv_sqrt_k = 1.0 / std::sqrt(static_cast<double>(k));
  Projections reference;
  reference.a.assign(k, -inv_sqrt_k);
  reference.norm = 1.0;
  const double threshold = value(reference) + epsilon;

  const std::uint64_t successes = CountEvents(trials, threads, [&](std::uint64_t i) {
    RngStream sub = rng.Substream(i);
    Projections p;
    p.a.assign(k, 0.0);
    p.norm = 1.0;
    switch (candidate) {
      case GuessCandidate::kBestGuess: {
        const double w = -1.0 / std::sqrt(static_cast<double>(k - 1));
        for (int j = 0; j < k - 1; ++j) p.a[j] = w;
        break;
      }
      case GuessCandidate::kHedgedGuess: {
        for (int j = 0; j < k - 1; ++j) p.a[j] = -inv_sqrt_k;
        const double h = SampleUnitVectorHead(n - k + 1, 1, sub)[0];
        p.a[k - 1] = inv_sqrt_k * h;
        p.rho = inv_sqrt_k * std::sqrt(std::max(0.0, 1.0 - h * h));
        break;
      }
      case GuessCandidate::kRandomUnit: {
        const std::vector<double> head = SampleUnitVectorHead(n, k, sub);
        double sq = 0.0;
        for (int j = 0; j < k; ++j) {
          p.a[j] = head[j];
          sq += head[j] * head[j];
        }
        p.rho = std::sqrt(std::max(0.0, 1.0 - sq));
        break;
      }
      case GuessCandidate::kFullKnowledge:
        p = reference;
        break;
      case GuessCandidate::kOrigin:
        p.norm = 0.0;
        break;
    }
    return value(p) <= threshold;
  });
  const double bound = 2.0 * std::exp(-32.0 * static_cast<double>(n - k + 1) *
                                      epsilon * epsilon);
  return LemmaEstimate(std::string(kLemmaGuess), successes, trials, bound, rng.seed(),
                       {{"family", std::string(FamilyName(family))},
                        {"epsilon", epsilon},
                        {"candidate", std::string(GuessCandidateName(candidate))},
                        {"k", k},
                        {"n", n},
                        {"reference_value", threshold - epsilon}});
}

double DisclosureAudit::mean_prefix_length() const { return Mean(prefix_lengths); }

double DisclosureAudit::mean_new_fixes() const { return Mean(new_fixes); }

double DisclosureAudit::new_fixes_sd() const {
  const std::size_t q = new_fixes.size();
  if (q < 2) return 0.0;
  const double mean = mean_new_fixes();
  double ss = 0.0;
  for (int v : new_fixes) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(q - 1));
}

DisclosureTracker::DisclosureTracker(const MaxCoordInstance& inst)
    : inst_(inst), fixed_(inst.dim(), false) {
  audit_.n = inst.dim();
}

int DisclosureTracker::Observe(const DenseVector& x) {
  const OracleAnswer answer = inst_.Query(x);
  const auto& prefix = std::get<PrefixDisclosure>(answer.disclosure).prefix;
  int fresh = 0;
  for (Eigen::Index i : prefix) {
    if (!fixed_[i]) {
      fixed_[i] = true;
      ++fresh;
    }
  }
  fixed_count_ += fresh;
  audit_.prefix_lengths.push_back(static_cast<int>(prefix.size()));
  audit_.new_fixes.push_back(fresh);
  audit_.fixed_after.push_back(fixed_count_);
  return fresh;
}

DisclosureAudit AuditDisclosure(const MaxCoordInstance& inst,
                                const std::vector<DenseVector>& queries) {
  DisclosureTracker tracker(inst);
  for (const DenseVector& x : queries) tracker.Observe(x);
  return tracker.audit();
}

DisclosureAudit AuditRandomQueries(const MaxCoordInstance& inst,
                                   std::uint64_t queries, const RngStream& rng) {
  RngStream local = rng;
  DisclosureTracker tracker(inst);
  for (std::uint64_t q = 0; q < queries; ++q) {
    tracker.Observe(SampleUnitVector(inst.dim(), local));
  }
  return tracker.audit();
}

double ReplayResult::sigma() const {
  const std::size_t q = audit.new_fixes.size();
  return q == 0 ? 0.0 : audit.new_fixes_sd() / std::sqrt(static_cast<double>(q));
}

ReplayResult AdversarialReplay(Eigen::Index n, std::uint64_t min_queries,
                               const RngStream& rng) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  RngStream local = rng;
  ReplayResult result;
  result.audit.n = n;
  double predicted = 0.0;
  const double epsilon = std::sqrt(0.9 / static_cast<double>(n));
  while (result.audit.new_fixes.size() < min_queries) {
    SignVector z(n);
    for (int& s : z) s = local.Coin() ? 1 : -1;
    const MaxCoordInstance inst(z, epsilon);
    DisclosureTracker tracker(inst);
    int known = 0;
    DenseVector x(n);
    while (known < n) {
      const int unknown = static_cast<int>(n) - known;
      predicted += 2.0 - std::ldexp(1.0, 1 - unknown);
      for (Eigen::Index i = 0; i < n; ++i) {
        if (tracker.fixed()[i]) {
          x[i] = -2.0 * z[i];
        } else {
          const double magnitude = 1.0 - local.Uniform();  // (0, 1]
          x[i] = local.Coin() ? magnitude : -magnitude;
        }
      }
      known += tracker.Observe(x);
    }
    const DisclosureAudit& a = tracker.audit();
    auto& out = result.audit;
    out.prefix_lengths.insert(out.prefix_lengths.end(), a.prefix_lengths.begin(),
                              a.prefix_lengths.end());
    out.new_fixes.insert(out.new_fixes.end(), a.new_fixes.begin(), a.new_fixes.end());
    out.fixed_after.insert(out.fixed_after.end(), a.fixed_after.begin(),
                           a.fixed_after.end());
    ++result.episodes;
  }
  result.predicted_mean = predicted / static_cast<double>(result.audit.new_fixes.size());
  return result;
}

bool DisclosureSummary::random_pass() const {
  return !random.new_fixes.empty() && random.mean_new_fixes() <= 2.05;
}

bool DisclosureSummary::replay_pass() const {
  return !replay.audit.new_fixes.empty() &&
         replay.audit.mean_new_fixes() <= 2.0 + 3.0 * replay.sigma();
}

nlohmann::json DisclosureSummary::ToJson() const {
  return {{"lemma_id", std::string(kLemmaDisclosure)},
          {"n", n},
          {"seed", seed},
          {"random",
           {{"queries", random.new_fixes.size()},
            {"mean_new_fixes", random.mean_new_fixes()},
            {"mean_prefix_length", random.mean_prefix_length()},
            {"total_fixed", random.total_fixed()},
            {"bound", 2.05},
            {"pass", random_pass()}}},
          {"adversarial",
           {{"queries", replay.audit.new_fixes.size()},
            {"episodes", replay.episodes},
            {"mean_new_fixes", replay.audit.mean_new_fixes()},
            {"predicted_mean", replay.predicted_mean},
            {"sigma", replay.sigma()},
            {"bound", 2.0 + 3.0 * replay.sigma()},
            {"pass", replay_pass()}}},
          {"pass", pass()}};
}

DisclosureSummary RunDisclosure(Eigen::Index n, std::uint64_t queries,
                                const RngStream& rng) {
  if (queries < 1) throw std::invalid_argument("queries must be at least 1");
  DisclosureSummary s;
  s.n = n;
  s.seed = rng.seed();
  RngStream setup = rng.Substream(0);
  SignVector z(n);
  for (int& v : z) v = setup.Coin() ? 1 : -1;
  const MaxCoordInstance inst(z, std::sqrt(0.9 / static_cast<double>(n)));
  s.random = AuditRandomQueries(inst, queries, rng.Substream(1));
  s.replay = AdversarialReplay(n, queries, rng.Substream(2));
  return s;
}

PropertyOracle MakePropertyOracle(const MaxCoordInstance& inst) {
  PropertyOracle o;
  o.name = "maxcoord";
  o.dim = inst.dim();
  o.value = [&inst](const DenseVector& x) { return inst.Value(x); };
  o.query = OracleFor(inst);
  o.lipschitz_bound = 1.0;
  o.homogeneous = true;
  o.unit_subgradients = true;
  return o;
}

PropertyOracle MakePropertyOracle(const NemYudInstance& inst) {
  PropertyOracle o;
  o.name = "nemyud";
  o.dim = inst.dim();
  o.value = [&inst](const DenseVector& x) { return inst.Value(x); };
  o.query = OracleFor(inst);
  o.lipschitz_bound = inst.LipschitzBound();
  o.homogeneous = true;
  return o;
}

PropertyOracle MakePropertyOracle(const WallInstance& inst) {
  PropertyOracle o;
  o.name = "wall";
  o.dim = inst.dim();
  o.value = [&inst](const DenseVector& x) { return inst.Value(x); };
  o.query = OracleFor(inst);
  o.lipschitz_bound = inst.LipschitzBound();
  o.convexity_tolerance = 1e-8;
  return o;
}

bool PropertyReport::pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.pass(); });
}

nlohmann::json PropertyReport::ToJson() const {
  nlohmann::json list = nlohmann::json::array();
  for (const CheckResult& c : checks) {
    list.push_back({{"name", c.name},
                    {"trials", c.trials},
                    {"violations", c.violations},
                    {"worst", c.worst},
                    {"pass", c.pass()}});
  }
  return {{"oracle", oracle}, {"checks", list}, {"pass", pass()}};
}

PropertyReport RunPropertySuite(const PropertyOracle& oracle, std::uint64_t trials,
                                const RngStream& rng, int threads) {
  RequireTrials(trials);
  if (oracle.dim < 1 || !oracle.value || !oracle.query) {
    throw std::invalid_argument("incomplete property oracle");
  }
  constexpr double kScales[] = {0.5, 2.0, 10.0};
  // Excess over the allowed bound per trial; positive means violation.
  struct Excess {
    double subgradient = 0.0;
    double convexity = 0.0;
    double lipschitz = 0.0;
    double homogeneity = 0.0;
  };
  std::vector<Excess> excess(trials);
  ParallelFor(trials, threads, [&](std::uint64_t i) {
    RngStream sub = rng.Substream(i);
    const DenseVector x = RandomBallPoint(oracle.dim, sub);
    const DenseVector y = RandomBallPoint(oracle.dim, sub);
    const FirstOrder fx = oracle.query(x);
    const double fy = oracle.value(y);
    const double fm = oracle.value(0.5 * (x + y));
    Excess& e = excess[i];
    e.subgradient = fx.value + fx.subgradient.dot(y - x) - fy - oracle.tolerance;
    e.convexity = fm - 0.5 * (fx.value + fy) - oracle.convexity_tolerance;
    const double g = fx.subgradient.norm();
    e.lipschitz = oracle.unit_subgradients ? std::abs(g - 1.0)
                                           : g - oracle.lipschitz_bound - 1e-9;
    if (oracle.homogeneous) {
      const double s = kScales[i % 3];
      const FirstOrder fs = oracle.query(s * x);
      const double dv = std::abs(fs.value - s * fx.value) - 1e-9 * s;
      const double dg = (fs.subgradient - fx.subgradient).cwiseAbs().maxCoeff() - 1e-9;
      e.homogeneity = std::max(dv, dg);
    }
  });

  auto summarize = [&](const char* name, double Excess::*field) {
    CheckResult c;
    c.name = name;
    c.trials = trials;
    c.worst = -std::numeric_limits<double>::infinity();
    for (const Excess& e : excess) {
      const double v = e.*field;
      c.worst = std::max(c.worst, v);
      if (v > 0.0) ++c.violations;
    }
    return c;
  };
  PropertyReport report;
  report.oracle = oracle.name;
  report.checks.push_back(summarize("subgradient-inequality", &Excess::subgradient));
  report.checks.push_back(summarize("convexity-midpoint", &Excess::convexity));
  report.checks.push_back(summarize("lipschitz", &Excess::lipschitz));
  if (oracle.homogeneous) {
    report.checks.push_back(summarize("homogeneity", &Excess::homogeneity));
  }
  return report;
}

}  // namespace arena
