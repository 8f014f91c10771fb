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

// Monte Carlo estimators for the probabilistic claims behind the lower
// bounds, the disclosure audit for MaxCoord, and generic property suites
// for first-order oracles.
//
// The escape and guess estimators never materialize the hidden tuple. Every
// quantity involved depends on x only through a_i = <v_i,x>, |x| and the
// residual norm, and for a fixed unit u in an m-dimensional complement the
// coefficients (<v_j,u>) of a fresh Haar frame are distributed like the
// leading coordinates of a Haar unit vector in R^m (SampleUnitVectorHead).

#ifndef ARENA_VERIFY_HPP_
#define ARENA_VERIFY_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arena/core.hpp"
#include "arena/instances.hpp"
#include "arena/optimize.hpp"
#include "arena/wall.hpp"
#include "json.hpp"

namespace arena {

inline constexpr std::string_view kLemmaConcentration = "concentration";
inline constexpr std::string_view kLemmaArgmaxEscape = "argmax-escape";
inline constexpr std::string_view kLemmaWallArgmaxEscape = "wall-argmax-escape";
inline constexpr std::string_view kLemmaGuess = "guess";
inline constexpr std::string_view kLemmaDisclosure = "disclosure";

// Runs fn(i) for i in [0, count) on `threads` workers (1 = inline). The
// first exception thrown by any worker is rethrown.
void ParallelFor(std::uint64_t count, int threads,
                 const std::function<void(std::uint64_t)>& fn);

// Number of i in [0, trials) with event(i) true.
std::uint64_t CountEvents(std::uint64_t trials, int threads,
                          const std::function<bool(std::uint64_t)>& event);

// Binomial pass rule: p_hat < bound + 3 sqrt(b(1-b)/T) + 1/T with
// b = clamp(bound, 0, 1). The comparison is strict so a vanishing bound
// tolerates no observed events at all.
double BinomialSlack(double bound, std::uint64_t trials);
bool BinomialPass(std::uint64_t successes, std::uint64_t trials, double bound);

class LemmaEstimate {
 public:
  LemmaEstimate(std::string lemma_id, std::uint64_t successes,
                std::uint64_t trials, double theoretical_bound,
                std::uint64_t seed, nlohmann::json parameters = nlohmann::json::object());

  const std::string& lemma_id() const { return lemma_id_; }
  std::uint64_t successes() const { return successes_; }
  std::uint64_t trials() const { return trials_; }
  double empirical_probability() const;
  double theoretical_bound() const { return theoretical_bound_; }
  double slack() const { return BinomialSlack(theoretical_bound_, trials_); }
  std::uint64_t seed() const { return seed_; }
  bool pass() const { return BinomialPass(successes_, trials_, theoretical_bound_); }
  const nlohmann::json& parameters() const { return parameters_; }

  nlohmann::json ToJson() const;

 private:
  std::string lemma_id_;
  std::uint64_t successes_;
  std::uint64_t trials_;
  double theoretical_bound_;
  std::uint64_t seed_;
  nlohmann::json parameters_;
};

// A lower-bound sanity check (event rate must reach `threshold`).
struct RateCheck {
  std::string id;
  std::uint64_t events = 0;
  std::uint64_t trials = 0;
  double threshold = 0.0;

  double rate() const;
  bool pass() const { return rate() >= threshold; }
  nlohmann::json ToJson() const;
};

// Pr(|<e_1, v>| >= c) for Haar v, bound 2 exp(-n c^2 / 2). `full_vectors`
// samples all n coordinates instead of the reduced head sampler.
LemmaEstimate EstimateConcentration(std::int64_t n, double c, std::uint64_t trials,
                                    const RngStream& rng, int threads = 1,
                                    bool full_vectors = false);

struct EscapeOptions {
  std::optional<double> gamma_override;  // 0 gives the detector stress mode
  double query_norm = 1.0;
  // Put all of x on the fresh direction. With gamma = 0 the pieces t..k are
  // then exchangeable, so escapes happen with probability (k-t)/(k-t+1).
  bool fresh_only = false;
};

// Frequency of f(x) != f^(t)(x) (beyond 1e-9) with v_1..v_{t-1} fixed, x a
// random unit vector in span(v_1..v_{t-1}) + one fresh direction scaled to
// query_norm, and v_t..v_k redrawn per trial. 1 <= t <= k (1-based).
// Bound n^-7. Family must be nemyud or wall.
LemmaEstimate EstimateArgmaxEscape(Family family, double epsilon, int t,
                                   std::uint64_t trials, const RngStream& rng,
                                   const EscapeOptions& options = {},
                                   int threads = 1);

// The same estimator on explicit parameters (small or stress instances).
LemmaEstimate EstimateNemYudEscape(const NemYudParams& params, int t,
                                   std::uint64_t trials, const RngStream& rng,
                                   double query_norm = 1.0, int threads = 1,
                                   bool fresh_only = false);
LemmaEstimate EstimateWallEscape(const WallParams& params, int t,
                                 std::uint64_t trials, const RngStream& rng,
                                 double query_norm = 1.0, int threads = 1,
                                 bool fresh_only = false);

enum class GuessCandidate {
  kBestGuess,      // -sum_{i<k} v_i / sqrt(k-1), nothing along v_k
  kHedgedGuess,    // -sum_{i<k} v_i / sqrt(k) plus a random unit / sqrt(k)
  kRandomUnit,     // Haar unit vector
  kFullKnowledge,  // x~ = -sum_i v_i / sqrt(k)
  kOrigin,
};

std::string_view GuessCandidateName(GuessCandidate candidate);

// Frequency of f(x) <= f(x~) + eps with v_1..v_{k-1} known and v_k redrawn
// per trial; bound 2 exp(-32 (n-k+1) eps^2). Since f(x~) >= min f this
// event contains the true eps-optimality event.
LemmaEstimate EstimateGuessSuccess(Family family, double epsilon,
                                   std::uint64_t trials, const RngStream& rng,
                                   GuessCandidate candidate, int threads = 1);

struct DisclosureAudit {
  Eigen::Index n = 0;
  std::vector<int> prefix_lengths;  // |revealed prefix| per query
  std::vector<int> new_fixes;       // prefix entries not fixed before
  std::vector<int> fixed_after;     // |I_t| after each query

  double mean_prefix_length() const;
  double mean_new_fixes() const;
  // Sample standard deviation of new_fixes.
  double new_fixes_sd() const;
  int total_fixed() const { return fixed_after.empty() ? 0 : fixed_after.back(); }
};

// Replays MaxCoord queries and tracks the fixed index set.
class DisclosureTracker {
 public:
  explicit DisclosureTracker(const MaxCoordInstance& inst);

  // Returns the number of newly fixed indices.
  int Observe(const DenseVector& x);
  const std::vector<bool>& fixed() const { return fixed_; }
  const DisclosureAudit& audit() const { return audit_; }

 private:
  const MaxCoordInstance& inst_;
  std::vector<bool> fixed_;
  int fixed_count_ = 0;
  DisclosureAudit audit_;
};

DisclosureAudit AuditDisclosure(const MaxCoordInstance& inst,
                                const std::vector<DenseVector>& queries);

// Haar unit queries.
DisclosureAudit AuditRandomQueries(const MaxCoordInstance& inst,
                                   std::uint64_t queries, const RngStream& rng);

struct ReplayResult {
  DisclosureAudit audit;        // all episodes concatenated
  double predicted_mean = 0.0;  // mean over queries of 2 - 2^(1-r), r unknown
  std::uint64_t episodes = 0;
  double sigma() const;         // sd / sqrt(queries)
};

// Each query puts every fixed index first with the sign that disagrees with
// z (no new information), then random signs and magnitudes below on the
// unknown indices. Episodes on fresh z run until every index is fixed and
// repeat until at least min_queries queries were made.
ReplayResult AdversarialReplay(Eigen::Index n, std::uint64_t min_queries,
                               const RngStream& rng);

// Bundle for a disclosure run: mean new fixes over random queries must stay
// at or below 2.05; the adversarial mean at or below 2 + 3 sigma. The mean
// prefix length is reported alongside.
struct DisclosureSummary {
  Eigen::Index n = 0;
  std::uint64_t seed = 0;
  DisclosureAudit random;
  ReplayResult replay;
  bool random_pass() const;
  bool replay_pass() const;
  bool pass() const { return random_pass() && replay_pass(); }
  nlohmann::json ToJson() const;
};

DisclosureSummary RunDisclosure(Eigen::Index n, std::uint64_t queries,
                                const RngStream& rng);

struct PropertyOracle {
  std::string name;
  Eigen::Index dim = 0;
  std::function<double(const DenseVector&)> value;
  Oracle query;
  double lipschitz_bound = 1.0;
  bool homogeneous = false;
  bool unit_subgradients = false;  // every subgradient has norm exactly 1
  double tolerance = 1e-9;         // subgradient inequality
  double convexity_tolerance = 1e-9;
};

PropertyOracle MakePropertyOracle(const MaxCoordInstance& inst);
PropertyOracle MakePropertyOracle(const NemYudInstance& inst);
PropertyOracle MakePropertyOracle(const WallInstance& inst);

struct CheckResult {
  std::string name;
  std::uint64_t trials = 0;
  std::uint64_t violations = 0;
  double worst = 0.0;  // largest observed excess over the allowed bound
  bool pass() const { return violations == 0; }
};

struct PropertyReport {
  std::string oracle;
  std::vector<CheckResult> checks;
  bool pass() const;
  nlohmann::json ToJson() const;
};

// Subgradient inequality, midpoint convexity, Lipschitz bound and (when
// flagged) positive homogeneity, each on `trials` random points of the
// unit ball.
PropertyReport RunPropertySuite(const PropertyOracle& oracle, std::uint64_t trials,
                                const RngStream& rng, int threads = 1);

}  // namespace arena

#endif  // ARENA_VERIFY_HPP_
