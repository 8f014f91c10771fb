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

#include <atomic>
#include <cmath>

#include <gtest/gtest.h>

namespace arena {
namespace {

TEST(Binomial, VanishingBoundNeedsZeroEvents) {
  EXPECT_TRUE(BinomialPass(0, 10000, 1e-40));
  EXPECT_FALSE(BinomialPass(1, 10000, 1e-40));
}

TEST(Binomial, SlackFormula) {
  EXPECT_NEAR(BinomialSlack(0.25, 100), 3.0 * std::sqrt(0.25 * 0.75 / 100) + 0.01, 1e-15);
  EXPECT_NEAR(BinomialSlack(1.7, 100), 0.01, 1e-15);
  EXPECT_TRUE(BinomialPass(100, 100, 1.7));
  EXPECT_FALSE(BinomialPass(0, 0, 0.5));
}

TEST(ParallelFor, CoversEveryIndexOnce) {
  std::vector<std::atomic<int>> seen(1000);
  ParallelFor(1000, 4, [&](std::uint64_t i) { seen[i]++; });
  for (const auto& s : seen) EXPECT_EQ(s.load(), 1);
}

TEST(ParallelFor, RethrowsWorkerErrors) {
  EXPECT_THROW(ParallelFor(100, 3,
                           [](std::uint64_t i) {
                             if (i == 57) throw std::runtime_error("x");
                           }),
               std::runtime_error);
}

TEST(Concentration, DegenerateCases) {
  const RngStream rng(1);
  const LemmaEstimate one = EstimateConcentration(1, 0.5, 1000, rng);
  EXPECT_EQ(one.empirical_probability(), 1.0);
  EXPECT_NEAR(one.theoretical_bound(), 2.0 * std::exp(-0.125), 1e-15);
  EXPECT_TRUE(one.pass());
  const LemmaEstimate zero = EstimateConcentration(1000, 0.0, 1000, rng);
  EXPECT_EQ(zero.empirical_probability(), 1.0);
  EXPECT_EQ(zero.theoretical_bound(), 2.0);
  EXPECT_TRUE(zero.pass());
}

TEST(Concentration, TenthAtThousand) {
  const LemmaEstimate e = EstimateConcentration(1000, 0.1, 100000, RngStream(2));
  EXPECT_NEAR(e.theoretical_bound(), 2.0 * std::exp(-5.0), 1e-15);
  EXPECT_TRUE(e.pass());
  // Exact tail of |<e1,v>| >= 0.1 at n = 1000 is about 1.5e-3.
  EXPECT_NEAR(e.empirical_probability(), 1.5e-3, 6e-4);
}

TEST(Concentration, ReducedSamplerMatchesFullVectors) {
  const LemmaEstimate head = EstimateConcentration(1000, 0.05, 20000, RngStream(3));
  const LemmaEstimate full = EstimateConcentration(1000, 0.05, 20000, RngStream(4), 1, true);
  const double p = full.empirical_probability();
  EXPECT_NEAR(head.empirical_probability(), p, 5.0 * std::sqrt(2.0 * p * (1 - p) / 20000));
}

TEST(Concentration, ReproducibleAcrossThreadCounts) {
  const RngStream rng(5, 9);
  const LemmaEstimate a = EstimateConcentration(1000, 0.05, 5000, rng, 1);
  const LemmaEstimate b = EstimateConcentration(1000, 0.05, 5000, rng, 3);
  EXPECT_EQ(a.successes(), b.successes());
  EXPECT_EQ(a.empirical_probability(), b.empirical_probability());
}

TEST(Escape, NemYudFiveHundredthsNeverEscapes) {
  const NemYudParams p = NemYudParamsFor(0.05);
  for (int t : {1, 2}) {
    const LemmaEstimate e = EstimateNemYudEscape(p, t, 10000, RngStream(6, t));
    EXPECT_EQ(e.successes(), 0u);
    EXPECT_TRUE(e.pass());
    EXPECT_EQ(e.lemma_id(), "argmax-escape");
  }
}

TEST(Escape, FullTruncationCannotEscape) {
  const NemYudParams p = NemYudParamsFor(0.05);
  EXPECT_EQ(EstimateNemYudEscape(p, p.k, 2000, RngStream(7)).successes(), 0u);
  const WallParams w = WallParamsFor(0.05);
  EXPECT_EQ(EstimateWallEscape(w, w.k, 300, RngStream(7)).successes(), 0u);
}

TEST(Escape, WallFiveHundredthsNeverEscapes) {
  const WallParams p = WallParamsFor(0.05);
  for (double r : {1.0, p.delta / 2.0}) {
    const LemmaEstimate e = EstimateWallEscape(p, 1, 1500, RngStream(8), r);
    EXPECT_EQ(e.successes(), 0u) << r;
    EXPECT_EQ(e.lemma_id(), "wall-argmax-escape");
  }
}

// With gamma = 0 and x on the fresh direction the k - t + 1 fresh pieces are
// exchangeable; at t = 1 the first one wins with probability 1/k.
TEST(Escape, StressModeDetectsEscapes) {
  NemYudParams p = NemYudParamsFor(0.05);
  p.gamma = 0.0;
  const LemmaEstimate e = EstimateNemYudEscape(p, 1, 4000, RngStream(9), 1.0, 1, true);
  EXPECT_GE(e.empirical_probability(), 1.0 / p.k);
  EXPECT_NEAR(e.empirical_probability(), 0.75, 0.03);

  WallParams w = WallParamsFor(0.05);
  w.gamma = 0.0;
  const LemmaEstimate f =
      EstimateWallEscape(w, 1, 1000, RngStream(10), w.delta / 4.0, 1, true);
  EXPECT_GE(f.empirical_probability(), 1.0 / w.k);

  EscapeOptions opts;
  opts.gamma_override = 0.0;
  opts.fresh_only = true;
  const LemmaEstimate g = EstimateArgmaxEscape(Family::kNemYud, 0.05, 1, 4000, RngStream(9), opts);
  EXPECT_EQ(g.successes(), e.successes());
  EXPECT_THROW(EstimateArgmaxEscape(Family::kMaxCoord, 0.05, 1, 10, RngStream(9)),
               std::invalid_argument);
}

TEST(Guess, NemYudCandidates) {
  const RngStream rng(11);
  EXPECT_EQ(EstimateGuessSuccess(Family::kNemYud, 0.05, 10000, rng, GuessCandidate::kBestGuess)
                .successes(),
            0u);
  EXPECT_EQ(EstimateGuessSuccess(Family::kNemYud, 0.05, 2000, rng, GuessCandidate::kHedgedGuess)
                .successes(),
            0u);
  EXPECT_EQ(EstimateGuessSuccess(Family::kNemYud, 0.05, 2000, rng, GuessCandidate::kOrigin)
                .successes(),
            0u);
  const LemmaEstimate full =
      EstimateGuessSuccess(Family::kNemYud, 0.05, 2000, rng, GuessCandidate::kFullKnowledge);
  EXPECT_EQ(full.empirical_probability(), 1.0);
  EXPECT_FALSE(full.pass());  // a sanity rate, not a bound check
}

TEST(Guess, WallCandidates) {
  const RngStream rng(12);
  EXPECT_EQ(EstimateGuessSuccess(Family::kWall, 0.05, 1000, rng, GuessCandidate::kBestGuess)
                .successes(),
            0u);
  EXPECT_EQ(EstimateGuessSuccess(Family::kWall, 0.05, 500, rng, GuessCandidate::kFullKnowledge)
                .empirical_probability(),
            1.0);
  EXPECT_THROW(EstimateGuessSuccess(Family::kMaxCoord, 0.05, 10, rng, GuessCandidate::kOrigin),
               std::invalid_argument);
}

TEST(Disclosure, ZeroQueriesRevealPrefixUnderTieOrder) {
  const MaxCoordInstance inst({-1, -1, 1, -1, 1}, 0.4);
  const std::vector<DenseVector> queries(5, DenseVector::Zero(5));
  const DisclosureAudit a = AuditDisclosure(inst, queries);
  ASSERT_EQ(a.new_fixes.size(), 5u);
  EXPECT_EQ(a.prefix_lengths[0], 3);
  EXPECT_EQ(a.new_fixes[0], 3);
  for (std::size_t i = 1; i < 5; ++i) EXPECT_EQ(a.new_fixes[i], 0);
  EXPECT_LE(a.total_fixed(), 5);
}

TEST(Disclosure, RandomQueriesPrefixMeanAtEight) {
  RngStream rng(13);
  SignVector z(8);
  for (int& s : z) s = rng.Coin() ? 1 : -1;
  const MaxCoordInstance inst(z, 0.3);
  const DisclosureAudit a = AuditRandomQueries(inst, 100000, RngStream(14));
  EXPECT_LE(a.mean_prefix_length(), 2.05);
  // sum_{j<8} j 2^-j + 8 2^-7 = 2 - 2^-7.
  EXPECT_NEAR(a.mean_prefix_length(), 2.0 - std::ldexp(1.0, -7), 0.02);
}

TEST(Disclosure, RandomQueriesAtSixtyFour) {
  const DisclosureSummary s = RunDisclosure(64, 100000, RngStream(15));
  EXPECT_LE(s.random.mean_new_fixes(), 2.05);
  EXPECT_TRUE(s.random_pass());
  EXPECT_LE(s.random.total_fixed(), 64);
}

// With r unknown indices, fresh random signs reveal min(Geom(1/2), r)
// indices, mean 2 - 2^(1-r).
TEST(Disclosure, AdversarialReplayMatchesGeometricSeries) {
  const ReplayResult r = AdversarialReplay(64, 50000, RngStream(16));
  EXPECT_GE(r.audit.new_fixes.size(), 50000u);
  EXPECT_NEAR(r.audit.mean_new_fixes(), r.predicted_mean, 4.0 * r.sigma());
  EXPECT_LE(r.audit.mean_new_fixes(), 2.0 + 3.0 * r.sigma());
  for (int f : r.audit.new_fixes) EXPECT_GE(f, 1);
}

TEST(Reports, JsonFields) {
  const LemmaEstimate e = EstimateConcentration(100, 0.2, 100, RngStream(17));
  const nlohmann::json j = e.ToJson();
  for (const char* key : {"lemma_id", "successes", "trials", "empirical_probability",
                          "theoretical_bound", "slack", "seed", "pass", "parameters"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["lemma_id"], "concentration");
  RateCheck r{"x", 3, 4, 0.5};
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(r.ToJson()["rate"], 0.75);
  EXPECT_THROW(LemmaEstimate("x", 5, 4, 0.1, 0), std::invalid_argument);
}

}  // namespace
}  // namespace arena
