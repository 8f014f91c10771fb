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

#include "arena/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <variant>

#include "CLI11.hpp"
#include "arena/groupquery.hpp"
#include "arena/optimize.hpp"
#include "arena/verify.hpp"
#include "arena/wall.hpp"

namespace arena {
namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultTrials = 10000;
constexpr std::int64_t kDefaultReduceN = 8;
constexpr std::int64_t kDefaultConcentrationN = 1000;
constexpr std::int64_t kDefaultDisclosureN = 64;
constexpr std::int64_t kDefaultPropertyN = 16;
constexpr double kGapSlack = 1e-9;

const std::set<std::string>& KnownLemmas() {
  static const std::set<std::string> lemmas = {
      "all", "concentration", "argmax-escape", "wall-argmax-escape",
      "guess", "disclosure", "properties"};
  return lemmas;
}

void CheckEpsilon(double eps) {
  if (!std::isfinite(eps) || eps <= 0.0 || eps >= 0.95) {
    throw UsageError("epsilon must lie in (0, 0.95)");
  }
}

// FNV-1a; gives every sub-experiment its own deterministic stream.
std::uint64_t StreamFor(std::string_view label) {
  std::uint64_t h = 1469598103934665603ull;
  for (char ch : label) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ull;
  }
  return h;
}

std::string UtcTimestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json Envelope(const ExperimentConfig& config) {
  json doc;
  doc["format"] = 1;
  doc["tool"] = "subgrad-arena";
  doc["version"] = std::string(kVersion);
  doc["command"] = std::string(CommandName(config.command));
  doc["config"] = config.ToJson();
  return doc;
}

std::string CsvField(double value) { return FormatReal(value); }

// Writes the report text to the configured destination.
class ReportSink {
 public:
  ReportSink(const ExperimentConfig& config, std::ostream& out)
      : config_(config), out_(out), start_(std::chrono::steady_clock::now()) {}

  void Write(const std::string& name_suffix, const std::string& text) {
    if (config_.output_path.empty()) {
      out_ << text;
      return;
    }
    const std::string path = config_.output_path + name_suffix;
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    file << text;
    if (!file) throw std::runtime_error("write failed: " + path);
    written_.push_back(path);
  }

  void WriteMeta(bool pass) {
    if (config_.output_path.empty()) return;
    const double elapsed = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - start_).count();
    json meta;
    meta["created_utc"] = UtcTimestamp();
    meta["elapsed_seconds"] = elapsed;
    meta["files"] = written_;
    meta["pass"] = pass;
    meta["version"] = std::string(kVersion);
    std::ofstream file(config_.output_path + ".meta.json", std::ios::binary);
    if (!file) throw std::runtime_error("cannot write metadata sidecar");
    file << meta.dump(2) << "\n";
  }

 private:
  const ExperimentConfig& config_;
  std::ostream& out_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::string> written_;
};

// ---------------------------------------------------------------- instances

using AnyInstance = std::variant<MaxCoordInstance, NemYudInstance, WallInstance>;

NemYudParams NemYudParamsWith(double eps, std::optional<std::int64_t> n) {
  NemYudParams params = NemYudParamsFor(eps);
  if (n) params.n = *n;
  return params;
}

WallParams WallParamsWith(double eps, std::optional<std::int64_t> n) {
  WallParams params = WallParamsFor(eps);
  if (n) params.n = *n;
  return params;
}

AnyInstance BuildInstance(const ExperimentConfig& config, double eps) {
  switch (*config.family) {
    case Family::kMaxCoord:
      if (config.n) throw UsageError("--n is fixed by epsilon for maxcoord");
      return MaxCoordInstance::Generate(eps, config.seed);
    case Family::kNemYud:
      return NemYudInstance::Generate(NemYudParamsWith(eps, config.n), config.seed);
    case Family::kWall:
      return WallInstance::Generate(WallParamsWith(eps, config.n), config.seed);
  }
  throw std::logic_error("unknown family");
}

struct GdRun {
  Family family = Family::kMaxCoord;
  double epsilon = 0.0;
  Eigen::Index n = 0;
  double lipschitz = 1.0;
  double reference = 0.0;
  SolveResult result;
  double final_value = 0.0;
  std::int64_t expected_queries = 0;

  double gap() const { return final_value - reference; }
  bool pass() const {
    return gap() <= epsilon + kGapSlack && result.trace.query_count == expected_queries;
  }
};

GdRun RunGd(const ExperimentConfig& config, double eps, bool store) {
  const AnyInstance inst = BuildInstance(config, eps);
  GdRun run;
  run.family = *config.family;
  run.epsilon = eps;
  std::visit(
      [&](const auto& concrete) {
        using T = std::decay_t<decltype(concrete)>;
        run.n = concrete.dim();
        if constexpr (std::is_same_v<T, MaxCoordInstance>) {
          run.lipschitz = 1.0;
          run.reference = concrete.OptimalValue();
        } else {
          run.lipschitz = concrete.LipschitzBound();
          run.reference = concrete.Value(concrete.ReferencePoint());
        }
        const Rescaling scaling(run.lipschitz, 1.0, eps);
        run.result = SolveToAccuracy(OracleFor(concrete), concrete.dim(), scaling, store);
        run.final_value = concrete.Value(run.result.output);
        run.expected_queries = IterationsFor(scaling.normalized_epsilon());
      },
      inst);
  return run;
}

json GdSummaryJson(const GdRun& run) {
  json row;
  row["family"] = std::string(FamilyName(run.family));
  row["epsilon"] = run.epsilon;
  row["n"] = run.n;
  row["lipschitz"] = run.lipschitz;
  row["normalized_epsilon"] = run.epsilon / run.lipschitz;
  row["eta"] = run.result.eta;
  row["expected_queries"] = run.expected_queries;
  row["query_count"] = run.result.trace.query_count;
  row["final_value"] = run.final_value;
  row["reference_value"] = run.reference;
  row["gap"] = run.gap();
  row["pass"] = run.pass();
  return row;
}

const char* kSummaryHeader =
    "family,epsilon,n,lipschitz,expected_queries,query_count,final_value,"
    "reference_value,gap,pass\n";

std::string GdSummaryCsvRow(const GdRun& run) {
  std::ostringstream os;
  os << FamilyName(run.family) << ',' << CsvField(run.epsilon) << ',' << run.n << ','
     << CsvField(run.lipschitz) << ',' << run.expected_queries << ','
     << run.result.trace.query_count << ',' << CsvField(run.final_value) << ','
     << CsvField(run.reference) << ',' << CsvField(run.gap()) << ','
     << (run.pass() ? "true" : "false") << '\n';
  return os.str();
}

// ---------------------------------------------------------------- commands

RunOutcome RunGen(const ExperimentConfig& config, ReportSink& sink) {
  if (config.format != ReportFormat::kJson) {
    throw UsageError("gen only writes json");
  }
  const AnyInstance inst = BuildInstance(config, *config.epsilon);
  std::ostringstream body;
  std::visit([&](const auto& concrete) { WriteInstanceJson(body, concrete); }, inst);
  std::string instance_text = body.str();
  while (!instance_text.empty() && instance_text.back() == '\n') instance_text.pop_back();

  std::string head = Envelope(config).dump();
  head.pop_back();  // closing brace
  sink.Write("", head + ",\"instance\":" + instance_text + "}\n");
  sink.WriteMeta(true);
  return {};
}

RunOutcome RunGdCommand(const ExperimentConfig& config, ReportSink& sink) {
  const bool csv = config.format == ReportFormat::kCsv;
  const GdRun run = RunGd(config, *config.epsilon, /*store=*/false);
  const Rescaling scaling(run.lipschitz, 1.0, run.epsilon);
  const std::vector<TraceRow> rows = TraceRows(run.result.trace, scaling, run.reference);
  RunOutcome outcome;
  if (!run.pass()) {
    outcome.exit_code = kExitFail;
    outcome.failed.push_back("gd");
  }
  if (csv) {
    std::ostringstream trace;
    WriteTraceCsv(trace, rows);
    sink.Write("", trace.str());
    if (!config.output_path.empty()) {
      std::ostringstream summary;
      summary << kSummaryHeader << GdSummaryCsvRow(run);
      sink.Write(".summary.csv", summary.str());
      std::string cfg = Envelope(config).dump(2);
      sink.Write(".config.json", cfg + "\n");
    }
  } else {
    json doc = Envelope(config);
    doc["result"] = GdSummaryJson(run);
    json trace = json::array();
    for (const TraceRow& row : rows) {
      json r;
      r["t"] = row.t;
      r["value"] = row.value;
      r["gap"] = row.gap ? json(*row.gap) : json(nullptr);
      r["norm"] = row.norm;
      trace.push_back(std::move(r));
    }
    doc["trace"] = std::move(trace);
    doc["pass"] = run.pass();
    sink.Write("", doc.dump(2) + "\n");
  }
  sink.WriteMeta(outcome.exit_code == kExitPass);
  return outcome;
}

RunOutcome RunSweep(const ExperimentConfig& config, ReportSink& sink) {
  const auto& eps_list = config.epsilons;
  std::vector<std::optional<GdRun>> runs(eps_list.size());
  std::vector<std::string> errors(eps_list.size());
  ParallelFor(eps_list.size(), config.threads, [&](std::uint64_t i) {
    try {
      runs[i] = RunGd(config, eps_list[i], /*store=*/false);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  RunOutcome outcome;
  json rows = json::array();
  std::ostringstream csv;
  csv << "family,epsilon,n,lipschitz,expected_queries,query_count,final_value,"
         "reference_value,gap,pass,error\n";
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    const std::string id = "sweep/" + FormatReal(eps_list[i]);
    if (!runs[i]) {
      outcome.failed.push_back(id);
      json row;
      row["family"] = std::string(FamilyName(*config.family));
      row["epsilon"] = eps_list[i];
      row["error"] = errors[i];
      row["pass"] = false;
      rows.push_back(row);
      csv << FamilyName(*config.family) << ',' << CsvField(eps_list[i])
          << ",,,,,,,,false,\"" << errors[i] << "\"\n";
      continue;
    }
    const GdRun& run = *runs[i];
    if (!run.pass()) outcome.failed.push_back(id);
    rows.push_back(GdSummaryJson(run));
    std::string line = GdSummaryCsvRow(run);
    line.pop_back();
    csv << line << ",\n";
  }
  if (!outcome.failed.empty()) outcome.exit_code = kExitFail;
  if (config.format == ReportFormat::kCsv) {
    sink.Write("", csv.str());
    if (!config.output_path.empty()) {
      sink.Write(".config.json", Envelope(config).dump(2) + "\n");
    }
  } else {
    json doc = Envelope(config);
    doc["rows"] = std::move(rows);
    doc["pass"] = outcome.failed.empty();
    sink.Write("", doc.dump(2) + "\n");
  }
  sink.WriteMeta(outcome.failed.empty());
  return outcome;
}

RunOutcome RunReduce(const ExperimentConfig& config, ReportSink& sink) {
  const int n = static_cast<int>(*config.n);
  const ExhaustiveReport report = ExhaustiveOrCheck(n);
  RunOutcome outcome;
  if (!report.pass) {
    outcome.exit_code = kExitFail;
    outcome.failed.push_back("reduce");
  }
  if (config.format == ReportFormat::kCsv) {
    std::ostringstream csv;
    csv << "n,instances,or_checks,or_mismatches,learn_failures,max_queries,pass\n"
        << report.n << ',' << report.instances << ',' << report.or_checks << ','
        << report.or_mismatches << ',' << report.learn_failures << ','
        << report.max_queries << ',' << (report.pass ? "true" : "false") << '\n';
    sink.Write("", csv.str());
    if (!config.output_path.empty()) {
      sink.Write(".config.json", Envelope(config).dump(2) + "\n");
    }
  } else {
    json doc = Envelope(config);
    json r;
    r["n"] = report.n;
    r["instances"] = report.instances;
    r["or_checks"] = report.or_checks;
    r["or_mismatches"] = report.or_mismatches;
    r["learn_failures"] = report.learn_failures;
    r["max_queries"] = report.max_queries;
    r["pass"] = report.pass;
    doc["result"] = r;
    doc["pass"] = report.pass;
    sink.Write("", doc.dump(2) + "\n");
  }
  sink.WriteMeta(report.pass);
  return outcome;
}

// ---------------------------------------------------------------- verify

class VerifyReport {
 public:
  void Add(LemmaEstimate estimate) {
    if (!estimate.pass()) failed_.push_back(estimate.lemma_id() + Detail(estimate.parameters()));
    estimates_.push_back(std::move(estimate));
  }
  void Add(RateCheck check) {
    if (!check.pass()) failed_.push_back(check.id);
    rates_.push_back(std::move(check));
  }
  void Add(DisclosureSummary summary) {
    if (!summary.random_pass()) failed_.push_back("disclosure/random");
    if (!summary.replay_pass()) failed_.push_back("disclosure/adversarial");
    disclosures_.push_back(std::move(summary));
  }
  void Add(PropertyReport report) {
    for (const CheckResult& check : report.checks) {
      if (!check.pass()) failed_.push_back("properties/" + report.oracle + "/" + check.name);
    }
    properties_.push_back(std::move(report));
  }

  const std::vector<std::string>& failed() const { return failed_; }

  json ToJson() const {
    json doc;
    doc["estimates"] = json::array();
    for (const auto& e : estimates_) doc["estimates"].push_back(e.ToJson());
    doc["rate_checks"] = json::array();
    for (const auto& r : rates_) doc["rate_checks"].push_back(r.ToJson());
    doc["disclosure"] = json::array();
    for (const auto& d : disclosures_) doc["disclosure"].push_back(d.ToJson());
    doc["properties"] = json::array();
    for (const auto& p : properties_) doc["properties"].push_back(p.ToJson());
    doc["failed"] = failed_;
    doc["pass"] = failed_.empty();
    return doc;
  }

  std::string ToCsv() const {
    std::ostringstream os;
    os << "kind,id,detail,events,trials,statistic,bound,pass\n";
    auto flag = [](bool b) { return b ? "true" : "false"; };
    for (const auto& e : estimates_) {
      os << "estimate," << e.lemma_id() << ',' << Detail(e.parameters()).substr(1) << ','
         << e.successes() << ',' << e.trials() << ',' << CsvField(e.empirical_probability())
         << ',' << CsvField(e.theoretical_bound()) << ',' << flag(e.pass()) << '\n';
    }
    for (const auto& r : rates_) {
      os << "rate," << r.id << ",," << r.events << ',' << r.trials << ','
         << CsvField(r.rate()) << ',' << CsvField(r.threshold) << ',' << flag(r.pass())
         << '\n';
    }
    for (const auto& d : disclosures_) {
      const auto& rnd = d.random;
      os << "disclosure,disclosure,random n=" << d.n << ','
         << std::accumulate(rnd.new_fixes.begin(), rnd.new_fixes.end(), std::int64_t{0})
         << ',' << rnd.new_fixes.size() << ',' << CsvField(rnd.mean_new_fixes()) << ','
         << CsvField(2.05) << ',' << flag(d.random_pass()) << '\n';
      const auto& rep = d.replay.audit;
      os << "disclosure,disclosure,adversarial n=" << d.n << ','
         << std::accumulate(rep.new_fixes.begin(), rep.new_fixes.end(), std::int64_t{0})
         << ',' << rep.new_fixes.size() << ',' << CsvField(rep.mean_new_fixes()) << ','
         << CsvField(2.0 + 3.0 * d.replay.sigma()) << ',' << flag(d.replay_pass()) << '\n';
    }
    for (const auto& p : properties_) {
      for (const auto& c : p.checks) {
        os << "property," << p.oracle << ',' << c.name << ',' << c.violations << ','
           << c.trials << ',' << CsvField(c.worst) << ',' << CsvField(0.0) << ','
           << flag(c.pass()) << '\n';
      }
    }
    return os.str();
  }

 private:
  // "/key=value;key=value" from a flat parameter object.
  static std::string Detail(const json& params) {
    std::string out;
    for (auto it = params.begin(); it != params.end(); ++it) {
      out += out.empty() ? "/" : ";";
      out += it.key() + "=";
      out += it->is_string() ? it->get<std::string>() : it->dump();
    }
    return out.empty() ? "/" : out;
  }

  std::vector<LemmaEstimate> estimates_;
  std::vector<RateCheck> rates_;
  std::vector<DisclosureSummary> disclosures_;
  std::vector<PropertyReport> properties_;
  std::vector<std::string> failed_;
};

RateCheck StressCheck(const LemmaEstimate& estimate, int k, std::string id) {
  RateCheck check;
  check.id = std::move(id);
  check.events = estimate.successes();
  check.trials = estimate.trials();
  check.threshold = 1.0 / (2.0 * k);
  return check;
}

std::vector<int> EscapeTimes(const ExperimentConfig& config, int k) {
  if (config.t) {
    if (*config.t < 1 || *config.t > k) {
      throw UsageError("--t must lie in [1, k] with k = " + std::to_string(k));
    }
    return {*config.t};
  }
  std::vector<int> ts = {1};
  const int mid = (k + 1) / 2;
  if (mid != 1) ts.push_back(mid);
  return ts;
}

void VerifyConcentration(const ExperimentConfig& config, VerifyReport& report) {
  const std::int64_t n = config.n.value_or(kDefaultConcentrationN);
  const std::vector<double> cs =
      config.c ? std::vector<double>{*config.c} : std::vector<double>{0.05, 0.1, 0.15};
  for (double c : cs) {
    const RngStream rng(config.seed, StreamFor("concentration/" + FormatReal(c)));
    report.Add(EstimateConcentration(n, c, *config.trials, rng, config.threads));
  }
}

void VerifyNemYudEscape(const ExperimentConfig& config, VerifyReport& report) {
  const double eps = *config.epsilon;
  const NemYudParams params = NemYudParamsFor(eps);
  for (int t : EscapeTimes(config, params.k)) {
    const std::string tag = "/t=" + std::to_string(t);
    report.Add(EstimateNemYudEscape(params, t, *config.trials,
                                    RngStream(config.seed, StreamFor("escape" + tag)),
                                    1.0, config.threads));
    NemYudParams stress = params;
    stress.gamma = 0.0;
    const LemmaEstimate detector = EstimateNemYudEscape(
        stress, t, *config.trials, RngStream(config.seed, StreamFor("escape-stress" + tag)),
        1.0, config.threads, /*fresh_only=*/true);
    report.Add(StressCheck(detector, params.k, std::string(kLemmaArgmaxEscape) + "/stress" + tag));
  }
}

void VerifyWallEscape(const ExperimentConfig& config, VerifyReport& report) {
  const double eps = *config.epsilon;
  const WallParams params = WallParamsFor(eps);
  for (int t : EscapeTimes(config, params.k)) {
    const std::string tag = "/t=" + std::to_string(t);
    for (double norm : {1.0, params.delta / 2.0}) {
      const std::string label = "wall-escape" + tag + "/r=" + FormatReal(norm);
      report.Add(EstimateWallEscape(params, t, *config.trials,
                                    RngStream(config.seed, StreamFor(label)), norm,
                                    config.threads));
    }
    WallParams stress = params;
    stress.gamma = 0.0;
    const LemmaEstimate detector = EstimateWallEscape(
        stress, t, *config.trials,
        RngStream(config.seed, StreamFor("wall-escape-stress" + tag)), params.delta / 4.0,
        config.threads, /*fresh_only=*/true);
    report.Add(
        StressCheck(detector, params.k, std::string(kLemmaWallArgmaxEscape) + "/stress" + tag));
  }
}

std::vector<Family> RandomizedFamilies(const ExperimentConfig& config) {
  if (!config.family) return {Family::kNemYud, Family::kWall};
  if (*config.family == Family::kMaxCoord) {
    throw UsageError("the guess lemma applies to nemyud and wall");
  }
  return {*config.family};
}

void VerifyGuess(const ExperimentConfig& config, VerifyReport& report) {
  const double eps = *config.epsilon;
  for (Family family : RandomizedFamilies(config)) {
    const std::string fam(FamilyName(family));
    for (GuessCandidate candidate :
         {GuessCandidate::kBestGuess, GuessCandidate::kHedgedGuess,
          GuessCandidate::kRandomUnit, GuessCandidate::kOrigin}) {
      const std::string label = "guess/" + fam + "/" + std::string(GuessCandidateName(candidate));
      report.Add(EstimateGuessSuccess(family, eps, *config.trials,
                                      RngStream(config.seed, StreamFor(label)), candidate,
                                      config.threads));
    }
    const LemmaEstimate full = EstimateGuessSuccess(
        family, eps, *config.trials, RngStream(config.seed, StreamFor("guess/full/" + fam)),
        GuessCandidate::kFullKnowledge, config.threads);
    RateCheck check;
    check.id = "guess/" + fam + "/full-knowledge";
    check.events = full.successes();
    check.trials = full.trials();
    check.threshold = 1.0;
    report.Add(check);
  }
}

void VerifyDisclosure(const ExperimentConfig& config, VerifyReport& report) {
  const std::int64_t n = config.n.value_or(kDefaultDisclosureN);
  if (n < 2) throw UsageError("disclosure needs n >= 2");
  report.Add(RunDisclosure(n, *config.trials,
                           RngStream(config.seed, StreamFor("disclosure"))));
}

void VerifyProperties(const ExperimentConfig& config, VerifyReport& report) {
  const double eps = *config.epsilon;
  const std::int64_t n = config.n.value_or(kDefaultPropertyN);
  std::vector<Family> families = {Family::kMaxCoord, Family::kNemYud, Family::kWall};
  if (config.family) families = {*config.family};
  for (Family family : families) {
    const std::string fam(FamilyName(family));
    RngStream build(config.seed, StreamFor("properties/build/" + fam));
    const RngStream points(config.seed, StreamFor("properties/points/" + fam));
    switch (family) {
      case Family::kMaxCoord: {
        const MaxCoordInstance inst = MaxCoordInstance::Sample(eps, build);
        report.Add(RunPropertySuite(MakePropertyOracle(inst), *config.trials, points,
                                    config.threads));
        break;
      }
      case Family::kNemYud: {
        NemYudParams params = NemYudParamsFor(eps);
        params.n = std::max<std::int64_t>(n, params.k);
        const NemYudInstance inst = NemYudInstance::Sample(params, build);
        report.Add(RunPropertySuite(MakePropertyOracle(inst), *config.trials, points,
                                    config.threads));
        break;
      }
      case Family::kWall: {
        WallParams scaled = WallParamsFor(eps);
        const Eigen::Index dim = std::max<std::int64_t>(n, scaled.k + 1);
        scaled.n = dim;
        const WallInstance relaxed = WallInstance::Sample(RelaxedWallParams(scaled.k, dim, eps), build);
        PropertyOracle oracle = MakePropertyOracle(relaxed);
        oracle.name = "wall-relaxed";
        oracle.lipschitz_bound = std::min(oracle.lipschitz_bound, 3.0);
        report.Add(RunPropertySuite(oracle, *config.trials, points, config.threads));
        const WallInstance full = WallInstance::Sample(scaled, build);
        report.Add(RunPropertySuite(MakePropertyOracle(full), *config.trials,
                                    points.Substream(1), config.threads));
        break;
      }
    }
  }
}

RunOutcome RunVerify(const ExperimentConfig& config, ReportSink& sink) {
  VerifyReport report;
  const std::string& lemma = config.lemma;
  const bool all = lemma == "all";
  if (all || lemma == kLemmaConcentration) VerifyConcentration(config, report);
  if (all || lemma == kLemmaArgmaxEscape) VerifyNemYudEscape(config, report);
  if (all || lemma == kLemmaWallArgmaxEscape) VerifyWallEscape(config, report);
  if (all || lemma == kLemmaGuess) VerifyGuess(config, report);
  if (all || lemma == kLemmaDisclosure) VerifyDisclosure(config, report);
  if (all || lemma == "properties") VerifyProperties(config, report);

  RunOutcome outcome;
  outcome.failed = report.failed();
  if (!outcome.failed.empty()) outcome.exit_code = kExitFail;
  if (config.format == ReportFormat::kCsv) {
    sink.Write("", report.ToCsv());
    if (!config.output_path.empty()) {
      sink.Write(".config.json", Envelope(config).dump(2) + "\n");
    }
  } else {
    json doc = Envelope(config);
    doc["result"] = report.ToJson();
    doc["pass"] = outcome.failed.empty();
    sink.Write("", doc.dump(2) + "\n");
  }
  sink.WriteMeta(outcome.failed.empty());
  return outcome;
}

template <class T>
T Get(const json& value, std::string_view key) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw UsageError("config key '" + std::string(key) + "' has the wrong type");
  }
}

}  // namespace

std::string_view CommandName(Command command) {
  switch (command) {
    case Command::kGen: return "gen";
    case Command::kGd: return "gd";
    case Command::kVerify: return "verify";
    case Command::kReduce: return "reduce";
    case Command::kSweep: return "sweep";
  }
  return "?";
}

Command ParseCommand(std::string_view name) {
  for (Command c : {Command::kGen, Command::kGd, Command::kVerify, Command::kReduce,
                    Command::kSweep}) {
    if (CommandName(c) == name) return c;
  }
  throw UsageError("unknown command: " + std::string(name));
}

std::string_view FormatName(ReportFormat format) {
  return format == ReportFormat::kJson ? "json" : "csv";
}

ReportFormat ParseFormat(std::string_view name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  throw UsageError("unknown format: " + std::string(name));
}

void ExperimentConfig::Resolve() {
  if (!epsilon) epsilon = command == Command::kVerify ? 0.05 : 0.1;
  CheckEpsilon(*epsilon);
  if (!trials) trials = kDefaultTrials;
  if (*trials < 1) throw UsageError("trials must be at least 1");
  if (threads < 1) throw UsageError("threads must be at least 1");
  if (!KnownLemmas().count(lemma)) throw UsageError("unknown lemma: " + lemma);
  if (c && (!std::isfinite(*c) || *c < 0.0)) throw UsageError("c must be >= 0");
  if (t && *t < 1) throw UsageError("t must be at least 1");
  if (epsilons.empty()) throw UsageError("epsilons must not be empty");
  for (double e : epsilons) CheckEpsilon(e);
  switch (command) {
    case Command::kGen:
    case Command::kGd:
    case Command::kSweep:
      if (!family) family = Family::kMaxCoord;
      if (n && *n < 1) throw UsageError("n must be at least 1");
      break;
    case Command::kReduce:
      if (!n) n = kDefaultReduceN;
      if (*n < 1 || *n > 16) throw UsageError("reduce needs 1 <= n <= 16");
      break;
    case Command::kVerify:
      if (n && *n < 1) throw UsageError("n must be at least 1");
      break;
  }
}

json ExperimentConfig::ToJson() const {
  auto opt = [](const auto& v) { return v ? json(*v) : json(nullptr); };
  json doc;
  doc["command"] = std::string(CommandName(command));
  doc["epsilon"] = opt(epsilon);
  doc["family"] = family ? json(std::string(FamilyName(*family))) : json(nullptr);
  doc["seed"] = seed;
  doc["trials"] = opt(trials);
  doc["output_path"] = output_path;
  doc["format"] = std::string(FormatName(format));
  doc["lemma"] = lemma;
  doc["n"] = opt(n);
  doc["c"] = opt(c);
  doc["t"] = opt(t);
  doc["epsilons"] = epsilons;
  doc["threads"] = threads;
  return doc;
}

ExperimentConfig ConfigFromJson(const json& doc) {
  if (!doc.is_object()) throw UsageError("config must be a JSON object");
  ExperimentConfig config;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& key = it.key();
    const json& v = *it;
    if (v.is_null() && key != "command") continue;
    if (key == "command") {
      config.command = ParseCommand(Get<std::string>(v, key));
    } else if (key == "epsilon") {
      config.epsilon = Get<double>(v, key);
    } else if (key == "family") {
      try {
        config.family = ParseFamily(Get<std::string>(v, key));
      } catch (const UsageError&) {
        throw;
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    } else if (key == "seed") {
      if (!v.is_number_unsigned()) throw UsageError("config key 'seed' has the wrong type");
      config.seed = v.get<std::uint64_t>();
    } else if (key == "trials") {
      if (!v.is_number_integer()) throw UsageError("config key 'trials' has the wrong type");
      if (v.is_number_unsigned()) {
        config.trials = v.get<std::uint64_t>();
      } else {
        throw UsageError("trials must be at least 1");
      }
    } else if (key == "output_path") {
      config.output_path = Get<std::string>(v, key);
    } else if (key == "format") {
      config.format = ParseFormat(Get<std::string>(v, key));
    } else if (key == "lemma") {
      config.lemma = Get<std::string>(v, key);
    } else if (key == "n") {
      if (!v.is_number_integer()) throw UsageError("config key 'n' has the wrong type");
      config.n = v.get<std::int64_t>();
    } else if (key == "c") {
      config.c = Get<double>(v, key);
    } else if (key == "t") {
      if (!v.is_number_integer()) throw UsageError("config key 't' has the wrong type");
      config.t = v.get<int>();
    } else if (key == "epsilons") {
      config.epsilons = Get<std::vector<double>>(v, key);
    } else if (key == "threads") {
      if (!v.is_number_integer()) throw UsageError("config key 'threads' has the wrong type");
      config.threads = v.get<int>();
    } else {
      throw UsageError("unknown config key: " + key);
    }
  }
  return config;
}

std::optional<ExperimentConfig> ParseCommandLine(int argc, const char* const* argv,
                                                 std::ostream& out) {
  CLI::App app{"subgrad-arena: lower-bound instances and first-order experiments",
               "subgrad_arena"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::optional<std::string> family, format, lemma, output, config_path;
  std::optional<double> epsilon, c;
  std::optional<std::uint64_t> seed, trials;
  std::optional<std::int64_t> n;
  std::optional<int> t, threads;
  std::vector<double> epsilons;

  app.add_option("--family", family, "maxcoord | nemyud | wall");
  app.add_option("--epsilon", epsilon, "target accuracy in (0, 0.95)");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--trials", trials, "Monte Carlo trials (verify)");
  app.add_option("--lemma", lemma,
                 "all | concentration | argmax-escape | wall-argmax-escape | guess | "
                 "disclosure | properties");
  app.add_option("--out", output, "report path (default stdout)");
  app.add_option("--format", format, "json | csv");
  app.add_option("--config", config_path, "JSON config file; flags override it");
  app.add_option("--threads", threads, "worker threads");
  app.add_option("--n", n, "dimension override");
  app.add_option("--c", c, "concentration threshold");
  app.add_option("--t", t, "escape step (1-based)");
  app.add_option("--epsilons", epsilons, "comma-separated epsilon grid (sweep)")
      ->delimiter(',');

  std::vector<CLI::App*> subcommands;
  subcommands.push_back(app.add_subcommand("gen", "write a serialized instance"));
  subcommands.push_back(app.add_subcommand("gd", "projected subgradient descent"));
  subcommands.push_back(app.add_subcommand("verify", "lemma estimators and property suites"));
  subcommands.push_back(app.add_subcommand("reduce", "exhaustive OR-query reduction check"));
  subcommands.push_back(app.add_subcommand("sweep", "queries-vs-epsilon table"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return std::nullopt;
  } catch (const CLI::Success&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  ExperimentConfig config;
  bool have_command = false;
  bool file_threads = false;
  if (config_path) {
    std::ifstream file(*config_path);
    if (!file) throw UsageError("cannot read config file: " + *config_path);
    json doc;
    try {
      doc = json::parse(file);
    } catch (const json::parse_error& e) {
      throw UsageError(std::string("config file is not valid JSON: ") + e.what());
    }
    config = ConfigFromJson(doc);
    have_command = doc.contains("command");
    file_threads = doc.contains("threads") && !doc["threads"].is_null();
  }
  for (CLI::App* sub : subcommands) {
    if (sub->parsed()) {
      config.command = ParseCommand(sub->get_name());
      have_command = true;
    }
  }
  if (!have_command) throw UsageError("no command given (gen, gd, verify, reduce, sweep)");

  try {
    if (family) config.family = ParseFamily(*family);
  } catch (const UsageError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (epsilon) config.epsilon = epsilon;
  if (seed) config.seed = *seed;
  if (trials) config.trials = trials;
  if (lemma) config.lemma = *lemma;
  if (output) config.output_path = *output;
  if (format) config.format = ParseFormat(*format);
  if (n) config.n = n;
  if (c) config.c = c;
  if (t) config.t = t;
  if (!epsilons.empty()) config.epsilons = epsilons;
  if (threads) {
    config.threads = *threads;
  } else if (!file_threads) {
    if (const char* env = std::getenv("SUBGRAD_ARENA_THREADS"); env && *env) {
      try {
        std::size_t used = 0;
        config.threads = std::stoi(env, &used);
        if (env[used] != '\0') throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw UsageError("SUBGRAD_ARENA_THREADS must be a positive integer");
      }
    }
  }
  config.Resolve();
  return config;
}

RunOutcome Run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  ReportSink sink(config, out);
  RunOutcome outcome;
  switch (config.command) {
    case Command::kGen: outcome = RunGen(config, sink); break;
    case Command::kGd: outcome = RunGdCommand(config, sink); break;
    case Command::kVerify: outcome = RunVerify(config, sink); break;
    case Command::kReduce: outcome = RunReduce(config, sink); break;
    case Command::kSweep: outcome = RunSweep(config, sink); break;
  }
  for (const std::string& id : outcome.failed) err << "FAIL " << id << "\n";
  return outcome;
}

int RunMain(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::optional<ExperimentConfig> config;
  try {
    config = ParseCommandLine(argc, argv, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (!config) return kExitPass;
  try {
    return Run(*config, out, err).exit_code;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFail;
  }
}

}  // namespace arena
