#pragma once

#include <span>
#include <vector>

#include "upm/baseline.hpp"
#include "upm/index.hpp"
#include "upm/ingest.hpp"
#include "upm/scoring.hpp"
#include "upm/textprep.hpp"
#include "upm/verify.hpp"

namespace upm {

struct MatchConfig {
  IndexConfig index;
  ScoringConfig scoring;
  VerifyConfig verify;
  bool verify_enabled = true;
  unsigned threads = 1;
};

// Wall-clock milliseconds per stage.
struct StageTimings {
  double index_ms = 0.0;
  double scoring_ms = 0.0;
  double verification_ms = 0.0;
  double evaluation_ms = 0.0;

  double total_ms() const { return index_ms + scoring_ms + verification_ms + evaluation_ms; }
};

struct MatchRun {
  Index index;
  ClusterUniverse universe;
  VerifyStats verify_stats;
  StageTimings timings;
};

MatchRun run_match(const Dataset& dataset, const UnitLexicon& units, const MatchConfig& config);
// Reuses a prebuilt index (e.g. a loaded snapshot); config.index is ignored.
MatchRun run_match(Index index, const MatchConfig& config);

struct BaselineRun {
  Metric metric = Metric::cs;
  std::vector<double> taus;
  std::vector<MatchSet> matches;  // one per tau
  TokenTable tokens;
  double avg_title_length = 0.0;
  StageTimings timings;  // index_ms = tokenization, scoring_ms = pairwise scan
};

BaselineRun run_baseline(const Dataset& dataset, const UnitLexicon& units, Metric metric,
                         std::span<const double> taus, unsigned threads = 1);

}  // namespace upm
