#include "upm/pipeline.hpp"

#include <chrono>

namespace upm {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

}  // namespace

MatchRun run_match(const Dataset& dataset, const UnitLexicon& units, const MatchConfig& config) {
  const auto t0 = Clock::now();
  Index index = build_index(dataset, units, config.index);
  const double index_ms = elapsed_ms(t0);
  MatchRun run = run_match(std::move(index), config);
  run.timings.index_ms = index_ms;
  return run;
}

MatchRun run_match(Index index, const MatchConfig& config) {
  config.scoring.validate();
  MatchRun run{std::move(index), ClusterUniverse{}, {}, {}};

  auto t = Clock::now();
  run.universe = select_clusters(run.index, config.scoring, config.threads);
  discard_unselected(run.index, run.universe);
  run.timings.scoring_ms = elapsed_ms(t);

  if (config.verify_enabled) {
    t = Clock::now();
    run.verify_stats = verify_universe(run.universe, run.index, config.verify);
    run.timings.verification_ms = elapsed_ms(t);
  }
  return run;
}

BaselineRun run_baseline(const Dataset& dataset, const UnitLexicon& units, Metric metric,
                         std::span<const double> taus, unsigned threads) {
  BaselineRun run;
  run.metric = metric;
  run.taus.assign(taus.begin(), taus.end());

  auto t = Clock::now();
  const auto analyzed = analyze_dataset(dataset, units);
  run.avg_title_length = average_title_length(analyzed);
  run.tokens = build_token_table(analyzed);
  run.timings.index_ms = elapsed_ms(t);

  std::vector<ProductId> ids;
  ids.reserve(dataset.products.size());
  for (const auto& p : dataset.products) ids.push_back(p.product_id);

  t = Clock::now();
  PairwiseMatcher matcher(run.tokens, ids);
  if (run.taus.size() == 1) {
    run.matches.push_back(matcher.match(metric, run.taus.front(), threads));
  } else {
    run.matches = matcher.sweep(metric, run.taus, threads);
  }
  run.timings.scoring_ms = elapsed_ms(t);
  return run;
}

}  // namespace upm
