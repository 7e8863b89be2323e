#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "upm/eval.hpp"
#include "upm/ingest.hpp"
#include "upm/pipeline.hpp"

namespace upm {

using Report = nlohmann::ordered_json;

struct DatasetInfo {
  std::string path;
  std::size_t titles = 0;
  std::size_t vendors = 0;
  std::size_t truth_clusters = 0;
  double avg_title_length = 0.0;
  std::size_t distinct_tokens = 0;
};

DatasetInfo describe(const Dataset& dataset, const std::string& path, double avg_title_length,
                     std::size_t distinct_tokens);

// One JSON object per run. Field order is fixed; everything except
// "timings_ms" is a deterministic function of the inputs and configuration.
Report match_report(const DatasetInfo& info, const MatchConfig& config, bool k_from_flag,
                    const MatchRun& run, const std::optional<Prf1>& metrics);
Report baseline_report(const DatasetInfo& info, Metric metric, double tau,
                       std::size_t predicted_pairs, const std::optional<Prf1>& metrics,
                       const StageTimings& timings);
Report eval_report(const DatasetInfo& info, const std::string& clusters_path,
                   std::size_t cluster_count, const Prf1& metrics);

// Drops the timing fields so reports can be compared across runs.
Report without_timings(Report report);

// CSV summary: method,tau,k,precision,recall,f1,predicted_pairs,clusters,total_ms
std::string summary_header();
std::string summary_row(const Report& report);

}  // namespace upm
