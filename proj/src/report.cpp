#include "upm/report.hpp"

#include <iomanip>
#include <sstream>

namespace upm {
namespace {

Report metrics_json(const std::optional<Prf1>& m) {
  if (!m) return nullptr;
  Report j;
  j["precision"] = m->precision;
  j["recall"] = m->recall;
  j["f1"] = m->f1;
  j["true_positives"] = m->true_positives;
  j["predicted_pairs"] = m->predicted;
  j["truth_pairs"] = m->truth;
  return j;
}

Report dataset_json(const DatasetInfo& info) {
  Report j;
  j["path"] = info.path;
  j["titles"] = info.titles;
  j["vendors"] = info.vendors;
  j["truth_clusters"] = info.truth_clusters;
  j["avg_title_length"] = info.avg_title_length;
  j["distinct_tokens"] = info.distinct_tokens;
  return j;
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

}  // namespace

DatasetInfo describe(const Dataset& dataset, const std::string& path, double avg_title_length,
                     std::size_t distinct_tokens) {
  return {path,
          dataset.title_count(),
          dataset.vendor_count(),
          dataset.truth_cluster_count(),
          avg_title_length,
          distinct_tokens};
}

Report match_report(const DatasetInfo& info, const MatchConfig& config, bool k_from_flag,
                    const MatchRun& run, const std::optional<Prf1>& metrics) {
  Report r;
  r["method"] = std::string(to_string(run.index.variant));
  r["dataset"] = dataset_json(info);

  Report params;
  params["k"] = run.index.k;
  params["k_source"] = k_from_flag ? "flag" : "auto";
  params["alpha"] = config.scoring.alpha;
  params["b"] = config.scoring.b;
  params["tau"] = config.verify.tau;
  params["verify"] = config.verify_enabled;
  params["verify_metric"] = std::string(to_string(config.verify.metric));
  params["distance"] = std::string(to_string(run.index.distance_mode));
  params["field_scope"] = std::string(to_string(config.scoring.field_scope));
  r["params"] = params;

  Report index;
  index["distinct_tokens"] = run.index.stats.distinct_tokens;
  index["combinations"] = run.index.stats.combination_count;
  index["combination_instances"] = run.index.stats.combination_instances;
  index["avg_combination_length"] = run.index.stats.avg_combination_length;
  index["avg_indexed_title_length"] = run.index.stats.avg_indexed_title_length;
  r["index"] = index;

  r["metrics"] = metrics_json(metrics);

  Report clusters;
  clusters["count"] = run.universe.size();
  Report histogram = Report::object();
  for (const auto& [size, count] : cluster_size_histogram(run.universe)) {
    histogram[std::to_string(size)] = count;
  }
  clusters["histogram"] = histogram;
  r["clusters"] = clusters;

  Report verification;
  verification["violations"] = run.verify_stats.violations;
  verification["evicted"] = run.verify_stats.evicted;
  verification["migrated"] = run.verify_stats.migrated;
  verification["created"] = run.verify_stats.created;
  r["verification"] = verification;

  Report timings;
  timings["index"] = run.timings.index_ms;
  timings["scoring"] = run.timings.scoring_ms;
  timings["verification"] = run.timings.verification_ms;
  timings["evaluation"] = run.timings.evaluation_ms;
  timings["total"] = run.timings.total_ms();
  r["timings_ms"] = timings;
  return r;
}

Report baseline_report(const DatasetInfo& info, Metric metric, double tau,
                       std::size_t predicted_pairs, const std::optional<Prf1>& metrics,
                       const StageTimings& timings) {
  Report r;
  r["method"] = std::string(to_string(metric));
  r["dataset"] = dataset_json(info);
  Report params;
  params["tau"] = tau;
  r["params"] = params;
  r["predicted_pairs"] = predicted_pairs;
  r["metrics"] = metrics_json(metrics);
  Report t;
  t["tokenize"] = timings.index_ms;
  t["pairwise"] = timings.scoring_ms;
  t["evaluation"] = timings.evaluation_ms;
  t["total"] = timings.total_ms();
  r["timings_ms"] = t;
  return r;
}

Report eval_report(const DatasetInfo& info, const std::string& clusters_path,
                   std::size_t cluster_count, const Prf1& metrics) {
  Report r;
  r["method"] = "eval";
  r["dataset"] = dataset_json(info);
  r["clusters_path"] = clusters_path;
  r["cluster_count"] = cluster_count;
  r["metrics"] = metrics_json(metrics);
  return r;
}

Report without_timings(Report report) {
  report.erase("timings_ms");
  return report;
}

std::string summary_header() {
  return "method,tau,k,precision,recall,f1,predicted_pairs,clusters,total_ms";
}

std::string summary_row(const Report& r) {
  std::ostringstream row;
  row << r.at("method").get<std::string>() << ',';
  const Report params = r.contains("params") ? r.at("params") : Report::object();
  if (params.contains("tau")) row << fixed(params.at("tau").get<double>(), 2);
  row << ',';
  if (params.contains("k")) row << params.at("k").get<int>();
  row << ',';
  const auto& m = r.at("metrics");
  if (m.is_null()) {
    row << ",,,";
  } else {
    row << fixed(m.at("precision").get<double>(), 6) << ','
        << fixed(m.at("recall").get<double>(), 6) << ',' << fixed(m.at("f1").get<double>(), 6)
        << ',';
  }
  if (!m.is_null()) {
    row << m.at("predicted_pairs").get<std::size_t>();
  } else if (r.contains("predicted_pairs")) {
    row << r.at("predicted_pairs").get<std::size_t>();
  }
  row << ',';
  if (r.contains("clusters")) {
    row << r.at("clusters").at("count").get<std::size_t>();
  } else if (r.contains("cluster_count")) {
    row << r.at("cluster_count").get<std::size_t>();
  }
  row << ',';
  if (r.contains("timings_ms")) row << fixed(r.at("timings_ms").at("total").get<double>(), 3);
  return row.str();
}

}  // namespace upm
