#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <unordered_map>

#include "CLI11.hpp"
#include "upm/baseline.hpp"
#include "upm/combinatorics.hpp"
#include "upm/eval.hpp"
#include "upm/index.hpp"
#include "upm/ingest.hpp"
#include "upm/pipeline.hpp"
#include "upm/report.hpp"
#include "upm/snapshot.hpp"
#include "upm/textprep.hpp"
#include "upm/verify.hpp"

namespace upm::cli {
namespace {

using Clock = std::chrono::steady_clock;

struct InputOptions {
  std::string input;
  std::string format = "published";
  std::string truth;
  std::string units;
  std::string report;
  std::string summary;
  unsigned threads = 1;
  bool seedless = false;
};

struct MatchOptions {
  std::string variant = "upm";
  double alpha = 1.0;
  double b = 1.0;
  std::string k = "auto";
  double tau = 0.4;
  bool no_verify = false;
  std::string verify_metric = "cs";
  std::string distance = "squared";
  std::string field_scope = "title";
  std::string output;
  std::string index;
};

struct BaselineOptions {
  std::string metric;
  double tau = 0.4;
  std::string sweep;
};

struct EvalOptions {
  std::string clusters;
};

struct InspectOptions {
  std::string variant = "upm";
  std::string k = "auto";
  std::string index;
  std::string save_index;
  std::size_t top = 10;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const CLI::Validator kAutoOrK(
    [](std::string& value) -> std::string {
      if (value == "auto") return {};
      try {
        std::size_t used = 0;
        const int k = std::stoi(value, &used);
        if (used == value.size() && k >= 2 && k <= kMaxCombinationSize) return {};
      } catch (const std::exception&) {
      }
      return "must be 'auto' or an integer in [2, " + std::to_string(kMaxCombinationSize) + "]";
    },
    "auto|INT");

void add_input_options(CLI::App& cmd, InputOptions& o, bool report_options = true) {
  cmd.add_option("--input", o.input, "Product feed CSV")->required()->check(CLI::ExistingFile);
  cmd.add_option("--format", o.format, "Input layout")
      ->check(CLI::IsMember({"simple", "published"}))
      ->capture_default_str();
  cmd.add_option("--truth", o.truth, "Ground truth CSV (product_id,cluster_id)")
      ->check(CLI::ExistingFile);
  cmd.add_option("--units", o.units, "Unit lexicon file, one unit per line (default: built-in)")
      ->check(CLI::ExistingFile);
  if (report_options) {
    cmd.add_option("--report", o.report, "Write JSON-lines report here (default: stdout)");
    cmd.add_option("--summary", o.summary, "Write CSV summary here");
  }
  cmd.add_option("--threads", o.threads, "Worker threads for scoring and pairwise sections")
      ->check(CLI::Range(1u, 1024u))
      ->capture_default_str();
  cmd.add_flag("--seedless", o.seedless,
               "Assert that the run uses no random seed (always true; hashes are fixed)");
}

Dataset load_dataset(const InputOptions& o) {
  Dataset dataset = load_products(o.input, *parse_input_format(o.format));
  if (!o.truth.empty()) attach_truth(dataset, o.truth);
  return dataset;
}

UnitLexicon load_units(const InputOptions& o) {
  return o.units.empty() ? UnitLexicon::builtin() : UnitLexicon::from_file(o.units);
}

Variant parse_variant(const std::string& v) { return v == "upm" ? Variant::upm : Variant::upm_plus; }

std::optional<int> parse_k(const std::string& k) {
  if (k == "auto") return std::nullopt;
  return std::stoi(k);
}

// Writes report lines to --report (or `out`) and the CSV summary.
class ReportSink {
 public:
  ReportSink(const InputOptions& o, std::ostream& out) {
    if (!o.report.empty()) {
      file_ = std::make_unique<std::ofstream>(o.report, std::ios::binary | std::ios::trunc);
      if (!*file_) throw std::runtime_error("cannot write report " + o.report);
    }
    if (!o.summary.empty()) {
      summary_ = std::make_unique<std::ofstream>(o.summary, std::ios::binary | std::ios::trunc);
      if (!*summary_) throw std::runtime_error("cannot write summary " + o.summary);
      *summary_ << summary_header() << '\n';
    }
    out_ = file_ ? file_.get() : &out;
  }

  void write(const Report& report) {
    *out_ << report.dump() << '\n';
    if (summary_) *summary_ << summary_row(report) << '\n';
  }

  void close() {
    out_->flush();
    if (file_ && !*file_) throw std::runtime_error("failed writing report");
    if (summary_) {
      summary_->flush();
      if (!*summary_) throw std::runtime_error("failed writing summary");
    }
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::unique_ptr<std::ofstream> summary_;
  std::ostream* out_ = nullptr;
};

std::optional<MatchSet> truth_pairs(const Dataset& dataset, std::ostream& err) {
  if (!dataset.has_truth()) return std::nullopt;
  MatchSet truth = load_ground_truth(dataset);
  if (truth.empty()) {
    err << "warning: ground truth has no matching pairs; metrics omitted\n";
    return std::nullopt;
  }
  return truth;
}

int cmd_match(const InputOptions& in, const MatchOptions& o, std::ostream& out,
              std::ostream& err) {
  const Dataset dataset = load_dataset(in);
  const UnitLexicon units = load_units(in);

  MatchConfig config;
  config.index.k = parse_k(o.k);
  config.index.variant = parse_variant(o.variant);
  config.index.distance = o.distance == "squared" ? DistanceMode::squared : DistanceMode::euclidean;
  config.scoring.alpha = o.alpha;
  config.scoring.b = o.b;
  config.scoring.field_scope = o.field_scope == "title" ? FieldScope::title : FieldScope::cumulative;
  config.verify.tau = o.tau;
  config.verify.metric = *parse_similarity_metric(o.verify_metric);
  config.verify_enabled = !o.no_verify;
  config.threads = in.threads;

  MatchRun run = [&] {
    if (o.index.empty()) return run_match(dataset, units, config);
    const auto t0 = Clock::now();
    Index index = load_snapshot(o.index);
    if (index.product_ids.size() != dataset.products.size()) {
      throw std::runtime_error("index snapshot does not match the input dataset");
    }
    for (std::size_t p = 0; p < dataset.products.size(); ++p) {
      if (index.product_ids[p] != dataset.products[p].product_id) {
        throw std::runtime_error("index snapshot does not match the input dataset");
      }
    }
    const double load_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    MatchRun r = run_match(std::move(index), config);
    r.timings.index_ms = load_ms;
    return r;
  }();

  std::optional<Prf1> metrics;
  if (const auto truth = truth_pairs(dataset, err)) {
    const auto t0 = Clock::now();
    metrics = prf1(expand_cluster_pairs(run.universe, run.index.product_ids), *truth);
    run.timings.evaluation_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  }

  if (!o.output.empty()) {
    std::ofstream clusters(o.output, std::ios::binary | std::ios::trunc);
    if (!clusters) throw std::runtime_error("cannot write clusters " + o.output);
    write_clusters(run.universe, run.index.product_ids, clusters);
    if (!clusters.flush()) throw std::runtime_error("failed writing clusters " + o.output);
  }

  ReportSink sink(in, out);
  const auto info = describe(dataset, in.input, run.index.stats.avg_title_length,
                             run.index.stats.distinct_tokens);
  sink.write(match_report(info, config, config.index.k.has_value(), run, metrics));
  sink.close();
  return 0;
}

int cmd_baseline(const InputOptions& in, const BaselineOptions& o, std::ostream& out,
                 std::ostream& err) {
  const auto metric = parse_metric(o.metric);
  if (!metric) throw UsageError("unknown metric '" + o.metric + "'");
  std::vector<double> taus;
  if (!o.sweep.empty()) {
    try {
      taus = parse_sweep(o.sweep);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    for (double t : taus) {
      if (!(t > 0.0 && t < 1.0)) throw UsageError("sweep thresholds must lie in (0, 1)");
    }
  } else {
    taus.push_back(o.tau);
  }

  const Dataset dataset = load_dataset(in);
  const UnitLexicon units = load_units(in);
  BaselineRun run = run_baseline(dataset, units, *metric, taus, in.threads);
  const auto truth = truth_pairs(dataset, err);
  const auto info = describe(dataset, in.input, run.avg_title_length, run.tokens.lexicon.size());

  ReportSink sink(in, out);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    StageTimings timings = run.timings;
    std::optional<Prf1> metrics;
    if (truth) {
      const auto t0 = Clock::now();
      metrics = prf1(run.matches[i], *truth);
      timings.evaluation_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    }
    sink.write(baseline_report(info, *metric, taus[i], run.matches[i].size(), metrics, timings));
  }
  sink.close();
  return 0;
}

int cmd_eval(const InputOptions& in, const EvalOptions& o, std::ostream& out, std::ostream& err) {
  const Dataset dataset = load_dataset(in);
  const auto truth = truth_pairs(dataset, err);
  if (!truth) throw std::runtime_error("eval needs ground truth with at least one pair");
  const auto assignment = read_clusters(o.clusters);

  std::unordered_map<ProductId, std::int64_t> label_of;
  for (std::size_t i = 0; i < assignment.product_ids.size(); ++i) {
    if (!label_of.emplace(assignment.product_ids[i], assignment.cluster_ids[i]).second) {
      throw std::runtime_error("product " + std::to_string(assignment.product_ids[i]) +
                               " appears twice in " + o.clusters);
    }
  }
  std::vector<ProductId> ids;
  std::vector<std::int64_t> labels;
  for (const auto& p : dataset.products) {
    const auto it = label_of.find(p.product_id);
    if (it == label_of.end()) {
      throw std::runtime_error("product " + std::to_string(p.product_id) + " has no cluster in " +
                               o.clusters);
    }
    ids.push_back(p.product_id);
    labels.push_back(it->second);
  }
  if (label_of.size() != ids.size()) {
    throw std::runtime_error(o.clusters + " lists products that are not in the input");
  }
  std::unordered_map<std::int64_t, int> distinct;
  for (auto l : labels) distinct.emplace(l, 0);

  const auto metrics = prf1(expand_assignment_pairs(ids, labels), *truth);
  const auto analyzed = analyze_dataset(dataset, load_units(in));
  const auto info = describe(dataset, in.input, average_title_length(analyzed), 0);
  ReportSink sink(in, out);
  sink.write(eval_report(info, o.clusters, distinct.size(), metrics));
  sink.close();
  return 0;
}

int cmd_inspect(const InputOptions& in, const InspectOptions& o, std::ostream& out) {
  const Dataset dataset = load_dataset(in);
  Index index;
  if (!o.index.empty()) {
    index = load_snapshot(o.index);
  } else {
    IndexConfig config;
    config.k = parse_k(o.k);
    config.variant = parse_variant(o.variant);
    index = build_index(dataset, load_units(in), config);
  }
  if (!o.save_index.empty()) save_snapshot(index, o.save_index);

  Report r;
  r["dataset"] = in.input;
  r["titles"] = index.product_count();
  r["vendors"] = dataset.vendor_count();
  r["truth_clusters"] = dataset.truth_cluster_count();
  r["k"] = index.k;
  r["variant"] = std::string(to_string(index.variant));
  r["avg_title_length"] = index.stats.avg_title_length;
  r["avg_indexed_title_length"] = index.stats.avg_indexed_title_length;
  r["distinct_tokens"] = index.stats.distinct_tokens;
  r["combinations"] = index.stats.combination_count;
  r["combination_instances"] = index.stats.combination_instances;
  r["avg_combination_length"] = index.stats.avg_combination_length;
  r["signature_collisions"] = index.combinations.signature_collisions();

  Report semantics = Report::object();
  std::array<std::size_t, kFieldCount> per_field{};
  for (const auto& t : index.tokens.titles) {
    for (auto s : t.semantics) ++per_field[field_index(s)];
  }
  for (std::size_t f = 0; f < kFieldCount; ++f) {
    semantics[std::string(to_string(static_cast<Semantics>(f + 1)))] = per_field[f];
  }
  r["token_semantics"] = semantics;

  std::vector<TokenId> order(index.tokens.lexicon.size());
  for (TokenId i = 0; i < order.size(); ++i) order[i] = i;
  const auto& lex = index.tokens.lexicon;
  std::stable_sort(order.begin(), order.end(),
                   [&](TokenId a, TokenId b) { return lex[a].frequency > lex[b].frequency; });
  Report top = Report::array();
  for (std::size_t i = 0; i < std::min(o.top, order.size()); ++i) {
    top.push_back({{"token", lex[order[i]].surface}, {"frequency", lex[order[i]].frequency}});
  }
  r["top_tokens"] = top;

  const auto universe = select_clusters(index, ScoringConfig{}, in.threads);
  Report clusters;
  clusters["count"] = universe.size();
  Report histogram = Report::object();
  for (const auto& [size, count] : cluster_size_histogram(universe)) {
    histogram[std::to_string(size)] = count;
  }
  clusters["histogram"] = histogram;
  r["clusters_before_verification"] = clusters;

  out << r.dump(2) << '\n';
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Unsupervised product title matching"};
  app.name("upm");
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Read options from a TOML/INI configuration file");

  InputOptions in;
  MatchOptions mo;
  BaselineOptions bo;
  EvalOptions eo;
  InspectOptions io;

  auto* match = app.add_subcommand("match", "Cluster products by their dominating combination");
  add_input_options(*match, in);
  match->add_option("--variant", mo.variant, "upm, or upm+ to index only the first 2K tokens")
      ->check(CLI::IsMember({"upm", "upm+"}))
      ->capture_default_str();
  match->add_option("--alpha", mo.alpha, "Proximity constant of the combination score")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  match->add_option("--b", mo.b, "Length normalization of the IR score")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  match->add_option("--k", mo.k, "Largest combination size; auto = floor(avg title length / 2)")
      ->check(kAutoOrK)
      ->capture_default_str();
  match->add_option("--tau", mo.tau, "Similarity threshold for migrating evicted products")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  match->add_flag("--no-verify", mo.no_verify, "Skip the verification stage");
  match->add_option("--verify-metric", mo.verify_metric, "Similarity used by verification")
      ->check(CLI::IsMember({"cs", "cs-idf"}))
      ->capture_default_str();
  match->add_option("--distance", mo.distance, "Positional distance form")
      ->check(CLI::IsMember({"squared", "euclidean"}))
      ->capture_default_str();
  match->add_option("--field-scope", mo.field_scope, "Field population scope")
      ->check(CLI::IsMember({"title", "cumulative"}))
      ->group("");
  match->add_option("--output", mo.output, "Write product_id,cluster_id CSV here");
  match->add_option("--index", mo.index, "Use this index snapshot instead of building one")
      ->check(CLI::ExistingFile);

  auto* baseline = app.add_subcommand("baseline", "Exhaustive pairwise matching at a threshold");
  add_input_options(*baseline, in);
  baseline->add_option("--baseline", bo.metric, "Similarity metric: cs, cs-idf, j, j-idf")
      ->required();
  baseline->add_option("--tau", bo.tau, "Match when similarity exceeds this value")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  baseline->add_option("--sweep", bo.sweep, "Threshold sweep lo:hi:step, e.g. 0.1:0.9:0.1");

  auto* eval = app.add_subcommand("eval", "Score an existing cluster file against ground truth");
  add_input_options(*eval, in);
  eval->add_option("--clusters", eo.clusters, "product_id,cluster_id CSV")
      ->required()
      ->check(CLI::ExistingFile);

  auto* inspect = app.add_subcommand("inspect", "Print lexicon and cluster statistics");
  add_input_options(*inspect, in, false);
  inspect->add_option("--variant", io.variant, "upm or upm+")
      ->check(CLI::IsMember({"upm", "upm+"}))
      ->capture_default_str();
  inspect->add_option("--k", io.k, "Largest combination size")
      ->check(kAutoOrK)
      ->capture_default_str();
  inspect->add_option("--index", io.index, "Read an index snapshot instead of building one")
      ->check(CLI::ExistingFile);
  inspect->add_option("--save-index", io.save_index, "Write the index snapshot here");
  inspect->add_option("--top", io.top, "Number of most frequent tokens to list")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*match) return cmd_match(in, mo, out, err);
    if (*baseline) return cmd_baseline(in, bo, out, err);
    if (*eval) return cmd_eval(in, eo, out, err);
    return cmd_inspect(in, io, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace upm::cli
