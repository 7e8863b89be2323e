#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "synthetic.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "upm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  Result r;
  r.code = upm::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string fixture() { return std::string(UPM_TEST_DIR) + "/fixtures/cpus20.csv"; }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(UPM_TEST_TMP) / "cli";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<Json> lines_of(const std::string& text) {
  std::vector<Json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(Json::parse(line));
  }
  return out;
}

Json strip(Json j) {
  j.erase("timings_ms");
  return j;
}

void check_snapshot(const std::string& name, const std::string& text) {
  const fs::path path = fs::path(UPM_TEST_DIR) / "snapshots" / name;
  if (std::getenv("UPM_UPDATE_SNAPSHOTS") != nullptr) {
    std::ofstream(path, std::ios::binary) << text;
  }
  CHECK_MESSAGE(slurp(path) == text, "help text changed: " << name
                                                           << " (set UPM_UPDATE_SNAPSHOTS=1)");
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("help snapshots") {
    const auto top = run({"--help"});
    CHECK(top.code == 0);
    check_snapshot("help.txt", top.out);
    for (const std::string cmd : {"match", "baseline", "eval", "inspect"}) {
      const auto r = run({cmd, "--help"});
      CHECK(r.code == 0);
      check_snapshot("help_" + cmd + ".txt", r.out);
    }
    CHECK(run({"match", "--help"}).out.find("field-scope") == std::string::npos);
  }

  TEST_CASE("match on the cpu fixture") {
    const auto clusters = scratch("cpus20_clusters.csv");
    const auto r = run({"match", "--input", fixture(), "--format", "published", "--variant", "upm",
                        "--output", clusters.string()});
    REQUIRE(r.code == 0);
    const auto reports = lines_of(r.out);
    REQUIRE(reports.size() == 1);
    const auto& rep = reports[0];
    CHECK(rep["method"] == "upm");
    CHECK(rep["params"]["k"] == 4);
    CHECK(rep["dataset"]["titles"] == 20);
    CHECK(rep["metrics"]["truth_pairs"] == 20);
    // Audited by hand: the seven models are found except that the two
    // "i7 8700K"/"i5 8400" titles written with a space select
    // {core, 8700k/8400, intel, i7/i5}-style combinations of their own.
    CHECK(rep["metrics"]["true_positives"] == 15);
    CHECK(rep["metrics"]["predicted_pairs"] == 15);
    CHECK(rep["metrics"]["f1"].get<double>() == doctest::Approx(6.0 / 7.0));
    CHECK(slurp(clusters) ==
          "product_id,cluster_id\n1,0\n2,1\n3,0\n4,0\n5,2\n6,2\n7,2\n8,3\n9,4\n10,3\n11,5\n"
          "12,5\n13,5\n14,6\n15,6\n16,6\n17,7\n18,7\n19,8\n20,8\n");

    const auto e = run({"eval", "--input", fixture(), "--clusters", clusters.string()});
    REQUIRE(e.code == 0);
    const auto er = lines_of(e.out).at(0);
    CHECK(er["metrics"] == rep["metrics"]);
    CHECK(er["cluster_count"] == 9);
  }

  TEST_CASE("deterministic across runs and threads") {
    const auto a = run({"match", "--input", fixture(), "--threads", "1"});
    const auto b = run({"match", "--input", fixture(), "--threads", "4"});
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(strip(lines_of(a.out)[0]) == strip(lines_of(b.out)[0]));

    const auto c = run({"baseline", "--input", fixture(), "--baseline", "cs", "--tau", "0.5"});
    const auto d = run({"baseline", "--input", fixture(), "--baseline", "cs", "--tau", "0.5",
                        "--threads", "3", "--seedless"});
    CHECK(c.code == 0);
    CHECK(strip(lines_of(c.out)[0]) == strip(lines_of(d.out)[0]));
  }

  TEST_CASE("explicit K only changes K") {
    const auto a = lines_of(run({"match", "--input", fixture(), "--k", "2"}).out).at(0);
    const auto b = lines_of(run({"match", "--input", fixture(), "--k", "2"}).out).at(0);
    const auto automatic = lines_of(run({"match", "--input", fixture()}).out).at(0);
    CHECK(strip(a) == strip(b));
    CHECK(a["params"]["k"] == 2);
    CHECK(a["params"]["k_source"] == "flag");
    auto pa = a["params"];
    auto pb = automatic["params"];
    for (auto* p : {&pa, &pb}) {
      p->erase("k");
      p->erase("k_source");
    }
    CHECK(pa == pb);
    CHECK(a["dataset"] == automatic["dataset"]);
  }

  TEST_CASE("baseline sweep") {
    const auto summary = scratch("sweep.csv");
    const auto report = scratch("sweep.jsonl");
    const auto r = run({"baseline", "--input", fixture(), "--baseline", "j-idf", "--sweep",
                        "0.1:0.9:0.1", "--report", report.string(), "--summary",
                        summary.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    const auto rows = lines_of(slurp(report));
    REQUIRE(rows.size() == 9);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i]["params"]["tau"].get<double>() == doctest::Approx((i + 1) / 10.0));
      CHECK(rows[i]["method"] == "j-idf");
    }
    std::istringstream csv(slurp(summary));
    std::vector<std::string> lines;
    for (std::string l; std::getline(csv, l);) lines.push_back(l);
    CHECK(lines.size() == 10);
    CHECK(lines[1].rfind("j-idf,0.10,,", 0) == 0);

    // The report file is replaced, not appended to.
    run({"baseline", "--input", fixture(), "--baseline", "cs", "--report", report.string()});
    CHECK(lines_of(slurp(report)).size() == 1);
  }

  TEST_CASE("usage errors") {
    const auto typo = run({"baseline", "--input", fixture(), "--baseline", "cosine"});
    CHECK(typo.code != 0);
    CHECK(typo.err.find("cosine") != std::string::npos);
    CHECK(run({"match", "--input", fixture(), "--variant", "upm++"}).code != 0);
    CHECK(run({"match", "--input", fixture(), "--k", "1"}).code != 0);
    CHECK(run({"match", "--input", fixture(), "--k", "many"}).code != 0);
    CHECK(run({"match", "--input", fixture(), "--threads", "0"}).code != 0);
    CHECK(run({"match", "--input", fixture(), "--alpha", "0"}).code != 0);
    CHECK(run({"match", "--input", "/nonexistent.csv"}).code != 0);
    CHECK(run({"baseline", "--input", fixture(), "--baseline", "cs", "--sweep", "1:0:1"}).code != 0);
    CHECK(run({}).code != 0);
    CHECK(run({"frobnicate"}).code != 0);
  }

  TEST_CASE("runtime errors") {
    const auto bad = scratch("bad.csv");
    std::ofstream(bad) << "id,title,vendor\n1,,2\n";
    const auto r = run({"match", "--input", bad.string(), "--format", "simple"});
    CHECK(r.code == 1);
    CHECK(r.err.rfind("error: ", 0) == 0);
    CHECK(r.err.find("line 2") != std::string::npos);
  }

  TEST_CASE("config file precedence") {
    const auto cfg = scratch("run.toml");
    std::ofstream(cfg) << "[match]\ntau = 0.7\nalpha = 2.5\n";
    const auto from_file = lines_of(run({"match", "--config", cfg.string(), "--input", fixture()}).out);
    REQUIRE(from_file.size() == 1);
    CHECK(from_file[0]["params"]["tau"] == 0.7);
    CHECK(from_file[0]["params"]["alpha"] == 2.5);
    const auto flag = lines_of(
        run({"match", "--config", cfg.string(), "--input", fixture(), "--tau", "0.5"}).out);
    CHECK(flag.at(0)["params"]["tau"] == 0.5);
    CHECK(flag.at(0)["params"]["alpha"] == 2.5);
    const auto plain = lines_of(run({"match", "--input", fixture()}).out);
    CHECK(plain.at(0)["params"]["tau"] == 0.4);
  }

  TEST_CASE("index snapshot reuse") {
    const auto snap = scratch("cpus20.idx");
    const auto inspect = run({"inspect", "--input", fixture(), "--save-index", snap.string()});
    REQUIRE(inspect.code == 0);
    const auto stats = Json::parse(inspect.out);
    CHECK(stats["titles"] == 20);
    CHECK(stats["signature_collisions"] == 0);
    CHECK(stats["top_tokens"].size() == 10);

    const auto direct = lines_of(run({"match", "--input", fixture()}).out).at(0);
    const auto reused =
        lines_of(run({"match", "--input", fixture(), "--index", snap.string()}).out).at(0);
    CHECK(strip(direct) == strip(reused));

    const auto other = scratch("other.csv");
    std::ofstream(other) << "id,title,vendor\n1,a b,1\n";
    CHECK(run({"match", "--input", other.string(), "--format", "simple", "--index",
               snap.string()})
              .code == 1);
  }

  TEST_CASE("verification on injected duplicates") {
    const auto path = scratch("twins.csv");
    upm::testing::write_published(upm::testing::make_catalog(upm::testing::twin_spec()), path);
    const auto with = lines_of(run({"match", "--input", path.string()}).out).at(0);
    const auto without = lines_of(run({"match", "--input", path.string(), "--no-verify"}).out).at(0);
    CHECK(without["params"]["verify"] == false);
    CHECK(with["verification"]["evicted"].get<int>() > 0);
    CHECK(without["metrics"]["f1"].get<double>() <= with["metrics"]["f1"].get<double>());
  }
}
