#include <filesystem>
#include <fstream>
#include <string>

#include "berrylab/config.hpp"
#include "berrylab/errors.hpp"
#include "berrylab/io.hpp"
#include "berrylab/runner.hpp"
#include "doctest.h"

using namespace berrylab;
namespace fs = std::filesystem;

namespace {

const char* kMoment = R"([experiment]
kind = berry-expectation-test
seed = 5
[sequence]
eigenvalues = 986.9604401089358
[sampling]
base_points = 200
[sampler]
samples = 200
[grid]
resolution = 17
order = 1
)";

bool mentions(const std::vector<std::string>& lines, const std::string& needle) {
  for (const auto& l : lines) {
    if (l.find(needle) != std::string::npos) return true;
  }
  return false;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::path(BERRYLAB_TEST_TMP) / "config" / name;
  fs::remove_all(p);
  fs::create_directories(p.parent_path());
  return p;
}

}  // namespace

TEST_CASE("valid config yields a hash") {
  const ValidationReport r = validate_config_text(kMoment);
  REQUIRE(r.ok);
  REQUIRE(r.config.has_value());
  CHECK(r.config->hash.size() == 64);
  CHECK(r.config->hash == sha256_hex(r.config->canonical));
  CHECK(r.config->seed == 5);
  CHECK(r.errors.empty());
  CHECK(r.notices.empty());
}

TEST_CASE("sha256 known answer") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("hash ignores formatting but not content") {
  const std::string spaced = std::string("# comment\n") + kMoment + "\n";
  CHECK(parse_config(spaced).hash == parse_config(kMoment).hash);
  std::string changed = kMoment;
  changed.replace(changed.find("seed = 5"), 8, "seed = 6");
  CHECK(parse_config(changed).hash != parse_config(kMoment).hash);
}

TEST_CASE("unknown keys are named and every error is listed") {
  const ValidationReport r = validate_config_text("[experiment]\nkind = nope\nfrobnicate = 2\n[grid]\nresolution = 3\n");
  CHECK(!r.ok);
  CHECK(mentions(r.errors, "frobnicate"));
  CHECK(mentions(r.errors, "nope"));
  CHECK(mentions(r.errors, "resolution"));
  CHECK(r.errors.size() >= 3);
}

TEST_CASE("missing seed produces a notice with the default") {
  const ValidationReport r = validate_config_text("[experiment]\nkind = il-scan\n[sequence]\nmax_eigenvalue = 100\n");
  REQUIRE(r.ok);
  CHECK(mentions(r.notices, "seed"));
  CHECK(mentions(r.notices, "1"));
  CHECK(r.config->seed == 1);
}

TEST_CASE("negative sample count is a config error") {
  std::string text = kMoment;
  text.replace(text.find("base_points = 200"), 17, "base_points = -5");
  const ValidationReport r = validate_config_text(text);
  CHECK(!r.ok);
  CHECK(mentions(r.errors, "base_points"));
  CHECK_THROWS_AS(parse_config(text), ConfigError);
}

TEST_CASE("seed override rewrites the canonical form") {
  const ExperimentConfig a = parse_config(kMoment, 99);
  CHECK(a.seed == 99);
  CHECK(a.canonical.find("seed = 99") != std::string::npos);
  CHECK(a.hash == sha256_hex(a.canonical));
  CHECK(a.hash != parse_config(kMoment).hash);
}

TEST_CASE("catalogue lists every experiment") {
  const std::string cat = experiment_catalogue();
  for (const auto& name : experiment_names()) CHECK(cat.find(name) != std::string::npos);
  CHECK(cat.find("berry-expectation-test") != std::string::npos);
  CHECK(cat.find("inverse-localize") != std::string::npos);
  CHECK(cat == experiment_catalogue());
}

TEST_CASE("runs are byte-identical and embed the hash") {
  const ExperimentConfig cfg = parse_config(kMoment);
  const RunResult a = run_experiment(cfg);
  const RunResult b = run_experiment(cfg, 2);
  CHECK(a.record == b.record);
  REQUIRE(a.files.size() == b.files.size());
  for (std::size_t i = 0; i < a.files.size(); ++i) {
    CHECK(a.files[i].content == b.files[i].content);
    CHECK(a.files[i].content.rfind("# config_hash=" + cfg.hash + "\n", 0) == 0);
  }
  CHECK(a.record.find(cfg.hash) != std::string::npos);
}

TEST_CASE("outputs pass the checker and tampering is detected") {
  const fs::path dir = scratch("run");
  const fs::path ini = dir.parent_path() / "moment.ini";
  write_text_file(ini.string(), kMoment);
  const ExperimentConfig cfg = load_config(ini.string());
  write_outputs(run_experiment(cfg), dir.string());
  CHECK(fs::exists(dir / kRecordFile));
  CHECK(fs::exists(dir / kSummaryFile));
  CheckReport ok = check_outputs(dir.string(), ini.string());
  CHECK(ok.ok);
  CHECK(ok.hash == cfg.hash);

  std::string summary = read_text_file((dir / kSummaryFile).string());
  summary[16] = summary[16] == '0' ? '1' : '0';
  write_text_file((dir / kSummaryFile).string(), summary);
  const CheckReport bad = check_outputs(dir.string());
  CHECK(!bad.ok);
  CHECK(mentions(bad.problems, kSummaryFile));

  std::string other = kMoment;
  other.replace(other.find("base_points = 200"), 17, "base_points = 300");
  write_text_file(ini.string(), other);
  write_outputs(run_experiment(cfg), dir.string());
  CHECK(!check_outputs(dir.string(), ini.string()).ok);
}

TEST_CASE("every experiment kind runs from text") {
  const std::vector<std::string> configs{
      "[experiment]\nkind = marginal-distribution-test\n[sequence]\neigenvalues = 986.9604401089358\n"
      "[sampling]\nbase_points = 500\n",
      "[experiment]\nkind = covariance-profile-test\n[sequence]\nsource = berry\n[sampling]\nbase_points = 500\n",
      "[experiment]\nkind = translation-invariance-test\n[sequence]\neigenvalues = 986.9604401089358\n"
      "[sampling]\nbase_points = 200\n[grid]\nresolution = 9\n",
      "[experiment]\nkind = inverse-localize\n[sequence]\neigenvalues = 986.9604401089358\n",
      "[experiment]\nkind = il-scan\n[sequence]\nmax_eigenvalue = 400\n[grid]\nresolution = 17\n",
      "[experiment]\nkind = strong-il-measure-estimate\n[sequence]\neigenvalues = 986.9604401089358\n"
      "[sampling]\nbase_points = 500\n[grid]\nresolution = 9\n",
      "[experiment]\nkind = translation-invariance-test\n[manifold]\nkind = sphere\n[sequence]\neigenvalues = 110\n"
      "[sampling]\npolicy = quadrature\nquadrature_nodes = 12\n[grid]\nresolution = 9\n",
  };
  for (const auto& text : configs) {
    const ExperimentConfig cfg = parse_config(text);
    const RunResult r = run_experiment(cfg);
    CHECK(!r.headline.empty());
    CHECK(r.record.find("\"schema_version\": 1") != std::string::npos);
    CHECK(!r.files.empty());
  }
}

TEST_CASE("precondition failures surface as errors") {
  const ExperimentConfig cfg = parse_config(
      "[experiment]\nkind = marginal-distribution-test\n[sequence]\neigenvalues = 986.9604401089358\n"
      "[sampling]\nbase_points = 100\n");
  try {
    run_experiment(cfg);
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(exit_status_for(e.kind()) == exit_status::kPrecondition);
  }
  CHECK_THROWS_AS(run_experiment(parse_config("[experiment]\nkind = il-scan\n[sequence]\neigenvalues = 5\n")), Error);
}

TEST_CASE("csv and number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1e300) == "1e+300");
  CHECK(format_number(-2.0) == "-2");
  CsvTable t;
  t.header = {"a", "b"};
  t.add({"1", "2"});
  CHECK(t.render("h") == "# config_hash=h\na,b\n1,2\n");
  CHECK_THROWS_AS(read_text_file("/nonexistent/file"), IoError);
}
