#include "cfthp/harness.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cfthp;
namespace fs = std::filesystem;

namespace {

ScenarioConfig tiny_config() {
  ScenarioConfig c;
  c.scenario.n_aps = 12;
  c.scenario.n_users = 3;
  c.scenario.side_m = 1000.0;
  c.scenario.l_aps = 4;
  c.scenario.cluster_max = 2;
  c.snr_grid_db = {0.0, 10.0};
  c.csit_grid = {0.0, 0.05};
  c.precoders = {parse_precoder_label("ZF-NW"), parse_precoder_label("dTHP-RD")};
  c.n_outer = 3;
  c.n_inner = 2;
  c.seed = 4;
  return c;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("cfthp_test_harness_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("sweep rows and ordering") {
  const ScenarioConfig c = tiny_config();
  const auto r = run_snr_sweep(c);
  REQUIRE(r.rows.size() == 4u);
  CHECK(r.rows[0].sweep_value == 0.0);
  CHECK(r.rows[0].precoder == c.precoders[0]);
  CHECK(r.rows[1].precoder == c.precoders[1]);
  CHECK(r.rows[2].sweep_value == 10.0);
  CHECK(r.seed == 4);
  CHECK(r.config_hash == config_hash(c));
  CHECK(r.at(10.0, c.precoders[0]).esr > r.at(0.0, c.precoders[0]).esr);
  CHECK_THROWS_AS(r.at(5.0, c.precoders[0]), std::out_of_range);

  // each row equals a standalone evaluation
  ScenarioParams p = c.scenario;
  p.snr_db = 10.0;
  const auto direct = ergodic_sum_rate(prepare_scenario(p, c.seed), c.precoders[1], 3, 2, c.seed);
  CHECK(r.at(10.0, c.precoders[1]).esr == direct.esr);

  const auto cs = run_csit_sweep(c);
  REQUIRE(cs.rows.size() == 4u);
  CHECK(cs.kind == SweepKind::csit);
  CHECK(cs.rows[3].sweep_value == 0.05);
}

TEST_CASE("worker count does not change output") {
  const ScenarioConfig c = tiny_config();
  const std::string one = format_csv(run_snr_sweep(c, RunOptions{1}));
  const std::string three = format_csv(run_snr_sweep(c, RunOptions{3}));
  CHECK(one == three);
}

TEST_CASE("csv schema") {
  const auto r = run_csit_sweep(tiny_config());
  const std::string text = format_csv(r);
  CHECK(text.rfind(
            "sweep,sweep_value,precoder,esr,esr_stderr,excluded_draw_fraction,n_outer,n_inner,seed,"
            "config_hash\n",
            0) == 0);
  CHECK(text.find('\r') == std::string::npos);
  const auto records = parse_csv(text);
  REQUIRE(records.size() == r.rows.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(records[i].sweep == "sigma_e2");
    CHECK(records[i].sweep_value == r.rows[i].sweep_value);
    CHECK(records[i].esr == r.rows[i].esr);
    CHECK(records[i].precoder == label(r.rows[i].precoder));
    CHECK(records[i].seed == 4);
    CHECK(records[i].n_outer == 3);
    CHECK(records[i].config_hash == r.config_hash);
  }

  CHECK_THROWS(parse_csv(""));
  CHECK_THROWS(parse_csv("a,b\n"));
  std::string crlf = text;
  crlf.insert(crlf.find('\n', crlf.find('\n') + 1), "\r");
  CHECK_THROWS(parse_csv(crlf));
  std::string short_row = text.substr(0, text.find('\n') + 1) + "snr_db,1,ZF-NW\n";
  CHECK_THROWS(parse_csv(short_row));
}

TEST_CASE("plot data round trip") {
  const auto r = run_snr_sweep(tiny_config());
  const fs::path dir = scratch("series");
  const auto files = emit_plot_data(r, dir);
  REQUIRE(files.size() == 2u);
  const auto pts = read_series_file(files[1]);
  REQUIRE(pts.size() == 2u);
  CHECK(pts[0].sweep_value == 0.0);
  CHECK(pts[1].esr == r.at(10.0, tiny_config().precoders[1]).esr);
  CHECK(pts[1].esr_stderr == r.at(10.0, tiny_config().precoders[1]).esr_stderr);
  const auto manifest = nlohmann::json::parse(slurp(dir / "series_manifest.json"));
  CHECK(manifest["series"].size() == 2u);
  CHECK(manifest["series"][0]["label"] == "ZF-NW");

  SweepResult empty;
  CHECK_THROWS_AS(emit_plot_data(empty, scratch("empty")), std::invalid_argument);
  fs::remove_all(dir);
}

TEST_CASE("run directory and manifest") {
  ScenarioConfig c = tiny_config();
  const fs::path dir = scratch("run");
  const auto r = run_to_directory(SweepKind::snr, c, dir);
  CHECK(fs::exists(dir / "results.csv"));
  CHECK(fs::exists(dir / "series" / "ZF-NW.dat"));
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["status"] == "complete");
  CHECK(manifest["seed"] == 4);
  CHECK(manifest["config_hash"] == config_hash(c));
  CHECK(manifest["schema_version"] == kCsvSchemaVersion);
  CHECK(slurp(dir / "results.csv") == format_csv(r));
  const auto cfg = parse_config(manifest["config"].get<std::string>());
  CHECK(cfg == c);

  // a failing run leaves the manifest marked incomplete
  ScenarioConfig bad = c;
  bad.snr_grid_db.clear();
  const fs::path bad_dir = scratch("bad");
  CHECK_THROWS(run_to_directory(SweepKind::snr, bad, bad_dir));
  const auto partial = nlohmann::json::parse(slurp(bad_dir / "manifest.json"));
  CHECK(partial["status"] == "incomplete");
  CHECK_FALSE(fs::exists(bad_dir / "results.csv"));
  fs::remove_all(dir);
  fs::remove_all(bad_dir);
}
