#include "cfthp/config.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace cfthp;

TEST_CASE("defaults") {
  const ScenarioConfig c = parse_config("");
  CHECK(c.scenario.n_aps == 128);
  CHECK(c.scenario.n_users == 24);
  CHECK(c.scenario.l_aps == 24);
  CHECK(c.scenario.cluster_max == 10);
  CHECK(c.scenario.sigma_e2 == 0.01);
  CHECK(c.snr_grid_db == std::vector<Real>{0, 5, 10, 15, 20});
  CHECK(c.csit_grid == std::vector<Real>{0, 0.01, 0.05, 0.1});
  CHECK(c.precoders == figure_precoders());
  CHECK(c.scenario.tau_mode == TauMode::paper);
  CHECK(c.scenario.square_beta_d);
}

TEST_CASE("parsing") {
  const std::string text =
      "# comment\n"
      "; another\n"
      "[network]\n"
      "  n_aps = 32 \n"
      "n_users=8\r\n"
      "[clustering]\n"
      "l_aps = 8\n"
      "cluster_max = 4\n"
      "[csit]\n"
      "tau_mode = consistent\n"
      "[model]\n"
      "square_beta_d = false\n"
      "self_distortion = cross-term\n"
      "modulation = QAM16\n"
      "[sweep]\n"
      "snr_grid_db = -5, 2.5,1e1\n"
      "precoders = ZF-NW, dTHP-SP\n"
      "[monte_carlo]\n"
      "seed = 18446744073709551615\n"
      "[output]\n"
      "output_dir = out/run a\n";
  const ScenarioConfig c = parse_config(text);
  CHECK(c.scenario.n_aps == 32);
  CHECK(c.scenario.n_users == 8);
  CHECK(c.scenario.l_aps == 8);
  CHECK(c.scenario.cluster_max == 4);
  CHECK(c.scenario.tau_mode == TauMode::consistent);
  CHECK_FALSE(c.scenario.square_beta_d);
  CHECK(c.scenario.self_distortion == SelfDistortion::cross_term);
  CHECK(c.modulation == Modulation::qam16);
  CHECK(c.snr_grid_db == std::vector<Real>{-5.0, 2.5, 10.0});
  CHECK(c.precoders.size() == 2u);
  CHECK(c.precoders[1] == PrecoderKind{Scheme::dthp, Variant::sparse});
  CHECK(c.seed == 18446744073709551615ULL);
  CHECK(c.output_dir == "out/run a");
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(parse_config("[network]\nn_ap = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("n_aps = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[network\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[network]\nn_aps 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[network]\nn_aps = 3.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[network]\nn_aps = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[model]\nsquare_beta_d = yes\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[csit]\ntau_mode = other\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[csit]\nsigma_e2 = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[sweep]\nprecoders = MF-RD\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[sweep]\nsnr_grid_db = 1,,2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[network]\nn_aps = 4\nn_users = 8\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[monte_carlo]\nseed = -1\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.ini"), ConfigError);
}

TEST_CASE("round trip and hash") {
  ScenarioConfig c;
  c.scenario.sigma_e2 = 0.1 + 0.2;  // not a short decimal
  c.snr_grid_db = {0.1, 1.0 / 3.0};
  c.seed = 99;
  const std::string text = serialize_config(c);
  const ScenarioConfig back = parse_config(text);
  CHECK(back == c);
  CHECK(back.scenario.sigma_e2 == c.scenario.sigma_e2);
  CHECK(back.snr_grid_db == c.snr_grid_db);
  CHECK(serialize_config(back) == text);
  CHECK(config_hash(back) == config_hash(c));
  CHECK(config_hash(c).size() == 16u);

  ScenarioConfig other = c;
  other.seed = 100;
  CHECK(config_hash(other) != config_hash(c));
  ScenarioConfig moved = c;
  moved.output_dir = "elsewhere";
  CHECK(config_hash(moved) == config_hash(c));

  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(1e-23) == "1e-23");
}

TEST_CASE("shipped configs parse") {
  for (const char* name : {"snr_sweep.ini", "csit_sweep.ini", "desk_scale.ini", "smoke.ini"}) {
    const auto path = std::filesystem::path(CFTHP_SOURCE_DIR) / "config" / name;
    CAPTURE(name);
    CHECK_NOTHROW(load_config(path));
  }
  const auto full = load_config(std::filesystem::path(CFTHP_SOURCE_DIR) / "config" / "snr_sweep.ini");
  ScenarioConfig defaults;
  defaults.output_dir = full.output_dir;
  CHECK(full == defaults);
}
