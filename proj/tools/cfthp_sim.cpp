// Command-line front end: SNR and CSIT-quality sweeps plus a quick self test.
#include "cfthp/config.hpp"
#include "cfthp/harness.hpp"
#include "cfthp/link_metrics.hpp"
#include "cfthp/lq.hpp"
#include "cfthp/rng.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<cfthp::Seed> seed;
  std::string out_dir;
  unsigned workers = 1;
  std::optional<bool> square_beta_d;
  std::string tau_mode;
  std::string self_distortion;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "scenario config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", flags.seed, "master seed (overrides the config)");
  cmd->add_option("--out", flags.out_dir, "output directory (overrides the config)");
  cmd->add_option("--workers", flags.workers, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--square-beta-d", flags.square_beta_d,
                  "square beta in the decentralized noise term (true/false)");
  cmd->add_option("--tau-mode", flags.tau_mode, "paper | consistent")
      ->check(CLI::IsMember({"paper", "consistent"}));
  cmd->add_option("--self-distortion", flags.self_distortion, "error-power | cross-term")
      ->check(CLI::IsMember({"error-power", "cross-term"}));
}

cfthp::ScenarioConfig resolve_config(const CommonFlags& flags) {
  cfthp::ScenarioConfig config;
  if (!flags.config_path.empty()) config = cfthp::load_config(flags.config_path);
  if (flags.seed) config.seed = *flags.seed;
  if (!flags.out_dir.empty()) config.output_dir = flags.out_dir;
  if (flags.square_beta_d) config.scenario.square_beta_d = *flags.square_beta_d;
  if (!flags.tau_mode.empty()) config.scenario.tau_mode = cfthp::parse_tau_mode(flags.tau_mode);
  if (!flags.self_distortion.empty()) {
    config.scenario.self_distortion = cfthp::parse_self_distortion(flags.self_distortion);
  }
  return config;
}

int run_sweep(cfthp::SweepKind kind, const CommonFlags& flags) {
  const cfthp::ScenarioConfig config = resolve_config(flags);
  const auto result =
      cfthp::run_to_directory(kind, config, config.output_dir, cfthp::RunOptions{flags.workers});
  std::printf("%-10s %-8s %12s %12s %10s\n", std::string(cfthp::sweep_column(kind)).c_str(),
              "precoder", "esr", "stderr", "excluded");
  for (const auto& row : result.rows) {
    std::printf("%-10g %-8s %12.4f %12.4f %10.4f\n", row.sweep_value,
                cfthp::label(row.precoder).c_str(), row.esr, row.esr_stderr,
                row.excluded_draw_fraction);
  }
  std::printf("wrote %s/results.csv (seed %llu, config %s)\n", config.output_dir.c_str(),
              static_cast<unsigned long long>(result.seed), result.config_hash.c_str());
  return 0;
}

bool check(const char* name, bool ok) {
  std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name);
  return ok;
}

int run_selftest(cfthp::Seed seed) {
  using namespace cfthp;
  bool ok = true;

  Engine engine = make_engine(derive_seed(seed, StreamTag::small_scale, 99));
  const CMatrix m = complex_gaussian(6, 20, engine);
  const auto lq = lq_decompose(m);
  ok &= check("lq reconstruction", (lq.l_mat * lq.q_mat - m).norm() / m.norm() < 1e-10);
  ok &= check("lq orthonormal rows",
              (lq.q_mat * lq.q_mat.adjoint() - CMatrix::Identity(6, 6)).norm() < 1e-10);

  ScenarioParams params;
  params.n_aps = 16;
  params.n_users = 4;
  params.l_aps = 16;
  params.cluster_max = 4;
  params.sigma_e2 = 0.0;
  const Scenario sc = prepare_scenario(params, seed);
  const auto draw = draw_channel(sc.zeta, derive_seed(seed, StreamTag::small_scale));
  const CMatrix gt = draw.g_true.transpose();
  const auto cen = effective_precoder(thp_filters(gt, ThpStructure::centralized, 1.0));
  const auto dec_f = thp_filters(gt, ThpStructure::decentralized, 1.0);
  const auto dec = effective_precoder(dec_f);
  ok &= check("perfect-CSI cancellation (centralized)",
              (gt * cen.p_mat - CMatrix::Identity(4, 4)).norm() < 1e-9);
  ok &= check("perfect-CSI cancellation (decentralized)",
              (dec_f.c_mat().cast<Complex>() * gt * dec.p_mat - CMatrix::Identity(4, 4)).norm() <
                  1e-9);

  SymbolChainOptions chain;
  chain.noiseless = true;
  chain.n_vectors = 500;
  for (auto s : {ThpStructure::centralized, ThpStructure::decentralized}) {
    chain.structure = s;
    const auto r = simulate_symbol_chain(sc, chain, seed);
    ok &= check(s == ThpStructure::centralized ? "noiseless symbol chain (centralized)"
                                               : "noiseless symbol chain (decentralized)",
                r.errors == 0);
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cell-free downlink THP / linear precoding sum-rate simulator"};
  app.require_subcommand(1);

  CommonFlags snr_flags;
  CommonFlags csit_flags;
  auto* snr_cmd = app.add_subcommand("snr-sweep", "ergodic sum-rate versus SNR");
  add_common(snr_cmd, snr_flags);
  auto* csit_cmd = app.add_subcommand("csit-sweep", "ergodic sum-rate versus sigma_e^2");
  add_common(csit_cmd, csit_flags);
  cfthp::Seed selftest_seed = 1;
  auto* self_cmd = app.add_subcommand("selftest", "fast internal consistency checks");
  self_cmd->add_option("--seed", selftest_seed, "seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*snr_cmd) return run_sweep(cfthp::SweepKind::snr, snr_flags);
    if (*csit_cmd) return run_sweep(cfthp::SweepKind::csit, csit_flags);
    if (*self_cmd) return run_selftest(selftest_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
