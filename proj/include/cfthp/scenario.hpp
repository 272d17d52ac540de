// A prepared simulation scenario: fixed geometry, shadowing, serving sets and
// user clusters for one seed. Small-scale fading is drawn later, per Monte
// Carlo iteration.
#ifndef CFTHP_SCENARIO_HPP
#define CFTHP_SCENARIO_HPP

#include "cfthp/clustering.hpp"
#include "cfthp/geometry_channel.hpp"
#include "cfthp/types.hpp"

#include <vector>

namespace cfthp {

struct ScenarioParams {
  Eigen::Index n_aps = 128;
  Eigen::Index n_users = 24;
  Real side_m = 20000.0;

  Real f_mhz = 1900.0;
  Real h_ap = 15.0;
  Real h_u = 1.65;
  Real shadow_sigma_db = 8.0;
  Real d0_m = 10.0;
  Real d1_m = 50.0;

  Real t0_k = 290.0;
  Real kb = 1.381e-23;
  Real bandwidth_hz = 50e6;
  Real noise_figure_db = 10.0;

  Eigen::Index l_aps = 24;
  Eigen::Index cluster_max = 10;
  Eigen::Index n_a = 1;

  Real sigma_e2 = 0.01;
  Real snr_db = 15.0;

  TauMode tau_mode = TauMode::paper;
  bool square_beta_d = true;
  SelfDistortion self_distortion = SelfDistortion::error_power;

  Real sigma_e() const { return std::sqrt(sigma_e2); }
  void validate() const;
};

struct Scenario {
  ScenarioParams params;
  Seed seed = 0;
  NetworkLayout layout;
  LargeScaleMap zeta;
  std::vector<IndexList> serving_sets;
  UserClusters clusters;
  NoiseModel noise;
};

/// Draws the layout and shadowing from `seed` and derives the serving sets
/// and clusters, which depend on zeta only.
Scenario prepare_scenario(const ScenarioParams& params, Seed seed);

}  // namespace cfthp

#endif  // CFTHP_SCENARIO_HPP
