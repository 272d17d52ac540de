#include "cfthp/scenario.hpp"

#include "cfthp/rng.hpp"

#include <stdexcept>
#include <string>

namespace cfthp {

void ScenarioParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("scenario: ") + what);
  };
  require(n_aps >= 1 && n_users >= 1, "n_aps and n_users must be positive");
  require(side_m > 0.0, "side_m must be positive");
  require(l_aps >= 1 && l_aps <= n_aps, "l_aps must lie in [1, n_aps]");
  require(cluster_max >= 1 && cluster_max <= n_users, "cluster_max must lie in [1, n_users]");
  require(n_a >= 1, "n_a must be positive");
  require(sigma_e2 >= 0.0 && sigma_e2 < 1.0, "sigma_e2 must lie in [0, 1)");
  require(n_users <= n_aps, "n_users must not exceed n_aps");
  require(d0_m > 0.0 && d0_m < d1_m, "require 0 < d0 < d1");
}

Scenario prepare_scenario(const ScenarioParams& params, Seed seed) {
  params.validate();
  Scenario sc;
  sc.params = params;
  sc.seed = seed;
  sc.layout = place_network(params.n_aps, params.n_users, params.side_m,
                            derive_seed(seed, StreamTag::layout));
  sc.layout.f_mhz = params.f_mhz;
  sc.layout.h_ap = params.h_ap;
  sc.layout.h_u = params.h_u;
  sc.zeta = large_scale_coefficients(sc.layout, params.shadow_sigma_db, params.d0_m,
                                     params.d1_m, derive_seed(seed, StreamTag::shadowing));
  sc.serving_sets = serving_sets(sc.zeta.zeta, params.l_aps);
  sc.clusters = build_user_clusters(sc.serving_sets, params.n_a, params.cluster_max);
  sc.noise = make_noise_model(params.t0_k, params.kb, params.bandwidth_hz,
                              params.noise_figure_db);
  return sc;
}

}  // namespace cfthp
