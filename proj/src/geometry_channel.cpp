#include "cfthp/geometry_channel.hpp"

#include "cfthp/rng.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace cfthp {

NetworkLayout place_network(Eigen::Index n_aps, Eigen::Index n_users, Real side,
                            Seed seed) {
  if (n_aps < 1 || n_users < 1) {
    throw std::invalid_argument("place_network: AP and user counts must be positive");
  }
  if (!(side > 0.0)) {
    throw std::invalid_argument("place_network: side length must be positive");
  }

  Engine engine = make_engine(seed);
  std::uniform_real_distribution<Real> coord(0.0, side);

  NetworkLayout layout;
  layout.side_length = side;
  layout.ap_positions.resize(static_cast<std::size_t>(n_aps));
  layout.user_positions.resize(static_cast<std::size_t>(n_users));
  for (auto& p : layout.ap_positions) {
    p.x = coord(engine);
    p.y = coord(engine);
  }
  for (auto& p : layout.user_positions) {
    p.x = coord(engine);
    p.y = coord(engine);
  }
  return layout;
}

Real attenuation_constant(Real f_mhz, Real h_ap, Real h_u) {
  if (!(f_mhz > 0.0) || !(h_ap > 0.0) || !(h_u > 0.0)) {
    throw std::invalid_argument("attenuation_constant: arguments must be positive");
  }
  const Real lf = std::log10(f_mhz);
  return 46.3 + 33.9 * lf - 13.82 * std::log10(h_ap) - (1.1 * lf - 0.7) * h_u +
         (1.56 * lf - 0.8);
}

Real path_loss_db(Real d, Real attenuation_db, Real d0, Real d1) {
  if (!(d0 > 0.0) || !(d0 < d1)) {
    throw std::invalid_argument("path_loss_db: require 0 < d0 < d1");
  }
  if (d < 0.0) {
    throw std::invalid_argument("path_loss_db: negative distance");
  }
  if (d > d1) {
    return -attenuation_db - 35.0 * std::log10(d);
  }
  if (d > d0) {
    return -attenuation_db - 15.0 * std::log10(d1) - 20.0 * std::log10(d);
  }
  return -attenuation_db - 15.0 * std::log10(d1) - 20.0 * std::log10(d0);
}

Real distance(const Point2& a, const Point2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

LargeScaleMap large_scale_coefficients(const NetworkLayout& layout,
                                       Real shadow_sigma_db, Real d0, Real d1,
                                       Seed seed) {
  const Eigen::Index n = layout.n_aps();
  const Eigen::Index k = layout.n_users();
  if (n < 1 || k < 1) {
    throw std::invalid_argument("large_scale_coefficients: empty layout");
  }
  if (shadow_sigma_db < 0.0) {
    throw std::invalid_argument("large_scale_coefficients: negative shadowing deviation");
  }
  const Real att = attenuation_constant(layout.f_mhz, layout.h_ap, layout.h_u);

  Engine engine = make_engine(seed);
  std::normal_distribution<Real> normal(0.0, 1.0);

  LargeScaleMap map;
  map.shadow_sigma_db = shadow_sigma_db;
  map.d0 = d0;
  map.d1 = d1;
  map.zeta.resize(n, k);
  for (Eigen::Index u = 0; u < k; ++u) {
    for (Eigen::Index a = 0; a < n; ++a) {
      const Real d = distance(layout.ap_positions[static_cast<std::size_t>(a)],
                              layout.user_positions[static_cast<std::size_t>(u)]);
      const Real z = normal(engine);
      map.zeta(a, u) = std::pow(10.0, (path_loss_db(d, att, d0, d1) + shadow_sigma_db * z) / 10.0);
    }
  }
  return map;
}

SmallScaleDraw draw_channel(const LargeScaleMap& zeta, Seed seed) {
  Engine engine = make_engine(seed);
  SmallScaleDraw out;
  out.h = complex_gaussian(zeta.zeta.rows(), zeta.zeta.cols(), engine);
  out.g_true = zeta.zeta.cwiseSqrt().cast<Complex>().cwiseProduct(out.h);
  return out;
}

Real tau_for(Real sigma_e, TauMode mode) {
  const Real s2 = sigma_e * sigma_e;
  return mode == TauMode::paper ? std::sqrt(1.0 + s2) : std::sqrt(1.0 - s2);
}

ChannelSet draw_estimate(const LargeScaleMap& zeta, const CMatrix& h, Real sigma_e,
                         Seed seed, TauMode tau_mode) {
  if (!(sigma_e >= 0.0) || !(sigma_e < 1.0)) {
    throw std::invalid_argument("draw_estimate: sigma_e must lie in [0, 1)");
  }
  if (h.rows() != zeta.zeta.rows() || h.cols() != zeta.zeta.cols()) {
    throw std::invalid_argument("draw_estimate: h shape does not match zeta");
  }
  Engine engine = make_engine(seed);
  const CMatrix h_err = complex_gaussian(h.rows(), h.cols(), engine);
  const CMatrix root_zeta = zeta.zeta.cwiseSqrt().cast<Complex>();

  ChannelSet set;
  set.sigma_e = sigma_e;
  set.tau = tau_for(sigma_e, tau_mode);
  set.g_true = root_zeta.cwiseProduct(h);
  if (sigma_e == 0.0) {
    set.g_hat = set.g_true;
    set.g_err = CMatrix::Zero(h.rows(), h.cols());
    return set;
  }
  set.g_err = sigma_e * root_zeta.cwiseProduct(h_err);
  set.g_hat = std::sqrt(1.0 - sigma_e * sigma_e) * set.g_true + set.g_err;
  return set;
}

Real noise_variance(Real t0, Real kb, Real bandwidth, Real nf_db) {
  if (!(t0 > 0.0) || !(kb > 0.0) || !(bandwidth > 0.0)) {
    throw std::invalid_argument("noise_variance: arguments must be positive");
  }
  return t0 * kb * bandwidth * std::pow(10.0, nf_db / 10.0);
}

NoiseModel make_noise_model(Real t0, Real kb, Real bandwidth, Real nf_db) {
  return NoiseModel{t0, kb, bandwidth, nf_db, noise_variance(t0, kb, bandwidth, nf_db)};
}

Real snr(Real p_t, const CMatrix& g_true, Real sigma_n2) {
  if (sigma_n2 == 0.0) {
    throw std::domain_error("snr: zero noise variance");
  }
  const auto nk = static_cast<Real>(g_true.rows() * g_true.cols());
  return p_t * g_true.squaredNorm() / (nk * sigma_n2);
}

Real transmit_power_for_snr(Real snr_linear, const CMatrix& g_true, Real sigma_n2) {
  const Real energy = g_true.squaredNorm();
  if (!(energy > 0.0)) {
    throw std::domain_error("transmit_power_for_snr: all-zero channel");
  }
  const auto nk = static_cast<Real>(g_true.rows() * g_true.cols());
  return snr_linear * nk * sigma_n2 / energy;
}

}  // namespace cfthp
