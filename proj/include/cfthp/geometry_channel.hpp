// Network geometry, large-scale fading, Rayleigh channel draws, imperfect
// channel estimates and the noise/SNR normalisation.
#ifndef CFTHP_GEOMETRY_CHANNEL_HPP
#define CFTHP_GEOMETRY_CHANNEL_HPP

#include "cfthp/types.hpp"

#include <vector>

namespace cfthp {

struct Point2 {
  Real x = 0.0;
  Real y = 0.0;
};

struct NetworkLayout {
  std::vector<Point2> ap_positions;
  std::vector<Point2> user_positions;
  Real side_length = 0.0;  // m
  Real f_mhz = 1900.0;
  Real h_ap = 15.0;  // m
  Real h_u = 1.65;   // m

  Eigen::Index n_aps() const { return static_cast<Eigen::Index>(ap_positions.size()); }
  Eigen::Index n_users() const { return static_cast<Eigen::Index>(user_positions.size()); }
};

/// Large-scale power gains, one entry per (AP, user).
struct LargeScaleMap {
  RMatrix zeta;  // N x K, linear
  Real shadow_sigma_db = 8.0;
  Real d0 = 10.0;
  Real d1 = 50.0;
};

struct ChannelSet {
  CMatrix g_true;  // N x K
  CMatrix g_hat;   // N x K
  CMatrix g_err;   // N x K
  Real sigma_e = 0.0;
  Real tau = 1.0;
};

struct SmallScaleDraw {
  CMatrix h;       // N x K, i.i.d. CN(0, 1)
  CMatrix g_true;  // sqrt(zeta) .* h
};

struct NoiseModel {
  Real t0 = 290.0;           // K
  Real kb = 1.381e-23;       // J/K
  Real bandwidth = 50e6;     // Hz
  Real noise_figure_db = 10.0;
  Real sigma_n2 = 0.0;       // W
};

/// Uniform i.i.d. AP and user positions over [0, side]^2.
NetworkLayout place_network(Eigen::Index n_aps, Eigen::Index n_users, Real side,
                            Seed seed);

/// Attenuation constant L (dB) of the three-slope model.
Real attenuation_constant(Real f_mhz, Real h_ap, Real h_u);

/// Three-slope path loss in dB (a negative number for realistic L).
Real path_loss_db(Real d, Real attenuation_db, Real d0, Real d1);

Real distance(const Point2& a, const Point2& b);

/// zeta = 10^((PL_dB + sigma_s z) / 10), z ~ N(0, 1) i.i.d. per (AP, user).
LargeScaleMap large_scale_coefficients(const NetworkLayout& layout,
                                       Real shadow_sigma_db, Real d0, Real d1,
                                       Seed seed);

SmallScaleDraw draw_channel(const LargeScaleMap& zeta, Seed seed);

Real tau_for(Real sigma_e, TauMode mode);

/// Imperfect estimate g_hat = sqrt(zeta) (sqrt(1 - se^2) h + se h_err).
ChannelSet draw_estimate(const LargeScaleMap& zeta, const CMatrix& h,
                         Real sigma_e, Seed seed,
                         TauMode tau_mode = TauMode::paper);

/// sigma_n^2 = T0 kB B 10^(NF/10).
Real noise_variance(Real t0, Real kb, Real bandwidth, Real nf_db);
NoiseModel make_noise_model(Real t0, Real kb, Real bandwidth, Real nf_db);

/// P_t Tr(G^T G^*) / (N K sigma_n^2).
Real snr(Real p_t, const CMatrix& g_true, Real sigma_n2);

/// Inverse of snr(): the transmit power placing g_true at the target SNR.
Real transmit_power_for_snr(Real snr_linear, const CMatrix& g_true, Real sigma_n2);

inline Real db_to_linear(Real db) { return std::pow(10.0, db / 10.0); }
inline Real linear_to_db(Real lin) { return 10.0 * std::log10(lin); }

}  // namespace cfthp

#endif  // CFTHP_GEOMETRY_CHANNEL_HPP
