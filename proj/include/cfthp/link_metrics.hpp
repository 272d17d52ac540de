// SINR, rates, the nested Monte Carlo ergodic sum-rate and an end-to-end
// symbol-level chain for the THP transmitters.
#ifndef CFTHP_LINK_METRICS_HPP
#define CFTHP_LINK_METRICS_HPP

#include "cfthp/precoders.hpp"
#include "cfthp/scenario.hpp"
#include "cfthp/types.hpp"

#include <functional>
#include <optional>

namespace cfthp {

struct SinrBreakdown {
  Real signal = 1.0;
  Real self_distortion = 0.0;
  Real interference = 0.0;
  Real noise = 0.0;
  Real gamma = 0.0;
};

struct SinrOptions {
  SelfDistortion self_distortion = SelfDistortion::error_power;
  bool square_beta_d = true;
};

/// Self-distortion of the desired stream with the cross term:
///   centralized   |g_err^T p|^2 - 2 Re(g_err^T p)
///   decentralized c^2 |g_err^T p|^2 - 2 Re(c g_err^T p)
Real dg_term(const CVector& g_err_k, const CVector& p_k, Real c_kk, ThpStructure structure);

/// THP SINR of user k from the row of products g_err_k^T p_i (i = 0..K-1).
/// Returns nullopt when the denominator is not positive.
std::optional<SinrBreakdown> try_sinr_from_products(ThpStructure structure,
                                                    const Eigen::Ref<const CVector>& products,
                                                    Eigen::Index k, Real c_kk, Real beta,
                                                    Real tau, Real sigma_n2,
                                                    const SinrOptions& options = {});

std::optional<SinrBreakdown> try_sinr(ThpStructure structure, const CVector& g_err_k,
                                      const CMatrix& p_cols, Eigen::Index k, Real c_kk,
                                      Real beta, Real tau, Real sigma_n2,
                                      const SinrOptions& options = {});

/// As try_sinr, throwing DegenerateSinr on a nonpositive denominator.
SinrBreakdown sinr(ThpStructure structure, const CVector& g_err_k, const CMatrix& p_cols,
                   Eigen::Index k, Real c_kk, Real beta, Real tau, Real sigma_n2,
                   const SinrOptions& options = {});

/// Linear precoder on the true channel:
///   beta^2 |g_k^T p_k|^2 / (beta^2 sum_{i != k} |g_k^T p_i|^2 + sigma_n^2).
SinrBreakdown linear_sinr_from_products(const Eigen::Ref<const CVector>& products,
                                        Eigen::Index k, Real beta, Real sigma_n2);
SinrBreakdown linear_sinr(const CVector& g_true_k, const CMatrix& p_cols, Eigen::Index k,
                          Real beta, Real sigma_n2);

/// log2(1 + gamma).
Real instantaneous_rate(Real gamma);

struct RateReport {
  RVector per_user_avg_rate;
  Real esr = 0.0;
  Real esr_stderr = 0.0;
  Eigen::Index n_outer = 0;
  Eigen::Index n_inner = 0;
  Eigen::Index n_evaluated = 0;   // user SINR evaluations attempted
  Eigen::Index n_degenerate = 0;  // evaluations excluded

  Real excluded_fraction() const {
    return n_evaluated == 0 ? 0.0
                            : static_cast<Real>(n_degenerate) / static_cast<Real>(n_evaluated);
  }
};

/// Called once per (outer, inner) iteration with the precoder in use.
using PrecoderObserver =
    std::function<void(Eigen::Index outer, Eigen::Index inner, const EffectivePrecoder&)>;

/// Outer iterations draw a fresh channel estimate and build the precoder from
/// it; inner iterations redraw only the estimation error. The true channel of
/// an inner draw is (g_hat - g_err) / tau. P_t is set per outer draw so that
/// the drawn channel sits at the scenario SNR.
RateReport ergodic_sum_rate(const Scenario& scenario, const PrecoderKind& kind,
                            Eigen::Index n_outer, Eigen::Index n_inner, Seed seed,
                            const PrecoderObserver& observer = {});

/// Unit-variance constellation points.
const std::vector<Complex>& constellation(Modulation modulation);
Complex nearest_symbol(Complex r, Modulation modulation);

struct SymbolChainOptions {
  ThpStructure structure = ThpStructure::centralized;
  Modulation modulation = Modulation::qpsk;
  Variant variant = Variant::network_wide;  // network_wide or sparse
  Eigen::Index n_vectors = 10000;           // symbol vectors (K symbols each)
  Eigen::Index vectors_per_channel = 100;
  bool noiseless = false;
  std::optional<Real> p_t_offset_db;        // shifts P_t relative to the scenario SNR
};

struct SymbolChainResult {
  Eigen::Index symbols = 0;
  Eigen::Index errors = 0;
  Real ser = 0.0;
  Real mean_power_ratio = 0.0;  // mean of ||x||^2 / P_t
};

/// Encodes random symbols through the feedback filter and modulo, transmits
/// beta F C s_brev (centralized) or beta F s_brev (decentralized) over the true
/// channel with AWGN, scales at the receiver, folds with the modulo and
/// detects the nearest symbol.
SymbolChainResult simulate_symbol_chain(const Scenario& scenario,
                                        const SymbolChainOptions& options, Seed seed);

}  // namespace cfthp

#endif  // CFTHP_LINK_METRICS_HPP
