#include "cfthp/link_metrics.hpp"

#include "cfthp/rng.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace cfthp {

namespace {

Real self_distortion(Complex a, SelfDistortion mode) {
  const Real power = std::norm(a);
  return mode == SelfDistortion::cross_term ? power - 2.0 * a.real() : power;
}

}  // namespace

Real dg_term(const CVector& g_err_k, const CVector& p_k, Real c_kk, ThpStructure structure) {
  if (g_err_k.size() != p_k.size()) {
    throw std::invalid_argument("dg_term: vector lengths differ");
  }
  Complex a = g_err_k.transpose() * p_k;
  if (structure == ThpStructure::decentralized) a *= c_kk;
  return self_distortion(a, SelfDistortion::cross_term);
}

std::optional<SinrBreakdown> try_sinr_from_products(ThpStructure structure,
                                                    const Eigen::Ref<const CVector>& products,
                                                    Eigen::Index k, Real c_kk, Real beta,
                                                    Real tau, Real sigma_n2,
                                                    const SinrOptions& options) {
  if (!(beta > 0.0)) throw std::invalid_argument("sinr: beta must be positive");
  if (!(tau > 0.0)) throw std::invalid_argument("sinr: tau must be positive");

  const bool dec = structure == ThpStructure::decentralized;
  const Real c = dec ? c_kk : 1.0;
  const Real c2 = c * c;

  SinrBreakdown out;
  out.self_distortion = self_distortion(c * products(k), options.self_distortion);
  out.interference = c2 * (products.squaredNorm() - std::norm(products(k)));
  const Real beta_power = (!dec || options.square_beta_d) ? beta * beta : beta;
  out.noise = c2 * tau * tau * sigma_n2 / beta_power;

  const Real denom = out.self_distortion + out.interference + out.noise;
  if (!(denom > 0.0)) return std::nullopt;
  out.gamma = out.signal / denom;
  return out;
}

std::optional<SinrBreakdown> try_sinr(ThpStructure structure, const CVector& g_err_k,
                                      const CMatrix& p_cols, Eigen::Index k, Real c_kk,
                                      Real beta, Real tau, Real sigma_n2,
                                      const SinrOptions& options) {
  if (g_err_k.size() != p_cols.rows() || k < 0 || k >= p_cols.cols()) {
    throw std::invalid_argument("sinr: shape mismatch");
  }
  const CVector products = p_cols.transpose() * g_err_k;
  return try_sinr_from_products(structure, products, k, c_kk, beta, tau, sigma_n2, options);
}

SinrBreakdown sinr(ThpStructure structure, const CVector& g_err_k, const CMatrix& p_cols,
                   Eigen::Index k, Real c_kk, Real beta, Real tau, Real sigma_n2,
                   const SinrOptions& options) {
  auto out = try_sinr(structure, g_err_k, p_cols, k, c_kk, beta, tau, sigma_n2, options);
  if (!out) {
    throw DegenerateSinr("sinr: nonpositive denominator for user " + std::to_string(k));
  }
  return *out;
}

SinrBreakdown linear_sinr_from_products(const Eigen::Ref<const CVector>& products,
                                        Eigen::Index k, Real beta, Real sigma_n2) {
  const Real b2 = beta * beta;
  SinrBreakdown out;
  out.signal = b2 * std::norm(products(k));
  out.interference = b2 * (products.squaredNorm() - std::norm(products(k)));
  out.noise = sigma_n2;
  out.gamma = out.signal / (out.interference + out.noise);
  return out;
}

SinrBreakdown linear_sinr(const CVector& g_true_k, const CMatrix& p_cols, Eigen::Index k,
                          Real beta, Real sigma_n2) {
  if (g_true_k.size() != p_cols.rows() || k < 0 || k >= p_cols.cols()) {
    throw std::invalid_argument("linear_sinr: shape mismatch");
  }
  const CVector products = p_cols.transpose() * g_true_k;
  return linear_sinr_from_products(products, k, beta, sigma_n2);
}

Real instantaneous_rate(Real gamma) {
  if (!(gamma >= 0.0)) {
    throw std::invalid_argument("instantaneous_rate: negative SINR");
  }
  return std::log2(1.0 + gamma);
}

RateReport ergodic_sum_rate(const Scenario& scenario, const PrecoderKind& kind,
                            Eigen::Index n_outer, Eigen::Index n_inner, Seed seed,
                            const PrecoderObserver& observer) {
  if (n_outer < 1 || n_inner < 1) {
    throw std::invalid_argument("ergodic_sum_rate: counts must be positive");
  }
  const auto& params = scenario.params;
  const Eigen::Index k_users = params.n_users;
  const Real sigma_e = params.sigma_e();
  const Real tau = tau_for(sigma_e, params.tau_mode);
  const Real sigma_n2 = scenario.noise.sigma_n2;
  const Real snr_linear = db_to_linear(params.snr_db);
  const SinrOptions options{params.self_distortion, params.square_beta_d};
  const CMatrix root_zeta = scenario.zeta.zeta.cwiseSqrt().cast<Complex>();

  RateReport report;
  report.n_outer = n_outer;
  report.n_inner = n_inner;
  report.per_user_avg_rate = RVector::Zero(k_users);
  RVector outer_sums(n_outer);

  RVector rate_acc(k_users);
  Eigen::VectorXi kept(k_users);
  for (Eigen::Index o = 0; o < n_outer; ++o) {
    const SmallScaleDraw draw =
        draw_channel(scenario.zeta, derive_seed(seed, StreamTag::small_scale, static_cast<std::uint64_t>(o)));
    const ChannelSet estimate =
        draw_estimate(scenario.zeta, draw.h, sigma_e,
                      derive_seed(seed, StreamTag::estimate, static_cast<std::uint64_t>(o)),
                      params.tau_mode);
    const Real p_t = transmit_power_for_snr(snr_linear, estimate.g_true, sigma_n2);
    const CMatrix g_bar = sparse_channel(estimate.g_hat, scenario.serving_sets);

    EffectivePrecoder precoder;
    try {
      precoder = build_precoder(kind, estimate.g_hat, g_bar, scenario.clusters, p_t);
    } catch (const SingularFactorization& e) {
      throw SingularFactorization("outer draw " + std::to_string(o) + ": " + e.what(), e.row());
    }

    rate_acc.setZero();
    kept.setZero();
    for (Eigen::Index j = 0; j < n_inner; ++j) {
      if (observer) observer(o, j, precoder);
      CMatrix g_err;
      if (sigma_e > 0.0) {
        Engine engine = make_engine(derive_seed(seed, StreamTag::error,
                                                static_cast<std::uint64_t>(o),
                                                static_cast<std::uint64_t>(j)));
        g_err = sigma_e * root_zeta.cwiseProduct(
                              complex_gaussian(root_zeta.rows(), root_zeta.cols(), engine));
      } else {
        g_err = CMatrix::Zero(root_zeta.rows(), root_zeta.cols());
      }

      if (kind.is_thp()) {
        // row k holds g_err_k^T p_i
        const CMatrix products = g_err.transpose() * precoder.p_mat;
        for (Eigen::Index k = 0; k < k_users; ++k) {
          ++report.n_evaluated;
          const auto s = try_sinr_from_products(kind.structure(), products.row(k).transpose(), k,
                                                precoder.per_user_c(k), precoder.beta, tau,
                                                sigma_n2, options);
          if (!s) {
            ++report.n_degenerate;
            continue;
          }
          rate_acc(k) += instantaneous_rate(s->gamma);
          kept(k) += 1;
        }
      } else {
        const CMatrix g_true = (estimate.g_hat - g_err) / tau;
        const CMatrix products = g_true.transpose() * precoder.p_mat;
        for (Eigen::Index k = 0; k < k_users; ++k) {
          ++report.n_evaluated;
          const auto s = linear_sinr_from_products(products.row(k).transpose(), k, precoder.beta,
                                                   sigma_n2);
          rate_acc(k) += instantaneous_rate(s.gamma);
          kept(k) += 1;
        }
      }
    }

    Real sum = 0.0;
    for (Eigen::Index k = 0; k < k_users; ++k) {
      const Real avg = kept(k) > 0 ? rate_acc(k) / static_cast<Real>(kept(k)) : 0.0;
      report.per_user_avg_rate(k) += avg;
      sum += avg;
    }
    outer_sums(o) = sum;
  }

  report.per_user_avg_rate /= static_cast<Real>(n_outer);
  report.esr = report.per_user_avg_rate.sum();
  if (n_outer > 1) {
    const Real mean = outer_sums.mean();
    const Real var = (outer_sums.array() - mean).square().sum() / static_cast<Real>(n_outer - 1);
    report.esr_stderr = std::sqrt(var / static_cast<Real>(n_outer));
  }
  return report;
}

const std::vector<Complex>& constellation(Modulation modulation) {
  static const std::vector<Complex> qpsk = [] {
    const Real a = std::sqrt(0.5);
    return std::vector<Complex>{{a, a}, {-a, a}, {-a, -a}, {a, -a}};
  }();
  static const std::vector<Complex> qam16 = [] {
    std::vector<Complex> pts;
    const Real scale = 1.0 / std::sqrt(10.0);
    for (int re : {-3, -1, 1, 3}) {
      for (int im : {-3, -1, 1, 3}) {
        pts.emplace_back(re * scale, im * scale);
      }
    }
    return pts;
  }();
  return modulation == Modulation::qpsk ? qpsk : qam16;
}

Complex nearest_symbol(Complex r, Modulation modulation) {
  const auto& pts = constellation(modulation);
  Complex best = pts.front();
  Real best_d = std::numeric_limits<Real>::infinity();
  for (const Complex& p : pts) {
    const Real d = std::norm(r - p);
    if (d < best_d) {
      best_d = d;
      best = p;
    }
  }
  return best;
}

SymbolChainResult simulate_symbol_chain(const Scenario& scenario,
                                        const SymbolChainOptions& options, Seed seed) {
  if (options.n_vectors < 1 || options.vectors_per_channel < 1) {
    throw std::invalid_argument("simulate_symbol_chain: counts must be positive");
  }
  if (options.variant == Variant::reduced) {
    throw std::invalid_argument("simulate_symbol_chain: reduced variant has no single feedback chain");
  }
  const auto& params = scenario.params;
  const Eigen::Index k_users = params.n_users;
  const Real sigma_n2 = scenario.noise.sigma_n2;
  const Real lambda = lambda_for(options.modulation);
  const auto& points = constellation(options.modulation);
  const bool centralized = options.structure == ThpStructure::centralized;
  Real snr_linear = db_to_linear(params.snr_db);
  if (options.p_t_offset_db) snr_linear *= db_to_linear(*options.p_t_offset_db);

  SymbolChainResult result;
  Real power_ratio_sum = 0.0;
  Eigen::Index block = 0;
  Eigen::Index remaining = options.n_vectors;
  while (remaining > 0) {
    const Eigen::Index count = std::min(remaining, options.vectors_per_channel);
    const auto b = static_cast<std::uint64_t>(block);
    const SmallScaleDraw draw = draw_channel(scenario.zeta, derive_seed(seed, StreamTag::small_scale, b));
    const ChannelSet ch = draw_estimate(scenario.zeta, draw.h, params.sigma_e(),
                                        derive_seed(seed, StreamTag::estimate, b), params.tau_mode);
    const Real p_t = transmit_power_for_snr(snr_linear, ch.g_true, sigma_n2);
    const CMatrix design = options.variant == Variant::network_wide
                               ? ch.g_hat
                               : sparse_channel(ch.g_hat, scenario.serving_sets);
    const ThpFilterSet filters = thp_filters(design.transpose(), options.structure, p_t);
    const CMatrix tx_filter = centralized
                                  ? CMatrix(filters.f_mat * filters.c_diag.cast<Complex>().asDiagonal())
                                  : filters.f_mat;
    const CMatrix g_t = ch.g_true.transpose();

    Engine sym_engine = make_engine(derive_seed(seed, StreamTag::symbols, b));
    Engine noise_engine = make_engine(derive_seed(seed, StreamTag::noise, b));
    std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);

    CVector s(k_users);
    for (Eigen::Index v = 0; v < count; ++v) {
      for (Eigen::Index k = 0; k < k_users; ++k) s(k) = points[pick(sym_engine)];
      const auto enc = feedback_encode(s, filters.b_mat, lambda);
      const CVector x = filters.beta * (tx_filter * enc.s_brev);
      power_ratio_sum += x.squaredNorm() / p_t;

      CVector y = g_t * x;
      const CMatrix noise = complex_gaussian(k_users, 1, noise_engine);
      if (!options.noiseless) y += std::sqrt(sigma_n2) * noise.col(0);

      for (Eigen::Index k = 0; k < k_users; ++k) {
        Complex r = y(k) / filters.beta;
        if (!centralized) r *= filters.c_diag(k);
        const Complex detected = nearest_symbol(modulo(r, lambda), options.modulation);
        if (detected != s(k)) ++result.errors;
      }
      result.symbols += k_users;
    }
    remaining -= count;
    ++block;
  }
  result.ser = static_cast<Real>(result.errors) / static_cast<Real>(result.symbols);
  result.mean_power_ratio = power_ratio_sum / static_cast<Real>(options.n_vectors);
  return result;
}

}  // namespace cfthp
