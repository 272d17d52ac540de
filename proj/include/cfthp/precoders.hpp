// Tomlinson-Harashima and linear precoders for the cell-free downlink.
#ifndef CFTHP_PRECODERS_HPP
#define CFTHP_PRECODERS_HPP

#include "cfthp/clustering.hpp"
#include "cfthp/lq.hpp"
#include "cfthp/modulo.hpp"
#include "cfthp/types.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace cfthp {

/// THP filters built from an LQ factorisation Gbar^T = L Q:
///   F = Q^H, C = diag(1/l_kk), B = L C (centralized) or C L (decentralized).
/// B always has a unit diagonal.
struct ThpFilterSet {
  CMatrix f_mat;   // N x K
  RVector c_diag;  // K
  CMatrix b_mat;   // K x K, unit lower triangular
  Real beta = 0.0;
  ThpStructure structure = ThpStructure::centralized;
  LqFactors<Complex> lq;

  RMatrix c_mat() const { return c_diag.asDiagonal(); }
};

struct PrecoderKind {
  Scheme scheme = Scheme::zf;
  Variant variant = Variant::network_wide;

  bool is_thp() const { return scheme == Scheme::cthp || scheme == Scheme::dthp; }
  ThpStructure structure() const {
    return scheme == Scheme::dthp ? ThpStructure::decentralized : ThpStructure::centralized;
  }
  friend bool operator==(const PrecoderKind&, const PrecoderKind&) = default;
};

/// "MF-NW", "ZF-SP", "dTHP-RD", ...
std::string label(const PrecoderKind& kind);
PrecoderKind parse_precoder_label(std::string_view text);

/// The eight labels of the sweep figures, in plotting order.
const std::vector<PrecoderKind>& figure_precoders();

/// Columns p_k of the effective precoder. The transmitted vector is
/// beta * P * v in the linearised model (v = s + d for THP).
struct EffectivePrecoder {
  CMatrix p_mat;  // N x K
  PrecoderKind kind;
  RVector per_user_c;  // c_kk seen by user k (ones for linear schemes)
  Real beta = 0.0;
};

/// Power scaling for a THP transmit chain with unit-variance s_brev:
/// centralized sqrt(P_t / sum c_kk^2), decentralized sqrt(P_t / K).
Real thp_beta(ThpStructure structure, const RVector& c_diag, Real p_t);

ThpFilterSet thp_filters(const CMatrix& g_bar_t, ThpStructure structure, Real p_t);

/// P = F C B^-1 (centralized) or F B^-1 (decentralized), by triangular solve.
EffectivePrecoder effective_precoder(const ThpFilterSet& filters,
                                     Variant variant = Variant::sparse);

/// Reduced-dimension THP: column k comes from the factorisation of user k's
/// cluster channel U_k Gbar^T, taken at the row q that maps back to user k.
EffectivePrecoder rd_precoder(const CMatrix& g_bar, const UserClusters& clusters,
                              ThpStructure structure, Real p_t);

/// P = A^H (A A^H)^-1 for A = Gbar^T, beta = sqrt(P_t / ||P||_F^2).
EffectivePrecoder zf_precoder(const CMatrix& g_bar_t, Real p_t,
                              Variant variant = Variant::network_wide);

/// Per-cluster zero forcing, column q of each cluster's pseudo-inverse.
EffectivePrecoder zf_rd_precoder(const CMatrix& g_bar, const UserClusters& clusters,
                                 Real p_t);

/// P = A^H, beta = sqrt(P_t / ||P||_F^2).
EffectivePrecoder mf_precoder(const CMatrix& g_bar_t, Real p_t,
                              Variant variant = Variant::network_wide);

/// Builds any supported precoder from the dense estimate, its sparse version
/// and the user clusters.
EffectivePrecoder build_precoder(const PrecoderKind& kind, const CMatrix& g_hat,
                                 const CMatrix& g_bar, const UserClusters& clusters,
                                 Real p_t);

}  // namespace cfthp

#endif  // CFTHP_PRECODERS_HPP
