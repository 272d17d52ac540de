#include "cfthp/precoders.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cfthp {

Real lambda_for(Modulation modulation) {
  switch (modulation) {
    case Modulation::qpsk:
      return 2.0 * std::numbers::sqrt2;
    case Modulation::qam16:
      return 4.0 * std::sqrt(10.0) / 5.0;
  }
  throw std::invalid_argument("lambda_for: unsupported modulation");
}

std::string label(const PrecoderKind& kind) {
  std::string out;
  switch (kind.scheme) {
    case Scheme::mf: out = "MF"; break;
    case Scheme::zf: out = "ZF"; break;
    case Scheme::cthp: out = "cTHP"; break;
    case Scheme::dthp: out = "dTHP"; break;
  }
  switch (kind.variant) {
    case Variant::network_wide: out += "-NW"; break;
    case Variant::sparse: out += "-SP"; break;
    case Variant::reduced: out += "-RD"; break;
  }
  return out;
}

PrecoderKind parse_precoder_label(std::string_view text) {
  const auto dash = text.find('-');
  if (dash == std::string_view::npos) {
    throw std::invalid_argument("unknown precoder label '" + std::string(text) + "'");
  }
  const auto scheme = text.substr(0, dash);
  const auto variant = text.substr(dash + 1);
  PrecoderKind kind;
  if (scheme == "MF") kind.scheme = Scheme::mf;
  else if (scheme == "ZF") kind.scheme = Scheme::zf;
  else if (scheme == "cTHP") kind.scheme = Scheme::cthp;
  else if (scheme == "dTHP") kind.scheme = Scheme::dthp;
  else throw std::invalid_argument("unknown precoder label '" + std::string(text) + "'");

  if (variant == "NW") kind.variant = Variant::network_wide;
  else if (variant == "SP") kind.variant = Variant::sparse;
  else if (variant == "RD") kind.variant = Variant::reduced;
  else throw std::invalid_argument("unknown precoder label '" + std::string(text) + "'");

  if (kind.scheme == Scheme::mf && kind.variant == Variant::reduced) {
    throw std::invalid_argument("MF-RD is not supported");
  }
  return kind;
}

const std::vector<PrecoderKind>& figure_precoders() {
  static const std::vector<PrecoderKind> kinds = {
      {Scheme::mf, Variant::network_wide},  {Scheme::zf, Variant::network_wide},
      {Scheme::zf, Variant::sparse},        {Scheme::zf, Variant::reduced},
      {Scheme::cthp, Variant::sparse},      {Scheme::dthp, Variant::sparse},
      {Scheme::cthp, Variant::reduced},     {Scheme::dthp, Variant::reduced},
  };
  return kinds;
}

Real thp_beta(ThpStructure structure, const RVector& c_diag, Real p_t) {
  if (structure == ThpStructure::centralized) {
    return std::sqrt(p_t / c_diag.squaredNorm());
  }
  return std::sqrt(p_t / static_cast<Real>(c_diag.size()));
}

ThpFilterSet thp_filters(const CMatrix& g_bar_t, ThpStructure structure, Real p_t) {
  ThpFilterSet out;
  out.structure = structure;
  out.lq = lq_decompose(g_bar_t);
  const auto& l = out.lq.l_mat;
  out.f_mat = out.lq.q_mat.adjoint();
  out.c_diag = l.diagonal().real().cwiseInverse();
  if (structure == ThpStructure::centralized) {
    out.b_mat = l * out.c_diag.cast<Complex>().asDiagonal();
  } else {
    out.b_mat = out.c_diag.cast<Complex>().asDiagonal() * l;
  }
  // the product is 1 up to rounding; the recursion relies on it exactly
  out.b_mat.diagonal().setOnes();
  out.beta = thp_beta(structure, out.c_diag, p_t);
  return out;
}

EffectivePrecoder effective_precoder(const ThpFilterSet& filters, Variant variant) {
  const CMatrix c = filters.c_diag.cast<Complex>().asDiagonal();
  // P^H = B^-H (C F^H) or B^-H F^H
  const CMatrix rhs = filters.structure == ThpStructure::centralized
                          ? CMatrix(c * filters.f_mat.adjoint())
                          : CMatrix(filters.f_mat.adjoint());
  const CMatrix p_h =
      filters.b_mat.adjoint().triangularView<Eigen::UnitUpper>().solve(rhs);

  EffectivePrecoder out;
  out.p_mat = p_h.adjoint();
  out.kind = {filters.structure == ThpStructure::centralized ? Scheme::cthp : Scheme::dthp,
              variant};
  out.per_user_c = filters.c_diag;
  out.beta = filters.beta;
  return out;
}

EffectivePrecoder rd_precoder(const CMatrix& g_bar, const UserClusters& clusters,
                              ThpStructure structure, Real p_t) {
  const Eigen::Index n = g_bar.rows();
  const Eigen::Index k_total = g_bar.cols();
  if (static_cast<Eigen::Index>(clusters.clusters.size()) != k_total) {
    throw std::invalid_argument("rd_precoder: one cluster per user required");
  }
  EffectivePrecoder out;
  out.kind = {structure == ThpStructure::centralized ? Scheme::cthp : Scheme::dthp,
              Variant::reduced};
  out.p_mat.resize(n, k_total);
  out.per_user_c.resize(k_total);

  for (Eigen::Index k = 0; k < k_total; ++k) {
    const auto& cluster = clusters.clusters[static_cast<std::size_t>(k)];
    const CMatrix reduced = reduce_channel(clusters.selection_matrices[static_cast<std::size_t>(k)], g_bar);
    ThpFilterSet filters;
    try {
      filters = thp_filters(reduced, structure, p_t);
    } catch (const SingularFactorization& e) {
      throw SingularFactorization("rd_precoder: cluster of user " + std::to_string(k) + ": " +
                                      e.what(),
                                  e.row());
    }
    const Eigen::Index q = mapped_index(cluster, k);
    // same arithmetic as the sparse precoder, so a full cluster reproduces it exactly
    out.p_mat.col(k) = effective_precoder(filters, Variant::reduced).p_mat.col(q);
    out.per_user_c(k) = filters.c_diag(q);
  }
  out.beta = thp_beta(structure, out.per_user_c, p_t);
  return out;
}

namespace {

CMatrix pseudo_inverse_right(const CMatrix& a) {
  const CMatrix gram = a * a.adjoint();
  Eigen::LLT<CMatrix> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw SingularFactorization("zf_precoder: singular Gram matrix", 0);
  }
  const RVector diag = llt.matrixL().toDenseMatrix().diagonal().real();
  const Real scale = std::sqrt(gram.diagonal().real().maxCoeff());
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (!(diag(i) > 1e-12 * scale)) {
      throw SingularFactorization("zf_precoder: singular Gram matrix at row " + std::to_string(i), i);
    }
  }
  return a.adjoint() * llt.solve(CMatrix::Identity(a.rows(), a.rows()));
}

Real frobenius_beta(const CMatrix& p, Real p_t) {
  const Real energy = p.squaredNorm();
  if (!(energy > 0.0)) {
    throw std::domain_error("precoder has zero energy");
  }
  return std::sqrt(p_t / energy);
}

}  // namespace

EffectivePrecoder zf_precoder(const CMatrix& g_bar_t, Real p_t, Variant variant) {
  EffectivePrecoder out;
  out.kind = {Scheme::zf, variant};
  out.p_mat = pseudo_inverse_right(g_bar_t);
  out.per_user_c = RVector::Ones(g_bar_t.rows());
  out.beta = frobenius_beta(out.p_mat, p_t);
  return out;
}

EffectivePrecoder zf_rd_precoder(const CMatrix& g_bar, const UserClusters& clusters, Real p_t) {
  const Eigen::Index k_total = g_bar.cols();
  if (static_cast<Eigen::Index>(clusters.clusters.size()) != k_total) {
    throw std::invalid_argument("zf_rd_precoder: one cluster per user required");
  }
  EffectivePrecoder out;
  out.kind = {Scheme::zf, Variant::reduced};
  out.p_mat.resize(g_bar.rows(), k_total);
  for (Eigen::Index k = 0; k < k_total; ++k) {
    const auto& cluster = clusters.clusters[static_cast<std::size_t>(k)];
    const CMatrix reduced = reduce_channel(clusters.selection_matrices[static_cast<std::size_t>(k)], g_bar);
    out.p_mat.col(k) = pseudo_inverse_right(reduced).col(mapped_index(cluster, k));
  }
  out.per_user_c = RVector::Ones(k_total);
  out.beta = frobenius_beta(out.p_mat, p_t);
  return out;
}

EffectivePrecoder mf_precoder(const CMatrix& g_bar_t, Real p_t, Variant variant) {
  if (g_bar_t.isZero(0)) {
    throw std::domain_error("mf_precoder: all-zero channel");
  }
  EffectivePrecoder out;
  out.kind = {Scheme::mf, variant};
  out.p_mat = g_bar_t.adjoint();
  out.per_user_c = RVector::Ones(g_bar_t.rows());
  out.beta = frobenius_beta(out.p_mat, p_t);
  return out;
}

EffectivePrecoder build_precoder(const PrecoderKind& kind, const CMatrix& g_hat,
                                 const CMatrix& g_bar, const UserClusters& clusters,
                                 Real p_t) {
  const CMatrix& source = kind.variant == Variant::network_wide ? g_hat : g_bar;
  switch (kind.scheme) {
    case Scheme::mf:
      if (kind.variant == Variant::reduced) break;
      return mf_precoder(source.transpose(), p_t, kind.variant);
    case Scheme::zf:
      if (kind.variant == Variant::reduced) return zf_rd_precoder(g_bar, clusters, p_t);
      return zf_precoder(source.transpose(), p_t, kind.variant);
    case Scheme::cthp:
    case Scheme::dthp:
      if (kind.variant == Variant::reduced) {
        return rd_precoder(g_bar, clusters, kind.structure(), p_t);
      }
      return effective_precoder(thp_filters(source.transpose(), kind.structure(), p_t),
                                kind.variant);
  }
  throw std::invalid_argument("build_precoder: unsupported precoder " + label(kind));
}

}  // namespace cfthp
