#include "cfthp/clustering.hpp"
#include "cfthp/precoders.hpp"
#include "cfthp/rng.hpp"

#include <doctest.h>

using namespace cfthp;

namespace {

UserClusters clusters_from(std::vector<IndexList> lists, Eigen::Index k_total) {
  UserClusters uc;
  for (const auto& c : lists) uc.selection_matrices.push_back(selection_matrix(c, k_total));
  uc.clusters = std::move(lists);
  return uc;
}

UserClusters full_clusters(Eigen::Index k_total) {
  IndexList all(static_cast<std::size_t>(k_total));
  for (Eigen::Index i = 0; i < k_total; ++i) all[static_cast<std::size_t>(i)] = i;
  return clusters_from(std::vector<IndexList>(static_cast<std::size_t>(k_total), all), k_total);
}

}  // namespace

TEST_CASE("labels round-trip") {
  for (const auto& kind : figure_precoders()) CHECK(parse_precoder_label(label(kind)) == kind);
  CHECK(label(figure_precoders()[0]) == "MF-NW");
  CHECK(label(figure_precoders()[7]) == "dTHP-RD");
  CHECK(figure_precoders().size() == 8u);
  CHECK(parse_precoder_label("cTHP-NW") == PrecoderKind{Scheme::cthp, Variant::network_wide});
  CHECK_THROWS_AS(parse_precoder_label("MF-RD"), std::invalid_argument);
  CHECK_THROWS_AS(parse_precoder_label("THP-SP"), std::invalid_argument);
  CHECK_THROWS_AS(parse_precoder_label("ZF"), std::invalid_argument);
}

TEST_CASE("thp filters on a toy channel") {
  CMatrix a(2, 3);
  a << 2.0, 0.0, 0.0, 1.0, 1.0, 0.0;

  const auto cen = thp_filters(a, ThpStructure::centralized, 5.0);
  CHECK(cen.c_diag(0) == doctest::Approx(0.5));
  CHECK(cen.c_diag(1) == doctest::Approx(1.0));
  CMatrix bc(2, 2);
  bc << 1.0, 0.0, 0.5, 1.0;
  CHECK((cen.b_mat - bc).norm() < 1e-14);
  CHECK(cen.beta == doctest::Approx(std::sqrt(5.0 / 1.25)));

  const auto dec = thp_filters(a, ThpStructure::decentralized, 5.0);
  CMatrix bd(2, 2);
  bd << 1.0, 0.0, 1.0, 1.0;
  CHECK((dec.b_mat - bd).norm() < 1e-14);
  CHECK(dec.beta == doctest::Approx(std::sqrt(5.0 / 2.0)));

  // F has orthonormal columns
  CHECK((cen.f_mat.adjoint() * cen.f_mat - CMatrix::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("perfect-CSI cancellation and triangular solve") {
  Engine eng = make_engine(44);
  for (int t = 0; t < 20; ++t) {
    const CMatrix a = complex_gaussian(8, 32, eng);
    const auto cf = thp_filters(a, ThpStructure::centralized, 1.0);
    const auto df = thp_filters(a, ThpStructure::decentralized, 1.0);
    const auto cp = effective_precoder(cf, Variant::network_wide);
    const auto dp = effective_precoder(df, Variant::network_wide);
    CHECK((a * cp.p_mat - CMatrix::Identity(8, 8)).norm() < 1e-9);
    CHECK((df.c_mat().cast<Complex>() * a * dp.p_mat - CMatrix::Identity(8, 8)).norm() < 1e-9);

    const CMatrix explicit_c = cf.f_mat * cf.c_mat().cast<Complex>() * cf.b_mat.inverse();
    CHECK((explicit_c - cp.p_mat).norm() < 1e-10 * explicit_c.norm());
    const CMatrix explicit_d = df.f_mat * df.b_mat.inverse();
    CHECK((explicit_d - dp.p_mat).norm() < 1e-10 * explicit_d.norm());
    CHECK(cp.kind == PrecoderKind{Scheme::cthp, Variant::network_wide});
  }
}

TEST_CASE("sparse channel gives exactly-zero rows") {
  Engine eng = make_engine(8);
  LargeScaleMap z;
  z.zeta = RMatrix::Random(24, 4).cwiseAbs();
  const CMatrix g = complex_gaussian(24, 4, eng);
  const auto sel = select_aps(z, g, 3);
  std::vector<bool> used(24, false);
  for (const auto& s : sel.serving_sets) {
    for (auto n : s) used[static_cast<std::size_t>(n)] = true;
  }
  for (auto structure : {ThpStructure::centralized, ThpStructure::decentralized}) {
    const auto f = thp_filters(sel.g_bar.transpose(), structure, 1.0);
    const auto p = effective_precoder(f);
    for (Eigen::Index n = 0; n < 24; ++n) {
      if (used[static_cast<std::size_t>(n)]) continue;
      CHECK(f.f_mat.row(n).isZero(0));
      CHECK(p.p_mat.row(n).isZero(0));
    }
  }
}

TEST_CASE("reduced-dimension precoders") {
  Engine eng = make_engine(12);

  SUBCASE("full clusters reproduce the sparse precoder") {
    const CMatrix g = complex_gaussian(16, 5, eng);
    const auto uc = full_clusters(5);
    for (auto structure : {ThpStructure::centralized, ThpStructure::decentralized}) {
      const auto sp = effective_precoder(thp_filters(g.transpose(), structure, 3.0));
      const auto rd = rd_precoder(g, uc, structure, 3.0);
      CHECK((sp.p_mat - rd.p_mat).norm() < 1e-10);
      CHECK((sp.per_user_c - rd.per_user_c).norm() < 1e-10);
      CHECK(std::abs(sp.beta - rd.beta) < 1e-10);
      CHECK(rd.kind.variant == Variant::reduced);
    }
    const auto zf = zf_precoder(g.transpose(), 3.0, Variant::sparse);
    const auto zfrd = zf_rd_precoder(g, uc, 3.0);
    CHECK((zf.p_mat - zfrd.p_mat).norm() < 1e-10);
  }

  SUBCASE("singleton clusters") {
    const CMatrix g = complex_gaussian(6, 3, eng);
    const auto uc = clusters_from({{0}, {1}, {2}}, 3);
    const auto c = rd_precoder(g, uc, ThpStructure::centralized, 1.0);
    const auto d = rd_precoder(g, uc, ThpStructure::decentralized, 1.0);
    for (Eigen::Index k = 0; k < 3; ++k) {
      const Real nrm = g.col(k).norm();
      CHECK((c.p_mat.col(k) - g.col(k).conjugate() / (nrm * nrm)).norm() < 1e-12);
      CHECK((d.p_mat.col(k) - g.col(k).conjugate() / nrm).norm() < 1e-12);
      CHECK(d.per_user_c(k) == doctest::Approx(1.0 / nrm));
    }
  }

  SUBCASE("mapped column of a partial cluster") {
    const CMatrix g = complex_gaussian(6, 3, eng);
    const auto uc = clusters_from({{0, 1}, {1}, {0, 2}}, 3);
    CMatrix sub(6, 2);
    sub.col(0) = g.col(0);
    sub.col(1) = g.col(2);
    for (auto structure : {ThpStructure::centralized, ThpStructure::decentralized}) {
      const auto rd = rd_precoder(g, uc, structure, 1.0);
      const auto pair = effective_precoder(thp_filters(sub.transpose(), structure, 1.0));
      // user 2 sits at row 1 of its cluster
      CHECK((rd.p_mat.col(2) - pair.p_mat.col(1)).norm() < 1e-12);
      CHECK(rd.per_user_c(2) == doctest::Approx(pair.per_user_c(1)));

      CMatrix sub01(6, 2);
      sub01.col(0) = g.col(0);
      sub01.col(1) = g.col(1);
      const auto p01 = effective_precoder(thp_filters(sub01.transpose(), structure, 1.0));
      CHECK((rd.p_mat.col(0) - p01.p_mat.col(0)).norm() < 1e-12);
    }
    const auto zr = zf_rd_precoder(g, uc, 1.0);
    const auto zpair = zf_precoder(sub.transpose(), 1.0);
    // zf columns are compared before beta scaling
    CHECK((zr.p_mat.col(2) - zpair.p_mat.col(1)).norm() < 1e-12);
  }
}

TEST_CASE("linear precoders") {
  Engine eng = make_engine(31);
  const CMatrix a = complex_gaussian(4, 10, eng);
  const auto zf = zf_precoder(a, 2.0);
  CHECK((a * zf.p_mat - CMatrix::Identity(4, 4)).norm() < 1e-10);
  CHECK(zf.beta * zf.beta * zf.p_mat.squaredNorm() == doctest::Approx(2.0));

  const auto mf = mf_precoder(a, 2.0);
  CHECK(mf.p_mat == a.adjoint());
  CHECK(mf.beta * mf.beta * mf.p_mat.squaredNorm() == doctest::Approx(2.0));
  CHECK_THROWS_AS(mf_precoder(CMatrix::Zero(2, 3), 1.0), std::domain_error);

  CMatrix dup(2, 3);
  dup << 1.0, 2.0, 3.0, 1.0, 2.0, 3.0;
  CHECK_THROWS_AS(zf_precoder(dup, 1.0), SingularFactorization);
  CHECK_THROWS_AS(thp_filters(dup, ThpStructure::centralized, 1.0), SingularFactorization);
}

TEST_CASE("build_precoder dispatch") {
  Engine eng = make_engine(3);
  const CMatrix g_hat = complex_gaussian(12, 3, eng);
  CMatrix g_bar = g_hat;
  g_bar.row(0).setZero();
  const auto uc = full_clusters(3);
  for (const auto& kind : figure_precoders()) {
    const auto p = build_precoder(kind, g_hat, g_bar, uc, 1.0);
    CHECK(p.kind == kind);
    CHECK(p.p_mat.rows() == 12);
    CHECK(p.p_mat.cols() == 3);
    if (kind.variant == Variant::network_wide) {
      CHECK_FALSE(p.p_mat.row(0).isZero(0));
    } else {
      CHECK(p.p_mat.row(0).isZero(0));
    }
  }
  CHECK_THROWS_AS(build_precoder({Scheme::mf, Variant::reduced}, g_hat, g_bar, uc, 1.0),
                  std::invalid_argument);
}
