#include "cfthp/clustering.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cfthp {

std::vector<IndexList> serving_sets(const RMatrix& zeta, Eigen::Index l) {
  const Eigen::Index n = zeta.rows();
  if (l < 1 || l > n) {
    throw std::invalid_argument("select_aps: L must lie in [1, N], got " + std::to_string(l));
  }
  std::vector<IndexList> sets(static_cast<std::size_t>(zeta.cols()));
  IndexList order(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < zeta.cols(); ++k) {
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      return zeta(a, k) > zeta(b, k);
    });
    IndexList chosen(order.begin(), order.begin() + l);
    std::sort(chosen.begin(), chosen.end());
    sets[static_cast<std::size_t>(k)] = std::move(chosen);
  }
  return sets;
}

CMatrix sparse_channel(const CMatrix& g_hat, const std::vector<IndexList>& sets) {
  if (static_cast<Eigen::Index>(sets.size()) != g_hat.cols()) {
    throw std::invalid_argument("sparse_channel: one serving set per user required");
  }
  CMatrix g_bar = CMatrix::Zero(g_hat.rows(), g_hat.cols());
  for (Eigen::Index k = 0; k < g_hat.cols(); ++k) {
    for (Eigen::Index n : sets[static_cast<std::size_t>(k)]) {
      g_bar(n, k) = g_hat(n, k);
    }
  }
  return g_bar;
}

ApSelection select_aps(const LargeScaleMap& zeta, const CMatrix& g_hat, Eigen::Index l) {
  if (g_hat.rows() != zeta.zeta.rows() || g_hat.cols() != zeta.zeta.cols()) {
    throw std::invalid_argument("select_aps: g_hat shape does not match zeta");
  }
  ApSelection sel;
  sel.serving_sets = serving_sets(zeta.zeta, l);
  sel.g_bar = sparse_channel(g_hat, sel.serving_sets);
  sel.l_per_user = l;
  return sel;
}

Eigen::Index shared_count(const IndexList& a, const IndexList& b) {
  // both lists are sorted ascending
  Eigen::Index count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

UserClusters build_user_clusters(const std::vector<IndexList>& sets, Eigen::Index n_a,
                                 Eigen::Index max_size) {
  if (n_a < 1 || max_size < 1) {
    throw std::invalid_argument("build_user_clusters: n_a and max_size must be positive");
  }
  const auto k_total = static_cast<Eigen::Index>(sets.size());
  UserClusters out;
  out.n_a = n_a;
  out.max_cluster_size = max_size;
  out.clusters.reserve(sets.size());
  out.selection_matrices.reserve(sets.size());

  for (Eigen::Index k = 0; k < k_total; ++k) {
    const auto& own = sets[static_cast<std::size_t>(k)];
    IndexList candidates;
    candidates.reserve(sets.size());
    for (Eigen::Index i = 0; i < k_total; ++i) {
      if (i != k) candidates.push_back(i);
    }
    std::vector<Eigen::Index> overlap(sets.size(), 0);
    for (Eigen::Index i : candidates) {
      overlap[static_cast<std::size_t>(i)] = shared_count(own, sets[static_cast<std::size_t>(i)]);
    }
    std::stable_sort(candidates.begin(), candidates.end(), [&](Eigen::Index a, Eigen::Index b) {
      return overlap[static_cast<std::size_t>(a)] > overlap[static_cast<std::size_t>(b)];
    });

    IndexList members{k};
    for (Eigen::Index i : candidates) {
      if (static_cast<Eigen::Index>(members.size()) >= max_size) break;
      const auto& cand = sets[static_cast<std::size_t>(i)];
      const bool admissible = std::all_of(members.begin(), members.end(), [&](Eigen::Index j) {
        return shared_count(cand, sets[static_cast<std::size_t>(j)]) >= n_a;
      });
      if (admissible) members.push_back(i);
    }
    std::sort(members.begin(), members.end());
    out.selection_matrices.push_back(selection_matrix(members, k_total));
    out.clusters.push_back(std::move(members));
  }
  return out;
}

UserClusters build_user_clusters(const ApSelection& selection, Eigen::Index n_a,
                                 Eigen::Index max_size) {
  return build_user_clusters(selection.serving_sets, n_a, max_size);
}

RMatrix selection_matrix(const IndexList& cluster, Eigen::Index k_total) {
  if (cluster.empty()) {
    throw std::invalid_argument("selection_matrix: empty cluster");
  }
  RMatrix u = RMatrix::Zero(static_cast<Eigen::Index>(cluster.size()), k_total);
  Eigen::Index previous = -1;
  for (std::size_t j = 0; j < cluster.size(); ++j) {
    const Eigen::Index idx = cluster[j];
    if (idx < 0 || idx >= k_total) {
      throw std::invalid_argument("selection_matrix: index " + std::to_string(idx) +
                                  " out of range");
    }
    if (idx <= previous) {
      throw std::invalid_argument("selection_matrix: indices must be strictly ascending");
    }
    u(static_cast<Eigen::Index>(j), idx) = 1.0;
    previous = idx;
  }
  return u;
}

CMatrix reduce_channel(const RMatrix& u_k, const CMatrix& g_bar) {
  if (u_k.cols() != g_bar.cols()) {
    throw std::invalid_argument("reduce_channel: U_k has " + std::to_string(u_k.cols()) +
                                " columns but the channel serves " +
                                std::to_string(g_bar.cols()) + " users");
  }
  return u_k.cast<Complex>() * g_bar.transpose();
}

Eigen::Index mapped_index(const IndexList& cluster, Eigen::Index k) {
  const auto it = std::find(cluster.begin(), cluster.end(), k);
  if (it == cluster.end()) {
    throw std::invalid_argument("mapped_index: user " + std::to_string(k) +
                                " is not in its cluster");
  }
  return static_cast<Eigen::Index>(it - cluster.begin());
}

}  // namespace cfthp
