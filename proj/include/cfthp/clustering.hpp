// AP selection from large-scale gains, the sparse effective channel, user
// clusters and the row-selection matrices used by reduced-dimension precoders.
#ifndef CFTHP_CLUSTERING_HPP
#define CFTHP_CLUSTERING_HPP

#include "cfthp/geometry_channel.hpp"
#include "cfthp/types.hpp"

#include <vector>

namespace cfthp {

using IndexList = std::vector<Eigen::Index>;

struct ApSelection {
  std::vector<IndexList> serving_sets;  // K ascending lists, each of size L
  CMatrix g_bar;                        // N x K sparse effective channel
  Eigen::Index l_per_user = 0;
};

struct UserClusters {
  std::vector<IndexList> clusters;           // K ascending lists, k in clusters[k]
  std::vector<RMatrix> selection_matrices;   // |P_k| x K
  Eigen::Index n_a = 1;
  Eigen::Index max_cluster_size = 1;
};

/// For each user, the L APs with the largest zeta (ties: lower AP index
/// first); g_bar keeps g_hat on those entries and is exactly zero elsewhere.
ApSelection select_aps(const LargeScaleMap& zeta, const CMatrix& g_hat, Eigen::Index l);

/// Serving sets only; used when the channel is redrawn but zeta is fixed.
std::vector<IndexList> serving_sets(const RMatrix& zeta, Eigen::Index l);

/// g_hat with every entry outside the serving sets set to zero.
CMatrix sparse_channel(const CMatrix& g_hat, const std::vector<IndexList>& sets);

/// Greedy clusters: start from {k}, scan other users by descending
/// |A_i & A_k| (ties: lower index), admit i if it shares at least n_a APs
/// with every current member; stop at max_size.
UserClusters build_user_clusters(const std::vector<IndexList>& serving_sets,
                                 Eigen::Index n_a, Eigen::Index max_size);
UserClusters build_user_clusters(const ApSelection& selection, Eigen::Index n_a,
                                 Eigen::Index max_size);

/// Row j holds a single one at the j-th lowest cluster index.
RMatrix selection_matrix(const IndexList& cluster, Eigen::Index k_total);

/// U_k Gbar^T.
CMatrix reduce_channel(const RMatrix& u_k, const CMatrix& g_bar);

/// Row of U_k whose one sits at column k.
Eigen::Index mapped_index(const IndexList& cluster, Eigen::Index k);

Eigen::Index shared_count(const IndexList& a, const IndexList& b);

}  // namespace cfthp

#endif  // CFTHP_CLUSTERING_HPP
