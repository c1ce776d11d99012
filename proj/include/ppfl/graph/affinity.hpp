#pragma once
#include <string>
#include <vector>

#include "ppfl/core/matrix.hpp"
#include "ppfl/fedsim/shard.hpp"
#include "ppfl/model/membership.hpp"

namespace ppfl {

// Client affinity matrix W with degrees d_ii = sum_j w_ij. The Laplacian
// L = (D - W) (x) I is never materialized; both operations below act
// blockwise on the M x K membership matrix.
struct AffinityGraph {
  DenseMatrix W;               // M x M, symmetric, nonnegative
  std::vector<double> degree;  // d_ii
  bool psd = false;            // by construction, or estimated for user input
  bool psd_checked = false;

  std::size_t M() const { return W.rows; }

  // All-pairs affinity 1 with the diagonal kept (the mixed-model equivalence
  // setting manipulates the full sum, diagonal included). PSD: ones matrix.
  static AffinityGraph all_ones(std::size_t M);
  // Gram matrix of l2-normalized vectors, diagonal kept: PSD by construction.
  static AffinityGraph cosine_gram(const std::vector<std::vector<double>>& vecs);
  // User-supplied W: validated for symmetry/nonnegativity; PSD estimated by
  // shifted power iteration and recorded (psd=false is a warning, not an error).
  static AffinityGraph from_dense(DenseMatrix W);
  static AffinityGraph from_csv(const std::string& path);  // M x M, header-free
};

// Cosine similarity of the clients' label-frequency vectors with the diagonal
// zeroed (self-affinity adds nothing to the pairwise regularizer).
AffinityGraph affinity_from_label_histograms(const std::vector<std::vector<double>>& hists);
AffinityGraph affinity_from_label_histograms(const std::vector<ClientShard>& shards);

// Block i of (D - W) (x) I applied to C: d_ii c_i - sum_j w_ij c_j.
MembershipMatrix laplacian_apply(const AffinityGraph& g, const MembershipMatrix& C);

// C^T L C, evaluated as the pairwise sum 0.5 * sum_ij w_ij |c_i - c_j|^2 and
// cross-checked against <C, LC> (they must agree to 1e-10 relative).
double laplacian_quadratic(const AffinityGraph& g, const MembershipMatrix& C);

// Smallest eigenvalue estimate of a symmetric matrix via power iteration on
// s*I - A (s = max absolute row sum).
double min_eigenvalue_estimate(const DenseMatrix& sym);

}  // namespace ppfl
