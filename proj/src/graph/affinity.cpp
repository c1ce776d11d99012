#include "ppfl/graph/affinity.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace ppfl {
namespace {

void finish(AffinityGraph& g) {
  const std::size_t M = g.W.rows;
  require(g.W.cols == M, "affinity matrix must be square");
  g.degree.assign(M, 0.0);
  for (std::size_t i = 0; i < M; ++i) {
    for (std::size_t j = 0; j < M; ++j) {
      const double w = g.W(i, j);
      require(std::isfinite(w) && w >= 0.0, "affinity entries must be finite and nonnegative");
      require(w == g.W(j, i), "affinity matrix must be symmetric");
      g.degree[i] += w;
    }
  }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

DenseMatrix cosine_matrix(const std::vector<std::vector<double>>& vecs, bool keep_diagonal) {
  const std::size_t M = vecs.size();
  require(M >= 2, "affinity needs >= 2 clients");
  std::vector<double> norms(M);
  for (std::size_t i = 0; i < M; ++i) {
    require(vecs[i].size() == vecs[0].size(), "histogram lengths differ");
    norms[i] = std::sqrt(dot(vecs[i], vecs[i]));
    require(norms[i] > 0.0, "zero-histogram client");
  }
  DenseMatrix W(M, M);
  for (std::size_t i = 0; i < M; ++i) {
    W(i, i) = keep_diagonal ? 1.0 : 0.0;
    for (std::size_t j = i + 1; j < M; ++j) {
      double cs = dot(vecs[i], vecs[j]) / (norms[i] * norms[j]);
      if (cs < 0.0) cs = 0.0;  // guard fp noise; frequency vectors are nonnegative
      W(i, j) = W(j, i) = cs;
    }
  }
  return W;
}

}  // namespace

AffinityGraph AffinityGraph::all_ones(std::size_t M) {
  require(M >= 1, "all_ones needs M >= 1");
  AffinityGraph g;
  g.W = DenseMatrix(M, M, 1.0);
  finish(g);
  g.psd = true;  // rank-1 ones matrix
  g.psd_checked = true;
  return g;
}

AffinityGraph AffinityGraph::cosine_gram(const std::vector<std::vector<double>>& vecs) {
  AffinityGraph g;
  g.W = cosine_matrix(vecs, /*keep_diagonal=*/true);
  finish(g);
  g.psd = true;  // Gram matrix of normalized vectors
  g.psd_checked = true;
  return g;
}

AffinityGraph AffinityGraph::from_dense(DenseMatrix W) {
  AffinityGraph g;
  g.W = std::move(W);
  finish(g);
  g.psd = min_eigenvalue_estimate(g.W) >= -1e-9;
  g.psd_checked = true;
  return g;
}

AffinityGraph AffinityGraph::from_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open affinity CSV: " + path, ErrCode::config);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), "empty affinity CSV", ErrCode::config);
  const std::size_t M = rows.size();
  DenseMatrix W(M, M);
  for (std::size_t i = 0; i < M; ++i) {
    require(rows[i].size() == M, "affinity CSV must be square (M x M)", ErrCode::config);
    for (std::size_t j = 0; j < M; ++j) W(i, j) = rows[i][j];
  }
  return from_dense(std::move(W));
}

AffinityGraph affinity_from_label_histograms(const std::vector<std::vector<double>>& hists) {
  AffinityGraph g;
  g.W = cosine_matrix(hists, /*keep_diagonal=*/false);
  finish(g);
  // Zero-diagonal cosine matrices are not PSD in general (two identical
  // histograms give eigenvalues +/-1); record the estimate for the surrogate.
  g.psd = min_eigenvalue_estimate(g.W) >= -1e-9;
  g.psd_checked = true;
  return g;
}

AffinityGraph affinity_from_label_histograms(const std::vector<ClientShard>& shards) {
  std::vector<std::vector<double>> hists;
  hists.reserve(shards.size());
  for (const auto& s : shards) hists.push_back(label_histogram(s));
  return affinity_from_label_histograms(hists);
}

MembershipMatrix laplacian_apply(const AffinityGraph& g, const MembershipMatrix& C) {
  require(C.M == g.M(), "membership row count must equal graph size");
  MembershipMatrix out(C.M, C.K);
  for (std::size_t i = 0; i < C.M; ++i) {
    double* oi = out.row(i);
    const double* ci = C.row(i);
    for (std::size_t k = 0; k < C.K; ++k) oi[k] = g.degree[i] * ci[k];
    for (std::size_t j = 0; j < C.M; ++j) {
      const double w = g.W(i, j);
      if (w == 0.0) continue;
      const double* cj = C.row(j);
      for (std::size_t k = 0; k < C.K; ++k) oi[k] -= w * cj[k];
    }
  }
  return out;
}

double laplacian_quadratic(const AffinityGraph& g, const MembershipMatrix& C) {
  require(C.M == g.M(), "membership row count must equal graph size");
  double pairwise = 0.0;
  for (std::size_t i = 0; i < C.M; ++i) {
    for (std::size_t j = i + 1; j < C.M; ++j) {
      const double w = g.W(i, j);
      if (w == 0.0) continue;
      double nd = 0.0;
      const double* ci = C.row(i);
      const double* cj = C.row(j);
      for (std::size_t k = 0; k < C.K; ++k) {
        const double dkk = ci[k] - cj[k];
        nd += dkk * dkk;
      }
      pairwise += w * nd;  // i<j counted once = 0.5 * full double sum
    }
  }
  // Cross-check against <C, LC>; the two must agree up to rounding.
  const MembershipMatrix LC = laplacian_apply(g, C);
  double quad = 0.0;
  for (std::size_t i = 0; i < C.data.size(); ++i) quad += C.data[i] * LC.data[i];
  const double scale = 1.0 + std::abs(pairwise) + std::abs(quad);
  require(std::abs(pairwise - quad) <= 1e-10 * scale,
          "Laplacian quadratic forms disagree beyond tolerance");
  return pairwise;
}

double min_eigenvalue_estimate(const DenseMatrix& sym) {
  const std::size_t M = sym.rows;
  require(sym.cols == M && M >= 1, "min_eigenvalue_estimate needs a square matrix");
  double shift = 0.0;
  for (std::size_t i = 0; i < M; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < M; ++j) row += std::abs(sym(i, j));
    shift = std::max(shift, row);
  }
  if (shift == 0.0) return 0.0;
  // Power iteration on shift*I - A: dominant eigenvalue = shift - lambda_min.
  std::vector<double> v(M, 1.0 / std::sqrt(static_cast<double>(M))), w(M);
  // Deterministic perturbation so symmetric structures cannot trap iteration.
  for (std::size_t i = 0; i < M; ++i) v[i] += 1e-3 * static_cast<double>(i % 7);
  double lam = 0.0;
  for (int it = 0; it < 200; ++it) {
    for (std::size_t i = 0; i < M; ++i) {
      double s = shift * v[i];
      for (std::size_t j = 0; j < M; ++j) s -= sym(i, j) * v[j];
      w[i] = s;
    }
    double nrm = 0.0;
    for (double x : w) nrm += x * x;
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) return shift;  // A = shift*I exactly
    for (std::size_t i = 0; i < M; ++i) v[i] = w[i] / nrm;
    const bool settled = it > 10 && std::abs(nrm - lam) <= 1e-13 * std::max(1.0, nrm);
    lam = nrm;
    if (settled) break;
  }
  return shift - lam;
}

}  // namespace ppfl
