#include "ppfl/model/glm.hpp"

#include <cmath>

namespace ppfl {
namespace {

// Numerical guard: logits are clamped to +/-30 before exponentiation so that
// probabilities stay inside (9.4e-14, 1 - 9.4e-14) and every log stays finite.
// Applied identically at every exp/sigmoid/softmax call site.
constexpr double kLogitClamp = 30.0;

double clamp_logit(double z) {
  if (z > kLogitClamp) return kLogitClamp;
  if (z < -kLogitClamp) return -kLogitClamp;
  return z;
}

double sigmoid_clamped(double z) {
  z = clamp_logit(z);
  return 1.0 / (1.0 + std::exp(-z));
}

// Max-shifted softmax; shifted logits floored at -kLogitClamp before exp.
void softmax_clamped(const double* z, int C, double* out) {
  double zmax = z[0];
  for (int c = 1; c < C; ++c) zmax = std::max(zmax, z[c]);
  double sum = 0.0;
  for (int c = 0; c < C; ++c) {
    double s = z[c] - zmax;
    if (s < -kLogitClamp) s = -kLogitClamp;
    out[c] = std::exp(s);
    sum += out[c];
  }
  for (int c = 0; c < C; ++c) out[c] /= sum;
}

// Per-canonical linear predictors. Scalar links: zk[k] = x . theta_k.
// Softmax: zk[k*C + c] = x . (class-c block of theta_k).
void linear_predictors(const CanonicalEnsemble& ens, const double* x, std::vector<double>& zk) {
  const std::size_t d = ens.feature_dim;
  const std::size_t K = ens.K();
  if (ens.link == Link::softmax) {
    const int C = ens.n_classes;
    zk.assign(K * static_cast<std::size_t>(C), 0.0);
    for (int c = 0; c < C; ++c) {
      for (std::size_t p = 0; p < d; ++p) {
        const double xp = x[p];
        const double* row = ens.theta.row_ptr(static_cast<std::size_t>(c) * d + p);
        for (std::size_t k = 0; k < K; ++k) zk[k * C + c] += xp * row[k];
      }
    }
  } else {
    zk.assign(K, 0.0);
    for (std::size_t p = 0; p < d; ++p) {
      const double xp = x[p];
      const double* row = ens.theta.row_ptr(p);
      for (std::size_t k = 0; k < K; ++k) zk[k] += xp * row[k];
    }
  }
}

struct SampleGrads {
  DenseMatrix* gt = nullptr;        // accumulated, param_dim x K
  std::vector<double>* gc = nullptr;  // accumulated, length K
};

// dz is laid out like zk; scatters dz * x into the theta gradient.
void accum_theta(const CanonicalEnsemble& ens, const double* x, const std::vector<double>& dz,
                 DenseMatrix& gt) {
  const std::size_t d = ens.feature_dim;
  const std::size_t K = ens.K();
  if (ens.link == Link::softmax) {
    const int C = ens.n_classes;
    for (int c = 0; c < C; ++c) {
      for (std::size_t p = 0; p < d; ++p) {
        const double xp = x[p];
        double* row = gt.row_ptr(static_cast<std::size_t>(c) * d + p);
        for (std::size_t k = 0; k < K; ++k) row[k] += dz[k * C + c] * xp;
      }
    }
  } else {
    for (std::size_t p = 0; p < d; ++p) {
      const double xp = x[p];
      double* row = gt.row_ptr(p);
      for (std::size_t k = 0; k < K; ++k) row[k] += dz[k] * xp;
    }
  }
}

// One sample's loss; optionally accumulates dL/dtheta and dL/dc.
double sample_loss(const CanonicalEnsemble& ens, const MembershipVector& c, const double* x,
                   double y, Architecture arch, const SampleGrads& out,
                   std::vector<double>& zk, std::vector<double>& dz,
                   std::vector<double>& scratch) {
  const std::size_t K = ens.K();
  linear_predictors(ens, x, zk);
  const bool want = out.gt != nullptr || out.gc != nullptr;
  if (want) dz.assign(zk.size(), 0.0);

  double loss = 0.0;
  switch (ens.link) {
    case Link::identity: {
      // Both mixture forms coincide under the identity link; the loss-mixture
      // form differs (weighted sum of per-canonical squared errors).
      if (arch == Architecture::loss_mixture) {
        for (std::size_t k = 0; k < K; ++k) {
          const double r = zk[k] - y;
          loss += c.c[k] * 0.5 * r * r;
          if (want) {
            dz[k] = c.c[k] * r;
            if (out.gc) (*out.gc)[k] += 0.5 * r * r;
          }
        }
      } else {
        double yhat = 0.0;
        for (std::size_t k = 0; k < K; ++k) yhat += c.c[k] * zk[k];
        const double r = yhat - y;
        loss = 0.5 * r * r;
        if (want) {
          for (std::size_t k = 0; k < K; ++k) {
            dz[k] = r * c.c[k];
            if (out.gc) (*out.gc)[k] += r * zk[k];
          }
        }
      }
      break;
    }
    case Link::logit: {
      if (arch == Architecture::parameter_mixture) {
        double u = 0.0;
        for (std::size_t k = 0; k < K; ++k) u += c.c[k] * zk[k];
        const double p = sigmoid_clamped(u);
        loss = -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
        if (want) {
          const double du = p - y;
          for (std::size_t k = 0; k < K; ++k) {
            dz[k] = du * c.c[k];
            if (out.gc) (*out.gc)[k] += du * zk[k];
          }
        }
      } else if (arch == Architecture::prediction_mixture) {
        double p = 0.0;
        scratch.resize(K);
        for (std::size_t k = 0; k < K; ++k) {
          scratch[k] = sigmoid_clamped(zk[k]);
          p += c.c[k] * scratch[k];
        }
        loss = -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
        if (want) {
          const double dp = (p - y) / (p * (1.0 - p));
          for (std::size_t k = 0; k < K; ++k) {
            dz[k] = dp * c.c[k] * scratch[k] * (1.0 - scratch[k]);
            if (out.gc) (*out.gc)[k] += dp * scratch[k];
          }
        }
      } else {  // loss_mixture
        for (std::size_t k = 0; k < K; ++k) {
          const double pk = sigmoid_clamped(zk[k]);
          const double lk = -(y * std::log(pk) + (1.0 - y) * std::log(1.0 - pk));
          loss += c.c[k] * lk;
          if (want) {
            dz[k] = c.c[k] * (pk - y);
            if (out.gc) (*out.gc)[k] += lk;
          }
        }
      }
      break;
    }
    case Link::softmax: {
      const int C = ens.n_classes;
      const int cls = static_cast<int>(y);
      if (arch == Architecture::parameter_mixture) {
        scratch.assign(static_cast<std::size_t>(2 * C), 0.0);
        double* u = scratch.data();
        double* s = scratch.data() + C;
        for (std::size_t k = 0; k < K; ++k)
          for (int cc = 0; cc < C; ++cc) u[cc] += c.c[k] * zk[k * C + cc];
        softmax_clamped(u, C, s);
        loss = -std::log(s[cls]);
        if (want) {
          for (std::size_t k = 0; k < K; ++k) {
            double gck = 0.0;
            for (int cc = 0; cc < C; ++cc) {
              const double du = s[cc] - (cc == cls ? 1.0 : 0.0);
              dz[k * C + cc] = du * c.c[k];
              gck += du * zk[k * C + cc];
            }
            if (out.gc) (*out.gc)[k] += gck;
          }
        }
      } else if (arch == Architecture::prediction_mixture) {
        scratch.assign(K * static_cast<std::size_t>(C) + C, 0.0);
        double* sk = scratch.data();      // per-canonical softmax, k*C + c
        double* p = scratch.data() + K * static_cast<std::size_t>(C);
        for (std::size_t k = 0; k < K; ++k) {
          softmax_clamped(zk.data() + k * C, C, sk + k * C);
          for (int cc = 0; cc < C; ++cc) p[cc] += c.c[k] * sk[k * C + cc];
        }
        loss = -std::log(p[cls]);
        if (want) {
          const double inv_py = 1.0 / p[cls];
          for (std::size_t k = 0; k < K; ++k) {
            const double sky = sk[k * C + cls];
            for (int cc = 0; cc < C; ++cc) {
              const double jac = sky * ((cc == cls ? 1.0 : 0.0) - sk[k * C + cc]);
              dz[k * C + cc] = -c.c[k] * inv_py * jac;
            }
            if (out.gc) (*out.gc)[k] += -sky * inv_py;
          }
        }
      } else {  // loss_mixture
        scratch.assign(static_cast<std::size_t>(C), 0.0);
        double* s = scratch.data();
        for (std::size_t k = 0; k < K; ++k) {
          softmax_clamped(zk.data() + k * C, C, s);
          const double lk = -std::log(s[cls]);
          loss += c.c[k] * lk;
          if (want) {
            for (int cc = 0; cc < C; ++cc)
              dz[k * C + cc] = c.c[k] * (s[cc] - (cc == cls ? 1.0 : 0.0));
            if (out.gc) (*out.gc)[k] += lk;
          }
        }
      }
      break;
    }
  }
  if (out.gt) accum_theta(ens, x, dz, *out.gt);
  return loss;
}

void check_shapes(const CanonicalEnsemble& ens, const MembershipVector& c,
                  const LabeledDataset& shard) {
  require(c.K() == ens.K(), "membership length must equal canonical count");
  require(shard.dim() == ens.feature_dim, "feature dimension mismatch");
  require(shard.n() > 0, "empty shard");
  if (ens.link == Link::softmax)
    require(shard.task == Task::multiclass && shard.n_classes == ens.n_classes,
            "softmax ensemble needs a matching multiclass shard");
}

template <class Fn>
void for_batch(const LabeledDataset& shard, IndexView idx, Fn&& fn) {
  if (idx.empty()) {
    for (std::size_t i = 0; i < shard.n(); ++i) fn(i);
  } else {
    for (std::size_t i : idx) {
      require(i < shard.n(), "batch index out of range");
      fn(i);
    }
  }
}

}  // namespace

Link link_for_task(Task t) {
  switch (t) {
    case Task::regression: return Link::identity;
    case Task::binary: return Link::logit;
    case Task::multiclass: return Link::softmax;
  }
  return Link::identity;
}

void CanonicalEnsemble::validate() const {
  require(theta.cols >= 1, "ensemble needs K >= 1");
  const std::size_t expect =
      link == Link::softmax ? feature_dim * static_cast<std::size_t>(n_classes) : feature_dim;
  require(theta.rows == expect, "theta row count inconsistent with link/feature_dim");
  require(theta.all_finite(), "non-finite theta");
}

CanonicalEnsemble init_ensemble(std::size_t feature_dim, std::size_t K, Link link,
                                int n_classes, RngStream& rng) {
  CanonicalEnsemble ens;
  ens.link = link;
  ens.feature_dim = feature_dim;
  ens.n_classes = link == Link::softmax ? n_classes : (link == Link::logit ? 2 : 0);
  const std::size_t pd =
      link == Link::softmax ? feature_dim * static_cast<std::size_t>(n_classes) : feature_dim;
  ens.theta = DenseMatrix(pd, K);
  for (std::size_t p = 0; p < pd; ++p)
    for (std::size_t k = 0; k < K; ++k) ens.theta(p, k) = rng.uniform(-0.05, 0.05);
  return ens;
}

double predict_value(const CanonicalEnsemble& ens, const MembershipVector& c, const double* x,
                     Architecture arch) {
  require(ens.link != Link::softmax, "predict_value is for scalar links");
  require(c.K() == ens.K(), "membership length must equal canonical count");
  std::vector<double> zk;
  linear_predictors(ens, x, zk);
  if (ens.link == Link::identity) {
    double yhat = 0.0;
    for (std::size_t k = 0; k < ens.K(); ++k) yhat += c.c[k] * zk[k];
    return yhat;
  }
  if (arch == Architecture::parameter_mixture) {
    double u = 0.0;
    for (std::size_t k = 0; k < ens.K(); ++k) u += c.c[k] * zk[k];
    return sigmoid_clamped(u);
  }
  double p = 0.0;
  for (std::size_t k = 0; k < ens.K(); ++k) p += c.c[k] * sigmoid_clamped(zk[k]);
  return p;
}

void predict_probs(const CanonicalEnsemble& ens, const MembershipVector& c, const double* x,
                   Architecture arch, std::vector<double>& out) {
  require(ens.link == Link::softmax, "predict_probs is for the softmax link");
  require(c.K() == ens.K(), "membership length must equal canonical count");
  const int C = ens.n_classes;
  std::vector<double> zk;
  linear_predictors(ens, x, zk);
  out.assign(static_cast<std::size_t>(C), 0.0);
  if (arch == Architecture::parameter_mixture) {
    std::vector<double> u(static_cast<std::size_t>(C), 0.0);
    for (std::size_t k = 0; k < ens.K(); ++k)
      for (int cc = 0; cc < C; ++cc) u[cc] += c.c[k] * zk[k * C + cc];
    softmax_clamped(u.data(), C, out.data());
    return;
  }
  std::vector<double> s(static_cast<std::size_t>(C));
  for (std::size_t k = 0; k < ens.K(); ++k) {
    softmax_clamped(zk.data() + k * C, C, s.data());
    for (int cc = 0; cc < C; ++cc) out[cc] += c.c[k] * s[cc];
  }
}

double local_loss(const CanonicalEnsemble& ens, const MembershipVector& c,
                  const LabeledDataset& shard, Architecture arch, IndexView idx) {
  check_shapes(ens, c, shard);
  std::vector<double> zk, dz, scratch;
  SampleGrads none;
  double total = 0.0;
  std::size_t count = 0;
  for_batch(shard, idx, [&](std::size_t i) {
    total += sample_loss(ens, c, shard.X.row_ptr(i), shard.y[i], arch, none, zk, dz, scratch);
    ++count;
  });
  return total / static_cast<double>(count);
}

DenseMatrix grad_theta(const CanonicalEnsemble& ens, const MembershipVector& c,
                       const LabeledDataset& shard, Architecture arch, IndexView idx) {
  check_shapes(ens, c, shard);
  DenseMatrix g(ens.param_dim(), ens.K());
  std::vector<double> zk, dz, scratch;
  SampleGrads out;
  out.gt = &g;
  std::size_t count = 0;
  for_batch(shard, idx, [&](std::size_t i) {
    sample_loss(ens, c, shard.X.row_ptr(i), shard.y[i], arch, out, zk, dz, scratch);
    ++count;
  });
  const double inv = 1.0 / static_cast<double>(count);
  for (double& v : g.data) v *= inv;
  return g;
}

std::vector<double> grad_c(const CanonicalEnsemble& ens, const MembershipVector& c,
                           const LabeledDataset& shard, Architecture arch, IndexView idx) {
  check_shapes(ens, c, shard);
  std::vector<double> g(ens.K(), 0.0);
  std::vector<double> zk, dz, scratch;
  SampleGrads out;
  out.gc = &g;
  std::size_t count = 0;
  for_batch(shard, idx, [&](std::size_t i) {
    sample_loss(ens, c, shard.X.row_ptr(i), shard.y[i], arch, out, zk, dz, scratch);
    ++count;
  });
  const double inv = 1.0 / static_cast<double>(count);
  for (double& v : g) v *= inv;
  return g;
}

}  // namespace ppfl
