#include "mobandit/rls.hpp"

#include <cmath>
#include <stdexcept>

#include "mobandit/errors.hpp"

namespace mob {

RlsState rls_init(int dim, int num_objectives, double regularizer) {
  if (dim < 1) throw ConfigError("rls_init: dim must be positive");
  if (num_objectives < 1) throw ConfigError("rls_init: num_objectives must be positive");
  if (!(regularizer > 0.0)) throw ConfigError("rls_init: regularizer must be positive");
  RlsState s;
  s.dim = dim;
  s.num_objectives = num_objectives;
  s.regularizer = regularizer;
  s.gram = Mat::identity(dim, regularizer);
  s.gram_inv = Mat::identity(dim, 1.0 / regularizer);
  s.moments.assign(num_objectives, Vec(dim, 0.0));
  s.estimates.assign(num_objectives, Vec(dim, 0.0));
  return s;
}

void rls_update(RlsState& s, std::span<const double> context, std::span<const double> rewards) {
  if (context.size() != static_cast<size_t>(s.dim)) throw std::invalid_argument("rls_update: context length mismatch");
  if (rewards.size() != static_cast<size_t>(s.num_objectives))
    throw std::invalid_argument("rls_update: rewards length mismatch");

  add_outer(s.gram, context);

  // Sherman-Morrison: (V + xx^T)^-1 = V^-1 - (V^-1 x)(V^-1 x)^T / (1 + x^T V^-1 x)
  const Vec vx = matvec(s.gram_inv, context);
  const double denom = 1.0 + dot(context, vx);
  for (int i = 0; i < s.dim; ++i) {
    const double vi = vx[i] / denom;
    double* row = s.gram_inv.data.data() + static_cast<size_t>(i) * s.dim;
    for (int j = 0; j < s.dim; ++j) row[j] -= vi * vx[j];
  }
  // keep gram_inv exactly symmetric so Cholesky stays well-posed
  for (int i = 0; i < s.dim; ++i)
    for (int j = 0; j < i; ++j) {
      const double v = 0.5 * (s.gram_inv(i, j) + s.gram_inv(j, i));
      s.gram_inv(i, j) = v;
      s.gram_inv(j, i) = v;
    }

  for (int ell = 0; ell < s.num_objectives; ++ell)
    for (int i = 0; i < s.dim; ++i) s.moments[ell][i] += context[i] * rewards[ell];

  ++s.rounds_seen;
  if (s.rounds_seen % kInverseRefreshPeriod == 0) s.gram_inv = spd_inverse(s.gram);

  for (int ell = 0; ell < s.num_objectives; ++ell) s.estimates[ell] = matvec(s.gram_inv, s.moments[ell]);
}

SampleBlock sample_block(const RlsState& s, double scale, int num_samples, Rng& rng) {
  if (scale < 0.0) throw std::invalid_argument("sample_block: scale must be nonnegative");
  if (num_samples < 1) throw std::invalid_argument("sample_block: num_samples must be positive");
  const Mat chol = cholesky_lower(s.gram_inv);

  SampleBlock block;
  block.num_samples = num_samples;
  block.num_objectives = s.num_objectives;
  block.dim = s.dim;
  block.samples.reserve(static_cast<size_t>(num_samples) * s.num_objectives);
  Vec g(s.dim);
  for (int ell = 0; ell < s.num_objectives; ++ell) {
    for (int m = 0; m < num_samples; ++m) {
      for (int i = 0; i < s.dim; ++i) g[i] = rng.normal();
      Vec v = s.estimates[ell];
      for (int i = 0; i < s.dim; ++i) {
        double acc = 0.0;
        for (int j = 0; j <= i; ++j) acc += chol(i, j) * g[j];
        v[i] += scale * acc;
      }
      block.samples.push_back(std::move(v));
    }
  }
  return block;
}

double mahalanobis_norm(const RlsState& s, std::span<const double> context) {
  if (context.size() != static_cast<size_t>(s.dim))
    throw std::invalid_argument("mahalanobis_norm: context length mismatch");
  const double q = dot(context, matvec(s.gram_inv, context));
  return std::sqrt(std::max(0.0, q));
}

}  // namespace mob
