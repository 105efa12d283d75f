#pragma once

#include <cstdint>
#include <random>

#include "sympcap/bodies.hpp"
#include "sympcap/error.hpp"
#include "sympcap/symplin.hpp"

namespace sympcap::testing {

inline Vec random_vec(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal;
  Vec x(dim);
  for (auto& c : x) c = normal(rng);
  return x;
}

/// Symmetric polytope conv{+-p_i} with `half` random generators.
inline Body random_symmetric_vpolytope(std::mt19937_64& rng, int dim, int half) {
  Mat v(2 * half, dim);
  for (int i = 0; i < half; ++i) {
    const Vec p = random_vec(rng, dim);
    v.row(i) = p.transpose();
    v.row(half + i) = -p.transpose();
  }
  // Keep the body full-dimensional.
  v.topRows(dim) += 2.0 * Mat::Identity(dim, dim);
  v.middleRows(half, dim) -= 2.0 * Mat::Identity(dim, dim);
  return Body::vpolytope(v);
}

/// Symmetric H-polytope {|<a_i, x>| <= 1} with `half` random rows plus the cube rows.
inline Body random_symmetric_hpolytope(std::mt19937_64& rng, int dim, int half) {
  Mat rows(2 * (half + dim), dim);
  for (int i = 0; i < half; ++i) {
    const Vec a = 0.6 * random_vec(rng, dim);
    rows.row(2 * i) = a.transpose();
    rows.row(2 * i + 1) = -a.transpose();
  }
  for (int i = 0; i < dim; ++i) {
    rows.row(2 * half + 2 * i) = 0.5 * Vec::Unit(dim, i).transpose();
    rows.row(2 * half + 2 * i + 1) = -0.5 * Vec::Unit(dim, i).transpose();
  }
  return Body::hpolytope(rows);
}

/// Seeded symplectic matrix: Cayley of a random symmetric matrix scaled by `scale`.
inline SymplecticMap random_symplectic(std::mt19937_64& rng, int n, double scale = 0.6) {
  const int size = 2 * n;
  for (;;) {
    const Vec params = scale * random_vec(rng, symmetric_param_count(size));
    try {
      return cayley_symplectic(symmetric_from_upper(params, size));
    } catch (const Error&) {
    }
  }
}

}  // namespace sympcap::testing
