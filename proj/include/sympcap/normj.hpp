#pragma once

// Operator norm of the complex structure, ||J||_{K° -> K} = sup_{v,u in K°} <Jv, u>,
// and the capacity bounds it yields: 1/||J|| from below and 4/||J|| from above.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "sympcap/bodies.hpp"

namespace sympcap {

enum class NormJMethod { kExactVertex, kClosedForm, kMultistartAscent };

std::string_view to_string(NormJMethod method);

struct NormJResult {
  double value = 0.0;
  Vec witness_v;
  Vec witness_u;
  NormJMethod method = NormJMethod::kExactVertex;
  /// <J witness_v, witness_u> recomputed from the witnesses.
  double certified_lower = 0.0;
};

struct AscentOptions {
  int starts = 32;
  double rel_tol = 1e-10;
  int max_iterations = 10000;
  std::uint64_t seed = 0x6a09e667;
};

struct NormJOptions {
  EnumerationLimits limits;
  AscentOptions ascent;
};

/// Requires a symmetric body; polytopes are solved exactly over vertex pairs
/// of K°, ellipsoids in closed form, everything else by alternating ascent.
NormJResult norm_J(const Body& k, const NormJOptions& options = {});

/// Alternating maximization of <Jv, u> over K° x K° from seeded starts. Gives
/// a lower bound of ||J|| for any body with the origin inside; exposed for
/// cross-checks and for smooth gauges without an exact formula.
NormJResult norm_J_ascent(const Body& k, const AscentOptions& options = {});

/// max_{i,j} <J a_i, a_j> over the rows of `polar_vertices`, with the arg max.
NormJResult norm_J_vertex_pairs(const Mat& polar_vertices);

double ehz_lower_bound(const Body& k, const NormJOptions& options = {});
double cyl_upper_bound(const Body& k, const NormJOptions& options = {});

struct NonsymBounds {
  double lower = 0.0;
  double upper = 0.0;
  /// Translation that attained `lower`.
  Vec best_translation;
};

/// Bounds for bodies that need not be symmetric: lower is the best of
/// 1/||J||_{(K-v)° -> K-v} over the candidate translations v, upper is
/// 1/||J||_{(K-K)° -> K-K}. Polytopes only.
NonsymBounds nonsym_bounds(const Body& k, std::span<const Vec> translations, const NormJOptions& options = {});

/// Vertex centroid c plus 2n points c + delta_i e_i inside K.
std::vector<Vec> default_translations(const Body& k, const EnumerationLimits& limits = {});

}  // namespace sympcap
