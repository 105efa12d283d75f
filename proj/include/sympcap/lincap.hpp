#pragma once

// Linearized capacities: shadow areas of symplectic images (the cylinder side),
// inscribed ball radii (the ball side), the product bound on shadows, the
// cylinder witness built from the norm of J, and the rotated cube.

#include <cstdint>
#include <utility>
#include <vector>

#include "sympcap/bodies.hpp"
#include "sympcap/normj.hpp"

namespace sympcap {

/// A symplectic map with its exact shadow and the product bound at it.
struct Witness {
  SymplecticMap map;
  double shadow;
  double product_bound;
  Vec v_used;
  Vec w_used;
};

struct SearchConfig {
  int restarts = 16;
  int evals_per_restart = 2000;
  /// Initial simplex edge in the Cayley chart.
  double step = 0.25;
  std::uint64_t seed = 0x5851f42d;
  ShadowOptions shadow;
  NormJOptions normj;
};

struct SearchResult {
  SymplecticMap map;
  double value;
  /// (evaluation index, best value so far) at every improvement.
  std::vector<std::pair<int, double>> history;
  std::uint64_t seed;
  int budget_used;
  /// Some restart stopped on its evaluation cap rather than by convergence.
  bool budget_exhausted;
};

/// 4 h_K(S^T e) h_{K ∩ (S^T e)^⊥}(S^T J e), an upper bound for shadow_area(K, S).
double rs_product_bound(const Body& k, const SymplecticMap& s);

/// Symplectic map whose shadow of K is at most 4/||J||, built from the
/// maximizing pair (v, u) of <Jv, u> over K°: S^T e is along v and S^T J e is
/// the multiple of u with omega(w, v) = 1.
Witness cylinder_witness(const Body& k, const NormJOptions& options = {});

/// Nelder-Mead over the Cayley chart M -> cayley(M) * S_warm with restarts,
/// warm-started at the identity and at the cylinder witness. Upper estimate
/// of the linearized cylindrical capacity.
SearchResult minimize_shadow(const Body& k, const SearchConfig& config = {});

/// Largest r with S(B(r)) ⊆ K (translation of S included) for polytopes and
/// for ellipsoids with S linear. 0 when the translation leaves K.
double inscribed_ball_radius(const Body& k, const SymplecticMap& s);

/// Maximizes pi r(S)^2 over the Cayley chart; lower estimate of the
/// linearized Gromov width.
SearchResult lin_gromov_estimate(const Body& k, const SearchConfig& config = {});

struct CubeWidthReport {
  int samples = 0;
  /// Largest pi r^2 seen.
  double max_value = 0.0;
  int violations = 0;
  /// Linear part of the worst sample.
  Mat worst;
};

/// Samples symplectic S and checks pi r(S)^2 <= pi + 1e-9 for the body O(Q),
/// Q = [-1, 1]^{2n}. O must be orthogonal.
CubeWidthReport check_cube_lin_width(const Mat& o, int samples, std::uint64_t seed);

/// The orthogonal n x n matrix with rows sqrt(2) sin(2 pi k j / n) for
/// k < n/2, (-1)^j for k = n/2, sqrt(2) cos(2 pi k j / n) for n/2 < k < n and
/// ones for k = n, all divided by sqrt(n). n must be even.
Mat rotated_cube_matrix(int n);

struct LinfColumns {
  double max_entry;
  double bound;  // sqrt(2 / n)
  bool holds;
};

/// max_i ||O' e_i||_inf against sqrt(2)/sqrt(n).
LinfColumns check_linf_columns(const Mat& oprime);

/// O'(+-sqrt(n) e_i) ⊆ [-sqrt(2), sqrt(2)]^n for the rotated cube matrix.
bool check_cross_polytope_inclusion(int n);

/// blockdiag(I_n, O')([-1, 1]^{2n}).
Body build_rotated_cube(int n);

}  // namespace sympcap
