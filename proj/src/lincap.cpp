#include "sympcap/lincap.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>

#include "nelder_mead.hpp"
#include "sympcap/error.hpp"

namespace sympcap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Symplectic residuals of composed charts grow with the size of the map.
SymplecticMap as_symplectic(const Mat& linear) {
  const double scale = std::max(1.0, linear.cwiseAbs().maxCoeff());
  return SymplecticMap(linear, kSymplecticTol * scale * scale);
}

// Restarted Nelder-Mead minimizing objective(cayley(M) * W) over symmetric M.
// Restart r uses warm[r] as W while those last, then the best map so far.
SearchResult chart_search(int n, const std::function<double(const Mat&)>& objective,
                          const std::vector<SymplecticMap>& warm, const SearchConfig& config) {
  if (config.restarts < 1 || config.evals_per_restart < 1) fail(ErrorCode::kConfig, "search: empty budget");
  if (!(config.step > 0.0)) fail(ErrorCode::kConfig, "search: step must be positive");
  const int dim = 2 * n;
  const int params = symmetric_param_count(dim);

  Mat best = Mat::Identity(dim, dim);
  double best_value = kInf;
  int evals = 0;
  SearchResult out{SymplecticMap::identity(n), kInf, {}, config.seed, 0, false};

  auto consider = [&](const Mat& linear) {
    const double v = objective(linear);
    ++evals;
    if (v < best_value) {
      best_value = v;
      best = linear;
      out.history.emplace_back(evals, v);
    }
    return v;
  };
  for (const auto& w : warm) consider(w.linear());

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.5, 1.5);
  constexpr double kScales[] = {1.0, 0.5, 2.0, 0.25};
  for (int r = 0; r < config.restarts; ++r) {
    const Mat base = r < static_cast<int>(warm.size()) ? warm[r].linear() : best;
    Vec steps(params);
    for (auto& s : steps) s = config.step * kScales[r % 4] * unit(rng);
    auto f = [&](const Vec& x) {
      Mat linear;
      try {
        linear = cayley_symplectic(symmetric_from_upper(x, dim)).linear() * base;
      } catch (const Error&) {
        ++evals;
        return kInf;
      }
      return consider(linear);
    };
    const auto res = detail::nelder_mead(f, Vec::Zero(params), steps, config.evals_per_restart);
    if (!res.converged) out.budget_exhausted = true;
  }

  out.map = as_symplectic(best);
  out.value = best_value;
  out.budget_used = evals;
  return out;
}

// Facet rows, or the ellipsoid shape, of a body usable for inscribed balls.
struct BallTarget {
  std::optional<Mat> facets;
  std::optional<Mat> shape;
};

BallTarget ball_target(const Body& k) {
  if (auto f = polytope_facets(k)) return {std::move(*f), std::nullopt};
  const Body flat = flatten(k);
  if (const auto* e = std::get_if<Ellipsoid>(&flat.rep())) return {std::nullopt, e->shape};
  fail(ErrorCode::kRepresentation, "inscribed ball: body is neither a polytope nor an ellipsoid");
}

double ball_radius(const BallTarget& target, const Body& k, const Mat& linear, const Vec& t) {
  if (target.facets) {
    const Mat& a = *target.facets;
    const Vec slack = Vec::Ones(a.rows()) - a * t;
    if (slack.minCoeff() <= 0.0) return 0.0;
    const Mat images = a * linear;
    return (slack.array() / images.rowwise().norm().array()).minCoeff();
  }
  if (!t.isZero(0.0)) {
    if (gauge(k, t) >= 1.0) return 0.0;
    fail(ErrorCode::kDomain, "inscribed ball: translated balls in ellipsoids are not supported");
  }
  const Mat m = linear.transpose() * *target.shape * linear;
  Eigen::SelfAdjointEigenSolver<Mat> eig(m, Eigen::EigenvaluesOnly);
  return 1.0 / std::sqrt(eig.eigenvalues().maxCoeff());
}

void check_dim(const Body& k, const SymplecticMap& s) {
  if (s.linear().rows() != k.dim()) fail(ErrorCode::kDimension, "map does not match body dimension");
}

}  // namespace

double rs_product_bound(const Body& k, const SymplecticMap& s) {
  check_dim(k, s);
  const int n = s.n();
  const Vec v = s.linear().row(0).transpose();
  const Vec w = s.linear().row(n).transpose();
  return 4.0 * support(k, v) * section_support(k, v, w);
}

Witness cylinder_witness(const Body& k, const NormJOptions& options) {
  const NormJResult nj = norm_J(k, options);
  const Vec v = nj.witness_v.normalized();
  const double pairing = apply_J(v).dot(nj.witness_u);
  if (!(pairing > 0.0)) fail(ErrorCode::kInternal, "cylinder witness: degenerate norm witness");
  const Vec w = nj.witness_u / pairing;
  const auto completion = complete_to_symplectic(v, w);
  ShadowOptions shadow_options;
  shadow_options.limits = options.limits;
  const double shadow = ShadowEvaluator(k, shadow_options)(completion.map.linear());
  return Witness{completion.map, shadow, rs_product_bound(k, completion.map), v, w};
}

SearchResult minimize_shadow(const Body& k, const SearchConfig& config) {
  const int n = half_dim(k.dim());
  const Witness witness = cylinder_witness(k, config.normj);
  const ShadowEvaluator shadow(k, config.shadow);
  return chart_search(n, [&](const Mat& linear) { return shadow(linear); },
                      {SymplecticMap::identity(n), witness.map}, config);
}

double inscribed_ball_radius(const Body& k, const SymplecticMap& s) {
  check_dim(k, s);
  return ball_radius(ball_target(k), k, s.linear(), s.translation());
}

SearchResult lin_gromov_estimate(const Body& k, const SearchConfig& config) {
  const int n = half_dim(k.dim());
  const BallTarget target = ball_target(k);
  const Vec origin = Vec::Zero(k.dim());
  auto value = [&](const Mat& linear) {
    const double r = ball_radius(target, k, linear, origin);
    return -std::numbers::pi * r * r;
  };
  SearchResult out = chart_search(n, value, {SymplecticMap::identity(n)}, config);
  out.value = -out.value;
  for (auto& h : out.history) h.second = -h.second;
  return out;
}

CubeWidthReport check_cube_lin_width(const Mat& o, int samples, std::uint64_t seed) {
  if (o.rows() != o.cols()) fail(ErrorCode::kDimension, "cube width: matrix must be square");
  const int dim = static_cast<int>(o.rows());
  half_dim(dim);
  if ((o.transpose() * o - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-9) {
    fail(ErrorCode::kDomain, "cube width: matrix is not orthogonal");
  }
  if (samples < 1) fail(ErrorCode::kConfig, "cube width: need at least one sample");

  const Body body = Body::linear_image(Body::cube(dim), o);
  const BallTarget target = ball_target(body);
  const Vec origin = Vec::Zero(dim);
  const double limit = std::numbers::pi + 1e-9;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  constexpr double kScales[] = {0.1, 0.3, 1.0, 3.0};
  const int params = symmetric_param_count(dim);

  CubeWidthReport report;
  report.worst = Mat::Identity(dim, dim);
  for (int i = 0; i < samples; ++i) {
    Mat linear = Mat::Identity(dim, dim);
    if (i > 0) {
      while (true) {
        Vec x(params);
        for (auto& c : x) c = kScales[i % 4] * normal(rng);
        try {
          linear = cayley_symplectic(symmetric_from_upper(x, dim)).linear();
          break;
        } catch (const Error&) {
        }
      }
    }
    const double r = ball_radius(target, body, linear, origin);
    const double value = std::numbers::pi * r * r;
    ++report.samples;
    if (value > limit) ++report.violations;
    if (i == 0 || value > report.max_value) {
      report.max_value = value;
      report.worst = linear;
    }
  }
  return report;
}

Mat rotated_cube_matrix(int n) {
  if (n < 2 || n % 2 != 0) {
    fail(ErrorCode::kDomain, "rotated cube: n must be even and at least 2, got " + std::to_string(n));
  }
  const double two_pi = 2.0 * std::numbers::pi;
  const double root2 = std::numbers::sqrt2;
  Mat o(n, n);
  for (int k = 1; k <= n; ++k) {
    for (int j = 1; j <= n; ++j) {
      const double angle = two_pi * static_cast<double>(k) * static_cast<double>(j) / static_cast<double>(n);
      double entry;
      if (2 * k < n) {
        entry = root2 * std::sin(angle);
      } else if (2 * k == n) {
        entry = j % 2 == 0 ? 1.0 : -1.0;
      } else if (k < n) {
        entry = root2 * std::cos(angle);
      } else {
        entry = 1.0;
      }
      o(k - 1, j - 1) = entry / std::sqrt(static_cast<double>(n));
    }
  }
  return o;
}

LinfColumns check_linf_columns(const Mat& oprime) {
  const double bound = std::numbers::sqrt2 / std::sqrt(static_cast<double>(oprime.rows()));
  const double max_entry = oprime.cwiseAbs().maxCoeff();
  return {max_entry, bound, max_entry <= bound + 1e-12};
}

bool check_cross_polytope_inclusion(int n) {
  const Mat o = rotated_cube_matrix(n);
  const double radius = std::sqrt(static_cast<double>(n));
  const double limit = std::numbers::sqrt2 + 1e-12;
  for (int i = 0; i < n; ++i) {
    for (double sign : {1.0, -1.0}) {
      const Vec image = sign * radius * o.col(i);
      if (image.cwiseAbs().maxCoeff() > limit) return false;
    }
  }
  return true;
}

Body build_rotated_cube(int n) {
  const Mat o = rotated_cube_matrix(n);
  Mat map = Mat::Zero(2 * n, 2 * n);
  map.topLeftCorner(n, n).setIdentity();
  map.bottomRightCorner(n, n) = o;
  return Body::linear_image(Body::cube(2 * n), map);
}

}  // namespace sympcap
