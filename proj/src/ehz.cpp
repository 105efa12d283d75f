#include "sympcap/ehz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <boost/random/sobol.hpp>

#include "sympcap/error.hpp"

namespace sympcap {

namespace {

constexpr double kChordThreshold = 1.0 - 1e-6;

// Classical RK4 step of y' = f(y).
template <class Rhs>
Vec rk4(const Rhs& f, const Vec& y, double h) {
  const Vec k1 = f(y);
  const Vec k2 = f(y + 0.5 * h * k1);
  const Vec k3 = f(y + 0.5 * h * k2);
  const Vec k4 = f(y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Adaptive RK4 by step doubling. The error is measured on the first
// `err_dims` components only; `project` pulls the state back onto {g = 1}.
// Returns the step actually taken; `h` holds the suggestion for the next one.
template <class Rhs, class Project>
double adaptive_step(const Rhs& f, const Project& project, Vec& y, double& h, double h_max, Eigen::Index err_dims,
                     double tol) {
  for (;;) {
    const double hh = std::min(h, h_max);
    const Vec full = rk4(f, y, hh);
    const Vec half = rk4(f, rk4(f, y, 0.5 * hh), 0.5 * hh);
    const double err = (half.head(err_dims) - full.head(err_dims)).norm() / 15.0;
    const double bound = tol * std::max(1.0, y.head(err_dims).norm());
    const double factor = err > 0.0 ? 0.9 * std::pow(bound / err, 0.2) : 4.0;
    if (err <= bound) {
      y = half + (half - full) / 15.0;
      project(y);
      if (hh == h) h = hh * std::clamp(factor, 0.2, 4.0);
      return hh;
    }
    h = hh * std::clamp(factor, 0.1, 0.9);
    if (h < 1e-14) fail(ErrorCode::kNonClosure, "flow integration: step size underflow");
  }
}

// Cubic Hermite interpolation on [0, h] at fraction tau.
Vec hermite(const Vec& xa, const Vec& fa, const Vec& xb, const Vec& fb, double h, double tau) {
  const double t2 = tau * tau;
  const double t3 = t2 * tau;
  return (2 * t3 - 3 * t2 + 1) * xa + (t3 - 2 * t2 + tau) * h * fa + (-2 * t3 + 3 * t2) * xb + (t3 - t2) * h * fb;
}

class Flow {
 public:
  Flow(const SmoothGauge& g, double tol) : g_(g), tol_(tol), dim_(g.dim()) {}

  Vec field(const Vec& x) const { return apply_J(g_.gradient(x)); }

  void project(Vec& y) const {
    const double v = g_.value(y.head(dim_));
    y.head(dim_) /= v;
  }

  // One adaptive step of the plain flow.
  double step(Vec& x, double& h, double h_max) const {
    auto f = [this](const Vec& y) { return field(y); };
    auto p = [this](Vec& y) { project(y); };
    return adaptive_step(f, p, x, h, h_max, dim_, tol_);
  }

  // phi_T(x) together with its derivative.
  std::pair<Vec, Mat> flow_with_variation(const Vec& x, double period) const {
    const Eigen::Index d = dim_;
    const Mat j = complex_structure(static_cast<int>(d / 2));
    auto f = [&](const Vec& y) {
      Vec dy(y.size());
      const Vec xs = y.head(d);
      dy.head(d) = apply_J(g_.gradient(xs));
      const Mat jh = j * g_.hessian(xs);
      dy.tail(d * d) = (jh * Eigen::Map<const Mat>(y.data() + d, d, d)).reshaped();
      return dy;
    };
    // No projection here: it would make the map disagree with its variation.
    auto p = [](Vec&) {};
    Vec y(d + d * d);
    y.head(d) = x;
    y.tail(d * d) = Mat::Identity(d, d).reshaped();
    double t = 0.0;
    double h = std::min(period, 0.05);
    while (t < period) {
      const double remaining = period - t;
      const double taken = adaptive_step(f, p, y, h, remaining, d, tol_);
      t = taken == remaining ? period : t + taken;
    }
    return {y.head(d), Eigen::Map<const Mat>(y.data() + d, d, d)};
  }

  const SmoothGauge& gauge() const { return g_; }

 private:
  const SmoothGauge& g_;
  double tol_;
  Eigen::Index dim_;
};

struct Crossing {
  double time;
  Vec point;
};

// Upward crossings of the hyperplane through x0 normal to the flow at x0.
std::vector<Crossing> section_returns(const Flow& flow, const Vec& x0, double max_time, int max_count) {
  const Vec f0 = flow.field(x0);
  auto side = [&](const Vec& x) { return f0.dot(x - x0); };
  std::vector<Crossing> out;
  Vec x = x0;
  Vec fx = f0;
  double s = 0.0;
  double t = 0.0;
  double h = 1e-2;
  while (t < max_time && static_cast<int>(out.size()) < max_count) {
    const Vec xa = x;
    const Vec fa = fx;
    const double sa = s;
    const double taken = flow.step(x, h, max_time - t);
    t += taken;
    fx = flow.field(x);
    s = side(x);
    if (sa < 0.0 && s >= 0.0) {
      double lo = 0.0;
      double hi = 1.0;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (side(hermite(xa, fa, x, fx, taken, mid)) < 0.0 ? lo : hi) = mid;
      }
      out.push_back({t - taken + hi * taken, hermite(xa, fa, x, fx, taken, hi)});
    }
  }
  return out;
}

// Gauss-Newton on [phi_T(x) - x; <x - x0, f0>; g(x) - 1] in the unknowns (x, T).
// Early iterations run on the coarse flow; the fine flow takes over once the
// residual is small, so the final orbit meets the configured ODE tolerance.
std::optional<std::pair<Vec, double>> refine(const Flow& coarse, const Flow& fine, const Vec& x0, double t_init,
                                             const ShootConfig& config) {
  const Eigen::Index d = x0.size();
  const Vec f0 = fine.field(x0);
  const SmoothGauge& g = fine.gauge();

  struct Eval {
    Vec residual;
    Mat jacobian;
  };
  auto evaluate = [&](const Flow& flow, const Vec& x, double period) {
    auto [end, phi] = flow.flow_with_variation(x, period);
    Eval e;
    e.residual.resize(d + 2);
    e.residual.head(d) = end - x;
    e.residual(d) = f0.dot(x - x0);
    e.residual(d + 1) = g.value(x) - 1.0;
    e.jacobian = Mat::Zero(d + 2, d + 1);
    e.jacobian.topLeftCorner(d, d) = phi - Mat::Identity(d, d);
    e.jacobian.topRightCorner(d, 1) = flow.field(end);
    e.jacobian.block(d, 0, 1, d) = f0.transpose();
    e.jacobian.block(d + 1, 0, 1, d) = g.gradient(x).transpose();
    return e;
  };

  const double scale = std::max(1.0, x0.norm());
  const Flow* flow = &coarse;
  Vec x = x0;
  double period = t_init;
  Eval cur = evaluate(*flow, x, period);
  const double initial = cur.residual.norm();
  for (int it = 0; it < config.max_newton; ++it) {
    double norm = cur.residual.norm();
    if (flow != &fine && norm <= 1e-6 * scale) {
      flow = &fine;
      cur = evaluate(*flow, x, period);
      norm = cur.residual.norm();
    }
    if (flow == &fine && norm <= config.newton_tol * scale) return std::make_pair(x, period);
    // Slow progress means the guess is not near a closed orbit.
    if (it >= 10 && norm > 1e-2 * initial) return std::nullopt;
    const Vec delta = -cur.jacobian.completeOrthogonalDecomposition().solve(cur.residual);
    bool improved = false;
    for (double alpha = 1.0; alpha > 1e-2; alpha *= 0.5) {
      const Vec xn = x + alpha * delta.head(d);
      const double tn = period + alpha * delta(d);
      if (!(tn > 0.1 * t_init)) continue;
      Eval next = evaluate(*flow, xn, tn);
      if (next.residual.norm() < norm) {
        x = xn;
        period = tn;
        cur = std::move(next);
        improved = true;
        break;
      }
    }
    if (!improved) {
      // Stalled at the integrator's noise floor.
      if (flow == &fine && norm <= 0.1 * config.closure_tol * scale) return std::make_pair(x, period);
      return std::nullopt;
    }
  }
  if (flow == &fine && cur.residual.norm() <= 0.1 * config.closure_tol * scale) return std::make_pair(x, period);
  return std::nullopt;
}

Orbit sample_orbit(const Flow& flow, const Vec& start, double period, int samples) {
  const Eigen::Index d = start.size();
  Mat pts(samples + 1, d);
  Mat vel(samples + 1, d);
  Vec x = start;
  pts.row(0) = x.transpose();
  vel.row(0) = flow.field(x).transpose();
  double t = 0.0;
  double h = period / samples;
  for (int i = 1; i <= samples; ++i) {
    const double target = period * i / samples;
    while (t < target) {
      const double remaining = target - t;
      const double taken = flow.step(x, h, remaining);
      t = taken == remaining ? target : t + taken;
    }
    pts.row(i) = x.transpose();
    vel.row(i) = flow.field(x).transpose();
  }
  return make_orbit(std::move(pts), period, std::move(vel));
}

// Eighth-order central derivative of the first m rows. Samples past either end
// wrap around, shifted by the closure gap so a slightly open loop does not
// produce a gap / h spike at the seam.
Mat periodic_derivative(const Mat& samples, double period) {
  static constexpr double kWeights[] = {4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
  const Eigen::Index m = samples.rows() - 1;
  const double h = period / static_cast<double>(m);
  const Eigen::RowVectorXd gap = samples.row(m) - samples.row(0);
  Mat out = Mat::Zero(m, samples.cols());
  auto row = [&](Eigen::Index k) -> Eigen::RowVectorXd {
    const Eigen::Index wrapped = ((k % m) + m) % m;
    return samples.row(wrapped) + static_cast<double>((k - wrapped) / m) * gap;
  };
  for (Eigen::Index i = 0; i < m; ++i) {
    for (int k = 1; k <= 4; ++k) out.row(i) += kWeights[k - 1] * (row(i + k) - row(i - k));
    out.row(i) /= h;
  }
  return out;
}

double normj_for(const SmoothGauge& g, const Body& k) {
  const double body = norm_J(k).value;
  if (g.exact()) return body;
  return std::max(body, norm_J_smooth(g).value);
}

}  // namespace

Orbit make_orbit(Mat samples, double period, Mat velocities) {
  if (samples.rows() < 6) fail(ErrorCode::kDomain, "orbit: need at least five distinct samples");
  if (!(period > 0.0)) fail(ErrorCode::kDomain, "orbit: period must be positive");
  if (velocities.size() != 0 && (velocities.rows() != samples.rows() || velocities.cols() != samples.cols())) {
    fail(ErrorCode::kDimension, "orbit: velocities do not match samples");
  }
  Orbit o;
  o.closure_residual = (samples.row(samples.rows() - 1) - samples.row(0)).norm();
  o.samples = std::move(samples);
  o.velocities = std::move(velocities);
  o.period = period;
  o.signed_action = signed_action(o, std::numeric_limits<double>::infinity());
  o.action = std::abs(o.signed_action);
  return o;
}

double signed_action(const Orbit& orbit, double closure_tol) {
  if (orbit.closure_residual > closure_tol) {
    fail(ErrorCode::kClosure, "action: loop is open (closure residual " + std::to_string(orbit.closure_residual) + ")");
  }
  const Eigen::Index m = orbit.samples.rows() - 1;
  const Mat vel = orbit.velocities.size() != 0 ? Mat(orbit.velocities.topRows(m))
                                                : periodic_derivative(orbit.samples, orbit.period);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    sum += apply_J(orbit.samples.row(i).transpose()).dot(vel.row(i).transpose());
  }
  return 0.5 * sum * orbit.period / static_cast<double>(m);
}

double action(const Orbit& orbit, double closure_tol) { return std::abs(signed_action(orbit, closure_tol)); }

Orbit shoot_characteristic(const SmoothGauge& g, const Vec& x0, const ShootConfig& config) {
  half_dim(g.dim());
  if (std::abs(g.value(x0) - 1.0) > 1e-8) fail(ErrorCode::kDomain, "shoot: start point is not on the boundary");
  double max_time = config.max_time;
  if (!(max_time > 0.0)) max_time = 16.0 / norm_J_smooth(g).value;

  const Flow fine(g, config.ode_tol);
  const Flow coarse(g, std::max(config.ode_tol, 1e-8));
  const auto returns = section_returns(coarse, x0, max_time, config.max_candidates);
  if (returns.empty()) fail(ErrorCode::kNonClosure, "shoot: no return to the section before the time limit");
  for (const auto& r : returns) {
    auto fixed = refine(coarse, fine, x0, r.time, config);
    if (!fixed) continue;
    Orbit orbit = sample_orbit(fine, fixed->first, fixed->second, config.samples);
    // Tangency relative to the flow speed, so dilated bodies are judged alike.
    const double speed = std::max(1.0, orbit.velocities.rowwise().norm().maxCoeff());
    if (orbit.closure_residual <= config.closure_tol && tangency_residual(g, orbit) <= config.tangency_tol * speed) {
      return orbit;
    }
  }
  fail(ErrorCode::kRefinement, "shoot: Newton refinement did not close any of " + std::to_string(returns.size()) +
                                   " section returns");
}

Orbit shoot_characteristic(const Body& k, const Vec& x0, const ShootConfig& config) {
  const SmoothGauge g = SmoothGauge::from_body(k);
  ShootConfig c = config;
  if (!(c.max_time > 0.0)) c.max_time = 16.0 / norm_J(k).value;
  return shoot_characteristic(g, x0, c);
}

ReturnLemma verify_return_lemma(const SmoothGauge& g, const Orbit& orbit, double normj, double tol) {
  const Eigen::Index m = orbit.samples.rows() - 1;
  const double dt = orbit.period / static_cast<double>(m);
  const Vec start = orbit.samples.row(0).transpose();
  const Mat vel = orbit.velocities.size() != 0 ? Mat(orbit.velocities)
                                                : Mat(periodic_derivative(orbit.samples, orbit.period));
  auto velocity = [&](Eigen::Index i) { return Vec(vel.row(i % vel.rows()).transpose()); };

  for (Eigen::Index i = 1; i <= m; ++i) {
    const double chord = g.value(orbit.samples.row(i).transpose() - start);
    if (chord < kChordThreshold) continue;
    // Bisect the Hermite interpolant on the last sample interval.
    const Vec xa = orbit.samples.row(i - 1).transpose();
    const Vec xb = orbit.samples.row(i).transpose();
    const Vec fa = velocity(i - 1);
    const Vec fb = velocity(i);
    const double target = std::min(1.0, chord);
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (g.value(hermite(xa, fa, xb, fb, dt, mid) - start) >= target ? hi : lo) = mid;
    }
    ReturnLemma r;
    r.t0 = (static_cast<double>(i - 1) + hi) * dt;
    r.chord_gauge = std::max(g.value(hermite(xa, fa, xb, fb, dt, hi) - start), kChordThreshold);
    r.margin = std::min(r.t0, orbit.period - r.t0) - 1.0 / normj;
    r.bound_holds = r.margin >= -tol;
    return r;
  }
  fail(ErrorCode::kLemmaViolation, "return lemma: chord gauge never reaches 1 along the orbit");
}

ReturnLemma verify_return_lemma(const Body& k, const Orbit& orbit, double tol) {
  const SmoothGauge g = SmoothGauge::from_body(k);
  return verify_return_lemma(g, orbit, normj_for(g, k), tol);
}

double verify_action_period(const Orbit& orbit) { return std::abs(orbit.action - 0.5 * orbit.period); }

double tangency_residual(const SmoothGauge& g, const Orbit& orbit) {
  const Mat deriv = periodic_derivative(orbit.samples, orbit.period);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < deriv.rows(); ++i) {
    const Vec x = orbit.samples.row(i).transpose();
    worst = std::max(worst, (deriv.row(i).transpose() - apply_J(g.gradient(x))).norm());
  }
  return worst;
}

double boundary_residual(const SmoothGauge& g, const Orbit& orbit) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < orbit.samples.rows(); ++i) {
    worst = std::max(worst, std::abs(g.value(orbit.samples.row(i).transpose()) - 1.0));
  }
  return worst;
}

std::string_view to_string(EhzMethod method) {
  switch (method) {
    case EhzMethod::kClosedForm:
      return "closed-form";
    case EhzMethod::kShooting:
      return "shooting";
    case EhzMethod::kPlanarArea:
      return "planar-area";
  }
  return "unknown";
}

std::vector<Vec> boundary_starts(const SmoothGauge& g, int count, std::uint64_t seed) {
  const int d = g.dim();
  const int pairs = (d + 1) / 2;
  boost::random::sobol sobol(2 * pairs);
  // Cranley-Patterson rotation makes the point set depend on the seed.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> shift(2 * pairs);
  for (auto& s : shift) s = unit(rng);

  const double scale = 1.0 / 18446744073709551616.0;  // engine output is 64-bit
  std::vector<Vec> out;
  for (int i = 0; i < count; ++i) {
    std::vector<double> u(2 * pairs);
    for (auto& c : u) c = static_cast<double>(sobol()) * scale;
    Vec x(d);
    for (int p = 0; p < pairs; ++p) {
      const double u1 = 1.0 - std::fmod(u[2 * p] + shift[2 * p], 1.0);  // in (0, 1]
      const double u2 = std::fmod(u[2 * p + 1] + shift[2 * p + 1], 1.0);
      const double r = std::sqrt(-2.0 * std::log(u1));
      x(2 * p) = r * std::cos(2.0 * std::numbers::pi * u2);
      if (2 * p + 1 < d) x(2 * p + 1) = r * std::sin(2.0 * std::numbers::pi * u2);
    }
    if (x.norm() == 0.0) x(0) = 1.0;
    out.push_back(x / g.value(x));
  }
  return out;
}

EhzEstimate ehz_estimate(const Body& k, const EhzConfig& config) {
  half_dim(k.dim());
  if (!is_symmetric(k)) fail(ErrorCode::kSymmetry, "ehz_estimate: body is not centrally symmetric");
  const NormJResult nj = norm_J(k, config.normj);
  EhzEstimate est;
  est.lower_certificate = 1.0 / nj.value;

  if (k.dim() == 2) {
    est.method = EhzMethod::kPlanarArea;
    est.value = ShadowEvaluator(k)(Mat::Identity(2, 2));
    return est;
  }

  const bool ellipsoid = k.is_ellipsoid();
  if (ellipsoid) {
    const Mat q = std::get<Ellipsoid>(flatten(k).rep()).shape;
    const Eigen::EigenSolver<Mat> eig(complex_structure(k.dim() / 2) * q, false);
    est.method = EhzMethod::kClosedForm;
    est.value = std::numbers::pi / eig.eigenvalues().cwiseAbs().maxCoeff();
    if (!config.cross_validate || k.dim() > config.max_shoot_dim) return est;
  } else if (!k.is_polytope()) {
    fail(ErrorCode::kEstimation, "ehz_estimate: no estimator for this representation");
  } else if (k.dim() > config.max_shoot_dim) {
    fail(ErrorCode::kEstimation, "ehz_estimate: shooting is limited to dimension " +
                                     std::to_string(config.max_shoot_dim));
  }

  const SmoothGauge g = SmoothGauge::from_body(k, config.smoothing_power);
  est.smoothing = g.tag();
  est.inflation = g.inflation();
  est.gauge_normj = g.exact() ? nj.value : std::max(nj.value, norm_J_smooth(g).value);

  ShootConfig shoot = config.shoot;
  // A minimal orbit has period 2 c <= 8/||J||; longer returns cannot improve on it.
  if (!(shoot.max_time > 0.0)) shoot.max_time = 8.5 / nj.value;
  const auto starts = boundary_starts(g, config.n_starts, config.seed);
  std::optional<double> best;
  for (int i = 0; i < static_cast<int>(starts.size()); ++i) {
    try {
      Orbit o = shoot_characteristic(g, starts[i], shoot);
      if (!best || o.action < *best * (1.0 - 1e-12)) best = o.action;
      est.orbits.push_back(std::move(o));
      est.orbit_starts.push_back(i);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNonClosure && e.code() != ErrorCode::kRefinement) throw;
      ++est.failed_shots;
    }
  }
  est.gauge = g;
  if (!best) {
    fail(ErrorCode::kEstimation, "ehz_estimate: all " + std::to_string(est.failed_shots) + " shots failed");
  }
  est.shooting_value = best;
  if (!ellipsoid) {
    est.method = EhzMethod::kShooting;
    est.value = *best;
  }
  return est;
}

}  // namespace sympcap
