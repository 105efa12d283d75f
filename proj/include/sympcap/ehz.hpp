#pragma once

// Ekeland-Hofer-Zehnder capacity: closed characteristics of the flow
// x' = J grad g(x) on the boundary {g = 1}, their symplectic action, the
// self-checks the flow must satisfy, and the capacity estimator.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sympcap/bodies.hpp"
#include "sympcap/normj.hpp"
#include "sympcap/smooth_gauge.hpp"

namespace sympcap {

/// A closed loop sampled uniformly in time. `samples` has m + 1 rows with
/// row i at time i T / m, so the last row closes the loop; `velocities`
/// (optional, same shape) holds the flow field at the samples.
struct Orbit {
  Mat samples;
  Mat velocities;
  double period = 0.0;
  /// |A|, and A itself.
  double action = 0.0;
  double signed_action = 0.0;
  double closure_residual = 0.0;
};

/// Builds an Orbit from samples (m + 1 rows, last closing the loop) taken
/// uniformly over one period; action fields are filled in.
Orbit make_orbit(Mat samples, double period, Mat velocities = Mat());

/// A = 1/2 int <J gamma, gamma'> dt by the periodic trapezoid rule. Uses stored
/// velocities when present, otherwise eighth-order periodic differences.
/// Throws kClosure when the loop is open beyond `closure_tol`.
double signed_action(const Orbit& orbit, double closure_tol = 1e-6);
double action(const Orbit& orbit, double closure_tol = 1e-6);

struct ShootConfig {
  double ode_tol = 1e-10;
  /// Search horizon for section returns; 0 derives it from the norm of J.
  double max_time = 0.0;
  int samples = 4096;
  int max_candidates = 6;
  int max_newton = 30;
  double newton_tol = 1e-9;
  double closure_tol = 1e-6;
  /// Sampled loops must also satisfy |x' - J grad g| <= tangency_tol * max(1, max speed).
  double tangency_tol = 1e-6;
};

/// Integrates from x0 on {g = 1}, finds returns to the section through x0
/// transverse to the flow and refines each (in time order) with Newton on the
/// return map until one closes.
Orbit shoot_characteristic(const SmoothGauge& g, const Vec& x0, const ShootConfig& config = {});
/// Same on a body: ellipsoids exactly, symmetric polytopes smoothed with m = 8.
Orbit shoot_characteristic(const Body& k, const Vec& x0, const ShootConfig& config = {});

struct ReturnLemma {
  double t0 = 0.0;
  double chord_gauge = 0.0;
  /// min(t0, T - t0) - 1/||J||.
  double margin = 0.0;
  bool bound_holds = false;
};

/// First time t0 with g(gamma(t0) - gamma(0)) >= 1 - 1e-6, refined between
/// samples, and the check min(t0, T - t0) >= 1/normj - tol. Throws
/// kLemmaViolation when the chord never reaches the threshold.
ReturnLemma verify_return_lemma(const SmoothGauge& g, const Orbit& orbit, double normj, double tol = 1e-6);
ReturnLemma verify_return_lemma(const Body& k, const Orbit& orbit, double tol = 1e-6);

/// |A - T/2|.
double verify_action_period(const Orbit& orbit);

/// max_i ||gamma'(t_i) - J grad g(gamma(t_i))|| with gamma' from periodic
/// differences of the samples.
double tangency_residual(const SmoothGauge& g, const Orbit& orbit);
/// max_i |g(gamma(t_i)) - 1|.
double boundary_residual(const SmoothGauge& g, const Orbit& orbit);

enum class EhzMethod { kClosedForm, kShooting, kPlanarArea };
std::string_view to_string(EhzMethod method);

struct EhzConfig {
  ShootConfig shoot;
  int n_starts = 64;
  int smoothing_power = 8;
  std::uint64_t seed = 0x243f6a88;
  int max_shoot_dim = 6;
  /// Shoot on ellipsoids as well, to cross-check the closed form.
  bool cross_validate = true;
  NormJOptions normj;
};

struct EhzEstimate {
  double value = 0.0;
  EhzMethod method = EhzMethod::kClosedForm;
  std::vector<Orbit> orbits;
  /// Start index of each orbit.
  std::vector<int> orbit_starts;
  /// 1/||J||_{K° -> K}.
  double lower_certificate = 0.0;
  /// "exact" or the power-sum tag when the flow ran on a smoothed body.
  std::string smoothing = "exact";
  /// c(K) <= inflation^2 * value for smoothed polytopes.
  double inflation = 1.0;
  /// Minimum shooting action (also for cross-validated closed forms).
  std::optional<double> shooting_value;
  int failed_shots = 0;
  /// The gauge the orbits live on and the best lower bound for its ||J||.
  std::optional<SmoothGauge> gauge;
  double gauge_normj = 0.0;
};

EhzEstimate ehz_estimate(const Body& k, const EhzConfig& config = {});

/// Seeded low-discrepancy start points on {g = 1}.
std::vector<Vec> boundary_starts(const SmoothGauge& g, int count, std::uint64_t seed);

}  // namespace sympcap
