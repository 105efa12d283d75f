#include "sympcap/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "sympcap/ehz.hpp"
#include "sympcap/error.hpp"
#include "sympcap/normj.hpp"

namespace sympcap {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  // splitmix64 finalizer
  std::uint64_t z = seed + salt * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Stopwatch {
 public:
  explicit Stopwatch(bool enabled) : enabled_(enabled), start_(std::chrono::steady_clock::now()) {}
  void lap(std::map<std::string, double>& into, const std::string& stage) {
    if (!enabled_) return;
    const auto now = std::chrono::steady_clock::now();
    into[stage] = std::chrono::duration<double, std::milli>(now - start_).count();
    start_ = now;
  }

 private:
  bool enabled_;
  std::chrono::steady_clock::time_point start_;
};

// a <= b up to a relative tolerance on b.
Check at_most(std::string name, double a, double b, double rel_tol) {
  return Check{std::move(name), a <= b + rel_tol * std::abs(b), a - b};
}

Check at_most_abs(std::string name, double a, double b, double abs_tol) {
  return Check{std::move(name), a <= b + abs_tol, a - b};
}

bool all_passed(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

Body random_polytope(std::mt19937_64& rng, int dim, int half) {
  std::normal_distribution<double> normal;
  Mat v(2 * half, dim);
  for (int i = 0; i < half; ++i) {
    for (int c = 0; c < dim; ++c) v(i, c) = normal(rng);
    if (i < dim) v(i, i) += 2.0;
    v.row(half + i) = -v.row(i);
  }
  return Body::vpolytope(v);
}

Vec random_params(std::mt19937_64& rng, int count, double scale) {
  std::normal_distribution<double> normal;
  Vec x(count);
  for (auto& c : x) c = scale * normal(rng);
  return x;
}

BoundsReport run_body(const NamedBody& nb, const SuiteConfig& config) {
  const Body& k = nb.body;
  BoundsReport r;
  r.body_id = nb.id;
  r.n = k.dim() / 2;
  r.seed = config.seed;
  Stopwatch clock(config.timing);
  const auto begin = std::chrono::steady_clock::now();
  try {
    const NormJOptions normj_options;
    const NormJResult nj = norm_J(k, normj_options);
    r.normj = nj.value;
    r.lower = 1.0 / nj.value;
    r.upper = 4.0 / nj.value;
    r.checks.push_back(at_most("normj_witness", nj.value, nj.certified_lower, 1e-9));
    clock.lap(r.runtime_ms, "normj");

    EhzConfig ehz_config;
    ehz_config.n_starts = config.ehz_starts;
    ehz_config.seed = derive_seed(config.seed, 1);
    ehz_config.shoot.ode_tol = config.ode_tol;
    const EhzEstimate est = ehz_estimate(k, ehz_config);
    r.ehz = est.value;
    r.ehz_method = std::string(to_string(est.method));
    r.ehz_smoothing = est.smoothing;
    r.checks.push_back(at_most_abs("ehz_above_lower_certificate", r.lower, est.value, 1e-6));
    if (!est.orbits.empty()) {
      double action_period = 0.0;
      double tangency = 0.0;
      double boundary = 0.0;
      double margin = std::numeric_limits<double>::infinity();
      bool lemma_ok = true;
      for (const Orbit& o : est.orbits) {
        action_period = std::max(action_period, verify_action_period(o) / o.period);
        tangency = std::max(tangency, tangency_residual(*est.gauge, o));
        boundary = std::max(boundary, boundary_residual(*est.gauge, o));
        try {
          const ReturnLemma lemma = verify_return_lemma(*est.gauge, o, est.gauge_normj);
          margin = std::min(margin, lemma.margin);
          lemma_ok = lemma_ok && lemma.bound_holds;
        } catch (const Error& err) {
          if (err.code() != ErrorCode::kLemmaViolation) throw;
          lemma_ok = false;
        }
      }
      r.checks.push_back(at_most_abs("action_period", action_period, 1e-5, 0.0));
      r.checks.push_back(Check{"return_lemma", lemma_ok, margin});
      r.checks.push_back(at_most_abs("tangency", tangency, 1e-5, 0.0));
      r.checks.push_back(at_most_abs("boundary", boundary, 1e-6, 0.0));
    }
    if (est.method == EhzMethod::kClosedForm && est.shooting_value) {
      r.checks.push_back(
          at_most_abs("ehz_cross_validation", std::abs(*est.shooting_value - est.value) / est.value, 1e-4, 0.0));
    }
    clock.lap(r.runtime_ms, "ehz");

    const Witness witness = cylinder_witness(k, normj_options);
    r.witness_shadow = witness.shadow;
    r.checks.push_back(at_most_abs("witness_certificate", witness.shadow, r.upper, 1e-6));
    r.checks.push_back(at_most_abs("witness_product_bound", witness.shadow, witness.product_bound, 1e-8));
    r.checks.push_back(at_most_abs("witness_symplectic", symplectic_residual(witness.map.linear()), config.eps_sp, 0.0));
    clock.lap(r.runtime_ms, "witness");

    SearchConfig search = config.search;
    search.seed = derive_seed(config.seed, 2);
    const SearchResult best = minimize_shadow(k, search);
    r.cyl_lin = best.value;
    r.cyl_budget = best.budget_used;
    const double scale = std::max(1.0, best.map.linear().cwiseAbs().maxCoeff());
    r.checks.push_back(at_most_abs("search_symplectic", symplectic_residual(best.map.linear()),
                                   config.eps_sp * scale * scale, 0.0));
    r.checks.push_back(at_most_abs("search_below_witness", best.value, witness.shadow, 1e-8));
    clock.lap(r.runtime_ms, "search");

    apply_chain(r, config.tol_chain);
    r.checks.push_back(at_most("witness_within_4_ehz", r.witness_shadow, 4.0 * r.ehz, config.tol_chain));
  } catch (const Error& err) {
    r.error = err.what();
    r.chain_ok = false;
  }
  if (config.timing) {
    r.runtime_ms["total"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - begin).count();
  }
  return r;
}

// Relative error of `dilated` against factor * base.
Check scales(const std::string& name, double base, double dilated, double factor, double rel_tol) {
  const double expect = factor * base;
  const double err = std::abs(dilated - expect) / std::max(std::abs(expect), 1e-300);
  return Check{name, err <= rel_tol, err};
}

}  // namespace

void apply_chain(BoundsReport& r, double tol_chain) {
  const Check chain[] = {at_most("chain_lower_ehz", r.lower, r.ehz, tol_chain),
                         at_most("chain_ehz_cyl", r.ehz, r.cyl_lin, tol_chain),
                         at_most("chain_cyl_upper", r.cyl_lin, r.upper, tol_chain)};
  r.chain_ok = true;
  for (const Check& c : chain) {
    r.chain_ok = r.chain_ok && c.passed;
    r.checks.push_back(c);
  }
}

bool BoundsReport::passed() const { return error.empty() && chain_ok && all_passed(checks); }

SuiteConfig default_suite_config() {
  SuiteConfig config;
  if (const char* env = std::getenv("SYMPCAP_SEED")) {
    try {
      config.seed = std::stoull(env);
    } catch (const std::exception&) {
      fail(ErrorCode::kConfig, "SYMPCAP_SEED must be an unsigned integer");
    }
  }
  return config;
}

std::vector<BoundsReport> run_sandwich_suite(const std::vector<NamedBody>& bodies, const SuiteConfig& config) {
  if (!(config.tol_chain > 0.0) || !(config.eps_sp > 0.0) || !(config.ode_tol > 0.0)) {
    fail(ErrorCode::kConfig, "tolerances must be positive");
  }
  std::vector<BoundsReport> out;
  out.reserve(bodies.size());
  for (const NamedBody& nb : bodies) out.push_back(run_body(nb, config));
  return out;
}

bool AxiomReport::passed() const {
  return monotone_violations == 0 && dilation_violations == 0 && all_passed(checks);
}

AxiomReport run_axiom_suite(const SuiteConfig& config) {
  AxiomReport report;
  std::mt19937_64 rng(derive_seed(config.seed, 3));
  std::uniform_real_distribution<double> shrink(0.4, 1.0);
  SearchConfig small_search = config.search;
  small_search.restarts = 2;
  small_search.evals_per_restart = 200;

  // Nested pairs K ⊆ L: K keeps the generators of L, each pulled inwards.
  for (int i = 0; i < 50; ++i) {
    const int dim = i % 2 == 0 ? 2 : 4;
    const Body outer = random_polytope(rng, dim, dim + 2);
    Mat inner_vertices = std::get<VPolytope>(outer.rep()).vertices;
    const Eigen::Index half = inner_vertices.rows() / 2;
    for (Eigen::Index j = 0; j < half; ++j) {
      inner_vertices.row(j) *= shrink(rng);
      inner_vertices.row(half + j) = -inner_vertices.row(j);
    }
    const Body inner = Body::vpolytope(inner_vertices);

    std::vector<Check> checks;
    const double normj_inner = norm_J(inner).value;
    const double normj_outer = norm_J(outer).value;
    checks.push_back(at_most("lower", 1.0 / normj_inner, 1.0 / normj_outer, 1e-9));
    checks.push_back(at_most("upper", 4.0 / normj_inner, 4.0 / normj_outer, 1e-9));
    const Witness w = cylinder_witness(outer);
    checks.push_back(at_most("shadow_at_fixed_map", shadow_area(inner, w.map), shadow_area(outer, w.map), 1e-9));
    const auto s = cayley_symplectic(symmetric_from_upper(random_params(rng, symmetric_param_count(dim), 0.3), dim));
    checks.push_back(at_most("inscribed_radius_at_fixed_map", inscribed_ball_radius(inner, s),
                             inscribed_ball_radius(outer, s), 1e-9));
    if (dim == 2) {
      checks.push_back(at_most("ehz", ehz_estimate(inner).value, ehz_estimate(outer).value, 1e-9));
    }
    ++report.monotone_instances;
    for (const Check& c : checks) {
      if (!c.passed) {
        ++report.monotone_violations;
        report.counterexamples.push_back("monotonicity pair " + std::to_string(i) + " (dim " + std::to_string(dim) +
                                         "): " + c.name + " residual " + std::to_string(c.residual));
      }
    }
  }

  // Dilations.
  const double lambdas[] = {0.5, 2.0, 3.0};
  EhzConfig shoot_config;
  shoot_config.n_starts = 16;
  shoot_config.seed = derive_seed(config.seed, 4);
  shoot_config.cross_validate = false;
  shoot_config.shoot.ode_tol = config.ode_tol;
  for (int i = 0; i < 50; ++i) {
    Body k = Body::ball(2);
    std::string kind;
    switch (i % 5) {
      case 0:
        k = random_polytope(rng, 2, 4);
        kind = "polygon";
        break;
      case 1: {
        std::uniform_real_distribution<double> radius(0.5, 2.0);
        const double radii[] = {radius(rng), radius(rng)};
        k = Body::ellipsoid_radii(radii);
        kind = "ellipsoid";
        break;
      }
      case 2:
        k = i % 2 == 0 ? Body::cube(4) : Body::cross_polytope(4);
        kind = "cube/cross";
        break;
      case 3:
        k = random_polytope(rng, 4, 5);
        kind = "polytope4";
        break;
      default:
        k = Body::linear_image(Body::ball(4),
                               cayley_symplectic(symmetric_from_upper(random_params(rng, 10, 0.3), 4)).linear());
        kind = "symplectic ball";
        break;
    }
    const double lambda = lambdas[i % 3];
    const double area = lambda * lambda;
    const Body big = scaled(k, lambda);

    std::vector<Check> checks;
    const double nj = norm_J(k).value;
    const double nj_big = norm_J(big).value;
    checks.push_back(scales("lower", 1.0 / nj, 1.0 / nj_big, area, 1e-9));
    checks.push_back(scales("upper", 4.0 / nj, 4.0 / nj_big, area, 1e-9));
    checks.push_back(scales("witness_shadow", cylinder_witness(k).shadow, cylinder_witness(big).shadow, area, 1e-9));
    const auto id = SymplecticMap::identity(k.dim() / 2);
    const double r = inscribed_ball_radius(k, id);
    const double r_big = inscribed_ball_radius(big, id);
    checks.push_back(scales("inscribed_ball", kPi * r * r, kPi * r_big * r_big, area, 1e-9));
    small_search.seed = derive_seed(config.seed, 5 + static_cast<std::uint64_t>(i));
    checks.push_back(
        scales("cyl_lin", minimize_shadow(k, small_search).value, minimize_shadow(big, small_search).value, area, 1e-6));
    try {
      const EhzEstimate e = ehz_estimate(k, shoot_config);
      const EhzEstimate e_big = ehz_estimate(big, shoot_config);
      checks.push_back(scales("ehz", e.value, e_big.value, area, e.method == EhzMethod::kShooting ? 1e-4 : 1e-9));
    } catch (const Error& err) {
      checks.push_back(Check{std::string("ehz: ") + err.what(), false, std::numeric_limits<double>::quiet_NaN()});
    }

    ++report.dilation_instances;
    for (const Check& c : checks) {
      if (!c.passed) {
        ++report.dilation_violations;
        report.counterexamples.push_back("dilation " + std::to_string(i) + " (" + kind + ", lambda " +
                                         std::to_string(lambda) + "): " + c.name + " relative error " +
                                         std::to_string(c.residual));
      }
    }
  }

  // The ball's bracket contains pi.
  {
    const Body ball = Body::ball(4);
    const double lower = 1.0 / norm_J(ball).value;
    const double upper = std::min(cylinder_witness(ball).shadow, minimize_shadow(ball, config.search).value);
    report.checks.push_back(at_most("ball_bracket_lower", lower, kPi, 0.0));
    report.checks.push_back(at_most("ball_bracket_upper", kPi, upper, config.tol_chain));
  }

  // Truncated cylinders: a disc (inscribed 48-gon) in the (q1, p1)-plane times
  // the square [-R, R]^2 in the (q2, p2)-plane.
  {
    const int sides = 48;
    const double apothem = std::cos(kPi / sides);
    double previous_lower = 0.0;
    for (double big_r : {1.0, 2.0, 4.0}) {
      Mat rows = Mat::Zero(sides + 4, 4);
      for (int s = 0; s < sides; ++s) {
        const double angle = 2.0 * kPi * (s + 0.5) / sides;
        rows(s, 0) = std::cos(angle) / apothem;
        rows(s, 2) = std::sin(angle) / apothem;
      }
      rows(sides, 1) = 1.0 / big_r;
      rows(sides + 1, 1) = -1.0 / big_r;
      rows(sides + 2, 3) = 1.0 / big_r;
      rows(sides + 3, 3) = -1.0 / big_r;
      const Body cylinder = Body::hpolytope(rows);
      const double lower = 1.0 / norm_J(cylinder).value;
      const double upper = std::min(cylinder_witness(cylinder).shadow, minimize_shadow(cylinder, small_search).value);
      const std::string tag = "cylinder_R" + std::to_string(static_cast<int>(big_r));
      report.checks.push_back(at_most(tag + "_upper_below_pi", upper, kPi, config.tol_chain));
      report.checks.push_back(at_most(tag + "_bracket_ordered", lower, upper, config.tol_chain));
      report.checks.push_back(at_most(tag + "_lower_nondecreasing", previous_lower, lower, 1e-12));
      previous_lower = lower;
    }
  }
  return report;
}

bool RotatedCubeReport::passed() const {
  return orthogonality_residual <= 1e-12 && linf_ok && inclusion_ok && width_violations == 0 &&
         width_max <= kPi + 1e-9 && (!width_search || *width_search <= kPi + 1e-6);
}

std::vector<RotatedCubeReport> run_rotated_cube_suite(const std::vector<int>& n_list, const SuiteConfig& config,
                                                      int samples) {
  for (int n : n_list) {
    if (n < 2 || n % 2 != 0) fail(ErrorCode::kConfig, "rotated cube: n must be even, got " + std::to_string(n));
  }
  std::vector<RotatedCubeReport> out;
  for (int n : n_list) {
    RotatedCubeReport r;
    r.n = n;
    const Mat o = rotated_cube_matrix(n);
    r.orthogonality_residual = (o.transpose() * o - Mat::Identity(n, n)).cwiseAbs().maxCoeff();
    const LinfColumns cols = check_linf_columns(o);
    r.linf_max = cols.max_entry;
    r.linf_bound = cols.bound;
    r.linf_ok = cols.holds;
    r.inclusion_ok = check_cross_polytope_inclusion(n);

    Mat block = Mat::Zero(2 * n, 2 * n);
    block.topLeftCorner(n, n).setIdentity();
    block.bottomRightCorner(n, n) = o;
    const CubeWidthReport width = check_cube_lin_width(block, samples, derive_seed(config.seed, 100 + n));
    r.width_samples = width.samples;
    r.width_max = width.max_value;
    r.width_violations = width.violations;
    if (n <= 4) {
      SearchConfig search = config.search;
      search.seed = derive_seed(config.seed, 200 + n);
      search.restarts = 4;
      search.evals_per_restart = 1000;
      r.width_search = lin_gromov_estimate(build_rotated_cube(n), search).value;
    }
    r.nonlinear_width_claim = std::sqrt(n / 2.0);
    r.gap_ratio = r.nonlinear_width_claim / kPi;
    out.push_back(r);
  }
  return out;
}

}  // namespace sympcap
