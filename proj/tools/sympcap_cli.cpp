// Command-line front end: one verb per suite or single-body computation.
// Exit status is 0 when every certified check passed, 1 when a check failed
// and 2 on usage or input errors.

#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sympcap/ehz.hpp"
#include "sympcap/error.hpp"
#include "sympcap/harness.hpp"
#include "sympcap/lincap.hpp"
#include "sympcap/normj.hpp"
#include "sympcap/symplin.hpp"

namespace {

using nlohmann::json;
using namespace sympcap;

struct Options {
  std::vector<std::string> bodies;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int budget = 0;
  double tol = 0.0;
  std::string out;
  std::string format = "csv";
  bool timing = false;
  int starts = 64;
  int samples = 500;
  std::vector<int> n_list{2, 4, 8, 16, 64};
};

json matrix_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

SuiteConfig suite_config(const Options& o) {
  SuiteConfig c = default_suite_config();
  if (o.seed_given) c.seed = o.seed;
  if (o.tol > 0.0) c.tol_chain = o.tol;
  if (o.budget > 0) c.search.evals_per_restart = o.budget;
  c.ehz_starts = o.starts;
  c.timing = o.timing;
  return c;
}

NamedBody single_body(const Options& o) {
  if (o.bodies.size() != 1) fail(ErrorCode::kConfig, "this verb takes exactly one --body");
  return resolve_body(o.bodies.front());
}

int emit_json(const json& j, const Options& o, bool passed) {
  write_output(j.dump(2) + "\n", o.out);
  return passed ? 0 : 1;
}

int run_bounds(const Options& o) {
  const SuiteConfig c = suite_config(o);
  std::vector<NamedBody> bodies;
  if (o.bodies.empty()) {
    bodies = default_suite(c.seed);
  } else {
    for (const std::string& b : o.bodies) bodies.push_back(resolve_body(b));
  }
  const auto reports = run_sandwich_suite(bodies, c);
  emit_report(reports, parse_format(o.format), o.out);
  bool ok = true;
  for (const BoundsReport& r : reports) {
    if (r.passed()) continue;
    ok = false;
    std::cerr << r.body_id << ": " << (r.error.empty() ? "" : r.error + "; ");
    for (const Check& check : r.checks) {
      if (!check.passed) std::cerr << check.name << " (" << check.residual << ") ";
    }
    std::cerr << "\n";
  }
  return ok ? 0 : 1;
}

int run_axioms(const Options& o) {
  const AxiomReport report = run_axiom_suite(suite_config(o));
  write_output(axioms_json(report), o.out);
  for (const std::string& c : report.counterexamples) std::cerr << c << "\n";
  return report.passed() ? 0 : 1;
}

int run_rotated(const Options& o) {
  const auto reports = run_rotated_cube_suite(o.n_list, suite_config(o), o.samples);
  write_output(rotated_cube_json(reports), o.out);
  bool ok = true;
  for (const RotatedCubeReport& r : reports) ok = ok && r.passed();
  return ok ? 0 : 1;
}

int run_witness(const Options& o) {
  const NamedBody nb = single_body(o);
  const NormJResult nj = norm_J(nb.body);
  const Witness w = cylinder_witness(nb.body);
  const double certificate = 4.0 / nj.value;
  const double residual = symplectic_residual(w.map.linear());
  const bool passed = w.shadow <= certificate + 1e-6 && w.shadow <= w.product_bound + 1e-8 && residual <= 1e-9;
  const json j = {{"body_id", nb.id},
                  {"normj", nj.value},
                  {"normj_method", std::string(to_string(nj.method))},
                  {"shadow", w.shadow},
                  {"product_bound", w.product_bound},
                  {"certificate", certificate},
                  {"symplectic_residual", residual},
                  {"map", matrix_json(w.map.linear())},
                  {"passed", passed}};
  return emit_json(j, o, passed);
}

int run_shadow_search(const Options& o) {
  const NamedBody nb = single_body(o);
  SearchConfig search = suite_config(o).search;
  if (o.seed_given) search.seed = o.seed;
  const SearchResult best = minimize_shadow(nb.body, search);
  const Witness w = cylinder_witness(nb.body);
  const double scale = std::max(1.0, best.map.linear().cwiseAbs().maxCoeff());
  const double residual = symplectic_residual(best.map.linear());
  const bool passed = best.value <= w.shadow + 1e-8 && residual <= 1e-9 * scale * scale;
  json history = json::array();
  for (const auto& [eval, value] : best.history) history.push_back({eval, value});
  const json j = {{"body_id", nb.id},
                  {"cyl_lin", best.value},
                  {"witness_shadow", w.shadow},
                  {"budget_used", best.budget_used},
                  {"budget_exhausted", best.budget_exhausted},
                  {"seed", best.seed},
                  {"symplectic_residual", residual},
                  {"map", matrix_json(best.map.linear())},
                  {"history", history},
                  {"passed", passed}};
  return emit_json(j, o, passed);
}

int run_ehz(const Options& o) {
  const NamedBody nb = single_body(o);
  EhzConfig config;
  config.n_starts = o.starts;
  if (o.seed_given) config.seed = o.seed;
  const EhzEstimate est = ehz_estimate(nb.body, config);
  json orbits = json::array();
  bool passed = est.value >= est.lower_certificate - 1e-6;
  for (std::size_t i = 0; i < est.orbits.size(); ++i) {
    const Orbit& orbit = est.orbits[i];
    const double ap = verify_action_period(orbit) / orbit.period;
    const double tangency = tangency_residual(*est.gauge, orbit);
    bool lemma_ok = false;
    double margin = std::nan("");
    try {
      const ReturnLemma lemma = verify_return_lemma(*est.gauge, orbit, est.gauge_normj);
      lemma_ok = lemma.bound_holds;
      margin = lemma.margin;
    } catch (const Error& err) {
      if (err.code() != ErrorCode::kLemmaViolation) throw;
    }
    passed = passed && ap <= 1e-5 && tangency <= 1e-5 && lemma_ok;
    orbits.push_back({{"start", est.orbit_starts[i]},
                      {"period", orbit.period},
                      {"action", orbit.action},
                      {"action_period_residual", ap},
                      {"tangency_residual", tangency},
                      {"closure_residual", orbit.closure_residual},
                      {"return_lemma", lemma_ok},
                      {"return_lemma_margin", number(margin)}});
  }
  const json j = {{"body_id", nb.id},
                  {"ehz", est.value},
                  {"method", std::string(to_string(est.method))},
                  {"smoothing", est.smoothing},
                  {"inflation", est.inflation},
                  {"lower_certificate", est.lower_certificate},
                  {"shooting_value", est.shooting_value ? json(*est.shooting_value) : json(nullptr)},
                  {"failed_shots", est.failed_shots},
                  {"orbits", orbits},
                  {"passed", passed}};
  return emit_json(j, o, passed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symplectic capacity bounds for centrally symmetric convex bodies"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", o.seed, "Seed (overrides SYMPCAP_SEED)")->each([&](const std::string&) {
      o.seed_given = true;
    });
    cmd->add_option("--out", o.out, "Output path (default stdout)");
  };
  auto body = [&](CLI::App* cmd, bool many) {
    auto* opt = cmd->add_option("--body", o.bodies, "Preset name or body-spec JSON path");
    if (!many) opt->required()->expected(1);
  };
  auto budget = [&](CLI::App* cmd) {
    cmd->add_option("--budget", o.budget, "Nelder-Mead evaluations per restart")->check(CLI::PositiveNumber);
  };

  auto* bounds = app.add_subcommand("bounds", "Sandwich chain on the default suite or the given bodies");
  common(bounds);
  body(bounds, true);
  budget(bounds);
  bounds->add_option("--tol", o.tol, "Relative chain tolerance")->check(CLI::PositiveNumber);
  bounds->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  bounds->add_option("--starts", o.starts, "Shooting starts per body")->check(CLI::PositiveNumber);
  bounds->add_flag("--timing", o.timing, "Record per-stage wall-clock times");

  auto* axioms = app.add_subcommand("axioms", "Monotonicity and dilation properties");
  common(axioms);
  budget(axioms);

  auto* rotated = app.add_subcommand("rotated-cube", "Certified checks on the rotated cube");
  common(rotated);
  budget(rotated);
  rotated->add_option("--n", o.n_list, "Even half-dimensions")->delimiter(',');
  rotated->add_option("--samples", o.samples, "Symplectic samples for the width check")->check(CLI::PositiveNumber);

  auto* witness = app.add_subcommand("witness", "Cylinder witness built from the norm of J");
  common(witness);
  body(witness, false);

  auto* search = app.add_subcommand("shadow-search", "Minimize the shadow over linear symplectic maps");
  common(search);
  body(search, false);
  budget(search);

  auto* ehz = app.add_subcommand("ehz", "Capacity from closed characteristics");
  common(ehz);
  body(ehz, false);
  ehz->add_option("--starts", o.starts, "Shooting starts")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*bounds) return run_bounds(o);
    if (*axioms) return run_axioms(o);
    if (*rotated) return run_rotated(o);
    if (*witness) return run_witness(o);
    if (*search) return run_shadow_search(o);
    if (*ehz) return run_ehz(o);
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 2;
}
