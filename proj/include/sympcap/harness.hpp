#pragma once

// Suite orchestration: body specs, the sandwich / axiom / rotated-cube suites
// and their reports.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sympcap/bodies.hpp"
#include "sympcap/lincap.hpp"

namespace sympcap {

struct NamedBody {
  std::string id;
  Body body;
};

/// Builds a body from its JSON description. Throws kSchema for malformed
/// specs, kOriginExterior when the origin is not interior and kAsymmetry when
/// "symmetric": true is claimed but fails.
NamedBody parse_body_spec(std::string_view json_text, std::string fallback_id = "body");
NamedBody load_body_spec(const std::filesystem::path& path);

std::vector<std::string> preset_names();
std::optional<NamedBody> preset_body(std::string_view name);
/// A preset name, or else a path to a spec file.
NamedBody resolve_body(std::string_view name_or_path);

struct SuiteConfig {
  double tol_chain = 1e-4;
  double eps_sp = 1e-9;
  double ode_tol = 1e-10;
  std::uint64_t seed = 1;
  int ehz_starts = 64;
  SearchConfig search;
  /// Record wall-clock times; off by default so reports are byte-stable.
  bool timing = false;
};

/// Reads SYMPCAP_SEED if set.
SuiteConfig default_suite_config();

/// The default sandwich suite: planar and four/six-dimensional bodies.
std::vector<NamedBody> default_suite(std::uint64_t seed);

struct Check {
  std::string name;
  bool passed;
  double residual;

  bool operator==(const Check&) const = default;
};

struct BoundsReport {
  std::string body_id;
  int n = 0;
  double normj = 0.0;
  double lower = 0.0;
  double ehz = 0.0;
  std::string ehz_method;
  std::string ehz_smoothing;
  double witness_shadow = 0.0;
  double cyl_lin = 0.0;
  int cyl_budget = 0;
  double upper = 0.0;
  std::vector<Check> checks;
  bool chain_ok = false;
  std::uint64_t seed = 0;
  std::map<std::string, double> runtime_ms;
  std::string error;

  bool passed() const;
  bool operator==(const BoundsReport&) const = default;
};

/// Appends lower <= ehz <= cyl_lin <= upper (relative tol_chain) to the checks
/// and sets chain_ok.
void apply_chain(BoundsReport& report, double tol_chain);

std::vector<BoundsReport> run_sandwich_suite(const std::vector<NamedBody>& bodies, const SuiteConfig& config);

struct AxiomReport {
  int monotone_instances = 0;
  int monotone_violations = 0;
  int dilation_instances = 0;
  int dilation_violations = 0;
  std::vector<Check> checks;
  std::vector<std::string> counterexamples;

  bool passed() const;
};

AxiomReport run_axiom_suite(const SuiteConfig& config);

struct RotatedCubeReport {
  int n = 0;
  double orthogonality_residual = 0.0;
  double linf_max = 0.0;
  double linf_bound = 0.0;
  bool linf_ok = false;
  bool inclusion_ok = false;
  int width_samples = 0;
  double width_max = 0.0;
  int width_violations = 0;
  /// Search-based linearized width of the rotated cube (small n only).
  std::optional<double> width_search;
  /// sqrt(n/2) and its ratio to pi: reported, not verified.
  double nonlinear_width_claim = 0.0;
  double gap_ratio = 0.0;

  bool passed() const;
};

/// Throws kConfig for odd n.
std::vector<RotatedCubeReport> run_rotated_cube_suite(const std::vector<int>& n_list, const SuiteConfig& config,
                                                      int samples = 500);

enum class ReportFormat { kCsv, kJson };
ReportFormat parse_format(std::string_view name);

std::string bounds_csv(const std::vector<BoundsReport>& reports);
std::string bounds_json(const std::vector<BoundsReport>& reports);
std::vector<BoundsReport> parse_bounds_json(std::string_view text);
std::string axioms_json(const AxiomReport& report);
std::string rotated_cube_json(const std::vector<RotatedCubeReport>& reports);

/// Writes to `path`, or to stdout when the path is empty or "-". Throws kIo.
void write_output(const std::string& text, const std::string& path);
void emit_report(const std::vector<BoundsReport>& reports, ReportFormat format, const std::string& path);

}  // namespace sympcap
