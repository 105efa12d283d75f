#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sympcap/error.hpp"
#include "sympcap/harness.hpp"

namespace sympcap {

namespace {

using json = nlohmann::json;

// JSON has no NaN or infinity; those become null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double read_number(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json to_json(const BoundsReport& r) {
  json checks = json::array();
  for (const Check& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"residual", number(c.residual)}});
  json runtime = json::object();
  for (const auto& [stage, ms] : r.runtime_ms) runtime[stage] = ms;
  return {{"body_id", r.body_id},
          {"n", r.n},
          {"normj", number(r.normj)},
          {"lower", number(r.lower)},
          {"ehz", number(r.ehz)},
          {"ehz_method", r.ehz_method},
          {"ehz_smoothing", r.ehz_smoothing},
          {"witness_shadow", number(r.witness_shadow)},
          {"cyl_lin", number(r.cyl_lin)},
          {"cyl_budget", r.cyl_budget},
          {"upper", number(r.upper)},
          {"checks", checks},
          {"chain_ok", r.chain_ok},
          {"seed", r.seed},
          {"runtime_ms", runtime},
          {"error", r.error}};
}

BoundsReport from_json(const json& j) {
  BoundsReport r;
  r.body_id = j.at("body_id").get<std::string>();
  r.n = j.at("n").get<int>();
  r.normj = read_number(j.at("normj"));
  r.lower = read_number(j.at("lower"));
  r.ehz = read_number(j.at("ehz"));
  r.ehz_method = j.at("ehz_method").get<std::string>();
  r.ehz_smoothing = j.at("ehz_smoothing").get<std::string>();
  r.witness_shadow = read_number(j.at("witness_shadow"));
  r.cyl_lin = read_number(j.at("cyl_lin"));
  r.cyl_budget = j.at("cyl_budget").get<int>();
  r.upper = read_number(j.at("upper"));
  for (const json& c : j.at("checks")) {
    r.checks.push_back(Check{c.at("name").get<std::string>(), c.at("passed").get<bool>(), read_number(c.at("residual"))});
  }
  r.chain_ok = j.at("chain_ok").get<bool>();
  r.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& [stage, ms] : j.at("runtime_ms").items()) r.runtime_ms[stage] = ms.get<double>();
  r.error = j.at("error").get<std::string>();
  return r;
}

}  // namespace

ReportFormat parse_format(std::string_view name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  fail(ErrorCode::kConfig, "unknown report format \"" + std::string(name) + "\" (expected csv or json)");
}

std::string bounds_csv(const std::vector<BoundsReport>& reports) {
  std::ostringstream out;
  out.precision(17);
  out << "body_id,n,normj,lower,ehz,ehz_method,witness_shadow,cyl_lin,upper,chain_ok,seed,runtime_ms\n";
  for (const BoundsReport& r : reports) {
    std::string method = r.ehz_method;
    if (!r.ehz_smoothing.empty() && r.ehz_smoothing != "exact") method += "/" + r.ehz_smoothing;
    const auto total = r.runtime_ms.find("total");
    out << csv_field(r.body_id) << ',' << r.n << ',' << r.normj << ',' << r.lower << ',' << r.ehz << ','
        << csv_field(method) << ',' << r.witness_shadow << ',' << r.cyl_lin << ',' << r.upper << ','
        << (r.chain_ok ? "true" : "false") << ',' << r.seed << ','
        << (total == r.runtime_ms.end() ? 0.0 : total->second) << '\n';
  }
  return out.str();
}

std::string bounds_json(const std::vector<BoundsReport>& reports) {
  json arr = json::array();
  for (const BoundsReport& r : reports) arr.push_back(to_json(r));
  return arr.dump(2) + "\n";
}

std::vector<BoundsReport> parse_bounds_json(std::string_view text) {
  std::vector<BoundsReport> out;
  try {
    const json arr = json::parse(text);
    for (const json& j : arr) out.push_back(from_json(j));
  } catch (const json::exception& err) {
    fail(ErrorCode::kSchema, std::string("bounds report: ") + err.what());
  }
  return out;
}

std::string axioms_json(const AxiomReport& report) {
  json checks = json::array();
  for (const Check& c : report.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"residual", number(c.residual)}});
  }
  const json j = {{"monotone_instances", report.monotone_instances},
                  {"monotone_violations", report.monotone_violations},
                  {"dilation_instances", report.dilation_instances},
                  {"dilation_violations", report.dilation_violations},
                  {"checks", checks},
                  {"counterexamples", report.counterexamples},
                  {"passed", report.passed()}};
  return j.dump(2) + "\n";
}

std::string rotated_cube_json(const std::vector<RotatedCubeReport>& reports) {
  json arr = json::array();
  for (const RotatedCubeReport& r : reports) {
    arr.push_back({{"n", r.n},
                   {"orthogonality_residual", r.orthogonality_residual},
                   {"linf_max", r.linf_max},
                   {"linf_bound", r.linf_bound},
                   {"linf_ok", r.linf_ok},
                   {"inclusion_ok", r.inclusion_ok},
                   {"width_samples", r.width_samples},
                   {"width_max", r.width_max},
                   {"width_violations", r.width_violations},
                   {"width_search", r.width_search ? number(*r.width_search) : json(nullptr)},
                   {"nonlinear_width_claim", r.nonlinear_width_claim},
                   {"gap_ratio", r.gap_ratio},
                   {"nonlinear_claim_verified", false},
                   {"passed", r.passed()}});
  }
  return arr.dump(2) + "\n";
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) fail(ErrorCode::kIo, "failed writing " + path);
}

void emit_report(const std::vector<BoundsReport>& reports, ReportFormat format, const std::string& path) {
  write_output(format == ReportFormat::kCsv ? bounds_csv(reports) : bounds_json(reports), path);
}

}  // namespace sympcap
