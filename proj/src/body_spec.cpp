#include <fstream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sympcap/error.hpp"
#include "sympcap/harness.hpp"

namespace sympcap {

namespace {

using json = nlohmann::json;

[[noreturn]] void schema(const std::string& what) { fail(ErrorCode::kSchema, "body spec: " + what); }

const json& field(const json& j, const char* key) {
  if (!j.contains(key)) schema(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) schema(what + " must be a number");
  return j.get<double>();
}

int positive_int(const json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() < 1 || j.get<long long>() > 4096) {
    schema(what + " must be a positive integer");
  }
  return j.get<int>();
}

Vec read_vec(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) schema(what + " must be a non-empty array of numbers");
  Vec out(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) out(static_cast<Eigen::Index>(i)) = number(j[i], what + " entry");
  return out;
}

Mat read_mat(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) schema(what + " must be a non-empty array of rows");
  const Vec first = read_vec(j[0], what + " row");
  Mat out(static_cast<Eigen::Index>(j.size()), first.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Vec row = read_vec(j[i], what + " row");
    if (row.size() != first.size()) schema(what + " rows have different lengths");
    out.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return out;
}

// Ambient dimension from "dim", or twice "n".
int ambient_dim(const json& j) {
  if (j.contains("dim")) return positive_int(j.at("dim"), "dim");
  return 2 * positive_int(field(j, "n"), "n");
}

double optional_positive(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const double v = number(j.at(key), key);
  if (!(v > 0.0)) schema(std::string(key) + " must be positive");
  return v;
}

Body build(const json& j);

Body build_checked(const json& j) {
  try {
    return build(j);
  } catch (const Error& err) {
    switch (err.code()) {
      case ErrorCode::kSchema:
      case ErrorCode::kOriginExterior:
      case ErrorCode::kAsymmetry:
        throw;
      default:
        schema(err.what());
    }
  }
}

Body build(const json& j) {
  if (!j.is_object()) schema("a body must be a JSON object");
  const json& type_field = field(j, "type");
  if (!type_field.is_string()) schema("type must be a string");
  const std::string type = type_field.get<std::string>();

  if (type == "hpolytope") {
    const Mat rows = read_mat(field(j, "rows"), "rows");
    if (!j.contains("offsets")) return Body::hpolytope(rows);
    const Vec offsets = read_vec(j.at("offsets"), "offsets");
    if (offsets.size() != rows.rows()) schema("offsets do not match rows");
    if (!(offsets.minCoeff() > 0.0)) fail(ErrorCode::kOriginExterior, "body spec: origin is not interior");
    return Body::hpolytope(rows, offsets);
  }
  if (type == "vpolytope") {
    Body b = Body::vpolytope(read_mat(field(j, "vertices"), "vertices"));
    if (!b.origin_interior()) fail(ErrorCode::kOriginExterior, "body spec: origin is not interior");
    return b;
  }
  if (type == "ellipsoid") return Body::ellipsoid(read_mat(field(j, "shape"), "shape"));
  if (type == "cube") return Body::cube(ambient_dim(j), optional_positive(j, "half_width", 1.0));
  if (type == "crosspolytope") return Body::cross_polytope(ambient_dim(j), optional_positive(j, "radius", 1.0));
  if (type == "ellipsoid_radii") {
    const Vec radii = read_vec(field(j, "radii"), "radii");
    return Body::ellipsoid_radii(std::span<const double>(radii.data(), static_cast<std::size_t>(radii.size())));
  }
  if (type == "linear_image") {
    const Body base = build_checked(field(j, "base"));
    return Body::linear_image(base, read_mat(field(j, "map"), "map"));
  }
  if (type == "lagrangian_product") {
    const Body left = build_checked(field(j, "left"));
    const Body right = build_checked(field(j, "right"));
    if (left.dim() != right.dim()) schema("product factors must have equal dimension");
    return Body::lagrangian_product(left, right);
  }
  schema("unknown type \"" + type + "\"");
}

Body random_symmetric_polytope(std::mt19937_64& rng, int dim, int half) {
  std::normal_distribution<double> normal;
  Mat v(2 * half, dim);
  for (int i = 0; i < half; ++i) {
    for (int c = 0; c < dim; ++c) v(i, c) = normal(rng);
    if (i < dim) v(i, i) += 2.0;
    v.row(half + i) = -v.row(i);
  }
  return Body::vpolytope(v);
}

NamedBody named(std::string id, Body body) { return NamedBody{std::move(id), std::move(body)}; }

}  // namespace

NamedBody parse_body_spec(std::string_view json_text, std::string fallback_id) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& err) {
    schema(std::string("invalid JSON: ") + err.what());
  }
  Body body = build_checked(j);
  if (body.dim() % 2 != 0) schema("the ambient dimension must be even");
  if (!body.origin_interior()) fail(ErrorCode::kOriginExterior, "body spec: origin is not interior");
  if (j.contains("symmetric")) {
    if (!j.at("symmetric").is_boolean()) schema("symmetric must be a boolean");
    if (j.at("symmetric").get<bool>() && !is_symmetric(body)) {
      fail(ErrorCode::kAsymmetry, "body spec: body is not centrally symmetric");
    }
  }
  std::string id = std::move(fallback_id);
  if (j.contains("id")) {
    if (!j.at("id").is_string() || j.at("id").get<std::string>().empty()) schema("id must be a non-empty string");
    id = j.at("id").get<std::string>();
  }
  return NamedBody{std::move(id), std::move(body)};
}

NamedBody load_body_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_body_spec(text.str(), path.stem().string());
}

std::vector<std::string> preset_names() {
  return {"disc",          "ball4",         "ball6",         "square",          "cube4",
          "cube6",         "cross4",        "cube_cross4",   "ellipsoid_1_2",   "ellipsoid_1_3",
          "ellipsoid_2_2", "ellipsoid_1_2_3", "rotated_cube4", "rotated_cube8"};
}

std::optional<NamedBody> preset_body(std::string_view name) {
  const std::string id(name);
  auto radii = [&](std::vector<double> r) { return named(id, Body::ellipsoid_radii(r)); };
  if (name == "disc") return named(id, Body::ball(2));
  if (name == "ball4") return named(id, Body::ball(4));
  if (name == "ball6") return named(id, Body::ball(6));
  if (name == "square") return named(id, Body::cube(2));
  if (name == "cube4") return named(id, Body::cube(4));
  if (name == "cube6") return named(id, Body::cube(6));
  if (name == "cross4") return named(id, Body::cross_polytope(4));
  if (name == "cube_cross4") return named(id, Body::lagrangian_product(Body::cube(2), Body::cross_polytope(2)));
  if (name == "ellipsoid_1_2") return radii({1.0, 2.0});
  if (name == "ellipsoid_1_3") return radii({1.0, 3.0});
  if (name == "ellipsoid_2_2") return radii({2.0, 2.0});
  if (name == "ellipsoid_1_2_3") return radii({1.0, 2.0, 3.0});
  if (name == "rotated_cube4") return named(id, build_rotated_cube(2));
  if (name == "rotated_cube8") return named(id, build_rotated_cube(4));
  return std::nullopt;
}

NamedBody resolve_body(std::string_view name_or_path) {
  if (auto p = preset_body(name_or_path)) return std::move(*p);
  const std::filesystem::path path{std::string(name_or_path)};
  if (!std::filesystem::exists(path)) {
    fail(ErrorCode::kIo, "\"" + std::string(name_or_path) + "\" is neither a preset nor a readable file");
  }
  return load_body_spec(path);
}

std::vector<NamedBody> default_suite(std::uint64_t seed) {
  std::vector<NamedBody> out;
  for (const char* name : {"disc", "ball4", "square", "cube4", "cross4", "cube_cross4", "ellipsoid_1_2",
                           "ellipsoid_1_3", "ellipsoid_2_2", "ellipsoid_1_2_3", "rotated_cube4"}) {
    out.push_back(*preset_body(name));
  }
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  out.push_back(named("random_poly2_a", random_symmetric_polytope(rng, 2, 4)));
  out.push_back(named("random_poly2_b", random_symmetric_polytope(rng, 2, 6)));
  out.push_back(named("random_poly4_a", random_symmetric_polytope(rng, 4, 5)));
  out.push_back(named("random_poly4_b", random_symmetric_polytope(rng, 4, 6)));
  return out;
}

}  // namespace sympcap
