#include "lcm/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace lcm {

namespace {

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  throw ConfigError("field '" + path + "': " + what);
}

void allow_only(const nlohmann::json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) field_error(path, "expected an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) field_error(path + "." + k, "unknown field");
}

const nlohmann::json& require(const nlohmann::json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) field_error(path + "." + key, "missing");
  return j.at(key);
}

double get_number(const nlohmann::json& j, const std::string& path) {
  try {
    return number_from_json(j);
  } catch (const std::exception&) {
    field_error(path, "expected a number");
  }
}

double number_field(const nlohmann::json& j, const std::string& path, const char* key, std::optional<double> dflt = {}) {
  if (!j.contains(key)) {
    if (dflt) return *dflt;
    field_error(path + "." + key, "missing");
  }
  return get_number(j.at(key), path + "." + key);
}

Vec vector_field(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) field_error(path, "expected a nonempty array of numbers");
  Vec out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::string type_of(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object()) field_error(path, "expected an object");
  const auto& t = require(j, path, "type");
  if (!t.is_string()) field_error(path + ".type", "expected a string");
  return t.get<std::string>();
}

// Wraps constructor errors with the field path.
template <class F>
auto build(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    field_error(path, e.what());
  }
}

ConvexBody parse_halfspaces(const nlohmann::json& list, const std::string& path) {
  if (!list.is_array() || list.empty()) field_error(path, "expected a nonempty array");
  std::vector<HalfSpace> hs;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    allow_only(list[i], p, {"normal", "offset"});
    HalfSpace h{vector_field(require(list[i], p, "normal"), p + ".normal"), number_field(list[i], p, "offset")};
    const double len = euclidean_norm(h.normal);
    if (len == 0.0) field_error(p + ".normal", "zero normal");
    if (!(h.offset > 0.0)) field_error(p + ".offset", "must be positive (origin in the interior)");
    for (auto& v : h.normal) v /= len;
    h.offset /= len;
    hs.push_back(std::move(h));
  }
  const std::size_t dim = hs[0].normal.size();
  std::vector<bool> used(hs.size(), false);
  std::vector<Vec> normals;
  Vec offsets;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (hs[i].normal.size() != dim) field_error(path + "[" + std::to_string(i) + "].normal", "dimension differs");
    if (used[i]) continue;
    bool matched = false;
    for (std::size_t j = i + 1; j < hs.size() && !matched; ++j) {
      if (used[j] || hs[j].normal.size() != dim) continue;
      bool opposite = std::abs(hs[i].offset - hs[j].offset) <= 1e-12 * hs[i].offset;
      for (std::size_t d = 0; d < dim && opposite; ++d) opposite = std::abs(hs[i].normal[d] + hs[j].normal[d]) <= 1e-12;
      if (opposite) {
        used[i] = used[j] = true;
        matched = true;
      }
    }
    if (!matched)
      field_error(path + "[" + std::to_string(i) + "]", "asymmetric body: no opposite half-space with the same offset");
    normals.push_back(hs[i].normal);
    offsets.push_back(hs[i].offset);
  }
  return build(path, [&] { return ConvexBody::polytope(normals, offsets); });
}

}  // namespace

nlohmann::json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    if (auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
  }
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

nlohmann::json strip_schema(nlohmann::json j, const std::string& source) {
  if (!j.is_object()) throw ConfigError(source + ": top level must be an object");
  if (!j.contains("schema")) throw ConfigError(source + ": field 'schema' missing (expected \"" + kConfigSchema + "\")");
  if (j["schema"] != kConfigSchema)
    throw ConfigError(source + ": field 'schema': unsupported version " + j["schema"].dump() + ", expected \"" +
                      kConfigSchema + "\"");
  j.erase("schema");
  return j;
}

ConvexBody parse_body(const nlohmann::json& j, const std::string& path) {
  const std::string type = type_of(j, path);
  if (type == "ball") {
    allow_only(j, path, {"type", "dim", "radius"});
    const double dim = number_field(j, path, "dim");
    if (dim != std::floor(dim)) field_error(path + ".dim", "must be an integer");
    const double r = number_field(j, path, "radius", 1.0);
    return build(path, [&] { return ConvexBody::ball(static_cast<int>(dim), r); });
  }
  if (type == "lpball") {
    allow_only(j, path, {"type", "p", "semi_axes"});
    const double p = number_field(j, path, "p");
    const Vec axes = vector_field(require(j, path, "semi_axes"), path + ".semi_axes");
    return build(path, [&] { return ConvexBody::lp_ball(p, axes); });
  }
  if (type == "box") {
    allow_only(j, path, {"type", "half_widths"});
    const Vec w = vector_field(require(j, path, "half_widths"), path + ".half_widths");
    return build(path, [&] { return ConvexBody::box(w); });
  }
  if (type == "polytope") {
    allow_only(j, path, {"type", "normals", "offsets", "halfspaces"});
    if (j.contains("halfspaces")) {
      if (j.contains("normals") || j.contains("offsets"))
        field_error(path, "give either 'halfspaces' or 'normals' + 'offsets'");
      return parse_halfspaces(j["halfspaces"], path + ".halfspaces");
    }
    const auto& nj = require(j, path, "normals");
    if (!nj.is_array() || nj.empty()) field_error(path + ".normals", "expected a nonempty array");
    std::vector<Vec> normals;
    for (std::size_t i = 0; i < nj.size(); ++i)
      normals.push_back(vector_field(nj[i], path + ".normals[" + std::to_string(i) + "]"));
    const Vec offsets = vector_field(require(j, path, "offsets"), path + ".offsets");
    for (std::size_t i = 0; i < offsets.size(); ++i)
      if (!(offsets[i] > 0.0)) field_error(path + ".offsets[" + std::to_string(i) + "]", "must be positive");
    return build(path, [&] { return ConvexBody::polytope(normals, offsets); });
  }
  if (type == "dilate") {
    allow_only(j, path, {"type", "factor", "body"});
    const double f = number_field(j, path, "factor");
    const ConvexBody inner = parse_body(require(j, path, "body"), path + ".body");
    return build(path, [&] { return ConvexBody::dilate(inner, f); });
  }
  field_error(path + ".type", "unknown body type '" + type + "'");
}

PhiFunction parse_phi(const nlohmann::json& j, const std::string& path) {
  const std::string type = type_of(j, path);
  PhiFunction phi;
  if (type == "power") {
    allow_only(j, path, {"type", "p", "scale", "offset", "plateau"});
    const double p = number_field(j, path, "p"), s = number_field(j, path, "scale", 1.0),
                 o = number_field(j, path, "offset", 0.0);
    phi = build(path, [&] { return PhiFunction::power(p, s, o); });
  } else if (type == "linear") {
    allow_only(j, path, {"type", "slope", "offset", "plateau"});
    const double s = number_field(j, path, "slope", 1.0), o = number_field(j, path, "offset", 0.0);
    phi = build(path, [&] { return PhiFunction::linear(s, o); });
  } else if (type == "gaussian") {
    allow_only(j, path, {"type", "n", "plateau"});
    const double n = number_field(j, path, "n");
    if (n != std::floor(n)) field_error(path + ".n", "must be an integer");
    phi = build(path, [&] { return PhiFunction::gaussian(static_cast<int>(n)); });
  } else if (type == "pathological") {
    allow_only(j, path, {"type", "k_max", "plateau"});
    const double k = number_field(j, path, "k_max");
    if (k != std::floor(k)) field_error(path + ".k_max", "must be an integer");
    phi = build(path, [&] { return build_pathological_phi(static_cast<int>(k)).phi; });
  } else {
    field_error(path + ".type", "unknown phi type '" + type + "'");
  }
  if (j.contains("plateau")) {
    const double t0 = number_field(j, path, "plateau");
    phi = build(path + ".plateau", [&] { return phi.with_plateau(t0); });
  }
  return phi;
}

NormMeasure parse_measure(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object()) field_error(path, "expected an object");
  if (j.contains("uniform_on")) {
    allow_only(j, path, {"uniform_on"});
    return NormMeasure::uniform_on(parse_body(j["uniform_on"], path + ".uniform_on"));
  }
  allow_only(j, path, {"phi", "L"});
  const PhiFunction phi = parse_phi(require(j, path, "phi"), path + ".phi");
  const ConvexBody L = parse_body(require(j, path, "L"), path + ".L");
  return NormMeasure::norm_density(phi, L);
}

std::vector<double> parse_grid(const std::string& spec, bool log_spacing) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw ConfigError("grid '" + spec + "': expected start:end:count");
  double a, b;
  long count;
  try {
    std::size_t pos = 0;
    a = std::stod(parts[0], &pos);
    if (pos != parts[0].size()) throw std::invalid_argument("start");
    b = std::stod(parts[1], &pos);
    if (pos != parts[1].size()) throw std::invalid_argument("end");
    count = std::stol(parts[2], &pos);
    if (pos != parts[2].size()) throw std::invalid_argument("count");
  } catch (const std::exception&) {
    throw ConfigError("grid '" + spec + "': expected start:end:count with numbers");
  }
  if (count < 1) throw ConfigError("grid '" + spec + "': count must be >= 1");
  if (count > 1 && !(b > a)) throw ConfigError("grid '" + spec + "': end must exceed start");
  if (log_spacing && !(a > 0.0)) throw ConfigError("grid '" + spec + "': log spacing needs start > 0");
  std::vector<double> out;
  for (long i = 0; i < count; ++i) {
    if (count == 1) {
      out.push_back(a);
      break;
    }
    const double f = static_cast<double>(i) / static_cast<double>(count - 1);
    out.push_back(i == count - 1 ? b : (log_spacing ? a * std::pow(b / a, f) : a + (b - a) * f));
  }
  return out;
}

nlohmann::json body_to_json(const ConvexBody& body) { return nlohmann::json(body.describe()); }

}  // namespace lcm
