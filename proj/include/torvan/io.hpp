// JSON formats for fans, divisors and reports.
//
//   fan:     {"rank": n, "rays": [[...], ...], "max_cones": [[i, j, ...], ...]}
//   divisor: {"coeffs": ["a/b", ...]} in fan ray order
#pragma once

#include "torvan/arith.hpp"
#include "torvan/divisors.hpp"
#include "torvan/fan.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace torvan {

using Json = nlohmann::ordered_json;

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InputError(path + ": malformed JSON: " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

inline Json fan_to_json(const Fan& f) {
  Json rays = Json::array();
  for (const auto& r : f.rays()) rays.push_back(r.coords());
  Json cones = Json::array();
  for (const auto& c : f.max_cones()) cones.push_back(c);
  return Json{{"rank", f.rank()}, {"rays", rays}, {"max_cones", cones}};
}

/// Parses and validates; an invalid fan is an input error.
inline Fan fan_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw InputError("fan must be a JSON object");
    for (const char* key : {"rank", "rays", "max_cones"})
      if (!j.contains(key)) throw InputError(std::string("fan is missing '") + key + "'");
    const auto rank = j.at("rank").get<std::int64_t>();
    if (rank < 1) throw InputError("fan rank must be positive");
    std::vector<LatticeVec> rays;
    for (const auto& r : j.at("rays")) rays.emplace_back(r.get<std::vector<std::int64_t>>());
    std::vector<RayIndexSet> cones;
    for (const auto& c : j.at("max_cones")) {
      for (const auto& i : c)
        if (i.get<std::int64_t>() < 0) throw InputError("negative ray index in max_cones");
      cones.push_back(c.get<RayIndexSet>());
    }
    Fan f(static_cast<std::size_t>(rank), std::move(rays), std::move(cones));
    require_valid(f);
    return f;
  } catch (const Json::exception& e) {
    throw InputError(std::string("fan JSON: ") + e.what());
  }
}

inline Json divisor_to_json(const TQDivisor& d) {
  Json coeffs = Json::array();
  for (const auto& c : d.coeffs()) coeffs.push_back(format_rational(c));
  return Json{{"coeffs", coeffs}};
}

inline TQDivisor divisor_from_json(const Json& j, const FanPtr& fan) {
  try {
    if (!j.is_object() || !j.contains("coeffs")) throw InputError("divisor must be an object with 'coeffs'");
    std::vector<Rational> coeffs;
    for (const auto& c : j.at("coeffs")) {
      if (c.is_string()) coeffs.push_back(parse_rational(c.get<std::string>()));
      else if (c.is_number_integer()) coeffs.emplace_back(c.get<std::int64_t>());
      else throw InputError("divisor coefficients must be strings \"a/b\" or integers");
    }
    return TQDivisor(fan, std::move(coeffs));
  } catch (const Json::exception& e) {
    throw InputError(std::string("divisor JSON: ") + e.what());
  }
}

/// 64-bit FNV-1a as 16 hex digits.
inline std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Hash of the canonical JSON (compact dump, cones sorted).
inline std::string fan_fingerprint(const Fan& f) {
  auto cones = f.max_cones();
  std::sort(cones.begin(), cones.end());
  Json j = fan_to_json(f);
  j["max_cones"] = cones;
  return fnv1a_hex(j.dump());
}

}  // namespace torvan
