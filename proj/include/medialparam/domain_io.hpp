#pragma once

// Domain files: JSON with a top-level "curves" array, each entry a role
// ("outer" | "hole") plus a list of cubic Bezier segments given as four
// [x, y] control points.  Orientation is normalized by make_domain, so
// files may store loops either way; the writer emits the normalized form.

#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "medialparam/curve.hpp"

namespace medial {

namespace detail {

inline Point2 json_point(const nlohmann::json& jp, const std::string& where) {
  if (!jp.is_array() || jp.size() != 2 || !jp[0].is_number() ||
      !jp[1].is_number())
    throw ValidationError("parse", where + ": expected a [x, y] pair");
  return {jp[0].get<double>(), jp[1].get<double>()};
}

}  // namespace detail

inline DomainSpec domain_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("curves") || !j["curves"].is_array())
    throw ValidationError("parse", "expected a top-level \"curves\" array");
  const auto& jcurves = j["curves"];
  if (jcurves.empty())
    throw ValidationError("parse", "\"curves\" array is empty");

  std::vector<CurveLoop> loops;
  std::vector<CurveRole> roles;
  for (size_t li = 0; li < jcurves.size(); li++) {
    const auto& jc = jcurves[li];
    std::string where = "curve " + std::to_string(li);
    if (!jc.is_object())
      throw ValidationError("parse", where + ": expected an object");

    if (!jc.contains("role") || !jc["role"].is_string())
      throw ValidationError("parse", where + ": missing \"role\" string");
    std::string role = jc["role"].get<std::string>();
    if (role == "outer")
      roles.push_back(CurveRole::Outer);
    else if (role == "hole")
      roles.push_back(CurveRole::Hole);
    else
      throw ValidationError(
          "parse", where + ": role must be \"outer\" or \"hole\", got \"" +
                       role + "\"");

    if (!jc.contains("segments") || !jc["segments"].is_array() ||
        jc["segments"].empty())
      throw ValidationError("parse",
                            where + ": missing non-empty \"segments\" array");
    std::vector<CubicBezier> segs;
    for (size_t si = 0; si < jc["segments"].size(); si++) {
      const auto& js = jc["segments"][si];
      std::string swhere = where + " segment " + std::to_string(si);
      if (!js.is_array() || js.size() != 4)
        throw ValidationError("parse",
                              swhere + ": expected 4 control points");
      CubicBezier bz;
      for (int k = 0; k < 4; k++)
        bz.p[k] = detail::json_point(js[k], swhere);
      segs.push_back(bz);
    }
    loops.emplace_back(std::move(segs));  // validates closure and G1 joins
  }
  return make_domain(std::move(loops), std::move(roles));
}

inline DomainSpec parse_domain(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ValidationError("parse", "cannot open " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);  // errors carry line and column
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("parse", path + ": " + e.what());
  }
  return domain_from_json(j);
}

inline nlohmann::json domain_to_json(const DomainSpec& d) {
  nlohmann::json j;
  j["curves"] = nlohmann::json::array();
  for (size_t li = 0; li < d.loops.size(); li++) {
    nlohmann::json jc;
    jc["role"] = d.roles[li] == CurveRole::Outer ? "outer" : "hole";
    jc["segments"] = nlohmann::json::array();
    for (const auto& bz : d.loops[li].segments()) {
      nlohmann::json js = nlohmann::json::array();
      for (int k = 0; k < 4; k++)
        js.push_back({bz.p[k].x, bz.p[k].y});
      jc["segments"].push_back(std::move(js));
    }
    j["curves"].push_back(std::move(jc));
  }
  return j;
}

inline void write_domain(const DomainSpec& d, const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw ValidationError("parse", "cannot write " + path);
  out << domain_to_json(d).dump(2) << "\n";
}

}  // namespace medial
