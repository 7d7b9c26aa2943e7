#pragma once

#include <string>

#include <json.hpp>

#include "liftcert/fuzzy.hpp"
#include "liftcert/lifting.hpp"
#include "liftcert/rational.hpp"
#include "liftcert/terms.hpp"

namespace liftcert {

using Json = nlohmann::json;

// Schema: {"carrier": ["a","b"], "dist": [["1/2","1"],["3/10","0"]]},
// row i / column j holding d(carrier[i], carrier[j]).
inline Json fuzzy_to_json(const FuzzyRelation& d) {
  Json j;
  j["carrier"] = d.carrier();
  Json rows = Json::array();
  for (std::size_t i = 0; i < d.size(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < d.size(); ++k) row.push_back(rat_to_string(d.at(i, k)));
    rows.push_back(row);
  }
  j["dist"] = rows;
  return j;
}

inline FuzzyRelation fuzzy_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("carrier") || !j.contains("dist"))
    throw parse_error("fuzzy relation JSON needs \"carrier\" and \"dist\"");
  std::vector<std::string> carrier = j.at("carrier").get<std::vector<std::string>>();
  std::vector<std::vector<Rat>> dist;
  for (auto& row : j.at("dist")) {
    std::vector<Rat> r;
    for (auto& cell : row) r.push_back(parse_rational(cell.get<std::string>()));
    dist.push_back(std::move(r));
  }
  return FuzzyRelation(std::move(carrier), std::move(dist));
}

// Schema: {"x": "3/4", "y": "1/4"}.
inline Json distribution_to_json(const Distribution& mu) {
  Json j = Json::object();
  for (auto& [v, w] : mu.weights()) j[v] = rat_to_string(w);
  return j;
}

inline Distribution distribution_from_json(const Json& j) {
  if (!j.is_object()) throw parse_error("distribution JSON must be an object");
  std::map<VarName, Rat> w;
  for (auto& [k, v] : j.items()) w[k] = parse_rational(v.get<std::string>());
  return Distribution(std::move(w));
}

// Schema: {"mass": {"a|b": "1/2"}, "mu": {...}, "nu": {...}}; '|' separates
// the pair, so carrier names must not contain it.
inline Json coupling_to_json(const Coupling& g) {
  Json mass = Json::object();
  for (auto& [cell, w] : g.mass()) mass[cell.first + "|" + cell.second] = rat_to_string(w);
  Json j;
  j["mass"] = mass;
  j["mu"] = distribution_to_json(g.left_marginal());
  j["nu"] = distribution_to_json(g.right_marginal());
  return j;
}

inline Coupling coupling_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("mass") || !j.contains("mu") || !j.contains("nu"))
    throw parse_error("coupling JSON needs \"mass\", \"mu\" and \"nu\"");
  std::map<Coupling::Cell, Rat> mass;
  for (auto& [k, v] : j.at("mass").items()) {
    auto bar = k.find('|');
    if (bar == std::string::npos) throw parse_error("coupling cell key without '|': " + k);
    mass[{k.substr(0, bar), k.substr(bar + 1)}] = parse_rational(v.get<std::string>());
  }
  return Coupling(std::move(mass), distribution_from_json(j.at("mu")),
                  distribution_from_json(j.at("nu")));
}

inline std::string lift_value_display(const LiftValue& v) {
  if (v.exact) return rat_display(v.lo);
  return "[" + rat_to_decimal(v.lo, 15) + ", " + rat_to_decimal(v.hi, 15) + "]";
}

}  // namespace liftcert
