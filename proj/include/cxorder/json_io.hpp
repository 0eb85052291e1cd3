#ifndef CXORDER_JSON_IO_HPP
#define CXORDER_JSON_IO_HPP

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cxorder/error.hpp"
#include "cxorder/measure.hpp"
#include "cxorder/ordering.hpp"
#include "cxorder/piecewise_polynomial.hpp"

namespace cxorder {

using json = nlohmann::ordered_json;

namespace detail {

inline double number_at(const json& j, const char* key, std::string_view where) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw Error(ErrorCode::ParseError, std::string(where) + ": missing numeric field '" + key + "'");
  return j.at(key).get<double>();
}

inline const json& array_or_empty(const json& j, const char* key) {
  static const json empty = json::array();
  if (!j.contains(key)) return empty;
  if (!j.at(key).is_array()) throw Error(ErrorCode::ParseError, std::string("'") + key + "' must be an array");
  return j.at(key);
}

}  // namespace detail

/// {"support":[a,b], "atoms":[{"x":..,"w":..}], "density":[{"from":..,"to":..,"coeffs":[..]}]}
inline SignedMeasure measure_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "measure spec must be a JSON object");
  if (!j.contains("support") || !j["support"].is_array() || j["support"].size() != 2 ||
      !j["support"][0].is_number() || !j["support"][1].is_number())
    throw Error(ErrorCode::ParseError, "'support' must be [a, b]");
  std::vector<Atom> atoms;
  for (const auto& a : detail::array_or_empty(j, "atoms")) {
    if (!a.is_object()) throw Error(ErrorCode::ParseError, "atom must be an object");
    atoms.push_back({detail::number_at(a, "x", "atom"), detail::number_at(a, "w", "atom")});
  }
  std::vector<DensityPiece> density;
  for (const auto& d : detail::array_or_empty(j, "density")) {
    if (!d.is_object()) throw Error(ErrorCode::ParseError, "density piece must be an object");
    DensityPiece p{detail::number_at(d, "from", "density"), detail::number_at(d, "to", "density"), {}};
    for (const auto& c : detail::array_or_empty(d, "coeffs")) {
      if (!c.is_number()) throw Error(ErrorCode::ParseError, "density coefficients must be numbers");
      p.coeffs.push_back(c.get<double>());
    }
    density.push_back(std::move(p));
  }
  return SignedMeasure(j["support"][0].get<double>(), j["support"][1].get<double>(), std::move(atoms),
                       std::move(density));
}

inline SignedMeasure measure_from_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return measure_from_json(j);
}

inline json to_json(const SignedMeasure& mu) {
  json j;
  j["support"] = {mu.lower(), mu.upper()};
  j["atoms"] = json::array();
  for (const auto& a : mu.atoms()) j["atoms"].push_back({{"x", a.location}, {"w", a.weight}});
  j["density"] = json::array();
  for (const auto& d : mu.density()) j["density"].push_back({{"from", d.lo}, {"to", d.hi}, {"coeffs", d.coeffs}});
  return j;
}

/// Pieces are written in the local variable x - b_i of their left breakpoint.
inline json to_json(const PiecewisePolynomial& p) {
  json j;
  const auto bp = p.breakpoints();
  j["breakpoints"] = std::vector<double>(bp.begin(), bp.end());
  j["pieces"] = json::array();
  for (std::size_t i = 0; i < p.piece_count(); ++i) {
    const auto c = p.piece(i).coeffs();
    j["pieces"].push_back(std::vector<double>(c.begin(), c.end()));
  }
  j["jumps"] = json::array();
  for (std::size_t i = 1; i + 1 < bp.size(); ++i) j["jumps"].push_back(p.jump_at(i));
  j["terminal_jump"] = p.terminal_jump();
  return j;
}

inline json to_json(const std::optional<Witness>& w) {
  if (!w) return nullptr;
  json j;
  j["kind"] = w->kind == Witness::Kind::Monomial ? "monomial" : "spline";
  j["param"] = w->param;
  if (w->kind == Witness::Kind::Monomial) {
    j["sign"] = w->sign;
    j["center"] = w->center;
  }
  return j;
}

inline json to_json(const OrderingVerdict& v) {
  json j;
  j["order_n"] = v.order;
  j["verdict"] = to_string(v.verdict);
  if (v.verdict == Verdict::Inconclusive) j["reason"] = to_string(v.reason);
  j["crossings"] = v.crossings;
  j["m"] = v.m;
  j["checkpoints"] = json::array();
  for (const auto& c : v.checkpoints) j["checkpoints"].push_back({{"x", c.x}, {"value", c.value}});
  j["endpoint_residuals"] = v.endpoint_residuals;
  j["witness"] = to_json(v.witness);
  return j;
}

}  // namespace cxorder

#endif  // CXORDER_JSON_IO_HPP
