#ifndef CXORDER_QUADRATURE_HPP
#define CXORDER_QUADRATURE_HPP

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "cxorder/error.hpp"
#include "cxorder/measure.hpp"
#include "cxorder/ordering.hpp"

namespace cxorder {

/// Exactness of a rule that integrates every polynomial exactly.
inline constexpr int kExactForAll = 1 << 20;

/// A quadrature operator normalised to mass 1 on [-1, 1].
struct QuadratureRule {
  std::string name;
  SignedMeasure measure;
  /// Declared degree of exactness against ½dx; see exactness_degree().
  int exactness;
};

inline const std::vector<std::string>& rule_names() {
  static const std::vector<std::string> names{"midpoint", "trapezoid", "simpson",    "gauss2",
                                              "gauss3",   "chebyshev3", "lobatto4", "uniform"};
  return names;
}

inline QuadratureRule builtin(std::string_view name) {
  const double r2 = std::sqrt(2.0) / 2.0, r3 = 1.0 / std::sqrt(3.0), r35 = std::sqrt(0.6),
               r5 = std::sqrt(5.0) / 5.0;
  auto atoms = [](std::vector<Atom> at) { return SignedMeasure(-1.0, 1.0, std::move(at)); };
  const std::string n(name);
  if (n == "midpoint") return {n, atoms({{0.0, 1.0}}), 1};
  if (n == "trapezoid") return {n, atoms({{-1.0, 0.5}, {1.0, 0.5}}), 1};
  if (n == "simpson") return {n, atoms({{-1.0, 1.0 / 6}, {0.0, 4.0 / 6}, {1.0, 1.0 / 6}}), 3};
  if (n == "gauss2") return {n, atoms({{-r3, 0.5}, {r3, 0.5}}), 3};
  if (n == "gauss3") return {n, atoms({{-r35, 5.0 / 18}, {0.0, 4.0 / 9}, {r35, 5.0 / 18}}), 5};
  if (n == "chebyshev3") return {n, atoms({{-r2, 1.0 / 3}, {0.0, 1.0 / 3}, {r2, 1.0 / 3}}), 3};
  if (n == "lobatto4")
    return {n, atoms({{-1.0, 1.0 / 12}, {-r5, 5.0 / 12}, {r5, 5.0 / 12}, {1.0, 1.0 / 12}}), 5};
  if (n == "uniform") return {n, SignedMeasure(-1.0, 1.0, {}, {{-1.0, 1.0, {0.5}}}), kExactForAll};
  throw Error(ErrorCode::UnknownRule, "no built-in rule named '" + n + "'");
}

/// Largest d such that moments 0..d agree with ½dx on [-1, 1] to `tol`,
/// capped at `max_degree`.
inline int exactness_degree(const QuadratureRule& rule, int max_degree = 15, double tol = 1e-12) {
  for (int k = 0; k <= max_degree; ++k) {
    const double exact = k % 2 == 1 ? 0.0 : 1.0 / (k + 1);
    if (std::abs(moment(rule.measure, k) - exact) > tol) return k - 1;
  }
  return max_degree;
}

/// Moves a rule from [-1, 1] onto [a, b].
inline SignedMeasure rescale(const QuadratureRule& rule, double a, double b) {
  if (!(a < b)) throw Error(ErrorCode::InvalidArgument, "rescale needs a < b");
  return pushforward_affine(rule.measure, 0.5 * (b - a), 0.5 * (a + b));
}

struct Comparison {
  OrderingVerdict global;
  OrderingVerdict crossing;
};

/// Both exact engines on the pair (A, B): does A <= B hold for n-convex f?
inline Comparison compare(const SignedMeasure& a, const SignedMeasure& b, int n,
                          double tol = kDefaultTolerance) {
  return {global_check(a, b, n, tol), crossing_decision(a, b, n, tol)};
}

inline Comparison compare(const QuadratureRule& a, const QuadratureRule& b, int n,
                          double tol = kDefaultTolerance) {
  return compare(a.measure, b.measure, n, tol);
}

}  // namespace cxorder

#endif  // CXORDER_QUADRATURE_HPP
