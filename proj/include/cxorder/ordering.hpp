#ifndef CXORDER_ORDERING_HPP
#define CXORDER_ORDERING_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cxorder/error.hpp"
#include "cxorder/measure.hpp"
#include "cxorder/piecewise_polynomial.hpp"
#include "cxorder/polynomial.hpp"

namespace cxorder {

/// Highest order n for which the (n+1)-convex order can be checked.
inline constexpr int kMaxOrder = 8;
inline constexpr double kDefaultTolerance = 1e-9;

enum class Verdict { Holds, HoldsReversed, NotOrdered, Inconclusive };

enum class InconclusiveReason { None, MultipleCrossings };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::HoldsReversed: return "holds_reversed";
    case Verdict::NotOrdered: return "not_ordered";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

inline std::string_view to_string(InconclusiveReason r) {
  switch (r) {
    case InconclusiveReason::None: return "none";
    case InconclusiveReason::MultipleCrossings: return "multiple_crossings";
  }
  return "none";
}

/// An n-convex test function on which μ1 <= μ2 fails.
///
/// Monomial: f(t) = sign * (t - center)^param, a polynomial of degree
/// param <= n (so both n-convex and n-concave). Spline: f(t) = (t - param)_+^degree.
struct Witness {
  enum class Kind { Monomial, Spline };
  Kind kind;
  double param;
  int sign = 1;
  double center = 0.0;
  int degree = 0;
};

struct Checkpoint {
  double x;
  double value;
};

struct OrderingVerdict {
  Verdict verdict = Verdict::Inconclusive;
  int order = 1;
  std::optional<Witness> witness;
  InconclusiveReason reason = InconclusiveReason::None;
  std::vector<double> endpoint_residuals;
  std::vector<double> crossings;
  int m = 0;
  std::vector<Checkpoint> checkpoints;

  bool holds() const { return verdict == Verdict::Holds; }
};

/// H_0 ... H_n for a pair of measures, plus everything the decision
/// procedures read off them.
struct HProfile {
  int n = 1;
  double a = 0.0;
  double b = 1.0;
  /// H_0 = F_2 - F_1, H_k = ∫_a^x H_{k-1}.
  std::vector<PiecewisePolynomial> h;
  /// H_n from the truncated-power formula, used to cross-check the cascade.
  std::optional<PiecewisePolynomial> direct;
  /// Natural magnitude of H_k: (TV(μ1) + TV(μ2)) (b - a)^k / k!.
  std::vector<double> scales;
  std::vector<double> endpoint_values;
  std::vector<double> endpoint_residuals;
  /// ∫ x^k d(μ2 - μ1), k = 0..n.
  std::vector<double> moment_gaps;
  /// Sign changes of H_{n-1}, ignoring lobes whose area is below the H_n
  /// threshold.
  SignChangeCatalogue catalogue;
  /// (-1)^{n+1} H_n at the even-indexed crossings x_2, x_4, ...
  std::vector<Checkpoint> checkpoints;
  /// max_k sup |H_k - D_k| / T_k between the integration and derivative routes.
  /// Small only when the endpoint conditions hold. Otherwise the routes differ
  /// by a polynomial of degree below n.
  double route_discrepancy = 0.0;

  /// (-1)^{n+1}.
  int parity_sign() const { return n % 2 == 1 ? 1 : -1; }
};

namespace detail {

inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

inline double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

inline void check_pair(const SignedMeasure& m1, const SignedMeasure& m2, int n) {
  const double tol = 1e-14 * std::max(1.0, m1.width());
  if (std::abs(m1.lower() - m2.lower()) > tol || std::abs(m1.upper() - m2.upper()) > tol)
    throw Error(ErrorCode::SupportMismatch, "measures live on different supports");
  if (n < 1 || n > kMaxOrder)
    throw Error(ErrorCode::OrderOverflow, "order n = " + std::to_string(n) + " outside 1.." +
                                              std::to_string(kMaxOrder));
}

inline std::vector<double> h_scales(const SignedMeasure& m1, const SignedMeasure& m2, int n) {
  const double tv = total_variation(m1) + total_variation(m2);
  std::vector<double> s;
  for (int k = 0; k <= n; ++k) s.push_back(tv * std::pow(m1.width(), k) / factorial(k));
  return s;
}

inline Witness monomial_witness(int k, double hk_at_b, double b) {
  // ∫ (t - b)^k d(μ1 - μ2) = -(-1)^k k! H_k(b).
  const int sign_of_gap = (k % 2 == 0 ? -1 : 1) * (hk_at_b > 0 ? 1 : -1);
  return {Witness::Kind::Monomial, static_cast<double>(k), sign_of_gap, b, k};
}

inline Witness spline_witness(double knot, int n) {
  return {Witness::Kind::Spline, knot, 1, 0.0, n};
}

inline std::vector<double> sample_points(const PiecewisePolynomial& p) {
  std::vector<double> xs;
  const auto bp = p.breakpoints();
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    xs.push_back(bp[i]);
    xs.push_back(bp[i] + 0.25 * (bp[i + 1] - bp[i]));
    xs.push_back(0.5 * (bp[i] + bp[i + 1]));
    xs.push_back(bp[i] + 0.75 * (bp[i + 1] - bp[i]));
  }
  xs.push_back(bp.back());
  return xs;
}

}  // namespace detail

/// H_n(x) = (-1)^{n+1} ∫ (t - x)_+^n / n! d(μ2 - μ1)(t), assembled piece by
/// piece from the truncated-power formula.
inline PiecewisePolynomial h_function(const SignedMeasure& mu1, const SignedMeasure& mu2, int n) {
  detail::check_pair(mu1, mu2, n);
  const SignedMeasure diff = combine(mu2, 1.0, mu1, -1.0);
  const std::vector<double> grid = detail::measure_grid(diff);
  const double snap = diff.merge_distance();
  const double factor = (n % 2 == 1 ? 1.0 : -1.0) / detail::factorial(n);

  std::vector<Polynomial> pieces;
  for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
    const double g = grid[j];
    const double next = grid[j + 1];
    Polynomial piece;
    // Atoms right of the piece: w (t - g - u)^n.
    for (const auto& at : diff.atoms())
      if (at.location >= next - snap)
        piece += detail::binomial_power(at.location - g, n).scaled_arg(-1.0) * at.weight;
    for (const auto& d : diff.density()) {
      if (d.lo >= next - snap) {
        // Σ_k C(n,k) (-u)^k ∫_lo^hi (t - g)^{n-k} p(t) dt
        for (int k = 0; k <= n; ++k) {
          const double c = detail::binomial(n, k) * (k % 2 == 0 ? 1.0 : -1.0) *
                           detail::density_power_integral(d, d.lo, g, n - k);
          piece += Polynomial::monomial(k, c);
        }
      } else if (d.lo <= g + snap && d.hi >= next - snap) {
        // Σ_k C(n,k) (-u)^k [Q_{n-k}(h) - Q_{n-k}(u)], Q_m = ∫_0 s^m p(g + s) ds
        const Polynomial local = d.polynomial().shifted(g);
        const double h = d.hi - g;
        for (int k = 0; k <= n; ++k) {
          const Polynomial q = (Polynomial::monomial(n - k) * local).antiderivative();
          const double c = detail::binomial(n, k) * (k % 2 == 0 ? 1.0 : -1.0);
          piece += Polynomial::monomial(k, c) * (Polynomial::constant(q(h)) - q);
        }
      }
    }
    pieces.push_back(piece * factor);
  }
  return PiecewisePolynomial(PiecewisePolynomial::derived, grid, std::move(pieces));
}

/// Full H-cascade with endpoint residuals, the sign-change catalogue of
/// H_{n-1} and the checkpoint values (-1)^{n+1} H_n(x_{2i}).
inline HProfile h_sequence(const SignedMeasure& mu1, const SignedMeasure& mu2, int n,
                           double tol = kDefaultTolerance) {
  detail::check_pair(mu1, mu2, n);
  HProfile prof;
  prof.n = n;
  prof.a = mu1.lower();
  prof.b = mu1.upper();
  prof.scales = detail::h_scales(mu1, mu2, n);

  prof.h.push_back(cdf(mu2) - cdf(mu1));
  for (int k = 1; k <= n; ++k) prof.h.push_back(antiderivative(prof.h.back(), prof.a));

  for (int k = 0; k <= n; ++k) {
    const double v = evaluate(prof.h[static_cast<std::size_t>(k)], prof.b);
    prof.endpoint_values.push_back(v);
    prof.endpoint_residuals.push_back(std::abs(v));
    prof.moment_gaps.push_back(moment(mu2, k) - moment(mu1, k));
  }

  // Derivative route: differentiate the direct H_n down to H_1.
  prof.direct = h_function(mu1, mu2, n);
  PiecewisePolynomial down = *prof.direct;
  for (int k = n; k >= 1; --k) {
    const auto& up = prof.h[static_cast<std::size_t>(k)];
    const double s = prof.scales[static_cast<std::size_t>(k)];
    if (s > 0.0)
      for (double x : detail::sample_points(up))
        prof.route_discrepancy =
            std::max(prof.route_discrepancy, std::abs(evaluate(up, x) - evaluate(down, x)) / s);
    if (k > 1) down = differentiate(down);
  }

  const auto& prev = prof.h[static_cast<std::size_t>(n - 1)];
  prof.catalogue = sign_changes_by_area(prev, tol * prof.scales[static_cast<std::size_t>(n - 1)],
                                       tol * prof.scales[static_cast<std::size_t>(n)]);
  const auto& hn = prof.h[static_cast<std::size_t>(n)];
  for (std::size_t i = 1; i < prof.catalogue.points.size(); i += 2) {
    const double x = prof.catalogue.points[i];
    prof.checkpoints.push_back({x, prof.parity_sign() * evaluate(hn, x)});
  }
  return prof;
}

/// Per-k outcome of the endpoint conditions H_k(b) = 0, k = 0..n.
struct EndpointReport {
  bool holds = true;
  std::optional<int> first_violated;
  /// ∫ x^k d(μ2 - μ1) at the first violated k.
  double moment_gap = 0.0;
  std::vector<double> residuals;
  std::vector<bool> satisfied;
};

inline EndpointReport check_endpoint_conditions(const HProfile& prof, double tol = kDefaultTolerance) {
  EndpointReport rep;
  rep.residuals = prof.endpoint_residuals;
  for (int k = 0; k <= prof.n; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    const bool ok = prof.endpoint_residuals[ks] <= tol * prof.scales[ks];
    rep.satisfied.push_back(ok);
    if (!ok && rep.holds) {
      rep.holds = false;
      rep.first_violated = k;
      rep.moment_gap = prof.moment_gaps[ks];
    }
  }
  return rep;
}

namespace detail {

inline OrderingVerdict diagnostics(const HProfile& prof) {
  OrderingVerdict v;
  v.order = prof.n;
  v.endpoint_residuals = prof.endpoint_residuals;
  v.crossings = prof.catalogue.points;
  v.m = prof.catalogue.count();
  v.checkpoints = prof.checkpoints;
  return v;
}

inline PiecewisePolynomial oriented_hn(const HProfile& prof) {
  return scale(prof.h.back(), prof.parity_sign());
}

}  // namespace detail

/// Necessary-and-sufficient check: endpoint conditions, then the sign of
/// G = (-1)^{n+1} H_n over the whole support.
inline OrderingVerdict global_check(const SignedMeasure& mu1, const SignedMeasure& mu2, int n,
                                    double tol = kDefaultTolerance) {
  const HProfile prof = h_sequence(mu1, mu2, n, tol);
  OrderingVerdict v = detail::diagnostics(prof);
  const EndpointReport ep = check_endpoint_conditions(prof, tol);
  if (!ep.holds) {
    const int k = *ep.first_violated;
    v.verdict = Verdict::NotOrdered;
    v.witness = detail::monomial_witness(k, prof.endpoint_values[static_cast<std::size_t>(k)], prof.b);
    return v;
  }
  const PiecewisePolynomial g = detail::oriented_hn(prof);
  const double thr = tol * prof.scales.back();
  const Extremum lo = global_min(g, prof.a, prof.b);
  if (lo.value >= -thr) {
    v.verdict = Verdict::Holds;
    return v;
  }
  const Extremum hi = global_max(g, prof.a, prof.b);
  if (hi.value <= thr) {
    v.verdict = Verdict::HoldsReversed;
    return v;
  }
  v.verdict = Verdict::NotOrdered;
  v.witness = detail::spline_witness(lo.x, n);
  return v;
}

/// Decision from the crossings x_1 < ... < x_m of H_{n-1}: even m fails, odd m
/// holds iff (-1)^{n+1} H_n(x_2), (-1)^{n+1} H_n(x_4), ... are non-negative.
/// When (-1)^{n+1} H_{n-1} starts negative the swapped pair is decided and a
/// success is reported as HoldsReversed.
inline OrderingVerdict crossing_decision(const SignedMeasure& mu1, const SignedMeasure& mu2, int n,
                                         double tol = kDefaultTolerance) {
  const HProfile prof = h_sequence(mu1, mu2, n, tol);
  OrderingVerdict v = detail::diagnostics(prof);
  const EndpointReport ep = check_endpoint_conditions(prof, tol);
  if (!ep.holds) {
    const int k = *ep.first_violated;
    v.verdict = Verdict::NotOrdered;
    v.witness = detail::monomial_witness(k, prof.endpoint_values[static_cast<std::size_t>(k)], prof.b);
    return v;
  }
  const int orientation = prof.parity_sign() * prof.catalogue.initial_sign;
  const Verdict success = orientation < 0 ? Verdict::HoldsReversed : Verdict::Holds;
  const PiecewisePolynomial g = detail::oriented_hn(prof);
  const double thr = tol * prof.scales.back();
  auto fail_with_argmin = [&] {
    v.verdict = Verdict::NotOrdered;
    v.witness = detail::spline_witness(global_min(g, prof.a, prof.b).x, n);
    return v;
  };
  if (v.m == 0) {
    // No crossings: H_{n-1} is one-signed, so the sign of H_n decides.
    if (global_min(g, prof.a, prof.b).value >= -thr) {
      v.verdict = Verdict::Holds;
    } else if (global_max(g, prof.a, prof.b).value <= thr) {
      v.verdict = Verdict::HoldsReversed;
    } else {
      return fail_with_argmin();
    }
    return v;
  }
  if (v.m % 2 == 0) return fail_with_argmin();
  for (const auto& cp : prof.checkpoints) {
    if (orientation * cp.value >= -thr) continue;
    if (orientation < 0) return fail_with_argmin();
    v.verdict = Verdict::NotOrdered;
    v.witness = detail::spline_witness(cp.x, n);
    return v;
  }
  v.verdict = success;
  return v;
}

/// Single-crossing sufficient test for the convex order (n = 1).
inline OrderingVerdict ohlin_check(const SignedMeasure& mu1, const SignedMeasure& mu2,
                                   double tol = kDefaultTolerance) {
  const HProfile prof = h_sequence(mu1, mu2, 1, tol);
  OrderingVerdict v = detail::diagnostics(prof);
  const EndpointReport ep = check_endpoint_conditions(prof, tol);
  if (!ep.holds) {
    const int k = *ep.first_violated;
    v.verdict = Verdict::NotOrdered;
    v.witness = detail::monomial_witness(k, prof.endpoint_values[static_cast<std::size_t>(k)], prof.b);
    return v;
  }
  const SignChangeCatalogue& cat = prof.catalogue;
  v.crossings = cat.points;
  v.m = cat.count();
  if (cat.count() > 1) {
    v.verdict = Verdict::Inconclusive;
    v.reason = InconclusiveReason::MultipleCrossings;
  } else {
    v.verdict = cat.initial_sign < 0 ? Verdict::HoldsReversed : Verdict::Holds;
  }
  return v;
}

/// Convex order (n = 1) from the three integral conditions on F_1, F_2:
/// F_1(b) = F_2(b), ∫F_1 = ∫F_2 and ∫_a^x F_1 <= ∫_a^x F_2.
inline OrderingVerdict levin_steckin_check(const SignedMeasure& mu1, const SignedMeasure& mu2,
                                           double tol = kDefaultTolerance) {
  detail::check_pair(mu1, mu2, 1);
  const auto scales = detail::h_scales(mu1, mu2, 1);
  const PiecewisePolynomial f1 = cdf(mu1), f2 = cdf(mu2);
  const PiecewisePolynomial i1 = antiderivative(f1, mu1.lower());
  const PiecewisePolynomial i2 = antiderivative(f2, mu2.lower());
  const double b = mu1.upper();

  OrderingVerdict v;
  v.order = 1;
  const double mass_gap = evaluate(f2, b) - evaluate(f1, b);
  const double area_gap = evaluate(i2, b) - evaluate(i1, b);
  v.endpoint_residuals = {std::abs(mass_gap), std::abs(area_gap)};
  const SignChangeCatalogue cat = sign_changes_by_area(f2 - f1, tol * scales[0], tol * scales[1]);
  v.crossings = cat.points;
  v.m = cat.count();

  if (std::abs(mass_gap) > tol * scales[0]) {
    v.verdict = Verdict::NotOrdered;
    v.witness = detail::monomial_witness(0, mass_gap, b);
    return v;
  }
  if (std::abs(area_gap) > tol * scales[1]) {
    v.verdict = Verdict::NotOrdered;
    v.witness = detail::monomial_witness(1, area_gap, b);
    return v;
  }
  const PiecewisePolynomial d = i2 - i1;
  const double thr = tol * scales[1];
  const Extremum lo = global_min(d, mu1.lower(), b);
  if (lo.value >= -thr) {
    v.verdict = Verdict::Holds;
  } else if (global_max(d, mu1.lower(), b).value <= thr) {
    v.verdict = Verdict::HoldsReversed;
  } else {
    v.verdict = Verdict::NotOrdered;
    v.witness = detail::spline_witness(lo.x, 1);
  }
  return v;
}

/// Result of the area test: A_i = ∫_{x_i}^{x_{i+1}} |F| between consecutive
/// crossings of F = F_2 - F_1 (x_0 = a, x_{m+1} = b).
struct AreaReport {
  OrderingVerdict verdict;
  std::vector<double> areas;
  std::vector<double> crossings;
  bool reversed = false;
};

/// Convex order (n = 1) through the alternating area inequalities
/// A_0 >= A_1, A_0 + A_2 >= A_1 + A_3, ...
inline AreaReport szostok_check(const SignedMeasure& mu1, const SignedMeasure& mu2,
                                double tol = kDefaultTolerance) {
  const HProfile prof = h_sequence(mu1, mu2, 1, tol);
  AreaReport rep;
  OrderingVerdict& v = rep.verdict;
  v = detail::diagnostics(prof);
  const EndpointReport ep = check_endpoint_conditions(prof, tol);
  if (!ep.holds) {
    const int k = *ep.first_violated;
    v.verdict = Verdict::NotOrdered;
    v.witness = detail::monomial_witness(k, prof.endpoint_values[static_cast<std::size_t>(k)], prof.b);
    return rep;
  }
  const PiecewisePolynomial& f = prof.h[0];
  const SignChangeCatalogue& cat = prof.catalogue;
  rep.crossings = cat.points;
  v.crossings = cat.points;
  v.m = cat.count();
  v.checkpoints.clear();

  std::vector<double> xs{prof.a};
  xs.insert(xs.end(), cat.points.begin(), cat.points.end());
  xs.push_back(prof.b);
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) rep.areas.push_back(integrate_abs(f, xs[i], xs[i + 1]));

  rep.reversed = cat.initial_sign < 0;
  const Verdict success = rep.reversed ? Verdict::HoldsReversed : Verdict::Holds;
  auto fail_with_argmin = [&] {
    v.verdict = Verdict::NotOrdered;
    v.witness = detail::spline_witness(global_min(prof.h[1], prof.a, prof.b).x, 1);
    return rep;
  };
  if (cat.count() == 0) {
    v.verdict = Verdict::Holds;
    return rep;
  }
  if (cat.count() % 2 == 0) return fail_with_argmin();

  const double thr = tol * prof.scales[1];
  double even_sum = 0.0, odd_sum = 0.0;
  for (std::size_t j = 0; j + 2 < rep.areas.size(); j += 2) {
    even_sum += rep.areas[j];
    odd_sum += rep.areas[j + 1];
    const double x = cat.points[j + 1];
    v.checkpoints.push_back({x, even_sum - odd_sum});
    if (even_sum - odd_sum >= -thr) continue;
    if (rep.reversed) return fail_with_argmin();
    v.verdict = Verdict::NotOrdered;
    v.witness = detail::spline_witness(x, 1);
    return rep;
  }
  v.verdict = success;
  return rep;
}

}  // namespace cxorder

#endif  // CXORDER_ORDERING_HPP
