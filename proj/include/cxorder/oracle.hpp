#ifndef CXORDER_ORACLE_HPP
#define CXORDER_ORACLE_HPP

// Brute-force ground truth for the ordering engines. Nothing in here touches
// the H-cascade: expectations go through moments and truncated moments only.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "cxorder/error.hpp"
#include "cxorder/measure.hpp"
#include "cxorder/ordering.hpp"

namespace cxorder {

/// f(t) = Σ w_i (t - knot_i)_+^n + Σ c_k ((t - center) / unit)^k with w_i >= 0.
struct TestFunction {
  enum class Kind { Spline, Monomial, Mixture };
  Kind kind = Kind::Mixture;
  int order = 1;
  std::vector<double> knots;
  std::vector<double> spline_weights;
  std::vector<double> poly_coeffs;
  double center = 0.0;
  double unit = 1.0;
};

inline double expectation(const TestFunction& f, const SignedMeasure& mu) {
  if (f.knots.size() != f.spline_weights.size())
    throw Error(ErrorCode::InvalidArgument, "one spline weight per knot");
  double s = 0.0;
  for (std::size_t i = 0; i < f.knots.size(); ++i)
    if (f.spline_weights[i] != 0.0) s += f.spline_weights[i] * truncated_moment(mu, f.knots[i], f.order);
  for (std::size_t k = 0; k < f.poly_coeffs.size(); ++k)
    if (f.poly_coeffs[k] != 0.0)
      s += f.poly_coeffs[k] * moment_about(mu, f.center, static_cast<int>(k)) /
           std::pow(f.unit, static_cast<double>(k));
  return s;
}

/// Upper bound for sup |f| over [a, b].
inline double sup_bound(const TestFunction& f, double a, double b) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.knots.size(); ++i)
    s += std::abs(f.spline_weights[i]) * std::pow(std::max(0.0, b - f.knots[i]), f.order);
  const double reach = std::max(std::abs(a - f.center), std::abs(b - f.center)) / f.unit;
  for (std::size_t k = 0; k < f.poly_coeffs.size(); ++k)
    s += std::abs(f.poly_coeffs[k]) * std::pow(reach, static_cast<double>(k));
  return s;
}

inline TestFunction to_test_function(const Witness& w, int n) {
  TestFunction f;
  f.order = n;
  if (w.kind == Witness::Kind::Spline) {
    f.kind = TestFunction::Kind::Spline;
    f.knots = {w.param};
    f.spline_weights = {1.0};
  } else {
    f.kind = TestFunction::Kind::Monomial;
    const int k = static_cast<int>(w.param);
    f.poly_coeffs.assign(static_cast<std::size_t>(k) + 1, 0.0);
    f.poly_coeffs.back() = w.sign;
    f.center = w.center;
  }
  return f;
}

/// ∫f dμ1 - ∫f dμ2 for the witness and the threshold it has to beat.
struct WitnessCheck {
  double gap = 0.0;
  double threshold = 0.0;
  bool confirmed = false;
};

inline WitnessCheck confirm_witness(const SignedMeasure& mu1, const SignedMeasure& mu2, const Witness& w,
                                    int n, double tol = kDefaultTolerance) {
  const TestFunction f = to_test_function(w, n);
  WitnessCheck c;
  c.gap = expectation(f, mu1) - expectation(f, mu2);
  c.threshold = tol * sup_bound(f, mu1.lower(), mu1.upper()) *
                (total_variation(mu1) + total_variation(mu2));
  c.confirmed = c.gap > c.threshold;
  return c;
}

/// Outcome of the grid test; `worst_x` is the grid point with the smallest
/// margin truncated_moment(μ2) - truncated_moment(μ1).
struct GridReport {
  bool holds = true;
  bool moments_match = true;
  std::optional<int> failed_moment;
  double worst_x = 0.0;
  double worst_margin = 0.0;
  double threshold = 0.0;
};

/// Moment equalities k = 0..n (centred) plus
/// ∫(t-x)_+^n dμ1 <= ∫(t-x)_+^n dμ2 at grid_size equally spaced x.
inline GridReport grid_report(const SignedMeasure& mu1, const SignedMeasure& mu2, int n,
                              int grid_size = 2001, double tol = kDefaultTolerance) {
  if (grid_size < 101) throw Error(ErrorCode::InvalidArgument, "grid needs at least 101 points");
  if (n < 1) throw Error(ErrorCode::OrderOverflow, "order must be positive");
  const double a = mu1.lower(), b = mu1.upper();
  if (mu2.lower() != a || mu2.upper() != b)
    throw Error(ErrorCode::SupportMismatch, "measures live on different supports");
  const double tv = total_variation(mu1) + total_variation(mu2);
  const double c = 0.5 * (a + b), half = 0.5 * (b - a);
  GridReport rep;
  for (int k = 0; k <= n; ++k) {
    const double gap = moment_about(mu2, c, k) - moment_about(mu1, c, k);
    if (std::abs(gap) > tol * tv * std::pow(half, k)) {
      rep.holds = rep.moments_match = false;
      rep.failed_moment = k;
      break;
    }
  }
  rep.threshold = tol * tv * std::pow(b - a, n);
  rep.worst_margin = INFINITY;
  for (int i = 0; i < grid_size; ++i) {
    const double x = i + 1 == grid_size ? b : a + (b - a) * i / (grid_size - 1);
    const double margin = truncated_moment(mu2, x, n) - truncated_moment(mu1, x, n);
    if (margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.worst_x = x;
    }
  }
  if (rep.worst_margin < -rep.threshold) rep.holds = false;
  return rep;
}

inline bool grid_condition_check(const SignedMeasure& mu1, const SignedMeasure& mu2, int n,
                                 int grid_size = 2001, double tol = kDefaultTolerance) {
  return grid_report(mu1, mu2, n, grid_size, tol).holds;
}

struct SuiteResult {
  int trials = 0;
  int violations = 0;
  /// Largest ∫f dμ1 - ∫f dμ2 relative to its threshold scale.
  double worst_relative_gap = -INFINITY;
  std::optional<TestFunction> first_violation;
};

/// Draws `trials` random n-convex functions (8 knots uniform in [a, b],
/// weights |N(0,1)|, polynomial part of degree <= n with N(0,1) coefficients)
/// and counts those with ∫f dμ1 > ∫f dμ2 + tol * scale. The whole sample is
/// drawn before any evaluation, so the count only depends on the seed.
inline SuiteResult random_nconvex_suite(const SignedMeasure& mu1, const SignedMeasure& mu2, int n,
                                        int trials, std::uint64_t seed, double tol = kDefaultTolerance,
                                        const std::vector<TestFunction>& injected = {}) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be positive");
  const double a = mu1.lower(), b = mu1.upper();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> knot_dist(a, b);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<TestFunction> sample;
  sample.reserve(static_cast<std::size_t>(trials) + injected.size());
  for (int t = 0; t < trials; ++t) {
    TestFunction f;
    f.order = n;
    f.center = 0.5 * (a + b);
    f.unit = 0.5 * (b - a);
    for (int i = 0; i < 8; ++i) {
      f.knots.push_back(knot_dist(rng));
      f.spline_weights.push_back(std::abs(normal(rng)));
    }
    for (int k = 0; k <= n; ++k) f.poly_coeffs.push_back(normal(rng));
    sample.push_back(std::move(f));
  }
  sample.insert(sample.end(), injected.begin(), injected.end());

  const double tv = total_variation(mu1) + total_variation(mu2);
  SuiteResult res;
  res.trials = static_cast<int>(sample.size());
  for (const auto& f : sample) {
    const double scale = tv * std::max(sup_bound(f, a, b), 1e-300);
    const double gap = expectation(f, mu1) - expectation(f, mu2);
    res.worst_relative_gap = std::max(res.worst_relative_gap, gap / scale);
    if (gap > tol * scale) {
      if (res.violations == 0) res.first_violation = f;
      ++res.violations;
    }
  }
  return res;
}

}  // namespace cxorder

#endif  // CXORDER_ORACLE_HPP
