#ifndef CXORDER_TESTS_RANDOM_INSTANCES_HPP
#define CXORDER_TESTS_RANDOM_INSTANCES_HPP

// Seeded random measure pairs with moments matched through order n.

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cxorder/measure.hpp"

namespace cxorder::samples {

struct MeasurePair {
  SignedMeasure mu1;
  SignedMeasure mu2;
};

inline std::vector<double> distinct_locations(std::mt19937_64& rng, int count, double a, double b,
                                              double min_gap) {
  std::uniform_real_distribution<double> loc(a, b);
  for (;;) {
    std::vector<double> xs;
    for (int i = 0; i < count; ++i) xs.push_back(loc(rng));
    std::sort(xs.begin(), xs.end());
    bool ok = true;
    for (std::size_t i = 1; i < xs.size(); ++i) ok = ok && xs[i] - xs[i - 1] >= min_gap;
    if (ok) return xs;
  }
}

/// One attempt: mu1 has 1..5 positive atoms, mu2 has n+1..5 atoms whose
/// weights solve the moment equations 0..n (spare weights are drawn first).
/// Moments are taken about the centre of [a, b] in units of the half-width.
/// Ill-conditioned solves are rejected with nullopt.
inline std::optional<MeasurePair> try_matched_pair(std::mt19937_64& rng, int n, double a = -1.0,
                                                   double b = 1.0) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  std::uniform_int_distribution<int> k1_dist(1, 5), k2_dist(n + 1, 5);
  std::uniform_real_distribution<double> w_dist(0.1, 1.0);
  const int k1 = k1_dist(rng), k2 = k2_dist(rng);

  std::vector<Atom> atoms1;
  for (double x : distinct_locations(rng, k1, a, b, 0.02 * (b - a))) atoms1.push_back({x, w_dist(rng)});
  double mass = 0.0;
  for (auto& at : atoms1) mass += at.weight;
  for (auto& at : atoms1) at.weight /= mass;

  const std::vector<double> xs = distinct_locations(rng, k2, a, b, 0.05 * (b - a));
  const int spare = k2 - (n + 1);
  std::vector<double> w2(static_cast<std::size_t>(k2), 0.0);
  std::vector<int> free_idx, spare_idx;
  std::vector<int> order(static_cast<std::size_t>(k2));
  for (int i = 0; i < k2; ++i) order[static_cast<std::size_t>(i)] = i;
  std::shuffle(order.begin(), order.end(), rng);
  for (int i = 0; i < k2; ++i) (i < spare ? spare_idx : free_idx).push_back(order[static_cast<std::size_t>(i)]);
  for (int i : spare_idx) w2[static_cast<std::size_t>(i)] = 0.5 * w_dist(rng) / k2;

  Eigen::MatrixXd v(n + 1, n + 1);
  Eigen::VectorXd rhs(n + 1);
  for (int k = 0; k <= n; ++k) {
    double target = 0.0;
    for (const auto& at : atoms1) target += at.weight * std::pow((at.location - c) / h, k);
    for (int i : spare_idx) target -= w2[static_cast<std::size_t>(i)] * std::pow((xs[static_cast<std::size_t>(i)] - c) / h, k);
    rhs(k) = target;
    for (int j = 0; j <= n; ++j)
      v(k, j) = std::pow((xs[static_cast<std::size_t>(free_idx[static_cast<std::size_t>(j)])] - c) / h, k);
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(v);
  if (lu.rcond() < 1e-8) return std::nullopt;
  const Eigen::VectorXd sol = lu.solve(rhs);
  if ((v * sol - rhs).cwiseAbs().maxCoeff() > 1e-13) return std::nullopt;
  for (int j = 0; j <= n; ++j) {
    const double w = sol(j);
    if (!std::isfinite(w) || std::abs(w) > 20.0 || std::abs(w) < 1e-6) return std::nullopt;
    w2[static_cast<std::size_t>(free_idx[static_cast<std::size_t>(j)])] = w;
  }

  std::vector<Atom> atoms2;
  for (int i = 0; i < k2; ++i) atoms2.push_back({xs[static_cast<std::size_t>(i)], w2[static_cast<std::size_t>(i)]});
  return MeasurePair{SignedMeasure(a, b, std::move(atoms1)), SignedMeasure(a, b, std::move(atoms2))};
}

inline MeasurePair matched_pair(std::mt19937_64& rng, int n, double a = -1.0, double b = 1.0) {
  for (;;)
    if (auto p = try_matched_pair(rng, n, a, b)) return *p;
}

/// A random measure with 0..4 atoms and 0..2 polynomial density pieces.
inline SignedMeasure random_measure(std::mt19937_64& rng, double a = -1.0, double b = 1.0, int max_degree = 3) {
  std::uniform_int_distribution<int> n_atoms(0, 4), n_pieces(0, 2), deg(0, max_degree);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Atom> atoms;
  for (double x : distinct_locations(rng, n_atoms(rng), a, b, 1e-3)) atoms.push_back({x, normal(rng)});
  std::vector<DensityPiece> pieces;
  const int np = n_pieces(rng);
  if (np > 0) {
    const auto cuts = distinct_locations(rng, np + 1, a, b, 0.05 * (b - a));
    for (int i = 0; i < np; ++i) {
      DensityPiece d{cuts[static_cast<std::size_t>(i)], cuts[static_cast<std::size_t>(i) + 1], {}};
      const int k = deg(rng);
      for (int j = 0; j <= k; ++j) d.coeffs.push_back(normal(rng));
      pieces.push_back(std::move(d));
    }
  }
  if (atoms.empty() && pieces.empty()) atoms.push_back({0.5 * (a + b), 1.0});
  return SignedMeasure(a, b, std::move(atoms), std::move(pieces));
}

/// Density c P_{n+1} on a random [lo, hi] ⊂ [a, b], P_{n+1} the Legendre
/// polynomial mapped to [lo, hi]. All moments of order <= n vanish.
inline SignedMeasure legendre_bump(std::mt19937_64& rng, int n, double a = -1.0, double b = 1.0) {
  const auto ends = distinct_locations(rng, 2, a, b, 0.2 * (b - a));
  const double lo = ends[0], hi = ends[1];
  const Polynomial s{-(lo + hi) / (hi - lo), 2.0 / (hi - lo)};
  Polynomial prev = Polynomial::constant(1.0), cur = s;
  for (int k = 1; k <= n; ++k) {
    Polynomial next = (s * cur * (2.0 * k + 1.0) - prev * static_cast<double>(k)) * (1.0 / (k + 1.0));
    prev = cur;
    cur = next;
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  cur *= normal(rng);
  return SignedMeasure(a, b, {}, {{lo, hi, std::vector<double>(cur.coeffs().begin(), cur.coeffs().end())}});
}

/// mu2 = mu1 + a Legendre bump: mixed atoms and densities, moments matched
/// through order n.
inline MeasurePair density_pair(std::mt19937_64& rng, int n, double a = -1.0, double b = 1.0) {
  const SignedMeasure mu1 = random_measure(rng, a, b);
  return {mu1, combine(mu1, 1.0, legendre_bump(rng, n, a, b), 1.0)};
}

}  // namespace cxorder::samples

#endif  // CXORDER_TESTS_RANDOM_INSTANCES_HPP
