#ifndef CXORDER_MEASURE_HPP
#define CXORDER_MEASURE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cxorder/error.hpp"
#include "cxorder/piecewise_polynomial.hpp"
#include "cxorder/polynomial.hpp"

namespace cxorder {

/// Point mass.
struct Atom {
  double location;
  double weight;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Polynomial density on [lo, hi]; coefficients are ascending powers of the
/// global coordinate x.
struct DensityPiece {
  double lo;
  double hi;
  std::vector<double> coeffs;

  Polynomial polynomial() const { return Polynomial(coeffs); }

  friend bool operator==(const DensityPiece&, const DensityPiece&) = default;
};

/// Finite signed measure on a compact interval: atoms plus polynomial density
/// pieces. Immutable once built.
///
/// Construction normalises the input: atoms are sorted, atoms closer than
/// 1e-14 (b - a) are merged by summing weights, zero-weight atoms and zero
/// densities are dropped.
class SignedMeasure {
 public:
  static constexpr int kMaxDensityDegree = 8;

  SignedMeasure(double a, double b, std::vector<Atom> atoms = {},
                std::vector<DensityPiece> density = {})
      : a_(a), b_(b) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
      throw Error(ErrorCode::InvalidArgument, "support must satisfy a < b");
    normalise_atoms(std::move(atoms));
    normalise_density(std::move(density));
  }

  double lower() const { return a_; }
  double upper() const { return b_; }
  double width() const { return b_ - a_; }
  std::span<const Atom> atoms() const { return atoms_; }
  std::span<const DensityPiece> density() const { return density_; }
  bool empty() const { return atoms_.empty() && density_.empty(); }

  /// Snap distance used for atoms and grid points.
  double merge_distance() const { return 1e-14 * (b_ - a_); }

  friend bool operator==(const SignedMeasure&, const SignedMeasure&) = default;

 private:
  void normalise_atoms(std::vector<Atom> atoms) {
    for (const auto& at : atoms) {
      if (!std::isfinite(at.location) || !std::isfinite(at.weight))
        throw Error(ErrorCode::InvalidArgument, "atom fields must be finite");
      if (at.location < a_ || at.location > b_)
        throw Error(ErrorCode::OutOfDomain,
                    "atom at " + std::to_string(at.location) + " outside the support");
    }
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& x, const Atom& y) { return x.location < y.location; });
    for (const auto& at : atoms) {
      if (!atoms_.empty() && at.location - atoms_.back().location <= merge_distance())
        atoms_.back().weight += at.weight;
      else
        atoms_.push_back(at);
    }
    std::erase_if(atoms_, [](const Atom& at) { return at.weight == 0.0; });
  }

  void normalise_density(std::vector<DensityPiece> pieces) {
    for (auto& d : pieces) {
      if (!std::isfinite(d.lo) || !std::isfinite(d.hi) || !(d.lo < d.hi))
        throw Error(ErrorCode::InvalidArgument, "density piece needs lo < hi");
      if (d.lo < a_ || d.hi > b_)
        throw Error(ErrorCode::OutOfDomain, "density piece outside the support");
      while (!d.coeffs.empty() && d.coeffs.back() == 0.0) d.coeffs.pop_back();
      if (static_cast<int>(d.coeffs.size()) - 1 > kMaxDensityDegree)
        throw Error(ErrorCode::DegreeOverflow, "density degree exceeds 8");
      for (double c : d.coeffs)
        if (!std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "density coefficient not finite");
    }
    std::erase_if(pieces, [](const DensityPiece& d) { return d.coeffs.empty(); });
    std::sort(pieces.begin(), pieces.end(),
              [](const DensityPiece& x, const DensityPiece& y) { return x.lo < y.lo; });
    for (std::size_t i = 1; i < pieces.size(); ++i)
      if (pieces[i].lo < pieces[i - 1].hi - merge_distance())
        throw Error(ErrorCode::InvalidArgument, "density pieces overlap");
    density_ = std::move(pieces);
  }

  double a_;
  double b_;
  std::vector<Atom> atoms_;
  std::vector<DensityPiece> density_;
};

namespace detail {

// (d + u)^k as a polynomial in u.
inline Polynomial binomial_power(double d, int k) {
  Polynomial out = Polynomial::constant(1.0);
  const Polynomial lin{d, 1.0};
  for (int i = 0; i < k; ++i) out = out * lin;
  return out;
}

// Integral over [from, hi] of (t - c)^k p(t), computed in the local variable
// u = t - from so that d = from - c stays small for local work.
inline double density_power_integral(const DensityPiece& piece, double from, double c, int k) {
  if (!(piece.hi > from)) return 0.0;
  const Polynomial local = piece.polynomial().shifted(from);
  const Polynomial integrand = binomial_power(from - c, k) * local;
  return integrand.antiderivative()(piece.hi - from);
}

}  // namespace detail

/// ∫ (t - c)^k dμ(t), exact for atoms and polynomial densities.
inline double moment_about(const SignedMeasure& mu, double c, int k) {
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "moment order must be non-negative");
  double s = 0.0;
  for (const auto& at : mu.atoms()) s += at.weight * std::pow(at.location - c, k);
  for (const auto& d : mu.density()) s += detail::density_power_integral(d, d.lo, c, k);
  return s;
}

/// ∫ t^k dμ(t).
inline double moment(const SignedMeasure& mu, int k) { return moment_about(mu, 0.0, k); }

inline double total_mass(const SignedMeasure& mu) { return moment_about(mu, 0.0, 0); }

/// ∫ (t - x)_+^n dμ(t).
inline double truncated_moment(const SignedMeasure& mu, double x, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "truncated moment needs n >= 1");
  if (x < mu.lower() || x > mu.upper())
    throw Error(ErrorCode::OutOfDomain, "truncation point outside the support");
  double s = 0.0;
  for (const auto& at : mu.atoms())
    if (at.location > x) s += at.weight * std::pow(at.location - x, n);
  for (const auto& d : mu.density())
    s += detail::density_power_integral(d, std::max(d.lo, x), x, n);
  return s;
}

/// Σ|w| + Σ∫|density|.
inline double total_variation(const SignedMeasure& mu) {
  double s = 0.0;
  for (const auto& at : mu.atoms()) s += std::abs(at.weight);
  for (const auto& d : mu.density()) {
    const Polynomial local = d.polynomial().shifted(d.lo);
    const Polynomial anti = local.antiderivative();
    const double w = d.hi - d.lo;
    double prev = 0.0;
    for (const auto& r : real_roots(local, 0.0, w, 1e-12)) {
      if (!r.odd || r.x <= prev || r.x >= w) continue;
      s += std::abs(anti(r.x) - anti(prev));
      prev = r.x;
    }
    s += std::abs(anti(w) - anti(prev));
  }
  return s;
}

namespace detail {

inline std::vector<double> measure_grid(const SignedMeasure& mu) {
  std::vector<double> pts{mu.lower(), mu.upper()};
  for (const auto& at : mu.atoms()) pts.push_back(at.location);
  for (const auto& d : mu.density()) {
    pts.push_back(d.lo);
    pts.push_back(d.hi);
  }
  std::sort(pts.begin(), pts.end());
  const double snap = mu.merge_distance();
  std::vector<double> grid{mu.lower()};
  for (double x : pts) {
    if (x - grid.back() <= snap) continue;
    if (mu.upper() - x <= snap) break;
    grid.push_back(x);
  }
  grid.push_back(mu.upper());
  return grid;
}

inline const DensityPiece* density_covering(const SignedMeasure& mu, double x) {
  for (const auto& d : mu.density())
    if (d.lo <= x && x < d.hi) return &d;
  return nullptr;
}

}  // namespace detail

/// Distribution function F(x) = μ([a, x]).
///
/// Jumps sit exactly at atom locations; an atom at b shows up as the terminal
/// jump, an atom at a as the value F(a). The left limit at a is 0.
inline PiecewisePolynomial cdf(const SignedMeasure& mu) {
  const std::vector<double> grid = detail::measure_grid(mu);
  const double snap = mu.merge_distance();
  const auto atoms = mu.atoms();
  std::size_t next_atom = 0;
  double running = 0.0;
  std::vector<Polynomial> pieces;
  std::vector<bool> jumps(grid.size() - 2, false);
  for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
    while (next_atom < atoms.size() && atoms[next_atom].location <= grid[j] + snap) {
      running += atoms[next_atom].weight;
      if (j >= 1) jumps[j - 1] = true;
      ++next_atom;
    }
    Polynomial piece = Polynomial::constant(running);
    if (const DensityPiece* d = detail::density_covering(mu, 0.5 * (grid[j] + grid[j + 1])))
      piece += d->polynomial().shifted(grid[j]).antiderivative();
    running = piece(grid[j + 1] - grid[j]);
    pieces.push_back(std::move(piece));
  }
  double terminal = 0.0;
  for (; next_atom < atoms.size(); ++next_atom) terminal += atoms[next_atom].weight;
  return PiecewisePolynomial(PiecewisePolynomial::derived, grid, std::move(pieces), std::move(jumps),
                             terminal);
}

/// Image of μ under x -> scale x + shift.
inline SignedMeasure pushforward_affine(const SignedMeasure& mu, double scale, double shift) {
  if (scale == 0.0) throw Error(ErrorCode::ZeroScale, "affine pushforward needs a non-zero scale");
  auto map = [&](double x) { return scale * x + shift; };
  double a = map(mu.lower()), b = map(mu.upper());
  if (a > b) std::swap(a, b);
  std::vector<Atom> atoms;
  for (const auto& at : mu.atoms()) atoms.push_back({std::clamp(map(at.location), a, b), at.weight});
  std::vector<DensityPiece> pieces;
  for (const auto& d : mu.density()) {
    double lo = map(d.lo), hi = map(d.hi);
    if (lo > hi) std::swap(lo, hi);
    // ν has density p((y - shift) / scale) / |scale|.
    const Polynomial q =
        d.polynomial().shifted(-shift / scale).scaled_arg(1.0 / scale) * (1.0 / std::abs(scale));
    pieces.push_back({std::clamp(lo, a, b), std::clamp(hi, a, b),
                      std::vector<double>(q.coeffs().begin(), q.coeffs().end())});
  }
  return SignedMeasure(a, b, std::move(atoms), std::move(pieces));
}

/// c1 μ1 + c2 μ2 on a common support.
inline SignedMeasure combine(const SignedMeasure& m1, double c1, const SignedMeasure& m2, double c2) {
  const double tol = 1e-14 * std::max(1.0, m1.width());
  if (std::abs(m1.lower() - m2.lower()) > tol || std::abs(m1.upper() - m2.upper()) > tol)
    throw Error(ErrorCode::SupportMismatch, "measures live on different supports");
  std::vector<Atom> atoms;
  for (const auto& at : m1.atoms()) atoms.push_back({at.location, c1 * at.weight});
  for (const auto& at : m2.atoms()) atoms.push_back({at.location, c2 * at.weight});

  std::vector<double> cuts;
  for (const auto* m : {&m1, &m2})
    for (const auto& d : m->density()) {
      cuts.push_back(d.lo);
      cuts.push_back(d.hi);
    }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<DensityPiece> pieces;
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
    const double mid = 0.5 * (cuts[j] + cuts[j + 1]);
    Polynomial sum;
    if (const auto* d = detail::density_covering(m1, mid)) sum += d->polynomial() * c1;
    if (const auto* d = detail::density_covering(m2, mid)) sum += d->polynomial() * c2;
    if (!sum.is_zero())
      pieces.push_back({cuts[j], cuts[j + 1], std::vector<double>(sum.coeffs().begin(), sum.coeffs().end())});
  }
  return SignedMeasure(m1.lower(), m1.upper(), std::move(atoms), std::move(pieces));
}

inline SignedMeasure scaled(const SignedMeasure& mu, double c) {
  return combine(mu, c, SignedMeasure(mu.lower(), mu.upper()), 0.0);
}

}  // namespace cxorder

#endif  // CXORDER_MEASURE_HPP
