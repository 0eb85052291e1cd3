#ifndef CXORDER_PIECEWISE_POLYNOMIAL_HPP
#define CXORDER_PIECEWISE_POLYNOMIAL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cxorder/error.hpp"
#include "cxorder/polynomial.hpp"

namespace cxorder {

/// Piecewise polynomial on [b_0, b_M] with explicit jump semantics.
///
/// Piece i lives on [b_i, b_{i+1}) and is stored in the local variable
/// u = x - b_i. Evaluation is right-continuous at interior breakpoints. The
/// value at b_M is the left limit of the last piece plus `terminal_jump`, which
/// lets a distribution function carry an atom sitting on the right end of the
/// support.
class PiecewisePolynomial {
 public:
  static constexpr int kMaxDegree = 17;

  PiecewisePolynomial(std::vector<double> breakpoints, std::vector<Polynomial> pieces,
                      std::vector<bool> jumps = {}, double terminal_jump = 0.0)
      : bp_(std::move(breakpoints)),
        pieces_(std::move(pieces)),
        jumps_(std::move(jumps)),
        terminal_jump_(terminal_jump) {
    validate(true);
  }

  /// Tag for results derived by this library, whose continuity flags come from
  /// construction rather than from comparing one-sided values.
  struct derived_t {};
  static constexpr derived_t derived{};

  PiecewisePolynomial(derived_t, std::vector<double> breakpoints, std::vector<Polynomial> pieces,
                      std::vector<bool> jumps = {}, double terminal_jump = 0.0)
      : bp_(std::move(breakpoints)),
        pieces_(std::move(pieces)),
        jumps_(std::move(jumps)),
        terminal_jump_(terminal_jump) {
    validate(false);
  }

  static PiecewisePolynomial zero(double a, double b) {
    return PiecewisePolynomial({a, b}, {Polynomial{}});
  }

  /// Builds from pieces written in the global variable x rather than x - b_i.
  static PiecewisePolynomial from_global(std::vector<double> breakpoints,
                                         const std::vector<Polynomial>& global_pieces,
                                         std::vector<bool> jumps = {}) {
    std::vector<Polynomial> local;
    local.reserve(global_pieces.size());
    for (std::size_t i = 0; i < global_pieces.size() && i < breakpoints.size(); ++i)
      local.push_back(global_pieces[i].shifted(breakpoints[i]));
    return PiecewisePolynomial(std::move(breakpoints), std::move(local), std::move(jumps));
  }

  double lower() const { return bp_.front(); }
  double upper() const { return bp_.back(); }
  std::span<const double> breakpoints() const { return bp_; }
  std::size_t piece_count() const { return pieces_.size(); }
  const Polynomial& piece(std::size_t i) const { return pieces_[i]; }
  double piece_width(std::size_t i) const { return bp_[i + 1] - bp_[i]; }
  double terminal_jump() const { return terminal_jump_; }

  /// Jump flag of interior breakpoint i (1 <= i < M).
  bool jump_at(std::size_t i) const { return i >= 1 && i < bp_.size() - 1 && jumps_[i - 1]; }

  bool is_continuous() const {
    return terminal_jump_ == 0.0 && std::none_of(jumps_.begin(), jumps_.end(), [](bool j) { return j; });
  }

  int max_degree() const {
    int d = 0;
    for (const auto& p : pieces_) d = std::max(d, p.degree());
    return d;
  }

  /// Index of the piece owning x under the right-continuous convention.
  std::size_t locate(double x) const {
    auto it = std::upper_bound(bp_.begin(), bp_.end(), x);
    std::size_t i = it == bp_.begin() ? 0 : static_cast<std::size_t>(it - bp_.begin()) - 1;
    return std::min(i, pieces_.size() - 1);
  }

  /// Bound on |p| over piece i from its coefficients.
  double piece_bound(std::size_t i) const {
    const double w = piece_width(i);
    double s = 0.0, f = 1.0;
    for (double c : pieces_[i].coeffs()) {
      s += std::abs(c) * f;
      f *= w;
    }
    return s;
  }

 private:
  void validate(bool check_continuity) {
    if (bp_.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two breakpoints");
    for (std::size_t i = 0; i + 1 < bp_.size(); ++i)
      if (!(bp_[i] < bp_[i + 1]) || !std::isfinite(bp_[i]) || !std::isfinite(bp_[i + 1]))
        throw Error(ErrorCode::InvalidArgument, "breakpoints must be finite and strictly increasing");
    if (pieces_.size() != bp_.size() - 1)
      throw Error(ErrorCode::InvalidArgument, "piece count must equal breakpoint count minus one");
    if (jumps_.empty()) jumps_.assign(bp_.size() - 2, false);
    if (jumps_.size() != bp_.size() - 2)
      throw Error(ErrorCode::InvalidArgument, "one jump flag per interior breakpoint");
    for (const auto& p : pieces_)
      if (p.degree() > kMaxDegree)
        throw Error(ErrorCode::DegreeOverflow,
                    "piece degree " + std::to_string(p.degree()) + " exceeds cap " +
                        std::to_string(kMaxDegree));
    if (!check_continuity) return;
    double scale = 0.0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) scale = std::max(scale, piece_bound(i));
    for (std::size_t i = 1; i + 1 < bp_.size(); ++i) {
      if (jumps_[i - 1]) continue;
      const double left = pieces_[i - 1](piece_width(i - 1));
      const double right = pieces_[i](0.0);
      if (std::abs(left - right) > 1e-12 * scale)
        throw Error(ErrorCode::InvalidArgument,
                    "breakpoint marked continuous but values differ at x = " + std::to_string(bp_[i]));
    }
  }

  std::vector<double> bp_;
  std::vector<Polynomial> pieces_;
  std::vector<bool> jumps_;
  double terminal_jump_;
};

inline double evaluate(const PiecewisePolynomial& p, double x) {
  if (!(x >= p.lower() && x <= p.upper()))
    throw Error(ErrorCode::OutOfDomain, "x = " + std::to_string(x) + " outside [" +
                                            std::to_string(p.lower()) + ", " +
                                            std::to_string(p.upper()) + "]");
  const std::size_t i = p.locate(x);
  const double v = p.piece(i)(x - p.breakpoints()[i]);
  return x == p.upper() ? v + p.terminal_jump() : v;
}

/// Left limit at x; at the left end of the domain this is the value there.
inline double evaluate_left_limit(const PiecewisePolynomial& p, double x) {
  if (!(x >= p.lower() && x <= p.upper()))
    throw Error(ErrorCode::OutOfDomain, "x = " + std::to_string(x) + " outside domain");
  const auto bp = p.breakpoints();
  auto it = std::lower_bound(bp.begin(), bp.end(), x);
  std::size_t i = it == bp.begin() ? 0 : static_cast<std::size_t>(it - bp.begin()) - 1;
  i = std::min(i, p.piece_count() - 1);
  return p.piece(i)(x - bp[i]);
}

/// P with P(base) = 0 and P' = p on piece interiors; requires base = b_0.
inline PiecewisePolynomial antiderivative(const PiecewisePolynomial& p, double base) {
  if (base != p.lower())
    throw Error(ErrorCode::InvalidArgument, "antiderivative base must be the left breakpoint");
  std::vector<Polynomial> out;
  out.reserve(p.piece_count());
  double carry = 0.0;
  for (std::size_t i = 0; i < p.piece_count(); ++i) {
    Polynomial a = p.piece(i).antiderivative() + Polynomial::constant(carry);
    if (a.degree() > PiecewisePolynomial::kMaxDegree)
      throw Error(ErrorCode::DegreeOverflow, "antiderivative exceeds the degree cap");
    carry = a(p.piece_width(i));
    out.push_back(std::move(a));
  }
  std::vector<double> bp(p.breakpoints().begin(), p.breakpoints().end());
  return PiecewisePolynomial(PiecewisePolynomial::derived, std::move(bp), std::move(out));
}

/// Piecewise derivative of a continuous p. Breakpoints where the derivative's
/// one-sided values disagree beyond roundoff are flagged as jumps.
inline PiecewisePolynomial differentiate(const PiecewisePolynomial& p) {
  if (!p.is_continuous())
    throw Error(ErrorCode::JumpDifferentiation, "cannot differentiate across a jump");
  std::vector<Polynomial> out;
  out.reserve(p.piece_count());
  for (std::size_t i = 0; i < p.piece_count(); ++i) out.push_back(p.piece(i).derivative());
  std::vector<bool> jumps(p.piece_count() - 1, false);
  double scale = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double w = p.piece_width(i);
    double s = 0.0, f = 1.0;
    for (double c : out[i].coeffs()) {
      s += std::abs(c) * f;
      f *= w;
    }
    scale = std::max(scale, s);
  }
  for (std::size_t i = 1; i < out.size(); ++i) {
    const double left = out[i - 1](p.piece_width(i - 1));
    const double right = out[i](0.0);
    jumps[i - 1] = std::abs(left - right) > 1e-8 * scale;
  }
  std::vector<double> bp(p.breakpoints().begin(), p.breakpoints().end());
  return PiecewisePolynomial(PiecewisePolynomial::derived, std::move(bp), std::move(out),
                             std::move(jumps));
}

namespace detail {

inline bool same_support(const PiecewisePolynomial& p, const PiecewisePolynomial& q) {
  const double tol = 1e-14 * std::max(1.0, p.upper() - p.lower());
  return std::abs(p.lower() - q.lower()) <= tol && std::abs(p.upper() - q.upper()) <= tol;
}

// Union of both grids with breakpoints closer than 1e-14 (b - a) snapped together.
inline std::vector<double> merged_grid(const PiecewisePolynomial& p, const PiecewisePolynomial& q) {
  std::vector<double> all(p.breakpoints().begin(), p.breakpoints().end());
  all.insert(all.end(), q.breakpoints().begin(), q.breakpoints().end());
  std::sort(all.begin(), all.end());
  const double a = p.lower(), b = p.upper();
  const double snap = 1e-14 * (b - a);
  std::vector<double> grid{a};
  for (double x : all) {
    if (x - grid.back() <= snap) continue;
    if (b - x <= snap) break;
    grid.push_back(x);
  }
  grid.push_back(b);
  return grid;
}

inline std::size_t nearest_index(const std::vector<double>& grid, double x) {
  auto it = std::lower_bound(grid.begin(), grid.end(), x);
  if (it == grid.end()) return grid.size() - 1;
  if (it == grid.begin()) return 0;
  const std::size_t hi = static_cast<std::size_t>(it - grid.begin());
  return (x - grid[hi - 1] <= grid[hi] - x) ? hi - 1 : hi;
}

}  // namespace detail

inline PiecewisePolynomial scale(const PiecewisePolynomial& p, double c) {
  std::vector<Polynomial> out;
  out.reserve(p.piece_count());
  for (std::size_t i = 0; i < p.piece_count(); ++i) out.push_back(p.piece(i) * c);
  std::vector<bool> jumps(p.piece_count() - 1);
  for (std::size_t i = 1; i < p.piece_count(); ++i) jumps[i - 1] = c != 0.0 && p.jump_at(i);
  std::vector<double> bp(p.breakpoints().begin(), p.breakpoints().end());
  return PiecewisePolynomial(PiecewisePolynomial::derived, std::move(bp), std::move(out),
                             std::move(jumps), c * p.terminal_jump());
}

inline PiecewisePolynomial add(const PiecewisePolynomial& p, const PiecewisePolynomial& q) {
  if (!detail::same_support(p, q))
    throw Error(ErrorCode::SupportMismatch, "piecewise polynomials live on different supports");
  const std::vector<double> grid = detail::merged_grid(p, q);
  std::vector<Polynomial> out;
  out.reserve(grid.size() - 1);
  for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
    const double mid = 0.5 * (grid[j] + grid[j + 1]);
    const std::size_t ip = p.locate(mid), iq = q.locate(mid);
    out.push_back(p.piece(ip).shifted(grid[j] - p.breakpoints()[ip]) +
                  q.piece(iq).shifted(grid[j] - q.breakpoints()[iq]));
  }
  std::vector<bool> jumps(grid.size() - 2, false);
  for (const auto* src : {&p, &q}) {
    for (std::size_t i = 1; i + 1 < src->breakpoints().size(); ++i) {
      if (!src->jump_at(i)) continue;
      const std::size_t g = detail::nearest_index(grid, src->breakpoints()[i]);
      if (g >= 1 && g + 1 < grid.size()) jumps[g - 1] = true;
    }
  }
  return PiecewisePolynomial(PiecewisePolynomial::derived, grid, std::move(out), std::move(jumps),
                             p.terminal_jump() + q.terminal_jump());
}

inline PiecewisePolynomial operator+(const PiecewisePolynomial& p, const PiecewisePolynomial& q) {
  return add(p, q);
}
inline PiecewisePolynomial operator-(const PiecewisePolynomial& p, const PiecewisePolynomial& q) {
  return add(p, scale(q, -1.0));
}
inline PiecewisePolynomial operator*(double c, const PiecewisePolynomial& p) { return scale(p, c); }

struct Extremum {
  double x;
  double value;
};

namespace detail {

// Largest |q| on [u0, u1] together with the abscissa where it occurs.
inline Extremum peak_abs(const Polynomial& q, double u0, double u1) {
  Extremum best{u0, std::abs(q(u0))};
  auto consider = [&](double u) {
    const double v = std::abs(q(u));
    if (v > best.value) best = {u, v};
  };
  consider(u1);
  consider(0.5 * (u0 + u1));
  if (q.degree() >= 2 && u1 > u0)
    for (double u : critical_points(q, u0, u1)) consider(u);
  return best;
}

}  // namespace detail

/// Sup of |p| over its domain, from breakpoints and critical points.
inline double sup_norm(const PiecewisePolynomial& p) {
  double s = std::abs(evaluate(p, p.upper()));
  for (std::size_t i = 0; i < p.piece_count(); ++i)
    s = std::max(s, detail::peak_abs(p.piece(i), 0.0, p.piece_width(i)).value);
  return s;
}

inline double default_scale(const PiecewisePolynomial& p) { return std::max(1.0, sup_norm(p)); }

/// A maximal stretch on which p keeps one sign; sign 0 marks a stretch where
/// |p| never exceeds the zero threshold.
struct SignSegment {
  double lo;
  double hi;
  int sign;
};

/// Splits the domain into single-signed stretches, cutting each piece at its
/// real roots. A stretch whose peak |p| is at most `threshold` gets sign 0.
inline std::vector<SignSegment> sign_segments(const PiecewisePolynomial& p, double threshold) {
  std::vector<SignSegment> segs;
  const auto bp = p.breakpoints();
  for (std::size_t i = 0; i < p.piece_count(); ++i) {
    const Polynomial& q = p.piece(i);
    const double w = p.piece_width(i);
    if (detail::peak_abs(q, 0.0, w).value <= threshold) {
      segs.push_back({bp[i], bp[i + 1], 0});
      continue;
    }
    std::vector<double> cuts{0.0};
    for (const auto& r : real_roots(q, 0.0, w, 1e-9))
      if (r.x > cuts.back() && r.x < w) cuts.push_back(r.x);
    cuts.push_back(w);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const Extremum e = detail::peak_abs(q, cuts[k], cuts[k + 1]);
      const int s = e.value <= threshold ? 0 : detail::sign_of(q(e.x));
      const double lo = k == 0 ? bp[i] : bp[i] + cuts[k];
      const double hi = k + 2 == cuts.size() ? bp[i + 1] : bp[i] + cuts[k + 1];
      segs.push_back({lo, hi, s});
    }
  }
  if (p.terminal_jump() != 0.0) {
    const double v = evaluate(p, p.upper());
    segs.push_back({p.upper(), p.upper(), std::abs(v) <= threshold ? 0 : detail::sign_of(v)});
  }
  return segs;
}

/// Strict sign alternations of a function, zero stretches discarded.
struct SignChangeCatalogue {
  std::vector<double> points;
  int initial_sign = 0;

  int count() const { return static_cast<int>(points.size()); }
};

/// Sign-change catalogue with threshold tol * scale. The default scale is
/// max(1, sup |p|). A change across a zero stretch is placed at the midpoint of
/// the gap between the two signed stretches.
inline SignChangeCatalogue sign_changes(const PiecewisePolynomial& p, double tol,
                                        std::optional<double> scale = std::nullopt) {
  const double threshold = tol * scale.value_or(default_scale(p));
  SignChangeCatalogue cat;
  const SignSegment* prev = nullptr;
  const auto segs = sign_segments(p, threshold);
  for (const auto& s : segs) {
    if (s.sign == 0) continue;
    if (prev == nullptr) {
      cat.initial_sign = s.sign;
    } else if (s.sign != prev->sign) {
      cat.points.push_back(prev->hi == s.lo ? s.lo : 0.5 * (prev->hi + s.lo));
    }
    prev = &s;
  }
  return cat;
}

/// Real roots of p inside [lo, hi] with sign-flip parity. Pieces that are zero
/// to within tol * max(1, sup |p|) are skipped.
inline std::vector<PolynomialRoot> real_roots_on(const PiecewisePolynomial& p, double lo, double hi,
                                                 double tol = 1e-9) {
  lo = std::max(lo, p.lower());
  hi = std::min(hi, p.upper());
  std::vector<PolynomialRoot> roots;
  if (!(hi > lo)) return roots;
  const double threshold = tol * default_scale(p);
  const auto bp = p.breakpoints();
  for (std::size_t i = 0; i < p.piece_count(); ++i) {
    const double u0 = std::max(0.0, lo - bp[i]);
    const double u1 = std::min(p.piece_width(i), hi - bp[i]);
    if (!(u1 > u0)) continue;
    if (detail::peak_abs(p.piece(i), 0.0, p.piece_width(i)).value <= threshold) continue;
    for (const auto& r : real_roots(p.piece(i), u0, u1, tol)) roots.push_back({bp[i] + r.x, r.odd});
  }
  std::sort(roots.begin(), roots.end(), [](auto& a, auto& b) { return a.x < b.x; });
  const double merge = 1e-10 * (hi - lo);
  std::vector<PolynomialRoot> merged;
  for (const auto& r : roots)
    if (merged.empty() || r.x - merged.back().x > merge) merged.push_back(r);

  // Parity from the signs just inside the neighbouring root-free stretches.
  for (std::size_t j = 0; j < merged.size(); ++j) {
    const double x = merged[j].x;
    if (x - lo <= merge || hi - x <= merge) {
      merged[j].odd = false;
      continue;
    }
    double left = j > 0 ? merged[j - 1].x : lo;
    double right = j + 1 < merged.size() ? merged[j + 1].x : hi;
    for (double b : bp) {
      if (b < x - merge) left = std::max(left, b);
      if (b > x + merge) right = std::min(right, b);
    }
    const int sl = detail::sign_of(evaluate(p, 0.5 * (left + x)));
    const int sr = detail::sign_of(evaluate(p, 0.5 * (x + right)));
    merged[j].odd = sl * sr < 0;
  }
  return merged;
}

/// Exact minimum over [lo, hi] of a continuous p: endpoints, breakpoints and
/// critical points are all examined.
inline Extremum global_min(const PiecewisePolynomial& p, double lo, double hi) {
  if (!p.is_continuous())
    throw Error(ErrorCode::JumpDifferentiation, "global_min needs a continuous function");
  if (!(lo >= p.lower() && hi <= p.upper() && lo <= hi))
    throw Error(ErrorCode::OutOfDomain, "global_min range outside the domain");
  Extremum best{lo, evaluate(p, lo)};
  auto consider = [&](double x, double v) {
    if (v < best.value) best = {x, v};
  };
  consider(hi, evaluate(p, hi));
  const auto bp = p.breakpoints();
  for (std::size_t i = 0; i < p.piece_count(); ++i) {
    const double u0 = std::max(0.0, lo - bp[i]);
    const double u1 = std::min(p.piece_width(i), hi - bp[i]);
    if (u1 < u0) continue;
    const Polynomial& q = p.piece(i);
    consider(bp[i] + u0, q(u0));
    consider(bp[i] + u1, q(u1));
    if (q.degree() >= 2 && u1 > u0)
      for (double u : critical_points(q, u0, u1)) consider(bp[i] + u, q(u));
  }
  return best;
}

inline Extremum global_max(const PiecewisePolynomial& p, double lo, double hi) {
  const Extremum e = global_min(scale(p, -1.0), lo, hi);
  return {e.x, -e.value};
}

/// Integral of p over [lo, hi].
inline double integrate(const PiecewisePolynomial& p, double lo, double hi) {
  double total = 0.0;
  const auto bp = p.breakpoints();
  for (std::size_t i = 0; i < p.piece_count(); ++i) {
    const double u0 = std::max(0.0, lo - bp[i]);
    const double u1 = std::min(p.piece_width(i), hi - bp[i]);
    if (!(u1 > u0)) continue;
    const Polynomial a = p.piece(i).antiderivative();
    total += a(u1) - a(u0);
  }
  return total;
}

/// Integral of |p| over [lo, hi], splitting each piece at its real roots.
inline double integrate_abs(const PiecewisePolynomial& p, double lo, double hi) {
  double total = 0.0;
  const auto bp = p.breakpoints();
  for (std::size_t i = 0; i < p.piece_count(); ++i) {
    const double u0 = std::max(0.0, lo - bp[i]);
    const double u1 = std::min(p.piece_width(i), hi - bp[i]);
    if (!(u1 > u0)) continue;
    const Polynomial& q = p.piece(i);
    const Polynomial a = q.antiderivative();
    std::vector<double> cuts{u0};
    for (const auto& r : real_roots(q, u0, u1, 1e-9))
      if (r.odd && r.x > cuts.back() && r.x < u1) cuts.push_back(r.x);
    cuts.push_back(u1);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) total += std::abs(a(cuts[k + 1]) - a(cuts[k]));
  }
  return total;
}

/// Sign-change catalogue that also discards lobes of negligible area.
///
/// A lobe is a maximal run of equally signed stretches. Lobes with
/// |∫ p| <= area_threshold are dropped one at a time, smallest first, and the
/// neighbours are merged when they share a sign. This keeps slivers that are
/// invisible in the antiderivative from counting as crossings.
inline SignChangeCatalogue sign_changes_by_area(const PiecewisePolynomial& p, double threshold,
                                                double area_threshold) {
  struct Lobe {
    double lo, hi;
    int sign;
    double area;
  };
  std::vector<Lobe> lobes;
  for (const auto& s : sign_segments(p, threshold)) {
    if (s.sign == 0) continue;
    const double area = integrate(p, s.lo, s.hi);
    if (!lobes.empty() && lobes.back().sign == s.sign) {
      lobes.back().hi = s.hi;
      lobes.back().area += area;
    } else {
      lobes.push_back({s.lo, s.hi, s.sign, area});
    }
  }
  for (;;) {
    std::size_t drop = lobes.size();
    for (std::size_t i = 0; i < lobes.size(); ++i)
      if (std::abs(lobes[i].area) <= area_threshold &&
          (drop == lobes.size() || std::abs(lobes[i].area) < std::abs(lobes[drop].area)))
        drop = i;
    if (drop == lobes.size() || lobes.size() == 1) break;
    lobes.erase(lobes.begin() + static_cast<std::ptrdiff_t>(drop));
    if (drop > 0 && drop < lobes.size() && lobes[drop - 1].sign == lobes[drop].sign) {
      lobes[drop - 1].hi = lobes[drop].hi;
      lobes[drop - 1].area += lobes[drop].area;
      lobes.erase(lobes.begin() + static_cast<std::ptrdiff_t>(drop));
    }
  }
  SignChangeCatalogue cat;
  if (lobes.empty()) return cat;
  cat.initial_sign = lobes.front().sign;
  for (std::size_t i = 1; i < lobes.size(); ++i)
    cat.points.push_back(lobes[i - 1].hi == lobes[i].lo ? lobes[i].lo : 0.5 * (lobes[i - 1].hi + lobes[i].lo));
  return cat;
}

}  // namespace cxorder

#endif  // CXORDER_PIECEWISE_POLYNOMIAL_HPP
