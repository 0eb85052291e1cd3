#ifndef CXORDER_POLYNOMIAL_HPP
#define CXORDER_POLYNOMIAL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace cxorder {

/// Dense real polynomial, coefficients in ascending degree.
///
/// Exact trailing zeros are trimmed, so degree() of the zero polynomial is -1.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }
  Polynomial(std::initializer_list<double> coeffs) : c_(coeffs) { trim(); }

  static Polynomial constant(double value) { return Polynomial({value}); }

  static Polynomial monomial(int k, double coeff = 1.0) {
    std::vector<double> c(static_cast<std::size_t>(k) + 1, 0.0);
    c.back() = coeff;
    return Polynomial(std::move(c));
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  std::span<const double> coeffs() const { return c_; }

  double coeff(int k) const {
    return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[static_cast<std::size_t>(k)] : 0.0;
  }

  double operator()(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<double> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
    return Polynomial(std::move(d));
  }

  /// Antiderivative vanishing at 0.
  Polynomial antiderivative() const {
    if (c_.empty()) return {};
    std::vector<double> a(c_.size() + 1, 0.0);
    for (std::size_t k = 0; k < c_.size(); ++k) a[k + 1] = c_[k] / static_cast<double>(k + 1);
    return Polynomial(std::move(a));
  }

  /// q(x) = p(x + h), by repeated synthetic division (Taylor shift).
  Polynomial shifted(double h) const {
    if (h == 0.0 || c_.size() <= 1) return *this;
    std::vector<double> a = c_;
    const std::size_t d = a.size() - 1;
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t j = d; j-- > k;) a[j] += h * a[j + 1];
    return Polynomial(std::move(a));
  }

  /// q(x) = p(s * x).
  Polynomial scaled_arg(double s) const {
    std::vector<double> a = c_;
    double f = 1.0;
    for (double& v : a) {
      v *= f;
      f *= s;
    }
    return Polynomial(std::move(a));
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }

  Polynomial& operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }

  Polynomial& operator*=(double s) {
    for (double& v : c_) v *= s;
    trim();
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<double> c(a.c_.size() + b.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(c));
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
  }

  std::vector<double> c_;
};

/// A real root with a flag telling whether the polynomial changes sign across it.
struct PolynomialRoot {
  double x;
  bool odd;
};

namespace detail {

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// Drops leading coefficients below rel * max|c|; the caller works on [0, 1]
// where this perturbs values by at most degree * rel.
inline Polynomial chop_leading(const Polynomial& p, double rel) {
  const double m = p.max_abs_coeff();
  if (m == 0.0) return {};
  std::vector<double> c(p.coeffs().begin(), p.coeffs().end());
  while (!c.empty() && std::abs(c.back()) <= rel * m) c.pop_back();
  return Polynomial(std::move(c));
}

inline Polynomial normalized(const Polynomial& p) {
  const double m = p.max_abs_coeff();
  return m == 0.0 ? Polynomial{} : p * (1.0 / m);
}

inline Polynomial remainder(const Polynomial& a, const Polynomial& b) {
  std::vector<double> r(a.coeffs().begin(), a.coeffs().end());
  const int db = b.degree();
  const double lead = b.coeff(db);
  for (int k = static_cast<int>(r.size()) - 1; k >= db; --k) {
    const double q = r[static_cast<std::size_t>(k)] / lead;
    for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(k - db + j)] -= q * b.coeff(j);
    r[static_cast<std::size_t>(k)] = 0.0;
  }
  r.resize(static_cast<std::size_t>(std::max(db, 0)));
  return Polynomial(std::move(r));
}

// Sturm chain of a polynomial already normalised to the unit interval.
inline std::vector<Polynomial> sturm_chain(const Polynomial& q) {
  constexpr double kChop = 1e-14;
  constexpr double kZeroRemainder = 1e-13;
  std::vector<Polynomial> chain;
  chain.push_back(normalized(chop_leading(q, kChop)));
  if (chain.back().degree() < 1) return chain;
  chain.push_back(normalized(chop_leading(chain.back().derivative(), kChop)));
  while (chain.back().degree() >= 1) {
    const Polynomial& a = chain[chain.size() - 2];
    const Polynomial& b = chain.back();
    Polynomial r = remainder(a, b);
    if (r.max_abs_coeff() <= kZeroRemainder) break;
    chain.push_back(normalized(chop_leading(r * -1.0, kChop)));
  }
  return chain;
}

inline int sign_variations(const std::vector<Polynomial>& chain, double x) {
  int variations = 0;
  int last = 0;
  for (const auto& p : chain) {
    const int s = sign_of(p(x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++variations;
    last = s;
  }
  return variations;
}

// Parity of an exact zero at x from the order of the first non-vanishing derivative.
inline bool odd_multiplicity_at(const Polynomial& q, double x) {
  Polynomial d = q;
  for (int order = 0; order <= q.degree(); ++order) {
    if (std::abs(d(x)) > 1e-13) return order % 2 == 1;
    d = d.derivative();
  }
  return false;
}

inline double bisect_sign_change(const Polynomial& q, double l, double r) {
  double ql = q(l);
  for (int it = 0; it < 60; ++it) {
    const double m = 0.5 * (l + r);
    if (m <= l || m >= r) break;
    const double qm = q(m);
    if (qm == 0.0) return m;
    if (sign_of(qm) == sign_of(ql)) {
      l = m;
      ql = qm;
    } else {
      r = m;
    }
  }
  double x = 0.5 * (l + r);
  const Polynomial dq = q.derivative();
  for (int it = 0; it < 3; ++it) {
    const double d = dq(x);
    if (d == 0.0) break;
    const double xn = x - q(x) / d;
    if (xn < l || xn > r || std::abs(q(xn)) > std::abs(q(x))) break;
    x = xn;
  }
  return x;
}

}  // namespace detail

/// Number of distinct real roots of p in (lo, hi].
inline int sturm_count(const Polynomial& p, double lo, double hi) {
  if (p.is_zero() || !(hi > lo)) return 0;
  const Polynomial q = p.shifted(lo).scaled_arg(hi - lo);
  const auto chain = detail::sturm_chain(q);
  return std::max(0, detail::sign_variations(chain, 0.0) - detail::sign_variations(chain, 1.0));
}

/// Distinct real roots of p in [lo, hi], isolated by Sturm counting and refined
/// by bisection with Newton polishing.
///
/// Work happens on q(s) = p(lo + s (hi - lo)) scaled to unit max coefficient.
/// Touching (even) roots are kept only when |q| there is at most `tol`.
inline std::vector<PolynomialRoot> real_roots(const Polynomial& p, double lo, double hi,
                                              double tol = 1e-9) {
  std::vector<PolynomialRoot> out;
  if (p.degree() < 1 || !(hi > lo)) return out;
  const double width = hi - lo;
  const Polynomial q = detail::normalized(p.shifted(lo).scaled_arg(width));
  const auto chain = detail::sturm_chain(q);
  if (chain.front().degree() < 1) return out;

  constexpr double kExtend = 1e-9;
  constexpr double kMinWidth = 1e-10;

  struct Span {
    double l, r;
    int vl, vr;
  };
  std::vector<Span> isolated;
  std::vector<Span> stack{{-kExtend, 1.0 + kExtend, detail::sign_variations(chain, -kExtend),
                           detail::sign_variations(chain, 1.0 + kExtend)}};
  while (!stack.empty()) {
    const Span s = stack.back();
    stack.pop_back();
    const int count = s.vl - s.vr;
    if (count <= 0) continue;
    if (count == 1 || s.r - s.l < kMinWidth) {
      isolated.push_back(s);
      continue;
    }
    const double m = 0.5 * (s.l + s.r);
    const int vm = detail::sign_variations(chain, m);
    stack.push_back({m, s.r, vm, s.vr});
    stack.push_back({s.l, m, s.vl, vm});
  }

  const Polynomial dq = q.derivative();
  for (const Span& s : isolated) {
    const double ql = q(s.l);
    const double qr = q(s.r);
    PolynomialRoot root{};
    if (qr == 0.0) {
      root = {s.r, detail::odd_multiplicity_at(q, s.r)};
    } else if (ql == 0.0) {
      // Belongs to the neighbouring span (counts are over half-open (l, r]).
      continue;
    } else if (detail::sign_of(ql) != detail::sign_of(qr)) {
      root = {detail::bisect_sign_change(q, s.l, s.r), true};
    } else {
      // An even root sits at a critical point of q.
      double x = std::abs(ql) < std::abs(qr) ? s.l : s.r;
      for (const auto& c : real_roots(dq, s.l, s.r, INFINITY))
        if (std::abs(q(c.x)) < std::abs(q(x))) x = c.x;
      if (std::abs(q(x)) > tol) continue;
      root = {x, false};
    }
    root.x = std::clamp(root.x, 0.0, 1.0);
    out.push_back(root);
  }
  std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.x < b.x; });
  std::vector<PolynomialRoot> merged;
  for (const auto& r : out) {
    if (!merged.empty() && r.x - merged.back().x < kMinWidth) continue;
    merged.push_back(r);
  }
  for (auto& r : merged) r.x = lo + r.x * width;
  return merged;
}

/// Abscissae in [lo, hi] where p' vanishes.
inline std::vector<double> critical_points(const Polynomial& p, double lo, double hi) {
  std::vector<double> xs;
  for (const auto& r : real_roots(p.derivative(), lo, hi, 1e-9)) xs.push_back(r.x);
  return xs;
}

}  // namespace cxorder

#endif  // CXORDER_POLYNOMIAL_HPP
