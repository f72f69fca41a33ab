#pragma once

#include <gmpxx.h>

#include <cassert>
#include <cstdint>
#include <string>
#include <vector>

#include "schottky/errors.hpp"
#include "schottky/value_element.hpp"

namespace schottky {

// Element of the prime field F_p; each value carries its modulus so mixed
// arithmetic can be asserted away.
struct Fp {
  long p = 0;
  long v = 0;  // normalized to [0, p)

  Fp() = default;
  Fp(long p_, long v_) : p(p_), v(((v_ % p_) + p_) % p_) {}

  bool is_zero() const { return v == 0; }
  Fp operator+(const Fp& o) const { assert(p == o.p); return Fp(p, v + o.v); }
  Fp operator-(const Fp& o) const { assert(p == o.p); return Fp(p, v - o.v); }
  Fp operator-() const { return Fp(p, -v); }
  Fp operator*(const Fp& o) const {
    assert(p == o.p);
    return Fp(p, static_cast<long>((static_cast<__int128>(v) * o.v) % p));
  }
  Fp inverse() const;
  Fp operator/(const Fp& o) const { return *this * o.inverse(); }
  bool operator==(const Fp& o) const { return p == o.p && v == o.v; }
};

inline bool coeff_is_zero(const Rational& c) { return c == 0; }
inline bool coeff_is_zero(const Fp& c) { return c.is_zero(); }
inline Rational coeff_zero_like(const Rational&) { return Rational(0); }
inline Fp coeff_zero_like(const Fp& c) { return Fp(c.p, 0); }
inline Rational coeff_one_like(const Rational&) { return Rational(1); }
inline Fp coeff_one_like(const Fp& c) { return Fp(c.p, 1); }

std::string coeff_to_string(const Rational& c);
std::string coeff_to_string(const Fp& c);
inline bool coeff_is_one(const Rational& c) { return c == 1; }
inline bool coeff_is_one(const Fp& c) { return c.v == 1; }
inline bool coeff_is_minus_one(const Rational& c) { return c == -1; }
inline bool coeff_is_minus_one(const Fp& c) { return c.v == c.p - 1 && c.p != 2; }

/**
 * Dense univariate polynomial in t over a field of coefficients. The
 * coefficient vector never has trailing zeros; the zero polynomial is the
 * empty vector. A non-empty polynomial keeps at least one coefficient around
 * so constants (zero/one of the coefficient field) can be rebuilt from it;
 * the zero polynomial of F_p therefore stores its sample separately.
 */
template <class C>
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<C> coeffs) : c_(std::move(coeffs)) { trim(); }
  static Poly constant(const C& c) { return Poly(std::vector<C>{c}); }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  // Index of the lowest nonzero coefficient; only valid on nonzero input.
  int ord() const {
    for (size_t i = 0; i < c_.size(); ++i)
      if (!coeff_is_zero(c_[i])) return static_cast<int>(i);
    assert(false);
    return 0;
  }
  const std::vector<C>& coeffs() const { return c_; }
  C coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(c_.size())) return zero_coeff();
    return c_[k];
  }
  C leading() const { assert(!is_zero()); return c_.back(); }
  C trailing() const { return c_[ord()]; }

  C zero_coeff() const {
    return c_.empty() ? C() : coeff_zero_like(c_[0]);
  }

  Poly operator+(const Poly& o) const {
    std::vector<C> r(std::max(c_.size(), o.c_.size()), pick_zero(o));
    for (size_t i = 0; i < r.size(); ++i) {
      if (i < c_.size()) r[i] = r[i] + c_[i];
      if (i < o.c_.size()) r[i] = r[i] + o.c_[i];
    }
    return Poly(std::move(r));
  }
  Poly operator-() const {
    std::vector<C> r = c_;
    for (auto& x : r) x = -x;
    return Poly(std::move(r));
  }
  Poly operator-(const Poly& o) const { return *this + (-o); }
  Poly operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return Poly(std::vector<C>{});
    std::vector<C> r(c_.size() + o.c_.size() - 1, coeff_zero_like(c_[0]));
    for (size_t i = 0; i < c_.size(); ++i)
      for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] = r[i + j] + c_[i] * o.c_[j];
    return Poly(std::move(r));
  }
  Poly scaled(const C& s) const {
    std::vector<C> r = c_;
    for (auto& x : r) x = x * s;
    return Poly(std::move(r));
  }
  Poly shifted(int k) const {  // multiply by t^k, k >= 0
    if (is_zero()) return *this;
    std::vector<C> r(c_.size() + k, coeff_zero_like(c_[0]));
    for (size_t i = 0; i < c_.size(); ++i) r[i + k] = c_[i];
    return Poly(std::move(r));
  }

  // Euclidean division by a nonzero divisor; returns {quotient, remainder}.
  std::pair<Poly, Poly> divmod(const Poly& d) const {
    assert(!d.is_zero());
    Poly q(std::vector<C>{}), r = *this;
    C inv_lead = coeff_one_like(d.leading()) / d.leading();
    while (!r.is_zero() && r.degree() >= d.degree()) {
      int k = r.degree() - d.degree();
      C f = r.leading() * inv_lead;
      Poly term = Poly::constant(f).shifted(k);
      q = q + term;
      r = r - d * term;
    }
    return {q, r};
  }

  Poly monic() const {
    assert(!is_zero());
    return scaled(coeff_one_like(leading()) / leading());
  }

  bool operator==(const Poly& o) const {
    if (c_.size() != o.c_.size()) return false;
    for (size_t i = 0; i < c_.size(); ++i)
      if (!(c_[i] == o.c_[i])) return false;
    return true;
  }

  C eval(const C& x) const {
    if (is_zero()) return C();
    C acc = coeff_zero_like(c_[0]);
    for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

 private:
  C pick_zero(const Poly& o) const {
    if (!c_.empty()) return coeff_zero_like(c_[0]);
    if (!o.c_.empty()) return coeff_zero_like(o.c_[0]);
    return C();
  }
  void trim() {
    while (!c_.empty() && coeff_is_zero(c_.back())) c_.pop_back();
  }
  std::vector<C> c_;
};

template <class C>
Poly<C> poly_gcd(Poly<C> a, Poly<C> b) {
  while (!b.is_zero()) {
    auto [q, r] = a.divmod(b);
    a = b;
    b = r;
  }
  if (a.is_zero()) return a;
  return a.monic();
}

/**
 * Rational function num/den in t, kept reduced with a monic denominator.
 * This is the element type for the t-adic function-field instances and the
 * coefficient-of-t view used by the composite rank-2 valuation.
 */
template <class C>
class RatFunc {
 public:
  RatFunc() = default;
  RatFunc(Poly<C> num, Poly<C> den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw Error(ErrorKind::InvalidArgument, "zero denominator");
    reduce();
  }
  static RatFunc from_poly(Poly<C> p) {
    if (p.is_zero()) return RatFunc();
    Poly<C> one = Poly<C>::constant(coeff_one_like(p.coeffs()[0]));
    return RatFunc(std::move(p), std::move(one));
  }

  bool is_zero() const { return num_.is_zero(); }
  const Poly<C>& num() const { return num_; }
  const Poly<C>& den() const { return den_; }

  RatFunc operator+(const RatFunc& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }
  RatFunc operator-() const {
    RatFunc r = *this;
    r.num_ = -r.num_;
    return r;
  }
  RatFunc operator-(const RatFunc& o) const { return *this + (-o); }
  RatFunc operator*(const RatFunc& o) const {
    if (is_zero() || o.is_zero()) return zero_like(*this, o);
    return RatFunc(num_ * o.num_, den_ * o.den_);
  }
  RatFunc inverse() const {
    if (is_zero()) throw Error(ErrorKind::InvalidArgument, "division by zero");
    return RatFunc(den_, num_);
  }
  RatFunc operator/(const RatFunc& o) const { return *this * o.inverse(); }
  bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }

  // t-adic order; only valid on nonzero input.
  int ord_t() const {
    assert(!is_zero());
    return num_.ord() - den_.ord();
  }
  // Coefficient of t^{ord_t} in the Laurent expansion at t = 0.
  C trailing_ratio() const { return num_.trailing() / den_.trailing(); }

  /**
   * Laurent series coefficients c_k of this function for ord_t <= k < upto.
   * Returned as {ord_t, coefficients}; empty for the zero function.
   */
  std::pair<int, std::vector<C>> series(int upto) const {
    if (is_zero()) return {0, {}};
    int o = ord_t();
    if (o >= upto) return {o, {}};
    int n = upto - o;
    // Strip t powers so both parts have nonzero constant term.
    Poly<C> N = strip(num_), D = strip(den_);
    C d0inv = coeff_one_like(D.coeffs()[0]) / D.coeff(0);
    std::vector<C> c(n, coeff_zero_like(N.coeffs()[0]));
    for (int k = 0; k < n; ++k) {
      C acc = N.coeff(k);
      for (int j = 1; j <= k; ++j) acc = acc - D.coeff(j) * c[k - j];
      c[k] = acc * d0inv;
    }
    return {o, c};
  }

 private:
  static RatFunc zero_like(const RatFunc& a, const RatFunc& b) {
    const Poly<C>* src = !a.den_.is_zero() ? &a.den_ : &b.den_;
    Poly<C> one = Poly<C>::constant(coeff_one_like(src->coeffs()[0]));
    return RatFunc(Poly<C>(std::vector<C>{}), one);
  }
  static Poly<C> strip(const Poly<C>& p) {
    int o = p.ord();
    std::vector<C> c(p.coeffs().begin() + o, p.coeffs().end());
    return Poly<C>(std::move(c));
  }
  void reduce() {
    if (num_.is_zero()) {
      den_ = Poly<C>::constant(coeff_one_like(den_.coeffs()[0]));
      return;
    }
    Poly<C> g = poly_gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = num_.divmod(g).first;
      den_ = den_.divmod(g).first;
    }
    C lead = den_.leading();
    if (!coeff_is_one(lead)) {
      C inv = coeff_one_like(lead) / lead;
      num_ = num_.scaled(inv);
      den_ = den_.scaled(inv);
    }
  }
  Poly<C> num_, den_;
};

using PolyQ = Poly<Rational>;
using PolyP = Poly<Fp>;
using RatFuncQ = RatFunc<Rational>;
using RatFuncP = RatFunc<Fp>;

std::string poly_to_string(const PolyQ& p);
std::string poly_to_string(const PolyP& p);

}  // namespace schottky
