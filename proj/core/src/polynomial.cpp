#include "schottky/polynomial.hpp"

namespace schottky {

Fp Fp::inverse() const {
  if (v == 0) throw Error(ErrorKind::InvalidArgument, "division by zero in F_p");
  // Extended Euclid on (v, p).
  long a = v, b = p, x0 = 1, x1 = 0;
  while (b != 0) {
    long q = a / b;
    long tmp = a - q * b;
    a = b;
    b = tmp;
    tmp = x0 - q * x1;
    x0 = x1;
    x1 = tmp;
  }
  return Fp(p, x0);
}

std::string coeff_to_string(const Rational& c) { return c.get_str(); }

std::string coeff_to_string(const Fp& c) { return std::to_string(c.v); }

namespace {

template <class C>
std::string poly_to_string_impl(const Poly<C>& p) {
  if (p.is_zero()) return "0";
  std::string s;
  const auto& c = p.coeffs();
  bool first = true;
  for (size_t k = 0; k < c.size(); ++k) {
    if (coeff_is_zero(c[k])) continue;
    std::string term;
    if (k == 0) {
      term = coeff_to_string(c[k]);
    } else {
      if (coeff_is_one(c[k])) {
        term = "";
      } else if (coeff_is_minus_one(c[k])) {
        term = "-";
      } else {
        term = coeff_to_string(c[k]) + "*";
      }
      term += "t^" + std::to_string(k);
    }
    if (!first && term[0] != '-') s += "+";
    s += term;
    first = false;
  }
  return s;
}

}  // namespace

std::string poly_to_string(const PolyQ& p) { return poly_to_string_impl(p); }
std::string poly_to_string(const PolyP& p) { return poly_to_string_impl(p); }

}  // namespace schottky
