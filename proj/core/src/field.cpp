#include "schottky/field.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>

#include "schottky/errors.hpp"

namespace schottky {

namespace {

long vp_mpz(const mpz_class& z, long p) {
  assert(z != 0);
  mpz_class r, pp(p);
  return static_cast<long>(mpz_remove(r.get_mpz_t(), z.get_mpz_t(), pp.get_mpz_t()));
}

long vp_mpq(const Rational& q, long p) {
  return vp_mpz(q.get_num(), p) - vp_mpz(q.get_den(), p);
}

Rational q_pow_prime(long p, long e) {
  mpz_class r, base(p);
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(e >= 0 ? e : -e));
  return e >= 0 ? Rational(r) : Rational(1, r);
}

long to_long(const Rational& q) {
  if (q.get_den() != 1 || !q.get_num().fits_slong_p())
    throw Error(ErrorKind::InvalidArgument, "value coordinate out of range");
  return q.get_num().get_si();
}

long ceil_long(const Rational& q) {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  if (!r.fits_slong_p()) throw Error(ErrorKind::InvalidArgument, "precision out of range");
  return r.get_si();
}

bool payload_zero(const Rational& x) { return x == 0; }
bool payload_zero(const RatFuncQ& x) { return x.is_zero(); }
bool payload_zero(const RatFuncP& x) { return x.is_zero(); }

bool base_is_zero(const BasePayload& v) {
  return std::visit([](const auto& x) { return payload_zero(x); }, v);
}

template <class Op>
BasePayload base_zip(const BasePayload& a, const BasePayload& b, Op op) {
  return std::visit(
      [&](const auto& x, const auto& y) -> BasePayload {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, std::decay_t<decltype(y)>>) {
          return op(x, y);
        } else {
          throw Error(ErrorKind::InvalidArgument, "mixed base payloads");
        }
      },
      a, b);
}

BasePayload base_add(const BasePayload& a, const BasePayload& b) {
  return base_zip(a, b, [](const auto& x, const auto& y) { return x + y; });
}
BasePayload base_sub(const BasePayload& a, const BasePayload& b) {
  return base_zip(a, b, [](const auto& x, const auto& y) { return x - y; });
}
BasePayload base_mul(const BasePayload& a, const BasePayload& b) {
  return base_zip(a, b, [](const auto& x, const auto& y) { return x * y; });
}
BasePayload base_div(const BasePayload& a, const BasePayload& b) {
  return base_zip(a, b, [](const auto& x, const auto& y) { return x / y; });
}
BasePayload base_neg(const BasePayload& a) {
  return std::visit([](const auto& x) -> BasePayload { return -x; }, a);
}
bool base_eq(const BasePayload& a, const BasePayload& b) {
  return std::visit(
      [](const auto& x, const auto& y) -> bool {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, std::decay_t<decltype(y)>>) {
          return x == y;
        } else {
          return false;
        }
      },
      a, b);
}

Payload payload_from_base(const BasePayload& b) {
  return std::visit([](const auto& x) -> Payload { return x; }, b);
}

BasePayload to_base_payload(const Payload& p) {
  return std::visit(
      [](const auto& x) -> BasePayload {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, QuadValue>) {
          throw Error(ErrorKind::InvalidArgument, "nested quadratic extension");
        } else {
          return x;
        }
      },
      p);
}

}  // namespace

// ---------------------------------------------------------------------------
// Field construction

namespace {

void require_prime(long p) {
  mpz_class t(p);
  if (p < 2 || mpz_probab_prime_p(t.get_mpz_t(), 40) == 0)
    throw Error(ErrorKind::InvalidArgument, "p must be prime, got " + std::to_string(p));
}

}  // namespace

FieldPtr Field::rational_padic(long p) {
  require_prime(p);
  auto f = std::shared_ptr<Field>(new Field());
  f->kind_ = FieldKind::RationalPadic;
  f->p_ = p;
  f->rank_ = 1;
  return f;
}

FieldPtr Field::funcfield_tadic_q() {
  auto f = std::shared_ptr<Field>(new Field());
  f->kind_ = FieldKind::FuncfieldTadic;
  f->p_ = 0;
  f->rank_ = 1;
  return f;
}

FieldPtr Field::funcfield_tadic_fp(long p) {
  require_prime(p);
  auto f = std::shared_ptr<Field>(new Field());
  f->kind_ = FieldKind::FuncfieldTadic;
  f->p_ = p;
  f->rank_ = 1;
  return f;
}

FieldPtr Field::rank2_composite(long p) {
  require_prime(p);
  auto f = std::shared_ptr<Field>(new Field());
  f->kind_ = FieldKind::Rank2Composite;
  f->p_ = p;
  f->rank_ = 2;
  return f;
}

FieldPtr Field::quad_ext(FieldPtr base, const FieldElement& ramifier) {
  if (!base) throw Error(ErrorKind::InvalidArgument, "missing base field");
  if (base->kind() == FieldKind::QuadExt)
    throw Error(ErrorKind::InvalidArgument, "only one quadratic extension level is supported");
  if (base->characteristic() == 2)
    throw Error(ErrorKind::InvalidArgument, "quadratic extensions need odd characteristic");
  if (!ramifier.field()->same(*base))
    throw Error(ErrorKind::InvalidArgument, "ramifier must live in the base field");
  if (ramifier.is_zero())
    throw Error(ErrorKind::InvalidArgument, "ramifier must be nonzero");
  ValueElement v = ramifier.valuation();
  if (!v.all_integral())
    throw Error(ErrorKind::InvalidArgument, "ramifier valuation must be integral");
  mpz_class lead = v.coords()[0].get_num();
  if (mpz_even_p(lead.get_mpz_t()))
    throw Error(ErrorKind::InvalidArgument, "ramifier needs odd leading valuation");
  auto f = std::shared_ptr<Field>(new Field());
  f->kind_ = FieldKind::QuadExt;
  f->p_ = base->p();
  f->rank_ = base->rank();
  f->base_ = std::move(base);
  f->ramifier_ = std::make_shared<FieldElement>(ramifier);
  f->ram_val_half_ = v.halved();
  return f;
}

const FieldElement& Field::ramifier() const {
  if (!ramifier_) throw Error(ErrorKind::InvalidArgument, "field has no ramifier");
  return *ramifier_;
}

long Field::characteristic() const {
  switch (kind_) {
    case FieldKind::RationalPadic:
    case FieldKind::Rank2Composite:
      return 0;
    case FieldKind::FuncfieldTadic:
      return p_;  // 0 for the Q base
    case FieldKind::QuadExt:
      return base_->characteristic();
  }
  return 0;
}

std::optional<long> Field::residue_size() const {
  switch (kind_) {
    case FieldKind::RationalPadic:
    case FieldKind::Rank2Composite:
      return p_;
    case FieldKind::FuncfieldTadic:
      return p_ == 0 ? std::optional<long>() : std::optional<long>(p_);
    case FieldKind::QuadExt:
      return base_->residue_size();
  }
  return {};
}

bool Field::same(const Field& o) const {
  if (kind_ != o.kind_ || p_ != o.p_) return false;
  if (kind_ == FieldKind::QuadExt)
    return base_->same(*o.base_) && *ramifier_ == *o.ramifier_;
  return true;
}

bool Field::lattice_contains(const ValueElement& lambda) const {
  if (lambda.is_bottom()) return false;
  if (lambda.rank() != rank_) return false;
  if (lambda.all_integral()) return true;
  if (kind_ == FieldKind::QuadExt) return (lambda - ram_val_half_).all_integral();
  return false;
}

ValueElement Field::lattice_step() const {
  std::vector<Rational> c(static_cast<size_t>(rank_), Rational(0));
  if (kind_ == FieldKind::QuadExt && rank_ == 1)
    c.back() = Rational(1, 2);  // Z union (Z + v(pi)/2) has half-integer steps
  else
    c.back() = Rational(1);
  return ValueElement(std::move(c));
}

std::string Field::spec_string() const {
  switch (kind_) {
    case FieldKind::RationalPadic:
      return "rational-padic(" + std::to_string(p_) + ")";
    case FieldKind::FuncfieldTadic:
      return p_ == 0 ? "funcfield-tadic(Q)" : "funcfield-tadic(F_" + std::to_string(p_) + ")";
    case FieldKind::Rank2Composite:
      return "rank2-composite(" + std::to_string(p_) + ")";
    case FieldKind::QuadExt:
      return "quad-ext(" + base_->spec_string() + ", " + ramifier_->to_string() + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Element factories

FieldElement Field::zero() const { return from_long(0); }
FieldElement Field::one() const { return from_long(1); }

FieldElement Field::from_long(long n) const { return from_rational(Rational(n)); }

FieldElement Field::from_rational(const Rational& q_in) const {
  FieldPtr self = shared_from_this();
  Rational q = q_in;
  q.canonicalize();
  switch (kind_) {
    case FieldKind::RationalPadic:
      return FieldElement(self, q);
    case FieldKind::FuncfieldTadic:
      if (p_ == 0) {
        RatFuncQ rf(q == 0 ? PolyQ() : PolyQ::constant(q), PolyQ::constant(Rational(1)));
        return FieldElement(self, rf);
      } else {
        Fp num(p_, 0);
        mpz_class nm = q.get_num() % p_, dn = q.get_den() % p_;
        if (dn == 0) throw Error(ErrorKind::InvalidArgument, "denominator divisible by p");
        num = Fp(p_, nm.get_si()) / Fp(p_, dn.get_si());
        RatFuncP rf(num.is_zero() ? PolyP() : PolyP::constant(num), PolyP::constant(Fp(p_, 1)));
        return FieldElement(self, rf);
      }
    case FieldKind::Rank2Composite: {
      RatFuncQ rf(q == 0 ? PolyQ() : PolyQ::constant(q), PolyQ::constant(Rational(1)));
      return FieldElement(self, rf);
    }
    case FieldKind::QuadExt:
      return coerce(base_->from_rational(q));
  }
  throw Error(ErrorKind::InvalidArgument, "bad field kind");
}

FieldElement Field::t_element() const {
  FieldPtr self = shared_from_this();
  if (kind_ == FieldKind::FuncfieldTadic && p_ != 0) {
    PolyP t(std::vector<Fp>{Fp(p_, 0), Fp(p_, 1)});
    return FieldElement(self, RatFuncP(t, PolyP::constant(Fp(p_, 1))));
  }
  if (kind_ == FieldKind::FuncfieldTadic || kind_ == FieldKind::Rank2Composite) {
    PolyQ t(std::vector<Rational>{Rational(0), Rational(1)});
    return FieldElement(self, RatFuncQ::from_poly(t));
  }
  if (kind_ == FieldKind::QuadExt) return coerce(base_->t_element());
  throw Error(ErrorKind::InvalidArgument, "field has no variable t");
}

FieldElement Field::sqrt_ramifier() const {
  if (kind_ != FieldKind::QuadExt)
    throw Error(ErrorKind::InvalidArgument, "field has no ramifier");
  QuadValue v{to_base_payload(base_->zero().payload()),
              to_base_payload(base_->one().payload())};
  return FieldElement(shared_from_this(), v);
}

FieldElement Field::coerce(const FieldElement& base_elem) const {
  if (kind_ != FieldKind::QuadExt)
    throw Error(ErrorKind::InvalidArgument, "coerce targets a quadratic extension");
  if (!base_elem.field()->same(*base_))
    throw Error(ErrorKind::InvalidArgument, "element not in the base field");
  QuadValue v{to_base_payload(base_elem.payload()),
              to_base_payload(base_->zero().payload())};
  return FieldElement(shared_from_this(), v);
}

FieldElement Field::uniformizer_power(const ValueElement& lambda) const {
  if (!lattice_contains(lambda))
    throw Error(ErrorKind::InvalidArgument,
                "valuation " + lambda.to_string() + " not in the value lattice");
  FieldPtr self = shared_from_this();
  switch (kind_) {
    case FieldKind::RationalPadic:
      return FieldElement(self, q_pow_prime(p_, to_long(lambda.coords()[0])));
    case FieldKind::FuncfieldTadic: {
      long k = to_long(lambda.coords()[0]);
      if (p_ == 0) {
        PolyQ one = PolyQ::constant(Rational(1));
        PolyQ tk = PolyQ::constant(Rational(1)).shifted(k >= 0 ? k : -k);
        return FieldElement(self, k >= 0 ? RatFuncQ(tk, one) : RatFuncQ(one, tk));
      }
      PolyP one = PolyP::constant(Fp(p_, 1));
      PolyP tk = PolyP::constant(Fp(p_, 1)).shifted(k >= 0 ? k : -k);
      return FieldElement(self, k >= 0 ? RatFuncP(tk, one) : RatFuncP(one, tk));
    }
    case FieldKind::Rank2Composite: {
      long k = to_long(lambda.coords()[0]);
      long m = to_long(lambda.coords()[1]);
      PolyQ one = PolyQ::constant(Rational(1));
      PolyQ num = PolyQ::constant(q_pow_prime(p_, m));
      if (k >= 0) num = num.shifted(k);
      PolyQ den = k >= 0 ? one : PolyQ::constant(Rational(1)).shifted(-k);
      return FieldElement(self, RatFuncQ(num, den));
    }
    case FieldKind::QuadExt: {
      if (lambda.all_integral()) return coerce(base_->uniformizer_power(lambda));
      FieldElement rest = coerce(base_->uniformizer_power(lambda - ram_val_half_));
      return sqrt_ramifier() * rest;
    }
  }
  throw Error(ErrorKind::InvalidArgument, "bad field kind");
}

// ---------------------------------------------------------------------------
// Element operations

bool FieldElement::is_zero() const {
  return std::visit(
      [](const auto& x) -> bool {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, QuadValue>) {
          return base_is_zero(x.re) && base_is_zero(x.im);
        } else {
          return payload_zero(x);
        }
      },
      v_);
}

namespace {

template <class T>
Payload zip_same(const Payload& a, const Payload& b, T op_plain,
                 Payload (*op_quad)(const Field&, const QuadValue&, const QuadValue&),
                 const Field& f) {
  if (std::holds_alternative<QuadValue>(a)) {
    return op_quad(f, std::get<QuadValue>(a), std::get<QuadValue>(b));
  }
  return std::visit(
      [&](const auto& x, const auto& y) -> Payload {
        using X = std::decay_t<decltype(x)>;
        using Y = std::decay_t<decltype(y)>;
        if constexpr (std::is_same_v<X, Y> && !std::is_same_v<X, QuadValue>) {
          return op_plain(x, y);
        } else {
          throw Error(ErrorKind::InvalidArgument, "mixed payloads");
        }
      },
      a, b);
}

Payload quad_add(const Field&, const QuadValue& a, const QuadValue& b) {
  return QuadValue{base_add(a.re, b.re), base_add(a.im, b.im)};
}
Payload quad_sub(const Field&, const QuadValue& a, const QuadValue& b) {
  return QuadValue{base_sub(a.re, b.re), base_sub(a.im, b.im)};
}
Payload quad_mul(const Field& f, const QuadValue& a, const QuadValue& b) {
  BasePayload pi = to_base_payload(f.ramifier().payload());
  // (a1 + a2 s)(b1 + b2 s) = a1 b1 + a2 b2 pi + (a1 b2 + a2 b1) s
  return QuadValue{base_add(base_mul(a.re, b.re), base_mul(base_mul(a.im, b.im), pi)),
                   base_add(base_mul(a.re, b.im), base_mul(a.im, b.re))};
}

}  // namespace

FieldElement FieldElement::operator+(const FieldElement& o) const {
  assert(field_->same(*o.field_));
  return FieldElement(field_, zip_same(v_, o.v_, [](const auto& x, const auto& y) -> Payload { return x + y; },
                                       &quad_add, *field_));
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  assert(field_->same(*o.field_));
  return FieldElement(field_, zip_same(v_, o.v_, [](const auto& x, const auto& y) -> Payload { return x - y; },
                                       &quad_sub, *field_));
}

FieldElement FieldElement::operator-() const {
  Payload p = std::visit(
      [](const auto& x) -> Payload {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, QuadValue>) {
          return QuadValue{base_neg(x.re), base_neg(x.im)};
        } else {
          return -x;
        }
      },
      v_);
  return FieldElement(field_, std::move(p));
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  assert(field_->same(*o.field_));
  return FieldElement(field_, zip_same(v_, o.v_, [](const auto& x, const auto& y) -> Payload { return x * y; },
                                       &quad_mul, *field_));
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) throw Error(ErrorKind::InvalidArgument, "division by zero");
  if (std::holds_alternative<QuadValue>(v_)) {
    const QuadValue& q = std::get<QuadValue>(v_);
    BasePayload pi = to_base_payload(field_->ramifier().payload());
    // 1/(a + b s) = (a - b s) / (a^2 - pi b^2)
    BasePayload norm = base_sub(base_mul(q.re, q.re), base_mul(pi, base_mul(q.im, q.im)));
    return FieldElement(field_, QuadValue{base_div(q.re, norm), base_div(base_neg(q.im), norm)});
  }
  Payload p = std::visit(
      [](const auto& x) -> Payload {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, Rational>) {
          return Rational(1) / x;
        } else if constexpr (std::is_same_v<X, QuadValue>) {
          throw Error(ErrorKind::InvalidArgument, "unreachable");
        } else {
          return x.inverse();
        }
      },
      v_);
  return FieldElement(field_, std::move(p));
}

FieldElement FieldElement::operator/(const FieldElement& o) const { return *this * o.inverse(); }

bool FieldElement::operator==(const FieldElement& o) const {
  if (!field_->same(*o.field_)) return false;
  return std::visit(
      [](const auto& x, const auto& y) -> bool {
        using X = std::decay_t<decltype(x)>;
        using Y = std::decay_t<decltype(y)>;
        if constexpr (!std::is_same_v<X, Y>) {
          return false;
        } else if constexpr (std::is_same_v<X, QuadValue>) {
          return base_eq(x.re, y.re) && base_eq(x.im, y.im);
        } else {
          return x == y;
        }
      },
      v_, o.v_);
}

namespace {

ValueElement base_valuation(const Field& f, const BasePayload& v);

ValueElement payload_valuation(const Field& f, const Payload& v) {
  if (std::holds_alternative<QuadValue>(v)) {
    const QuadValue& q = std::get<QuadValue>(v);
    const Field& b = *f.base();
    ValueElement vre = base_valuation(b, q.re);
    ValueElement vim = base_valuation(b, q.im) + f.ramifier_valuation_half();
    return min_add(vre, vim);
  }
  return base_valuation(f, to_base_payload(v));
}

ValueElement base_valuation(const Field& f, const BasePayload& v) {
  if (base_is_zero(v)) return ValueElement::bottom(f.rank());
  switch (f.kind()) {
    case FieldKind::RationalPadic: {
      const Rational& q = std::get<Rational>(v);
      return ValueElement::make({vp_mpq(q, f.p())});
    }
    case FieldKind::FuncfieldTadic: {
      long o = std::visit(
          [](const auto& x) -> long {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Rational>) {
              throw Error(ErrorKind::InvalidArgument, "bad payload");
            } else {
              return x.ord_t();
            }
          },
          v);
      return ValueElement::make({o});
    }
    case FieldKind::Rank2Composite: {
      const RatFuncQ& x = std::get<RatFuncQ>(v);
      long o = x.ord_t();
      long m = vp_mpq(x.trailing_ratio(), f.p());
      return ValueElement::make({o, m});
    }
    case FieldKind::QuadExt:
      break;
  }
  throw Error(ErrorKind::InvalidArgument, "bad payload");
}

}  // namespace

ValueElement FieldElement::valuation() const { return payload_valuation(*field_, v_); }

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string ratfunc_to_string(const RatFuncQ& x) {
  if (x.is_zero()) return "0";
  if (x.den().degree() == 0) return poly_to_string(x.num());
  return "(" + poly_to_string(x.num()) + ")/(" + poly_to_string(x.den()) + ")";
}

std::string ratfunc_to_string(const RatFuncP& x) {
  if (x.is_zero()) return "0";
  if (x.den().degree() == 0) return poly_to_string(x.num());
  return "(" + poly_to_string(x.num()) + ")/(" + poly_to_string(x.den()) + ")";
}

std::string base_to_string(const BasePayload& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, Rational>) {
          return x.get_str();
        } else {
          return ratfunc_to_string(x);
        }
      },
      v);
}

}  // namespace

std::string FieldElement::to_string() const {
  return std::visit(
      [](const auto& x) -> std::string {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, QuadValue>) {
          if (base_is_zero(x.im)) return base_to_string(x.re);
          return "(" + base_to_string(x.re) + "," + base_to_string(x.im) + ")";
        } else if constexpr (std::is_same_v<X, Rational>) {
          return x.get_str();
        } else {
          return ratfunc_to_string(x);
        }
      },
      v_);
}

// ---------------------------------------------------------------------------
// Deterministic ordering

namespace {

int cmp_rational(const Rational& a, const Rational& b) { return cmp(a, b); }

int cmp_coeff(const Rational& a, const Rational& b) { return cmp(a, b); }
int cmp_coeff(const Fp& a, const Fp& b) { return a.v < b.v ? -1 : (a.v > b.v ? 1 : 0); }

template <class C>
int cmp_poly(const Poly<C>& a, const Poly<C>& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
  for (int i = a.degree(); i >= 0; --i) {
    int c = cmp_coeff(a.coeffs()[i], b.coeffs()[i]);
    if (c != 0) return c;
  }
  return 0;
}

template <class C>
int cmp_ratfunc(const RatFunc<C>& a, const RatFunc<C>& b) {
  if (a.is_zero() || b.is_zero()) {
    if (a.is_zero() && b.is_zero()) return 0;
    return a.is_zero() ? -1 : 1;
  }
  int c = cmp_poly(a.den(), b.den());
  if (c != 0) return c;
  return cmp_poly(a.num(), b.num());
}

int cmp_base(const BasePayload& a, const BasePayload& b) {
  return std::visit(
      [](const auto& x, const auto& y) -> int {
        using X = std::decay_t<decltype(x)>;
        using Y = std::decay_t<decltype(y)>;
        if constexpr (!std::is_same_v<X, Y>) {
          throw Error(ErrorKind::InvalidArgument, "mixed payloads");
        } else if constexpr (std::is_same_v<X, Rational>) {
          return cmp_rational(x, y);
        } else {
          return cmp_ratfunc(x, y);
        }
      },
      a, b);
}

}  // namespace

int compare_elements(const FieldElement& a, const FieldElement& b) {
  const Payload& x = a.payload();
  const Payload& y = b.payload();
  if (std::holds_alternative<QuadValue>(x)) {
    const QuadValue& qx = std::get<QuadValue>(x);
    const QuadValue& qy = std::get<QuadValue>(y);
    int c = cmp_base(qx.re, qy.re);
    if (c != 0) return c;
    return cmp_base(qx.im, qy.im);
  }
  return cmp_base(to_base_payload(x), to_base_payload(y));
}

// ---------------------------------------------------------------------------
// Canonical truncation

namespace {

// Digits of x below the threshold m (p-adic): the unique y = p^e * c with
// c in [0, p^{M-e}) and v_p(x - y) >= M, M = ceil(m).
Rational trunc_p_rational(const Rational& x, long p, const Rational& m) {
  if (x == 0) return Rational(0);
  long M = ceil_long(m);
  long e = vp_mpq(x, p);
  if (e >= M) return Rational(0);
  Rational unit = x / q_pow_prime(p, e);
  mpz_class pk;
  mpz_class pz(p);
  mpz_pow_ui(pk.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(M - e));
  mpz_class den_inv;
  if (mpz_invert(den_inv.get_mpz_t(), unit.get_den().get_mpz_t(), pk.get_mpz_t()) == 0)
    throw Error(ErrorKind::InvalidArgument, "unit denominator not invertible");
  mpz_class c = (unit.get_num() * den_inv) % pk;
  if (c < 0) c += pk;
  return Rational(c) * q_pow_prime(p, e);
}

// Laurent-series truncation keeping coefficients of t^k for k < M.
template <class C>
RatFunc<C> trunc_series(const RatFunc<C>& x, long M) {
  if (x.is_zero()) return x;
  auto [o, coeffs] = x.series(static_cast<int>(M));
  C zero = coeff_zero_like(x.den().coeffs()[0]);
  C one = coeff_one_like(zero);
  if (coeffs.empty()) return RatFunc<C>(Poly<C>(std::vector<C>{}), Poly<C>::constant(one));
  if (o >= 0) {
    std::vector<C> c(static_cast<size_t>(o), zero);
    c.insert(c.end(), coeffs.begin(), coeffs.end());
    return RatFunc<C>(Poly<C>(std::move(c)), Poly<C>::constant(one));
  }
  return RatFunc<C>(Poly<C>(std::move(coeffs)), Poly<C>::constant(one).shifted(-o));
}

// Rank-2 composite truncation at threshold (m1, m2): full t-coefficients
// below m1, and when m1 is integral the p-adic truncation of the boundary
// coefficient below m2.
RatFuncQ trunc_composite(const RatFuncQ& x, long p, const Rational& m1, const Rational& m2) {
  if (x.is_zero()) return x;
  bool boundary = (m1.get_den() == 1);
  long M1 = ceil_long(m1);
  RatFuncQ low = trunc_series(x, M1);
  if (!boundary) return low;
  auto [o, coeffs] = x.series(static_cast<int>(M1) + 1);
  Rational c_b(0);
  if (!coeffs.empty() && M1 - o >= 0 && M1 - o < static_cast<long>(coeffs.size()))
    c_b = coeffs[M1 - o];
  Rational kept = trunc_p_rational(c_b, p, m2);
  if (kept == 0) return low;
  PolyQ mono = PolyQ::constant(kept);
  RatFuncQ term = M1 >= 0
                      ? RatFuncQ(mono.shifted(M1), PolyQ::constant(Rational(1)))
                      : RatFuncQ(mono, PolyQ::constant(Rational(1)).shifted(-M1));
  return low + term;
}

BasePayload trunc_base(const Field& f, const BasePayload& v, const ValueElement& rho) {
  switch (f.kind()) {
    case FieldKind::RationalPadic:
      return trunc_p_rational(std::get<Rational>(v), f.p(), rho.coords()[0]);
    case FieldKind::FuncfieldTadic: {
      long M = ceil_long(rho.coords()[0]);
      if (f.p() == 0) return trunc_series(std::get<RatFuncQ>(v), M);
      return trunc_series(std::get<RatFuncP>(v), M);
    }
    case FieldKind::Rank2Composite:
      return trunc_composite(std::get<RatFuncQ>(v), f.p(), rho.coords()[0], rho.coords()[1]);
    case FieldKind::QuadExt:
      break;
  }
  throw Error(ErrorKind::InvalidArgument, "bad field kind");
}

}  // namespace

FieldElement canonical_center(const FieldElement& x, const ValueElement& rho) {
  const Field& f = *x.field();
  if (rho.is_bottom()) return x;
  if (rho.rank() != f.rank())
    throw Error(ErrorKind::InvalidArgument, "radius rank mismatch");
  if (std::holds_alternative<QuadValue>(x.payload())) {
    const QuadValue& q = std::get<QuadValue>(x.payload());
    const Field& b = *f.base();
    QuadValue out{trunc_base(b, q.re, rho),
                  trunc_base(b, q.im, rho - f.ramifier_valuation_half())};
    return FieldElement(x.field(), out);
  }
  return FieldElement(x.field(), payload_from_base(trunc_base(f, to_base_payload(x.payload()), rho)));
}

// ---------------------------------------------------------------------------
// Residues

std::vector<FieldElement> residue_representatives(const FieldPtr& field, long n) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "negative count");
  std::optional<long> size = field->residue_size();
  if (size && n > *size)
    throw Error(ErrorKind::TooFewResidues,
                "requested " + std::to_string(n) + " representatives, residue field has " +
                    std::to_string(*size));
  std::vector<FieldElement> out;
  out.reserve(n);
  for (long i = 0; i < n; ++i) out.push_back(field->from_long(i));
  return out;
}

// ---------------------------------------------------------------------------
// Square roots

namespace {

std::optional<Rational> sqrt_rational(const Rational& x) {
  if (x < 0) return std::nullopt;
  if (x == 0) return Rational(0);
  mpz_class num = x.get_num(), den = x.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
    return std::nullopt;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  return Rational(rn, rd);
}

std::optional<Rational> sqrt_coeff(const Rational& x) { return sqrt_rational(x); }
std::optional<Fp> sqrt_coeff(const Fp& x) {
  if (x.p == 2) return std::nullopt;  // handled nowhere else; keep odd p only
  for (long r = 0; r < x.p; ++r) {
    Fp c(x.p, r);
    if (c * c == x) return c;
  }
  return std::nullopt;
}

template <class C>
std::optional<Poly<C>> sqrt_poly(const Poly<C>& p) {
  if (p.is_zero()) return p;
  int d = p.degree();
  if (d % 2 != 0) return std::nullopt;
  auto lead = sqrt_coeff(p.leading());
  if (!lead) return std::nullopt;
  int n = d / 2;
  std::vector<C> s(n + 1, coeff_zero_like(p.leading()));
  s[n] = *lead;
  C two = coeff_one_like(*lead) + coeff_one_like(*lead);
  if (coeff_is_zero(two)) return std::nullopt;
  for (int k = n - 1; k >= 0; --k) {
    C acc = p.coeff(n + k);
    for (int i = k + 1; i < n; ++i) {
      int j = n + k - i;
      if (j > n || j < 0) continue;
      if (j >= i) continue;  // count each unordered pair once below
      acc = acc - (s[i] * s[j] + s[i] * s[j]);
    }
    // pairs (i, j) with i + j = n + k, i > j, both <= n, handled above except i == j
    if ((n + k) % 2 == 0) {
      int h = (n + k) / 2;
      if (h <= n && h > k) acc = acc - s[h] * s[h];
    }
    s[k] = acc / (two * s[n]);
  }
  Poly<C> cand(std::move(s));
  if (cand * cand == p) return cand;
  return std::nullopt;
}

template <class C>
std::optional<RatFunc<C>> sqrt_ratfunc(const RatFunc<C>& x) {
  if (x.is_zero()) return x;
  auto n = sqrt_poly(x.num());
  auto d = sqrt_poly(x.den());
  if (!n || !d) return std::nullopt;
  return RatFunc<C>(*n, *d);
}

std::optional<BasePayload> sqrt_base(const BasePayload& v) {
  return std::visit(
      [](const auto& x) -> std::optional<BasePayload> {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, Rational>) {
          auto r = sqrt_rational(x);
          if (!r) return std::nullopt;
          return BasePayload(*r);
        } else {
          auto r = sqrt_ratfunc(x);
          if (!r) return std::nullopt;
          return BasePayload(*r);
        }
      },
      v);
}

}  // namespace

std::optional<FieldElement> try_sqrt(const FieldElement& x) {
  const Field& f = *x.field();
  if (f.characteristic() == 2) return std::nullopt;
  if (!std::holds_alternative<QuadValue>(x.payload())) {
    auto r = sqrt_base(to_base_payload(x.payload()));
    if (!r) return std::nullopt;
    return FieldElement(x.field(), payload_from_base(*r));
  }
  const QuadValue& q = std::get<QuadValue>(x.payload());
  const FieldPtr& bf = f.base();
  BasePayload pi = to_base_payload(f.ramifier().payload());
  BasePayload bzero = to_base_payload(bf->zero().payload());
  if (base_is_zero(q.im)) {
    if (auto s = sqrt_base(q.re)) return FieldElement(x.field(), QuadValue{*s, bzero});
    // re = pi * y^2 gives sqrt = y * sqrt(pi)
    if (auto s = sqrt_base(base_div(q.re, pi)))
      return FieldElement(x.field(), QuadValue{bzero, *s});
    return std::nullopt;
  }
  // (a + b s)^2 = a^2 + pi b^2 + 2ab s: solve a^2 from a quadratic in the base.
  BasePayload two = to_base_payload(bf->from_long(2).payload());
  BasePayload four = to_base_payload(bf->from_long(4).payload());
  BasePayload disc = base_sub(base_mul(q.re, q.re), base_mul(pi, base_mul(q.im, q.im)));
  auto sd = sqrt_base(disc);
  if (!sd) return std::nullopt;
  for (int sign = 0; sign < 2; ++sign) {
    BasePayload z = base_div(sign == 0 ? base_add(q.re, *sd) : base_sub(q.re, *sd), two);
    auto a = sqrt_base(z);
    if (!a || base_is_zero(*a)) continue;
    BasePayload b = base_div(q.im, base_mul(two, *a));
    // verify
    BasePayload re = base_add(base_mul(*a, *a), base_mul(pi, base_mul(b, b)));
    BasePayload im = base_mul(two, base_mul(*a, b));
    (void)four;
    if (base_eq(re, q.re) && base_eq(im, q.im))
      return FieldElement(x.field(), QuadValue{*a, b});
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Hensel lifting

HenselResult hensel_fixed_root(const FieldElement& b1, const FieldElement& b0,
                               const ValueElement& precision) {
  const FieldPtr& f = b1.field();
  if (!f->same(*b0.field()))
    throw Error(ErrorKind::InvalidArgument, "coefficients from different fields");
  if (b1.is_zero())
    throw Error(ErrorKind::HenselFails, "linear coefficient has no inverse valuation gap");
  ValueElement gap = b0.valuation() - b1.valuation().scaled(2);
  if (!gap.is_top_nilpotent())
    throw Error(ErrorKind::HenselFails,
                "|f(0)|/|f'(0)|^2 not topologically nilpotent (gap " + gap.to_string() + ")");

  long chr = f->characteristic();
  if (chr != 2) {
    FieldElement disc = b1 * b1 - f->from_long(4) * b0;
    if (auto s = try_sqrt(disc)) {
      FieldElement two = f->from_long(2);
      FieldElement r1 = (-b1 + *s) / two;
      FieldElement r2 = (-b1 - *s) / two;
      // Return the root in the basin: the one of larger (additive) valuation.
      bool r1_deep = (r1.valuation() <=> r2.valuation()) == std::strong_ordering::greater;
      FieldElement root = r1_deep ? r1 : r2;
      FieldElement cof = r1_deep ? r2 : r1;
      return HenselResult{root, cof, true, ValueElement::bottom(f->rank())};
    }
  }

  auto eval_f = [&](const FieldElement& x) { return x * x + b1 * x + b0; };
  FieldElement two_x_coeff = f->from_long(2);
  FieldElement x = f->zero();
  for (int iter = 0; iter < 200; ++iter) {
    FieldElement fx = eval_f(x);
    if (fx.is_zero())
      return HenselResult{x, -b1 - x, true, ValueElement::bottom(f->rank())};
    ValueElement vfx = fx.valuation();
    if ((vfx <=> precision) != std::strong_ordering::less)
      return HenselResult{x, -b1 - x, false, vfx};
    FieldElement fpx = two_x_coeff * x + b1;
    if (fpx.is_zero()) throw Error(ErrorKind::HenselFails, "derivative vanished");
    FieldElement y = x - fx / fpx;
    FieldElement fy = eval_f(y);
    if (!fy.is_zero()) {
      FieldElement fpy = two_x_coeff * y + b1;
      if (fpy.is_zero()) throw Error(ErrorKind::HenselFails, "derivative vanished");
      ValueElement tau = fy.valuation() - fpy.valuation();
      y = canonical_center(y, tau);
    }
    x = y;
  }
  throw Error(ErrorKind::HenselFails, "iteration did not converge");
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

Rational parse_rational_str(const std::string& s) {
  std::string t;
  for (char c : s)
    if (!isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw ParseError("empty number");
  size_t slash = t.find('/');
  try {
    if (slash == std::string::npos) {
      return Rational(mpz_class(t));
    }
    mpz_class num(t.substr(0, slash)), den(t.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + s + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw ParseError("bad number '" + s + "'");
  }
}

// One additive term of a polynomial: [coeff][*]t[^k] or a bare coefficient.
template <class C, class CoeffParse>
void parse_poly_term(const std::string& term, std::vector<C>& coeffs, const C& zero,
                     CoeffParse parse_coeff) {
  size_t tpos = term.find('t');
  std::string coeff_part, exp_part;
  long exp = 0;
  if (tpos == std::string::npos) {
    coeff_part = term;
  } else {
    coeff_part = term.substr(0, tpos);
    if (!coeff_part.empty() && coeff_part.back() == '*') coeff_part.pop_back();
    std::string rest = term.substr(tpos + 1);
    if (rest.empty()) {
      exp = 1;
    } else if (rest[0] == '^') {
      try {
        size_t used = 0;
        exp = std::stol(rest.substr(1), &used);
        if (used != rest.size() - 1) throw ParseError("bad exponent in '" + term + "'");
      } catch (const std::exception&) {
        throw ParseError("bad exponent in '" + term + "'");
      }
      if (exp < 0) throw ParseError("negative exponent in '" + term + "'");
    } else {
      throw ParseError("bad term '" + term + "'");
    }
  }
  C c = zero;
  if (tpos != std::string::npos && (coeff_part.empty() || coeff_part == "+"))
    c = coeff_one_like(zero);
  else if (tpos != std::string::npos && coeff_part == "-")
    c = -coeff_one_like(zero);
  else
    c = parse_coeff(coeff_part);
  if (exp >= static_cast<long>(coeffs.size())) coeffs.resize(exp + 1, zero);
  coeffs[exp] = coeffs[exp] + c;
}

template <class C, class CoeffParse>
Poly<C> parse_poly(const std::string& s, const C& zero, CoeffParse parse_coeff) {
  std::string t;
  for (char c : s)
    if (!isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw ParseError("empty polynomial");
  std::vector<C> coeffs;
  size_t start = 0;
  for (size_t i = 1; i <= t.size(); ++i) {
    if (i == t.size() || ((t[i] == '+' || t[i] == '-') && t[i - 1] != '^' && t[i - 1] != '*' &&
                          t[i - 1] != '/' && t[i - 1] != '+' && t[i - 1] != '-')) {
      std::string term = t.substr(start, i - start);
      if (!term.empty() && term[0] == '+') term = term.substr(1);
      if (term.empty()) throw ParseError("empty term in '" + s + "'");
      parse_poly_term(term, coeffs, zero, parse_coeff);
      start = i;
    }
  }
  return Poly<C>(std::move(coeffs));
}

template <class C, class CoeffParse>
RatFunc<C> parse_ratfunc(const std::string& s, const C& zero, CoeffParse parse_coeff) {
  std::string t;
  for (char c : s)
    if (!isspace(static_cast<unsigned char>(c))) t += c;
  if (t.size() > 1 && t[0] == '(') {
    size_t close = t.find(')');
    if (close != std::string::npos && close + 2 < t.size() && t[close + 1] == '/' &&
        t[close + 2] == '(' && t.back() == ')') {
      Poly<C> num = parse_poly(t.substr(1, close - 1), zero, parse_coeff);
      Poly<C> den = parse_poly(t.substr(close + 3, t.size() - close - 4), zero, parse_coeff);
      if (den.is_zero()) throw ParseError("zero denominator in '" + s + "'");
      return RatFunc<C>(num, den);
    }
    throw ParseError("bad rational function '" + s + "'");
  }
  Poly<C> num = parse_poly(t, zero, parse_coeff);
  return RatFunc<C>(num, Poly<C>::constant(coeff_one_like(zero)));
}

}  // namespace

FieldElement Field::parse(const std::string& s) const {
  FieldPtr self = shared_from_this();
  switch (kind_) {
    case FieldKind::RationalPadic:
      return FieldElement(self, parse_rational_str(s));
    case FieldKind::FuncfieldTadic:
      if (p_ == 0) {
        return FieldElement(
            self, parse_ratfunc(s, Rational(0), [](const std::string& c) { return parse_rational_str(c); }));
      } else {
        long p = p_;
        auto coeff = [p](const std::string& c) {
          Rational q = parse_rational_str(c);
          mpz_class dn = q.get_den() % p;
          if (dn == 0) throw ParseError("coefficient denominator divisible by p");
          mpz_class nm = q.get_num() % p;
          return Fp(p, nm.get_si()) / Fp(p, dn.get_si());
        };
        return FieldElement(self, parse_ratfunc(s, Fp(p_, 0), coeff));
      }
    case FieldKind::Rank2Composite:
      return FieldElement(
          self, parse_ratfunc(s, Rational(0), [](const std::string& c) { return parse_rational_str(c); }));
    case FieldKind::QuadExt: {
      std::string t;
      for (char c : s)
        if (!isspace(static_cast<unsigned char>(c))) t += c;
      // Pair form "(re,im)" with a top-level comma; otherwise a base element.
      if (!t.empty() && t.front() == '(' && t.back() == ')') {
        int depth = 0;
        for (size_t i = 0; i < t.size(); ++i) {
          if (t[i] == '(') ++depth;
          if (t[i] == ')') --depth;
          if (t[i] == ',' && depth == 1) {
            FieldElement re = base_->parse(t.substr(1, i - 1));
            FieldElement im = base_->parse(t.substr(i + 1, t.size() - i - 2));
            return coerce(re) + coerce(im) * sqrt_ramifier();
          }
        }
      }
      return coerce(base_->parse(s));
    }
  }
  throw Error(ErrorKind::InvalidArgument, "bad field kind");
}

}  // namespace schottky
