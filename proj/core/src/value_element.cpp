#include "schottky/value_element.hpp"

#include <cassert>

#include "schottky/errors.hpp"

namespace schottky {

ValueElement ValueElement::make(std::vector<long> coords) {
  std::vector<Rational> c;
  c.reserve(coords.size());
  for (long x : coords) c.emplace_back(x);
  return ValueElement(std::move(c));
}

bool ValueElement::is_zero() const {
  if (bottom_) return false;
  for (const auto& c : coords_)
    if (c != 0) return false;
  return true;
}

ValueElement ValueElement::operator+(const ValueElement& o) const {
  assert(rank() == o.rank());
  if (bottom_ || o.bottom_) return bottom(rank());
  ValueElement r = *this;
  for (int i = 0; i < rank(); ++i) r.coords_[i] += o.coords_[i];
  return r;
}

ValueElement ValueElement::operator-(const ValueElement& o) const {
  assert(rank() == o.rank());
  if (bottom_) return bottom(rank());
  if (o.bottom_) throw Error(ErrorKind::InvalidArgument, "cannot subtract bottom value");
  ValueElement r = *this;
  for (int i = 0; i < rank(); ++i) r.coords_[i] -= o.coords_[i];
  return r;
}

ValueElement ValueElement::operator-() const {
  if (bottom_) throw Error(ErrorKind::InvalidArgument, "cannot negate bottom value");
  ValueElement r = *this;
  for (auto& c : r.coords_) c = -c;
  return r;
}

ValueElement ValueElement::scaled(long n) const {
  if (bottom_) return *this;
  ValueElement r = *this;
  for (auto& c : r.coords_) c *= n;
  return r;
}

ValueElement ValueElement::halved() const {
  if (bottom_) return *this;
  ValueElement r = *this;
  for (auto& c : r.coords_) c /= 2;
  return r;
}

std::strong_ordering ValueElement::operator<=>(const ValueElement& o) const {
  assert(rank() == o.rank());
  if (bottom_ && o.bottom_) return std::strong_ordering::equal;
  if (bottom_) return std::strong_ordering::greater;
  if (o.bottom_) return std::strong_ordering::less;
  for (int i = 0; i < rank(); ++i) {
    int c = cmp(coords_[i], o.coords_[i]);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

bool ValueElement::operator==(const ValueElement& o) const {
  return (*this <=> o) == std::strong_ordering::equal;
}

bool ValueElement::is_top_nilpotent() const {
  if (bottom_) return true;  // v(0): 0^n -> 0 trivially
  return !coords_.empty() && coords_[0] > 0;
}

bool ValueElement::all_integral() const {
  if (bottom_) return false;
  for (const auto& c : coords_)
    if (c.get_den() != 1) return false;
  return true;
}

std::string ValueElement::to_string() const {
  if (bottom_) return "[bottom]";
  std::string s = "[";
  for (int i = 0; i < rank(); ++i) {
    if (i) s += ",";
    s += coords_[i].get_str();
  }
  s += "]";
  return s;
}

const ValueElement& min_add(const ValueElement& a, const ValueElement& b) {
  return (a <=> b) == std::strong_ordering::greater ? b : a;
}

const ValueElement& max_add(const ValueElement& a, const ValueElement& b) {
  return (a <=> b) == std::strong_ordering::less ? b : a;
}

}  // namespace schottky
