#include "vass/integer.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace vass {

namespace {

const BigInt kInt64Min(std::numeric_limits<std::int64_t>::min());
const BigInt kInt64Max(std::numeric_limits<std::int64_t>::max());

}  // namespace

void Integer::assign_big(const BigInt& v) {
  if (v >= kInt64Min && v <= kInt64Max) {
    small_ = static_cast<std::int64_t>(v);
    big_.reset();
  } else {
    small_ = 0;
    big_ = std::make_shared<const BigInt>(v);
  }
}

Integer Integer::parse(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty integer literal");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw std::invalid_argument("malformed integer literal: " + s);
  for (std::size_t k = i; k < s.size(); ++k) {
    if (s[k] < '0' || s[k] > '9') throw std::invalid_argument("malformed integer literal: " + s);
  }
  if (s[0] == '+') s.erase(0, 1);
  return Integer(BigInt(s));
}

std::int64_t Integer::to_int64() const {
  if (big_) throw std::overflow_error("integer does not fit in 64 bits: " + to_string());
  return small_;
}

double Integer::to_double() const {
  if (!big_) return static_cast<double>(small_);
  return big_->convert_to<double>();
}

double Integer::log2_abs() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  if (!big_) return std::log2(std::fabs(static_cast<double>(small_)));
  BigInt a = boost::multiprecision::abs(*big_);
  std::size_t bits = boost::multiprecision::msb(a);
  if (bits < 60) return std::log2(a.convert_to<double>());
  BigInt top = a >> (bits - 52);
  return std::log2(top.convert_to<double>()) + static_cast<double>(bits - 52);
}

std::string Integer::to_string() const {
  if (!big_) return std::to_string(small_);
  return big_->str();
}

std::size_t Integer::hash() const noexcept {
  if (!big_) return std::hash<std::int64_t>{}(small_);
  return std::hash<std::string>{}(big_->str());
}

Integer operator/(const Integer& a, const Integer& b) {
  if (b.is_zero()) throw std::domain_error("integer division by zero");
  if (!a.big_ && !b.big_ && !(a.small_ == std::numeric_limits<std::int64_t>::min() && b.small_ == -1)) {
    return Integer(a.small_ / b.small_);
  }
  return Integer(BigInt(a.to_big() / b.to_big()));
}

Integer operator%(const Integer& a, const Integer& b) {
  if (b.is_zero()) throw std::domain_error("integer modulo by zero");
  if (!a.big_ && !b.big_) {
    if (b.small_ == -1) return Integer(0);
    return Integer(a.small_ % b.small_);
  }
  return Integer(BigInt(a.to_big() % b.to_big()));
}

std::ostream& operator<<(std::ostream& os, const Integer& x) { return os << x.to_string(); }

Integer abs(const Integer& x) { return x.is_negative() ? -x : x; }

Integer gcd(const Integer& a, const Integer& b) {
  if (a.is_small() && b.is_small()) {
    std::int64_t x = a.to_int64();
    std::int64_t y = b.to_int64();
    if (x != std::numeric_limits<std::int64_t>::min() && y != std::numeric_limits<std::int64_t>::min()) {
      x = x < 0 ? -x : x;
      y = y < 0 ? -y : y;
      while (y != 0) {
        std::int64_t t = x % y;
        x = y;
        y = t;
      }
      return Integer(x);
    }
  }
  return Integer(BigInt(boost::multiprecision::gcd(a.to_big(), b.to_big())));
}

Integer lcm(const Integer& a, const Integer& b) {
  if (a.is_zero() || b.is_zero()) return Integer(0);
  return abs(a / gcd(a, b) * b);
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  Integer r = a - q * b;
  if (!r.is_zero() && ((r.sign() < 0) != (b.sign() < 0))) q -= 1;
  return q;
}

Integer ceil_div(const Integer& a, const Integer& b) { return -floor_div(-a, b); }

Integer pow(const Integer& base, unsigned exponent) {
  Integer result(1);
  Integer b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent > 0) b *= b;
  }
  return result;
}

Rational::Rational(Integer num, Integer den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("rational with zero denominator");
  if (den_.is_negative()) {
    num_ = -num_;
    den_ = -den_;
  }
  Integer g = gcd(num_, den_);
  if (g != Integer(1) && !g.is_zero()) {
    num_ /= g;
    den_ /= g;
  }
}

std::string Rational::to_string() const {
  if (is_integer()) return num_.to_string();
  return num_.to_string() + "/" + den_.to_string();
}

Rational operator+(const Rational& a, const Rational& b) {
  if (a.den_ == b.den_) return Rational(a.num_ + b.num_, a.den_);
  return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  if (a.den_ == b.den_) return Rational(a.num_ - b.num_, a.den_);
  return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  if (a.is_zero() || b.is_zero()) return Rational();
  return Rational(a.num_ * b.num_, a.den_ * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw std::domain_error("rational division by zero");
  return Rational(a.num_ * b.den_, a.den_ * b.num_);
}

Rational Rational::operator-() const {
  Rational r = *this;
  r.num_ = -r.num_;
  return r;
}

std::ostream& operator<<(std::ostream& os, const Rational& x) { return os << x.to_string(); }

Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }

}  // namespace vass
