#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <Eigen/Core>

#include <compare>
#include <concepts>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <memory>
#include <string>
#include <string_view>

namespace vass {

using BigInt = boost::multiprecision::cpp_int;

// Arbitrary-precision integer with an inline int64 fast path.  Values that
// overflow are promoted to a shared immutable heap BigInt.
class Integer {
 public:
  Integer() noexcept = default;

  template <std::signed_integral T>
  Integer(T v) noexcept : small_(static_cast<std::int64_t>(v)) {}  // NOLINT

  template <std::unsigned_integral T>
    requires(!std::same_as<T, bool>)
  Integer(T v) {  // NOLINT
    if (static_cast<std::uint64_t>(v) <= static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      small_ = static_cast<std::int64_t>(v);
    } else {
      assign_big(BigInt(v));
    }
  }

  explicit Integer(const BigInt& v) { assign_big(v); }

  static Integer parse(std::string_view text);

  [[nodiscard]] bool is_small() const noexcept { return !big_; }
  [[nodiscard]] bool fits_int64() const noexcept { return !big_; }
  [[nodiscard]] std::int64_t to_int64() const;
  [[nodiscard]] double to_double() const;
  [[nodiscard]] BigInt to_big() const { return big_ ? *big_ : BigInt(small_); }
  [[nodiscard]] std::string to_string() const;

  [[nodiscard]] int sign() const noexcept {
    if (big_) return big_->sign();
    return (small_ > 0) - (small_ < 0);
  }
  [[nodiscard]] bool is_zero() const noexcept { return !big_ && small_ == 0; }
  [[nodiscard]] bool is_negative() const noexcept { return sign() < 0; }
  [[nodiscard]] bool is_positive() const noexcept { return sign() > 0; }

  // Approximate log2 |x|; used for bound assertions on huge values.
  [[nodiscard]] double log2_abs() const;

  friend Integer operator+(const Integer& a, const Integer& b) {
    if (!a.big_ && !b.big_) {
      std::int64_t r;
      if (!__builtin_add_overflow(a.small_, b.small_, &r)) return Integer(r);
    }
    return Integer(a.to_big() + b.to_big());
  }
  friend Integer operator-(const Integer& a, const Integer& b) {
    if (!a.big_ && !b.big_) {
      std::int64_t r;
      if (!__builtin_sub_overflow(a.small_, b.small_, &r)) return Integer(r);
    }
    return Integer(a.to_big() - b.to_big());
  }
  friend Integer operator*(const Integer& a, const Integer& b) {
    if (!a.big_ && !b.big_) {
      std::int64_t r;
      if (!__builtin_mul_overflow(a.small_, b.small_, &r)) return Integer(r);
    }
    return Integer(a.to_big() * b.to_big());
  }
  // Truncating division, like built-in integers.
  friend Integer operator/(const Integer& a, const Integer& b);
  friend Integer operator%(const Integer& a, const Integer& b);

  Integer operator-() const {
    if (!big_ && small_ != std::numeric_limits<std::int64_t>::min()) return Integer(-small_);
    return Integer(BigInt(-to_big()));
  }
  Integer operator+() const { return *this; }

  Integer& operator+=(const Integer& o) { return *this = *this + o; }
  Integer& operator-=(const Integer& o) { return *this = *this - o; }
  Integer& operator*=(const Integer& o) { return *this = *this * o; }
  Integer& operator/=(const Integer& o) { return *this = *this / o; }
  Integer& operator%=(const Integer& o) { return *this = *this % o; }
  Integer& operator++() { return *this += 1; }
  Integer& operator--() { return *this -= 1; }

  friend bool operator==(const Integer& a, const Integer& b) noexcept {
    if (!a.big_ && !b.big_) return a.small_ == b.small_;
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false;  // normalized: a big value never fits in int64
  }
  friend std::strong_ordering operator<=>(const Integer& a, const Integer& b) noexcept {
    if (!a.big_ && !b.big_) return a.small_ <=> b.small_;
    int c = a.to_big().compare(b.to_big());
    return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  [[nodiscard]] std::size_t hash() const noexcept;

 private:
  void assign_big(const BigInt& v);

  std::int64_t small_ = 0;
  std::shared_ptr<const BigInt> big_;
};

std::ostream& operator<<(std::ostream& os, const Integer& x);

[[nodiscard]] Integer abs(const Integer& x);
[[nodiscard]] Integer gcd(const Integer& a, const Integer& b);
[[nodiscard]] Integer lcm(const Integer& a, const Integer& b);
[[nodiscard]] Integer floor_div(const Integer& a, const Integer& b);
[[nodiscard]] Integer ceil_div(const Integer& a, const Integer& b);
[[nodiscard]] Integer pow(const Integer& base, unsigned exponent);
[[nodiscard]] inline const Integer& min(const Integer& a, const Integer& b) { return b < a ? b : a; }
[[nodiscard]] inline const Integer& max(const Integer& a, const Integer& b) { return a < b ? b : a; }

// Exact rational number kept in lowest terms with a positive denominator.
class Rational {
 public:
  Rational() = default;
  template <std::integral T>
    requires(!std::same_as<T, bool>)
  Rational(T v) : num_(v) {}  // NOLINT
  Rational(Integer v) : num_(std::move(v)) {}  // NOLINT
  Rational(Integer num, Integer den);

  [[nodiscard]] const Integer& num() const noexcept { return num_; }
  [[nodiscard]] const Integer& den() const noexcept { return den_; }
  [[nodiscard]] bool is_integer() const noexcept { return den_ == Integer(1); }
  [[nodiscard]] bool is_zero() const noexcept { return num_.is_zero(); }
  [[nodiscard]] int sign() const noexcept { return num_.sign(); }
  [[nodiscard]] std::string to_string() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const;
  Rational operator+() const { return *this; }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ <=> b.num_ * a.den_;
  }

 private:
  Integer num_{0};
  Integer den_{1};
};

std::ostream& operator<<(std::ostream& os, const Rational& x);
[[nodiscard]] Rational abs(const Rational& x);

}  // namespace vass

template <>
struct std::hash<vass::Integer> {
  std::size_t operator()(const vass::Integer& x) const noexcept { return x.hash(); }
};

namespace Eigen {

template <>
struct NumTraits<vass::Integer> : GenericNumTraits<vass::Integer> {
  using Real = vass::Integer;
  using NonInteger = vass::Rational;
  using Nested = vass::Integer;
  using Literal = vass::Integer;
  enum {
    IsInteger = 1,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 2,
    MulCost = 3
  };
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
  static inline Real highest() { return std::numeric_limits<std::int64_t>::max(); }
  static inline Real lowest() { return std::numeric_limits<std::int64_t>::min(); }
};

template <>
struct NumTraits<vass::Rational> : GenericNumTraits<vass::Rational> {
  using Real = vass::Rational;
  using NonInteger = vass::Rational;
  using Nested = vass::Rational;
  using Literal = vass::Rational;
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 4,
    MulCost = 6
  };
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace vass {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using IntVector = Vector<Integer>;
using IntMatrix = Matrix<Integer>;
using RatVector = Vector<Rational>;
using RatMatrix = Matrix<Rational>;

}  // namespace vass
