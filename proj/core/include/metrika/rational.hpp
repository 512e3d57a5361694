#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace metrika {

/// Exact rational number in canonical form (reduced, positive denominator).
///
/// Values whose numerator and denominator fit in 64 bits are stored inline;
/// anything larger is promoted to a shared immutable GMP rational. Results
/// that fit again are demoted, so the representation of a value is unique
/// and equality can compare representations directly.
class Rational {
 public:
  Rational() noexcept = default;
  Rational(std::int64_t value) noexcept : num_(value), den_(1) {}  // NOLINT(implicit)
  Rational(std::int64_t num, std::int64_t den);
  explicit Rational(const mpq_class& value);

  static Rational zero() noexcept { return Rational(); }
  static Rational one() noexcept { return Rational(1); }

  /// Accepts "p", "p/q", and terminating or non-terminating decimal
  /// literals ("0.125", "-.5", "1e-3"); decimals are converted exactly.
  static Rational parse(std::string_view text);

  /// "p" for integers, "p/q" otherwise.
  std::string to_string() const;
  double to_double() const;
  mpq_class to_mpq() const;
  mpz_class numerator() const;
  mpz_class denominator() const;

  bool is_small() const noexcept { return big_ == nullptr; }
  bool is_zero() const noexcept { return big_ == nullptr && num_ == 0; }
  bool is_integer() const noexcept { return big_ == nullptr && den_ == 1; }
  int sign() const noexcept;

  Rational operator-() const;
  Rational& operator+=(const Rational& rhs) { return *this = *this + rhs; }
  Rational& operator-=(const Rational& rhs) { return *this = *this - rhs; }
  Rational& operator*=(const Rational& rhs) { return *this = *this * rhs; }
  Rational& operator/=(const Rational& rhs) { return *this = *this / rhs; }

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);

  friend bool operator==(const Rational& a, const Rational& b) noexcept;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept;

  std::size_t hash() const noexcept;

 private:
  static Rational from_mpq(mpq_class value);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::shared_ptr<const mpq_class> big_;
};

std::ostream& operator<<(std::ostream& os, const Rational& q);

Rational abs(const Rational& q);
inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline Rational clamp01(const Rational& q) {
  if (q.sign() < 0) return Rational::zero();
  if (q > Rational::one()) return Rational::one();
  return q;
}
inline bool in_unit_interval(const Rational& q) { return q.sign() >= 0 && q <= Rational::one(); }

}  // namespace metrika

template <>
struct std::hash<metrika::Rational> {
  std::size_t operator()(const metrika::Rational& q) const noexcept { return q.hash(); }
};
