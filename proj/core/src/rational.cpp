#include "metrika/rational.hpp"

#include <cctype>
#include <limits>
#include <numeric>
#include <ostream>

#include "metrika/error.hpp"

namespace metrika {

namespace {

__extension__ typedef __int128 i128;
__extension__ typedef unsigned __int128 u128;

constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();

bool fits(i128 v) { return v <= kMax && v >= -kMax; }

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

mpz_class to_mpz(i128 v) {
  const bool negative = v < 0;
  u128 u = negative ? static_cast<u128>(-(v + 1)) + 1
                      : static_cast<u128>(v);
  mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
  mpz_class out = (hi << 64) + lo;
  return negative ? mpz_class(-out) : out;
}

mpz_class to_mpz64(std::int64_t v) { return to_mpz(static_cast<i128>(v)); }

bool mpz_fits_int64(const mpz_class& z) {
  static const mpz_class hi = to_mpz64(kMax);
  static const mpz_class lo = to_mpz64(-kMax);
  return z <= hi && z >= lo;
}

std::int64_t mpz_to_int64(const mpz_class& z) {
  // mpz_get_si is only guaranteed for long; long is 64-bit on every supported target.
  static_assert(sizeof(long) == 8);
  return z.get_si();
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator");
  i128 n = num;
  i128 d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const i128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  if (fits(n) && fits(d)) {
    num_ = static_cast<std::int64_t>(n);
    den_ = static_cast<std::int64_t>(d);
  } else {
    *this = from_mpq(mpq_class(to_mpz(n), to_mpz(d)));
  }
}

Rational::Rational(const mpq_class& value) { *this = from_mpq(value); }

Rational Rational::from_mpq(mpq_class value) {
  value.canonicalize();
  Rational out;
  if (mpz_fits_int64(value.get_num()) && mpz_fits_int64(value.get_den())) {
    out.num_ = mpz_to_int64(value.get_num());
    out.den_ = mpz_to_int64(value.get_den());
  } else {
    out.num_ = 0;
    out.den_ = 1;
    out.big_ = std::make_shared<const mpq_class>(std::move(value));
  }
  return out;
}

mpq_class Rational::to_mpq() const {
  if (big_) return *big_;
  return mpq_class(to_mpz64(num_), to_mpz64(den_));
}

mpz_class Rational::numerator() const { return big_ ? mpz_class(big_->get_num()) : to_mpz64(num_); }
mpz_class Rational::denominator() const { return big_ ? mpz_class(big_->get_den()) : to_mpz64(den_); }

int Rational::sign() const noexcept {
  if (big_) return sgn(*big_);
  return (num_ > 0) - (num_ < 0);
}

double Rational::to_double() const {
  if (big_) return big_->get_d();
  return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::to_string() const {
  if (big_) return big_->get_str();
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const {
  if (big_) return from_mpq(-*big_);
  if (num_ == std::numeric_limits<std::int64_t>::min()) return from_mpq(-to_mpq());
  Rational out;
  out.num_ = -num_;
  out.den_ = den_;
  return out;
}

Rational operator+(const Rational& a, const Rational& b) {
  if (a.big_ || b.big_) return Rational::from_mpq(a.to_mpq() + b.to_mpq());
  if (a.den_ == b.den_) {
    const i128 n = static_cast<i128>(a.num_) + b.num_;
    if (a.den_ == 1 && fits(n)) return Rational(static_cast<std::int64_t>(n));
    const i128 g = gcd128(n, a.den_);
    const i128 rn = g > 1 ? n / g : n;
    const i128 rd = g > 1 ? a.den_ / g : a.den_;
    if (fits(rn)) {
      Rational out;
      out.num_ = static_cast<std::int64_t>(rn);
      out.den_ = static_cast<std::int64_t>(rd);
      return out;
    }
    return Rational::from_mpq(a.to_mpq() + b.to_mpq());
  }
  const std::int64_t g = std::gcd(a.den_, b.den_);
  const i128 bd = b.den_ / g;
  const i128 ad = a.den_ / g;
  const i128 n = static_cast<i128>(a.num_) * bd + static_cast<i128>(b.num_) * ad;
  const i128 d = static_cast<i128>(a.den_) * bd;
  // d fits in 127 bits; n may overflow only for huge inputs, guarded below.
  const i128 h = gcd128(n, d);
  const i128 rn = h > 1 ? n / h : n;
  const i128 rd = h > 1 ? d / h : d;
  if (fits(rn) && fits(rd)) {
    Rational out;
    out.num_ = static_cast<std::int64_t>(rn);
    out.den_ = static_cast<std::int64_t>(rd);
    return out;
  }
  return Rational::from_mpq(a.to_mpq() + b.to_mpq());
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  if (a.big_ || b.big_) return Rational::from_mpq(a.to_mpq() * b.to_mpq());
  const std::int64_t g1 = std::gcd(a.num_, b.den_);
  const std::int64_t g2 = std::gcd(b.num_, a.den_);
  const i128 n = static_cast<i128>(g1 ? a.num_ / g1 : a.num_) * (g2 ? b.num_ / g2 : b.num_);
  const i128 d = static_cast<i128>(g2 ? a.den_ / g2 : a.den_) * (g1 ? b.den_ / g1 : b.den_);
  if (n == 0) return Rational();
  if (fits(n) && fits(d)) {
    Rational out;
    out.num_ = static_cast<std::int64_t>(n);
    out.den_ = static_cast<std::int64_t>(d);
    return out;
  }
  return Rational::from_mpq(a.to_mpq() * b.to_mpq());
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.sign() == 0) throw Error(ErrorCode::InvalidArgument, "division by zero");
  if (a.big_ || b.big_) return Rational::from_mpq(a.to_mpq() / b.to_mpq());
  Rational inv;
  inv.num_ = b.num_ < 0 ? -b.den_ : b.den_;
  inv.den_ = b.num_ < 0 ? -b.num_ : b.num_;
  return a * inv;
}

bool operator==(const Rational& a, const Rational& b) noexcept {
  if (a.big_ || b.big_) {
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false;  // canonical demotion: a big value never fits the inline form
  }
  return a.num_ == b.num_ && a.den_ == b.den_;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
  if (a.big_ || b.big_) {
    const int c = cmp(a.to_mpq(), b.to_mpq());
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
  if (a.den_ == b.den_) return a.num_ <=> b.num_;
  const i128 lhs = static_cast<i128>(a.num_) * b.den_;
  const i128 rhs = static_cast<i128>(b.num_) * a.den_;
  return lhs < rhs ? std::strong_ordering::less
                   : (lhs > rhs ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::size_t Rational::hash() const noexcept {
  if (big_) return std::hash<std::string>{}(big_->get_str());
  const std::size_t h1 = std::hash<std::int64_t>{}(num_);
  const std::size_t h2 = std::hash<std::int64_t>{}(den_);
  return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
}

Rational abs(const Rational& q) { return q.sign() < 0 ? -q : q; }

std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.to_string(); }

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw Error(ErrorCode::FormatError, "malformed rational '" + std::string(whole) + "'");
  mpz_class z(std::string(s), 10);
  return negative ? mpz_class(-z) : z;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw Error(ErrorCode::FormatError, "empty rational literal");

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const mpz_class num = parse_integer(text.substr(0, slash), text);
    std::string_view den_text = text.substr(slash + 1);
    if (!all_digits(den_text)) throw Error(ErrorCode::FormatError, "malformed rational '" + std::string(text) + "'");
    const mpz_class den(std::string(den_text), 10);
    if (den == 0) throw Error(ErrorCode::FormatError, "zero denominator in '" + std::string(text) + "'");
    return from_mpq(mpq_class(num, den));
  }

  std::string_view mantissa = text;
  long exponent = 0;
  if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = text.substr(0, e);
    const mpz_class ez = parse_integer(text.substr(e + 1), text);
    if (!ez.fits_slong_p() || abs(ez) > 4096)
      throw Error(ErrorCode::FormatError, "exponent out of range in '" + std::string(text) + "'");
    exponent = ez.get_si();
  }

  bool negative = false;
  if (!mantissa.empty() && (mantissa.front() == '-' || mantissa.front() == '+')) {
    negative = mantissa.front() == '-';
    mantissa.remove_prefix(1);
  }
  std::string digits;
  long frac_len = 0;
  if (const auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    const std::string_view int_part = mantissa.substr(0, dot);
    const std::string_view frac_part = mantissa.substr(dot + 1);
    if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
        (!frac_part.empty() && !all_digits(frac_part)))
      throw Error(ErrorCode::FormatError, "malformed decimal '" + std::string(text) + "'");
    digits = std::string(int_part) + std::string(frac_part);
    frac_len = static_cast<long>(frac_part.size());
  } else {
    if (!all_digits(mantissa)) throw Error(ErrorCode::FormatError, "malformed rational '" + std::string(text) + "'");
    digits = std::string(mantissa);
  }

  mpz_class num(digits, 10);
  if (negative) num = -num;
  mpz_class den = 1;
  const long scale = exponent - frac_len;
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  if (scale < 0)
    den = pow10;
  else
    num *= pow10;
  return from_mpq(mpq_class(num, den));
}

}  // namespace metrika
