#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "osa/error.hpp"

namespace osa {

/// Element of the two-element field.
struct Gf2 {
  std::uint8_t v = 0;

  constexpr Gf2() = default;
  constexpr explicit Gf2(long long x) : v(static_cast<std::uint8_t>(x & 1)) {}

  friend constexpr Gf2 operator+(Gf2 a, Gf2 b) { return from_bit(a.v ^ b.v); }
  friend constexpr Gf2 operator-(Gf2 a, Gf2 b) { return from_bit(a.v ^ b.v); }
  friend constexpr Gf2 operator*(Gf2 a, Gf2 b) { return from_bit(a.v & b.v); }
  friend Gf2 operator/(Gf2 a, Gf2 b) {
    if (b.v == 0) throw Error("GF(2): division by zero");
    return a;
  }
  constexpr Gf2 operator-() const { return *this; }
  Gf2& operator+=(Gf2 o) { v ^= o.v; return *this; }
  Gf2& operator-=(Gf2 o) { v ^= o.v; return *this; }
  Gf2& operator*=(Gf2 o) { v &= o.v; return *this; }
  friend constexpr bool operator==(Gf2 a, Gf2 b) { return a.v == b.v; }
  friend constexpr bool operator!=(Gf2 a, Gf2 b) { return a.v != b.v; }
  friend std::ostream& operator<<(std::ostream& os, Gf2 a) { return os << int(a.v); }

 private:
  static constexpr Gf2 from_bit(int bit) {
    Gf2 r;
    r.v = static_cast<std::uint8_t>(bit);
    return r;
  }
};

using Rational = mpq_class;

enum class FieldTag { Q, GF2 };

inline std::string_view field_name(FieldTag f) { return f == FieldTag::Q ? "Q" : "GF2"; }

inline FieldTag parse_field(std::string_view s) {
  if (s == "Q" || s == "q" || s == "QQ") return FieldTag::Q;
  if (s == "GF2" || s == "gf2" || s == "Z2" || s == "F2") return FieldTag::GF2;
  throw Error("unknown field '" + std::string(s) + "' (expected Q or GF2)");
}

template <class F>
struct FieldTraits;

template <>
struct FieldTraits<Gf2> {
  static constexpr FieldTag tag = FieldTag::GF2;
  static Gf2 from_int(long long x) { return Gf2(x); }
  static bool is_zero(const Gf2& x) { return x.v == 0; }
  static std::string to_string(const Gf2& x) { return x.v ? "1" : "0"; }
};

template <>
struct FieldTraits<Rational> {
  static constexpr FieldTag tag = FieldTag::Q;
  static Rational from_int(long long x) { return Rational(static_cast<long>(x)); }
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static std::string to_string(const Rational& x) { return x.get_str(); }
};

template <class F>
inline bool is_zero(const F& x) {
  return FieldTraits<F>::is_zero(x);
}

template <class F>
inline F from_int(long long x) {
  return FieldTraits<F>::from_int(x);
}

/// Builds num/den in lowest terms with a positive denominator.
inline Rational make_rational(long num, long den) {
  if (den == 0) throw Error("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Parses "p", "p/q" or a JSON-style integer string into a canonical rational.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  Rational r;
  if (r.set_str(s, 10) != 0) throw Error("cannot parse rational '" + s + "'");
  if (sgn(r.get_den()) == 0) throw Error("rational with zero denominator: '" + s + "'");
  r.canonicalize();
  return r;
}

}  // namespace osa
