#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "osa/error.hpp"

namespace osa {

/// Integer Laurent polynomial in two variables s and t.
class LaurentPoly2 {
 public:
  using Exponent = std::pair<int, int>;  // (s, t)

  enum class Order {
    SDescTAsc,  // s-exponent descending, then t ascending
    TDesc,      // t descending (ordinary univariate convention)
  };

  LaurentPoly2() = default;
  LaurentPoly2(long c) { add_term(0, 0, mpz_class(c)); }  // NOLINT: implicit constants are convenient

  static LaurentPoly2 monomial(int s_exp, int t_exp, const mpz_class& c = 1) {
    LaurentPoly2 p;
    p.add_term(s_exp, t_exp, c);
    return p;
  }
  static LaurentPoly2 t_pow(int k) { return monomial(0, k); }
  static LaurentPoly2 s_pow(int k) { return monomial(k, 0); }

  /// sum_k coeffs[k] t^k
  static LaurentPoly2 from_t_coeffs(const std::vector<long>& coeffs) {
    LaurentPoly2 p;
    for (std::size_t k = 0; k < coeffs.size(); ++k) p.add_term(0, static_cast<int>(k), mpz_class(coeffs[k]));
    return p;
  }

  void add_term(int s_exp, int t_exp, const mpz_class& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace({s_exp, t_exp}, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  const std::map<Exponent, mpz_class>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  mpz_class coeff(int s_exp, int t_exp) const {
    auto it = terms_.find({s_exp, t_exp});
    return it == terms_.end() ? mpz_class(0) : it->second;
  }

  bool has_s() const {
    for (const auto& [e, c] : terms_)
      if (e.first != 0) return true;
    return false;
  }

  /// Coefficients of t^0..t^deg for an s-free polynomial with no negative powers.
  std::vector<mpz_class> t_coeffs() const {
    int deg = -1;
    for (const auto& [e, c] : terms_) {
      if (e.first != 0 || e.second < 0) throw Error("t_coeffs: not an ordinary polynomial in t");
      deg = std::max(deg, e.second);
    }
    std::vector<mpz_class> out(deg + 1, 0);
    for (const auto& [e, c] : terms_) out[e.second] = c;
    return out;
  }

  LaurentPoly2& operator+=(const LaurentPoly2& o) {
    for (const auto& [e, c] : o.terms_) add_term(e.first, e.second, c);
    return *this;
  }
  LaurentPoly2& operator-=(const LaurentPoly2& o) {
    for (const auto& [e, c] : o.terms_) add_term(e.first, e.second, -c);
    return *this;
  }
  friend LaurentPoly2 operator+(LaurentPoly2 a, const LaurentPoly2& b) { return a += b; }
  friend LaurentPoly2 operator-(LaurentPoly2 a, const LaurentPoly2& b) { return a -= b; }
  LaurentPoly2 operator-() const { return LaurentPoly2() - *this; }

  friend LaurentPoly2 operator*(const LaurentPoly2& a, const LaurentPoly2& b) {
    LaurentPoly2 r;
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) r.add_term(ea.first + eb.first, ea.second + eb.second, ca * cb);
    return r;
  }
  LaurentPoly2& operator*=(const LaurentPoly2& o) { return *this = *this * o; }

  LaurentPoly2 pow(unsigned k) const {
    LaurentPoly2 r(1), base = *this;
    while (k) {
      if (k & 1) r *= base;
      base *= base;
      k >>= 1;
    }
    return r;
  }

  friend bool operator==(const LaurentPoly2& a, const LaurentPoly2& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const LaurentPoly2& a, const LaurentPoly2& b) { return !(a == b); }

  /// Exact value at integer points; negative powers need a unit argument.
  mpq_class evaluate(long s, long t) const {
    mpq_class total = 0;
    for (const auto& [e, c] : terms_) total += c * int_power(s, e.first) * int_power(t, e.second);
    return total;
  }

  /// Replaces s by t, giving the single-variable total-degree polynomial.
  LaurentPoly2 collapse_s_to_t() const {
    LaurentPoly2 r;
    for (const auto& [e, c] : terms_) r.add_term(0, e.first + e.second, c);
    return r;
  }

  /// Composes a polynomial in t with x: sum c_k t^k  ->  sum c_k x^k.
  LaurentPoly2 compose_t(const LaurentPoly2& x) const {
    LaurentPoly2 r;
    for (const auto& [e, c] : terms_) {
      if (e.first != 0 || e.second < 0) throw Error("compose_t: expects an ordinary polynomial in t");
      r += monomial(0, 0, c) * x.pow(static_cast<unsigned>(e.second));
    }
    return r;
  }

  std::string to_string(Order order = Order::SDescTAsc) const {
    if (terms_.empty()) return "0";
    std::vector<std::pair<Exponent, mpz_class>> sorted(terms_.begin(), terms_.end());
    std::sort(sorted.begin(), sorted.end(), [order](const auto& a, const auto& b) {
      if (order == Order::TDesc)
        return std::make_pair(a.first.second, a.first.first) > std::make_pair(b.first.second, b.first.first);
      if (a.first.first != b.first.first) return a.first.first > b.first.first;
      return a.first.second < b.first.second;
    });
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : sorted) {
      mpz_class mag = abs(c);
      if (first) {
        if (c < 0) os << '-';
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      first = false;
      const bool constant = e.first == 0 && e.second == 0;
      if (mag != 1 || constant) os << mag.get_str();
      os << power_string('s', e.first) << power_string('t', e.second);
    }
    return os.str();
  }

 private:
  static std::string power_string(char var, int k) {
    if (k == 0) return "";
    if (k == 1) return std::string(1, var);
    return std::string(1, var) + "^" + std::to_string(k);
  }

  static mpq_class int_power(long base, int k) {
    if (k == 0) return 1;
    if (base == 0) {
      if (k < 0) throw Error("LaurentPoly2::evaluate: negative power of zero");
      return 0;
    }
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), mpz_class(base).get_mpz_t(), static_cast<unsigned long>(k < 0 ? -k : k));
    if (k > 0) return mpq_class(r);
    mpq_class q(1, 1);
    q /= mpq_class(r);
    return q;
  }

  std::map<Exponent, mpz_class> terms_;
};

}  // namespace osa
