#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "osa/error.hpp"
#include "osa/field.hpp"
#include "osa/laurent.hpp"

namespace osa {

template <class F>
F convert(const Rational& r);

template <>
inline Rational convert<Rational>(const Rational& r) {
  return r;
}

template <>
inline Gf2 convert<Gf2>(const Rational& r) {
  if (mpz_even_p(r.get_den().get_mpz_t())) throw ValidationError("coefficient " + r.get_str() + " has no image in GF(2)");
  return Gf2(mpz_odd_p(r.get_num().get_mpz_t()) ? 1 : 0);
}

template <class F>
using Sparse = std::map<std::size_t, F>;

template <class F>
void add_into(Sparse<F>& v, std::size_t k, const F& c) {
  if (is_zero(c)) return;
  auto [it, fresh] = v.try_emplace(k, c);
  if (!fresh) {
    it->second += c;
    if (is_zero(it->second)) v.erase(it);
  }
}

/// Cohomology of a manifold as raw data: a graded basis, cup structure
/// constants and an optional diagonal class, with rational coefficients.
struct ManifoldData {
  int real_dim = 0;
  FieldTag field = FieldTag::Q;
  std::vector<std::string> names;
  std::vector<int> degrees;
  std::map<std::pair<std::size_t, std::size_t>, std::map<std::size_t, Rational>> cup;
  std::optional<std::vector<std::tuple<Rational, std::size_t, std::size_t>>> diagonal_class;
  bool zero_diagonal = false;
  bool projective_complex = false;
  bool has_ring = true;  // false when only Betti numbers were supplied

  std::size_t dim() const { return names.size(); }

  std::vector<long> betti() const {
    std::vector<long> b(real_dim + 1, 0);
    for (int d : degrees) ++b.at(d);
    return b;
  }

  LaurentPoly2 poincare() const { return LaurentPoly2::from_t_coeffs(betti()); }

  long euler_characteristic() const {
    long chi = 0;
    for (int d : degrees) chi += d % 2 ? -1 : 1;
    return chi;
  }

  std::size_t unit() const {
    for (std::size_t i = 0; i < degrees.size(); ++i)
      if (degrees[i] == 0) return i;
    throw ValidationError("manifold: no degree-0 class");
  }

  std::optional<std::size_t> top_class() const {
    for (std::size_t i = 0; i < degrees.size(); ++i)
      if (degrees[i] == real_dim) return i;
    return std::nullopt;
  }

  std::size_t index_of(const std::string& name) const {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw ValidationError("manifold: unknown basis element '" + name + "'");
    return static_cast<std::size_t>(it - names.begin());
  }

  /// Manifold known only through its Betti numbers; no product structure.
  static ManifoldData from_betti(int m, const std::vector<long>& betti, FieldTag field) {
    ManifoldData M;
    M.real_dim = m;
    M.field = field;
    M.has_ring = false;
    for (std::size_t d = 0; d < betti.size(); ++d)
      for (long k = 0; k < betti[d]; ++k) {
        M.names.push_back("x" + std::to_string(d) + "_" + std::to_string(k));
        M.degrees.push_back(static_cast<int>(d));
      }
    if (static_cast<int>(betti.size()) > m + 1) throw ValidationError("manifold: Betti vector longer than dimension");
    M.has_ring = M.dim() == 1 && M.degrees[0] == 0;
    return M;
  }
};

namespace detail {

inline Rational json_scalar(const nlohmann::json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw ValidationError("expected an integer or a \"p/q\" string, got " + j.dump());
}

}  // namespace detail

/// Fills unit products and graded-symmetric partners, then checks the ring
/// axioms and the diagonal class. Throws ValidationError with the offending data.
void complete_and_validate(ManifoldData& M);

inline ManifoldData manifold_from_json(const nlohmann::json& j) {
  ManifoldData M;
  try {
    M.real_dim = j.at("real_dim").get<int>();
    if (M.real_dim < 0) throw ValidationError("manifold: negative dimension");
    M.field = parse_field(j.value("field", std::string("Q")));
    M.zero_diagonal = j.value("zero_diagonal", false);
    M.projective_complex = j.value("projective_complex", false);
    if (!j.contains("basis")) {
      auto betti = j.at("betti").get<std::vector<long>>();
      auto out = ManifoldData::from_betti(M.real_dim, betti, M.field);
      out.zero_diagonal = M.zero_diagonal;
      out.projective_complex = M.projective_complex;
      return out;
    }
    for (const auto& b : j.at("basis")) {
      M.names.push_back(b.at("name").get<std::string>());
      M.degrees.push_back(b.at("deg").get<int>());
    }
    if (j.contains("cup"))
      for (const auto& entry : j.at("cup")) {
        const std::size_t a = M.index_of(entry.at("i").get<std::string>());
        const std::size_t b = M.index_of(entry.at("j").get<std::string>());
        auto& out = M.cup[{a, b}];
        for (const auto& term : entry.at("out")) {
          const Rational c = detail::json_scalar(term.at(0));
          out[M.index_of(term.at(1).get<std::string>())] += c;
        }
      }
    if (j.contains("diagonal_class")) {
      std::vector<std::tuple<Rational, std::size_t, std::size_t>> diag;
      for (const auto& term : j.at("diagonal_class"))
        diag.emplace_back(detail::json_scalar(term.at(0)), M.index_of(term.at(1).get<std::string>()),
                          M.index_of(term.at(2).get<std::string>()));
      M.diagonal_class = std::move(diag);
    }
    if (j.contains("betti")) {
      auto given = j.at("betti").get<std::vector<long>>();
      auto mine = M.betti();
      const std::size_t len = std::max(given.size(), mine.size());
      given.resize(len, 0);
      mine.resize(len, 0);
      if (given != mine) throw ValidationError("manifold: Betti numbers disagree with the basis degrees");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("manifold JSON: ") + e.what());
  }
  complete_and_validate(M);
  return M;
}

/// Cohomology ring with coefficients in F, plus tensor powers with the
/// Koszul sign rule.
template <class F>
class CohomologyRing {
 public:
  explicit CohomologyRing(const ManifoldData& M) : data_(M) {
    if (!M.has_ring) throw ValidationError("manifold: cup product data required");
    const std::size_t h = M.dim();
    table_.assign(h * h, {});
    for (const auto& [key, out] : M.cup)
      for (const auto& [k, c] : out) add_into(table_[key.first * h + key.second], k, convert<F>(c));
    unit_ = M.unit();
    if (M.diagonal_class && !M.zero_diagonal)
      for (const auto& [c, a, b] : *M.diagonal_class) add_into(diagonal_, a * h + b, convert<F>(c));
    // Euler class of the tangent bundle: image of the diagonal class under the cup product
    for (const auto& [ab, c] : diagonal_)
      for (const auto& [k, d] : cup(ab / h, ab % h)) add_into(euler_class_, k, F(c * d));
  }

  const ManifoldData& data() const { return data_; }
  std::size_t dim() const { return data_.dim(); }
  int degree(std::size_t i) const { return data_.degrees[i]; }
  int real_dim() const { return data_.real_dim; }
  std::size_t unit() const { return unit_; }
  const Sparse<F>& cup(std::size_t a, std::size_t b) const { return table_[a * dim() + b]; }
  /// Diagonal class as coefficients of basis pairs a * dim + b.
  const Sparse<F>& diagonal() const { return diagonal_; }
  const Sparse<F>& euler_class() const { return euler_class_; }
  bool has_diagonal() const { return !diagonal_.empty(); }

 private:
  ManifoldData data_;
  std::vector<Sparse<F>> table_;
  std::size_t unit_ = 0;
  Sparse<F> diagonal_;
  Sparse<F> euler_class_;
};

/// H^{(x) slots} with basis tuples indexed in mixed radix, slot 0 most significant.
template <class F>
class TensorPower {
 public:
  TensorPower(const CohomologyRing<F>& ring, int slots) : ring_(&ring), slots_(slots) {
    size_ = 1;
    for (int i = 0; i < slots; ++i) size_ *= ring.dim();
  }

  int slots() const { return slots_; }
  std::size_t size() const { return size_; }

  std::vector<std::size_t> decode(std::size_t index) const {
    std::vector<std::size_t> t(slots_);
    for (int i = slots_; i-- > 0;) {
      t[i] = index % ring_->dim();
      index /= ring_->dim();
    }
    return t;
  }

  std::size_t encode(const std::vector<std::size_t>& t) const {
    std::size_t index = 0;
    for (std::size_t x : t) index = index * ring_->dim() + x;
    return index;
  }

  int degree(std::size_t index) const {
    int d = 0;
    for (std::size_t x : decode(index)) d += ring_->degree(x);
    return d;
  }

  std::size_t unit() const { return encode(std::vector<std::size_t>(slots_, ring_->unit())); }

  /// Basis element x placed in one slot, unit elsewhere.
  std::size_t place(int slot, std::size_t x) const {
    std::vector<std::size_t> t(slots_, ring_->unit());
    t[slot] = x;
    return encode(t);
  }

  /// Product of two basis tuples: (a1 (x) ... )(b1 (x) ...) with Koszul sign.
  Sparse<F> multiply(std::size_t a, std::size_t b) const {
    const auto ta = decode(a), tb = decode(b);
    int swaps = 0;
    for (int i = 0; i < slots_; ++i)
      for (int j = 0; j < i; ++j) swaps += ring_->degree(ta[i]) * ring_->degree(tb[j]);
    Sparse<F> acc{{0, swaps % 2 ? -F(1) : F(1)}};
    for (int i = 0; i < slots_; ++i) {
      const auto& prod = ring_->cup(ta[i], tb[i]);
      Sparse<F> next;
      for (const auto& [idx, c] : acc)
        for (const auto& [k, d] : prod) add_into(next, idx * ring_->dim() + k, F(c * d));
      acc = std::move(next);
      if (acc.empty()) break;
    }
    return acc;
  }

  Sparse<F> multiply(const Sparse<F>& x, const Sparse<F>& y) const {
    Sparse<F> out;
    for (const auto& [a, ca] : x)
      for (const auto& [b, cb] : y)
        for (const auto& [k, c] : multiply(a, b)) add_into(out, k, F(ca * cb * c));
    return out;
  }

 private:
  const CohomologyRing<F>* ring_;
  int slots_;
  std::size_t size_;
};

inline void complete_and_validate(ManifoldData& M) {
  const std::size_t h = M.dim();
  const int m = M.real_dim;
  if (h == 0) throw ValidationError("manifold: empty basis");
  for (std::size_t i = 0; i < h; ++i)
    if (M.degrees[i] < 0 || M.degrees[i] > m)
      throw ValidationError("manifold: class " + M.names[i] + " has degree outside [0, m]");
  const std::size_t one = M.unit();
  const bool gf2 = M.field == FieldTag::GF2;
  for (std::size_t i = 0; i < h; ++i) {
    M.cup.try_emplace({one, i}, std::map<std::size_t, Rational>{{i, 1}});
    M.cup.try_emplace({i, one}, std::map<std::size_t, Rational>{{i, 1}});
  }
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < h; ++j) {
      if (M.cup.count({i, j}) || !M.cup.count({j, i})) continue;
      auto out = M.cup.at({j, i});
      if (!gf2 && (M.degrees[i] * M.degrees[j]) % 2)
        for (auto& [k, c] : out) c = -c;
      M.cup[{i, j}] = out;
    }
  for (auto it = M.cup.begin(); it != M.cup.end();) {
    for (auto t = it->second.begin(); t != it->second.end();) t = (t->second == 0) ? it->second.erase(t) : std::next(t);
    it = it->second.empty() ? M.cup.erase(it) : std::next(it);
  }
  for (const auto& [key, out] : M.cup)
    for (const auto& [k, c] : out)
      if (M.degrees[k] != M.degrees[key.first] + M.degrees[key.second])
        throw ValidationError("manifold: cup " + M.names[key.first] + "*" + M.names[key.second] + " is not degree additive");
  if (M.field == FieldTag::Q && !M.diagonal_class && !M.zero_diagonal)
    throw ValidationError("manifold: over Q a diagonal_class or zero_diagonal is required");
  if (M.diagonal_class)
    for (const auto& [c, a, b] : *M.diagonal_class)
      if (M.degrees[a] + M.degrees[b] != m)
        throw ValidationError("manifold: diagonal class term " + M.names[a] + "x" + M.names[b] + " is not of degree m");

  auto check = [&](auto tag) {
    using F = decltype(tag);
    const CohomologyRing<F> R(M);
    auto cup_vec = [&](const Sparse<F>& x, std::size_t b, bool right) {
      Sparse<F> out;
      for (const auto& [a, c] : x)
        for (const auto& [k, d] : right ? R.cup(a, b) : R.cup(b, a)) add_into(out, k, F(c * d));
      return out;
    };
    for (std::size_t a = 0; a < h; ++a)
      for (std::size_t b = 0; b < h; ++b) {
        Sparse<F> ab = R.cup(a, b), ba = R.cup(b, a);
        if (!gf2 && (M.degrees[a] * M.degrees[b]) % 2)
          for (auto& [k, c] : ba) c = -c;
        if (ab != ba)
          throw ValidationError("manifold: cup product not graded commutative on " + M.names[a] + ", " + M.names[b]);
        for (std::size_t c = 0; c < h; ++c) {
          Sparse<F> left = cup_vec(R.cup(a, b), c, true);
          Sparse<F> right = cup_vec(R.cup(b, c), a, false);
          if (left != right)
            throw ValidationError("manifold: cup product not associative on " + M.names[a] + ", " + M.names[b] + ", " +
                                  M.names[c]);
        }
      }
    if (!R.has_diagonal()) return;
    const TensorPower<F> T2(R, 2);
    Sparse<F> delta;
    for (const auto& [ab, c] : R.diagonal()) delta[ab] = c;
    for (std::size_t x = 0; x < h; ++x) {
      const auto left = T2.multiply(delta, Sparse<F>{{T2.place(0, x), F(1)}});
      const auto right = T2.multiply(delta, Sparse<F>{{T2.place(1, x), F(1)}});
      if (left != right)
        throw ValidationError("manifold: diagonal class is not symmetric under multiplication by " + M.names[x]);
    }
    if (M.projective_complex) {
      const auto top = M.top_class();
      if (!top) throw ValidationError("manifold: projective_complex requires a top-degree class");
      Sparse<F> expected;
      add_into(expected, *top, from_int<F>(M.euler_characteristic()));
      if (R.euler_class() != expected)
        throw ValidationError("manifold: diagonal class does not restrict to Euler characteristic times the top class");
    }
  };
  if (gf2) check(Gf2{});
  else check(Rational{});
}

inline nlohmann::json manifold_to_json(const ManifoldData& M) {
  nlohmann::json j;
  j["real_dim"] = M.real_dim;
  j["field"] = std::string(field_name(M.field));
  j["betti"] = M.betti();
  if (!M.has_ring) return j;
  nlohmann::json basis = nlohmann::json::array();
  for (std::size_t i = 0; i < M.dim(); ++i) basis.push_back({{"name", M.names[i]}, {"deg", M.degrees[i]}});
  j["basis"] = basis;
  nlohmann::json cup = nlohmann::json::array();
  for (const auto& [key, out] : M.cup) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [k, c] : out) terms.push_back({c.get_str(), M.names[k]});
    cup.push_back({{"i", M.names[key.first]}, {"j", M.names[key.second]}, {"out", terms}});
  }
  j["cup"] = cup;
  if (M.diagonal_class) {
    nlohmann::json d = nlohmann::json::array();
    for (const auto& [c, a, b] : *M.diagonal_class) d.push_back({c.get_str(), M.names[a], M.names[b]});
    j["diagonal_class"] = d;
  }
  j["zero_diagonal"] = M.zero_diagonal;
  j["projective_complex"] = M.projective_complex;
  return j;
}

}  // namespace osa
