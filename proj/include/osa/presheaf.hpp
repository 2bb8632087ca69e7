#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "osa/error.hpp"
#include "osa/field.hpp"
#include "osa/graph.hpp"
#include "osa/manifold.hpp"
#include "osa/matrix.hpp"
#include "osa/poset.hpp"

namespace osa {

/// Finite graded vector space given by a basis with degrees.
struct GradedSpace {
  std::vector<int> degrees;
  std::vector<std::string> labels;

  std::size_t dim() const { return degrees.size(); }

  std::map<int, std::size_t> dims() const {
    std::map<int, std::size_t> d;
    for (int x : degrees) ++d[x];
    return d;
  }

  static GradedSpace from_degrees(std::vector<int> degrees) {
    GradedSpace s;
    for (std::size_t i = 0; i < degrees.size(); ++i) s.labels.push_back("b" + std::to_string(i));
    s.degrees = std::move(degrees);
    return s;
  }
};

template <class F>
struct ProductTerm {
  std::size_t element;
  std::size_t index;
  F coeff;
};

/// Vectors spread over several presheaf stalks, keyed by (element, index).
template <class F>
using Chain = std::map<std::pair<std::size_t, std::size_t>, F>;

template <class F>
void add_into(Chain<F>& v, std::pair<std::size_t, std::size_t> key, const F& c) {
  if (is_zero(c)) return;
  auto [it, fresh] = v.try_emplace(key, c);
  if (!fresh) {
    it->second += c;
    if (is_zero(it->second)) v.erase(it);
  }
}

/// Presheaf of graded vector spaces on a ranked poset. Structure maps are
/// stored on covers; longer maps are composites along a chain.
template <class F>
class Presheaf {
 public:
  /// (p, i) * (q, j) as a list of terms in the stalks above p and q.
  using Product = std::function<std::vector<ProductTerm<F>>(std::size_t, std::size_t, std::size_t, std::size_t)>;

  Presheaf(std::shared_ptr<const RankedPoset> poset, std::vector<GradedSpace> spaces)
      : poset_(std::move(poset)), spaces_(std::move(spaces)) {
    if (spaces_.size() != poset_->size()) throw ValidationError("presheaf: one space per poset element required");
    for (const auto& c : poset_->covers())
      maps_.emplace(std::make_pair(c.upper, c.lower), Matrix<F>(spaces_[c.lower].dim(), spaces_[c.upper].dim()));
  }

  const RankedPoset& poset() const { return *poset_; }
  const std::shared_ptr<const RankedPoset>& poset_ptr() const { return poset_; }
  const GradedSpace& space(std::size_t p) const { return spaces_.at(p); }

  void set_cover_map(std::size_t upper, std::size_t lower, Matrix<F> m) {
    auto it = maps_.find({upper, lower});
    if (it == maps_.end()) throw Error("presheaf: (" + poset_->label(upper) + ", " + poset_->label(lower) + ") is not a cover");
    if (m.rows() != space(lower).dim() || m.cols() != space(upper).dim())
      throw ValidationError("presheaf: structure map for (" + poset_->label(upper) + ", " + poset_->label(lower) +
                            ") has the wrong shape");
    it->second = std::move(m);
  }

  const Matrix<F>& cover_map(std::size_t upper, std::size_t lower) const {
    auto it = maps_.find({upper, lower});
    if (it == maps_.end()) throw Error("presheaf: (" + poset_->label(upper) + ", " + poset_->label(lower) + ") is not a cover");
    return it->second;
  }

  /// f_{p,q} along the chain that always steps to the first cover above q.
  Matrix<F> map(std::size_t p, std::size_t q) const {
    if (!poset_->leq(q, p)) throw Error("presheaf map: " + poset_->label(q) + " is not below " + poset_->label(p));
    Matrix<F> acc = Matrix<F>::identity(space(p).dim());
    std::size_t cur = p;
    while (cur != q) {
      std::size_t next = cur;
      for (std::size_t c : poset_->covers_below(cur))
        if (poset_->leq(q, c)) {
          next = c;
          break;
        }
      acc = cover_map(cur, next) * acc;
      cur = next;
    }
    return acc;
  }

  bool monoidal() const { return static_cast<bool>(product_); }
  void set_product(Product prod) { product_ = std::move(prod); }

  std::vector<ProductTerm<F>> product(std::size_t p, std::size_t i, std::size_t q, std::size_t j) const {
    if (!product_) throw Error("presheaf has no monoidal structure");
    return product_(p, i, q, j);
  }

  Chain<F> multiply(const Chain<F>& x, const Chain<F>& y) const {
    Chain<F> out;
    for (const auto& [kx, cx] : x)
      for (const auto& [ky, cy] : y)
        for (const auto& t : product(kx.first, kx.second, ky.first, ky.second))
          add_into(out, {t.element, t.index}, F(cx * cy * t.coeff));
    return out;
  }

  int degree(std::size_t p, std::size_t i) const { return space(p).degrees.at(i); }

  std::size_t total_dim() const {
    std::size_t n = 0;
    for (const auto& s : spaces_) n += s.dim();
    return n;
  }

 private:
  std::shared_ptr<const RankedPoset> poset_;
  std::vector<GradedSpace> spaces_;
  std::map<std::pair<std::size_t, std::size_t>, Matrix<F>> maps_;
  Product product_;
};

/// A on every p <= alpha with identity maps, zero elsewhere.
template <class F>
Presheaf<F> skyscraper(std::shared_ptr<const RankedPoset> P, std::size_t alpha, const GradedSpace& A) {
  std::vector<GradedSpace> spaces(P->size());
  for (std::size_t p = 0; p < P->size(); ++p)
    if (P->leq(p, alpha)) spaces[p] = A;
  Presheaf<F> out(P, std::move(spaces));
  for (const auto& c : P->covers())
    if (P->leq(c.upper, alpha)) out.set_cover_map(c.upper, c.lower, Matrix<F>::identity(A.dim()));
  return out;
}

namespace detail {

template <class F>
Chain<F> apply_on(const Matrix<F>& m, std::size_t target, const Chain<F>& x, std::size_t source) {
  Chain<F> out;
  for (const auto& [k, c] : x) {
    if (k.first != source) continue;
    for (std::size_t r = 0; r < m.rows(); ++r)
      if (!is_zero(m(r, k.second))) add_into(out, {target, r}, F(m(r, k.second) * c));
  }
  return out;
}

template <class F>
std::string chain_string(const RankedPoset& P, const Chain<F>& x) {
  if (x.empty()) return "0";
  std::string s;
  for (const auto& [k, c] : x) {
    if (!s.empty()) s += " + ";
    s += FieldTraits<F>::to_string(c) + "*[" + P.label(k.first) + "#" + std::to_string(k.second) + "]";
  }
  return s;
}

}  // namespace detail

/// All composites f_{p,q} along the canonical chains, checking on the way
/// that every other cover step gives the same map.
template <class F>
class CompositeTable {
 public:
  explicit CompositeTable(const Presheaf<F>& C) : C_(&C) {
    const auto& P = C.poset();
    for (std::size_t p = 0; p < P.size(); ++p) {
      table_[{p, p}] = Matrix<F>::identity(C.space(p).dim());
      const Bits below = P.down(p);
      for (std::size_t q = below.find_first(); q != Bits::npos; q = below.find_next(q)) {
        if (q == p) continue;
        std::optional<Matrix<F>> first;
        for (std::size_t c : P.covers_below(p)) {
          if (!P.leq(q, c)) continue;
          Matrix<F> via = table_.at({c, q}) * C.cover_map(p, c);
          if (!first) {
            first = std::move(via);
          } else if (!(via == *first) && verdict_.ok) {
            verdict_ = Verdict::failure("structure maps are path dependent from " + P.label(p) + " to " + P.label(q) +
                                        " (via " + P.label(c) + ")");
          }
        }
        table_.emplace(std::make_pair(p, q), std::move(*first));
      }
    }
  }

  const Verdict& verdict() const { return verdict_; }
  const Matrix<F>& operator()(std::size_t p, std::size_t q) const { return table_.at({p, q}); }

  Chain<F> apply(std::size_t p, std::size_t q, const Chain<F>& x) const { return detail::apply_on((*this)(p, q), q, x, p); }

 private:
  const Presheaf<F>* C_;
  std::map<std::pair<std::size_t, std::size_t>, Matrix<F>> table_;
  Verdict verdict_;
};

struct PresheafCheckOptions {
  bool associativity = true;
  bool graded_commutativity = false;
};

/// Functoriality, degree preservation and, for monoidal presheaves, grade
/// targeting, compatibility with the structure maps and associativity.
template <class F>
Verdict validate(const Presheaf<F>& C, PresheafCheckOptions opts = {}) {
  const auto& P = C.poset();
  for (const auto& c : P.covers()) {
    const auto& m = C.cover_map(c.upper, c.lower);
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t k = 0; k < m.cols(); ++k)
        if (!is_zero(m(r, k)) && C.degree(c.lower, r) != C.degree(c.upper, k))
          return Verdict::failure("structure map (" + P.label(c.upper) + ", " + P.label(c.lower) + ") does not preserve degree");
  }
  const CompositeTable<F> f(C);
  if (!f.verdict()) return f.verdict();
  if (!C.monoidal()) return {};

  const std::size_t n = P.size();
  auto basis = [&](std::size_t p, std::size_t i) { return Chain<F>{{{p, i}, F(1)}}; };
  auto name = [&](std::size_t p, std::size_t i) { return P.label(p) + "#" + std::to_string(i); };

  std::vector<std::size_t> offset(n + 1, 0);
  for (std::size_t p = 0; p < n; ++p) offset[p + 1] = offset[p] + C.space(p).dim();
  const std::size_t total = offset[n];
  auto gid = [&](const std::pair<std::size_t, std::size_t>& k) { return offset[k.first] + k.second; };
  std::vector<Chain<F>> table(total * total);

  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      const auto targets = min_upper_bounds(P, p, q);
      for (std::size_t i = 0; i < C.space(p).dim(); ++i)
        for (std::size_t j = 0; j < C.space(q).dim(); ++j) {
          auto& out = table[(offset[p] + i) * total + offset[q] + j];
          for (const auto& t : C.product(p, i, q, j)) {
            if (std::find(targets.begin(), targets.end(), t.element) == targets.end())
              return Verdict::failure("product " + name(p, i) + " * " + name(q, j) + " leaves the minimal upper bounds");
            if (t.index >= C.space(t.element).dim() ||
                C.degree(t.element, t.index) != C.degree(p, i) + C.degree(q, j))
              return Verdict::failure("product " + name(p, i) + " * " + name(q, j) + " is not degree additive");
            add_into(out, {t.element, t.index}, t.coeff);
          }
        }
    }

  auto mul = [&](const Chain<F>& x, const Chain<F>& y) {
    Chain<F> out;
    for (const auto& [kx, cx] : x)
      for (const auto& [ky, cy] : y)
        for (const auto& [k, c] : table[gid(kx) * total + gid(ky)]) add_into(out, k, F(cx * cy * c));
    return out;
  };

  for (const auto& c : P.covers()) {
    const std::size_t p = c.upper, q = c.lower;
    for (std::size_t s = 0; s < n; ++s) {
      std::map<std::size_t, std::size_t> lam_left, lam_right;
      try {
        lam_left = canonical_lambda(P, s, p, s, q);
        lam_right = canonical_lambda(P, p, s, q, s);
      } catch (const ValidationError& e) {
        return Verdict::failure(e.what());
      }
      for (std::size_t i = 0; i < C.space(p).dim(); ++i) {
        const Chain<F> fa = f.apply(p, q, basis(p, i));
        for (std::size_t k = 0; k < C.space(s).dim(); ++k) {
          const Chain<F> b = basis(s, k);
          Chain<F> rhs_left, rhs_right;
          for (const auto& [key, coef] : mul(b, basis(p, i)))
            for (const auto& [kk, cc] : f.apply(key.first, lam_left.at(key.first), Chain<F>{{key, coef}}))
              add_into(rhs_left, kk, cc);
          for (const auto& [key, coef] : mul(basis(p, i), b))
            for (const auto& [kk, cc] : f.apply(key.first, lam_right.at(key.first), Chain<F>{{key, coef}}))
              add_into(rhs_right, kk, cc);
          if (mul(b, fa) != rhs_left)
            return Verdict::failure("b*f(a) != f(b*a) for a = " + name(p, i) + ", b = " + name(s, k) + ", cover to " +
                                    P.label(q));
          if (mul(fa, b) != rhs_right)
            return Verdict::failure("f(a)*b != f(a*b) for a = " + name(p, i) + ", b = " + name(s, k) + ", cover to " +
                                    P.label(q));
        }
      }
    }
  }

  if (opts.associativity || opts.graded_commutativity) {
    std::vector<std::pair<std::size_t, std::size_t>> all;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t i = 0; i < C.space(p).dim(); ++i) all.push_back({p, i});
    for (const auto& [p, i] : all)
      for (const auto& [q, j] : all) {
        const Chain<F> xy = mul(basis(p, i), basis(q, j));
        if (opts.graded_commutativity) {
          Chain<F> yx = mul(basis(q, j), basis(p, i));
          if ((C.degree(p, i) * C.degree(q, j)) % 2)
            for (auto& [k, c] : yx) c = -c;
          if (xy != yx) return Verdict::failure("product not graded commutative on " + name(p, i) + ", " + name(q, j));
        }
        if (!opts.associativity) continue;
        for (const auto& [r, k] : all) {
          const Chain<F> z = basis(r, k);
          if (mul(xy, z) != mul(basis(p, i), mul(basis(q, j), z)))
            return Verdict::failure("product not associative on " + name(p, i) + ", " + name(q, j) + ", " + name(r, k));
        }
      }
  }
  return {};
}

/// Generic presheaf data over a user-supplied poset.
template <class F>
Presheaf<F> presheaf_from_json(std::shared_ptr<const RankedPoset> P, const nlohmann::json& j) {
  try {
    std::vector<GradedSpace> spaces(P->size());
    for (const auto& s : j.at("spaces")) {
      const std::size_t p = P->index_of(s.at("element").get<std::string>());
      spaces[p] = GradedSpace::from_degrees(s.at("degrees").get<std::vector<int>>());
      if (s.contains("labels")) spaces[p].labels = s.at("labels").get<std::vector<std::string>>();
    }
    Presheaf<F> C(P, std::move(spaces));
    if (j.contains("maps"))
      for (const auto& m : j.at("maps")) {
        const std::size_t upper = P->index_of(m.at("upper").get<std::string>());
        const std::size_t lower = P->index_of(m.at("lower").get<std::string>());
        Matrix<F> mat(C.space(lower).dim(), C.space(upper).dim());
        const auto& rows = m.at("matrix");
        if (rows.size() != mat.rows()) throw ValidationError("presheaf JSON: matrix row count mismatch");
        for (std::size_t r = 0; r < mat.rows(); ++r) {
          if (rows[r].size() != mat.cols()) throw ValidationError("presheaf JSON: matrix column count mismatch");
          for (std::size_t c = 0; c < mat.cols(); ++c) mat(r, c) = convert<F>(detail::json_scalar(rows[r][c]));
        }
        C.set_cover_map(upper, lower, std::move(mat));
      }
    if (j.contains("product")) {
      auto table = std::make_shared<std::map<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>,
                                             std::vector<ProductTerm<F>>>>();
      for (const auto& e : j.at("product")) {
        const std::size_t p = P->index_of(e.at("left").at(0).get<std::string>());
        const std::size_t i = e.at("left").at(1).get<std::size_t>();
        const std::size_t q = P->index_of(e.at("right").at(0).get<std::string>());
        const std::size_t k = e.at("right").at(1).get<std::size_t>();
        auto& terms = (*table)[{p, i, q, k}];
        for (const auto& t : e.at("terms"))
          terms.push_back({P->index_of(t.at(1).get<std::string>()), t.at(2).get<std::size_t>(),
                           convert<F>(detail::json_scalar(t.at(0)))});
      }
      C.set_product([table](std::size_t p, std::size_t i, std::size_t q, std::size_t k) {
        auto it = table->find({p, i, q, k});
        return it == table->end() ? std::vector<ProductTerm<F>>{} : it->second;
      });
    }
    return C;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("presheaf JSON: ") + e.what());
  }
}

/// Cohomology of the diagonal arrangement of a graph in M^n, as a monoidal
/// presheaf on the bond lattice. The stalk at p is H*(M)^{(x) blocks of p}
/// shifted up by m r(p).
template <class F>
struct DiagonalPresheaf {
  std::shared_ptr<const BondLattice> bond;
  std::shared_ptr<const ManifoldData> manifold;
  std::shared_ptr<const CohomologyRing<F>> ring;
  Presheaf<F> presheaf;
};

namespace detail {

// slot of each block of p inside the coarser partition s
inline std::vector<int> slot_map(const Partition& p, const Partition& s) {
  std::vector<int> out;
  for (const auto& block : p.blocks()) out.push_back(s.block_of(block.front()));
  return out;
}

}  // namespace detail

template <class F>
DiagonalPresheaf<F> diagonal_presheaf(const ManifoldData& data, const SimpleGraph& G,
                                      std::size_t max_elements = kDefaultMaxElements) {
  if (FieldTraits<F>::tag == FieldTag::Q) {
    if (!data.diagonal_class && !data.zero_diagonal)
      throw ValidationError("diagonal presheaf over Q needs a diagonal_class or zero_diagonal");
    if (data.real_dim % 2)
      throw ValidationError("diagonal presheaf over Q is only supported for even-dimensional manifolds");
  }
  auto bond = std::make_shared<const BondLattice>(bond_lattice(G, max_elements));
  auto M = std::make_shared<const ManifoldData>(data);
  auto ring = std::make_shared<const CohomologyRing<F>>(*M);
  const int m = M->real_dim;
  const auto& P = bond->poset();
  const std::size_t n = P.size();

  std::vector<TensorPower<F>> powers;
  std::vector<GradedSpace> spaces(n);
  for (std::size_t p = 0; p < n; ++p) {
    const Partition& part = bond->partitions[p];
    powers.emplace_back(*ring, part.block_count());
    const auto& T = powers.back();
    for (std::size_t i = 0; i < T.size(); ++i) {
      spaces[p].degrees.push_back(m * part.rank() + T.degree(i));
      std::string label = "u";
      for (std::size_t x : T.decode(i)) label += "|" + M->names[x];
      spaces[p].labels.push_back(label);
    }
  }
  std::shared_ptr<const RankedPoset> poset(bond, &bond->poset());
  Presheaf<F> C(poset, spaces);

  if (ring->has_diagonal()) {
    const std::size_t h = ring->dim();
    for (const auto& cov : P.covers()) {
      const Partition& up = bond->partitions[cov.upper];
      const Partition& low = bond->partitions[cov.lower];
      const auto to_up = detail::slot_map(low, up);
      int b = -1, b2 = -1;
      for (int j = 0; j < low.block_count() && b2 < 0; ++j)
        for (int k = 0; k < j; ++k)
          if (to_up[j] == to_up[k]) {
            b = k;
            b2 = j;
            break;
          }
      const auto& Tu = powers[cov.upper];
      const auto& Tl = powers[cov.lower];
      Sparse<F> D;
      for (const auto& [ab, c] : ring->diagonal()) {
        std::vector<std::size_t> t(low.block_count(), ring->unit());
        t[b] = ab / h;
        t[b2] = ab % h;
        add_into(D, Tl.encode(t), c);
      }
      Matrix<F> mat(Tl.size(), Tu.size());
      for (std::size_t x = 0; x < Tu.size(); ++x) {
        const auto tx = Tu.decode(x);
        std::vector<std::size_t> ty(low.block_count());
        for (int j = 0; j < low.block_count(); ++j) ty[j] = j == b2 ? ring->unit() : tx[to_up[j]];
        for (const auto& [k, c] : Tl.multiply(Sparse<F>{{Tl.encode(ty), F(1)}}, D)) mat(k, x) += c;
      }
      C.set_cover_map(cov.upper, cov.lower, std::move(mat));
    }
  }

  C.set_product([bond, ring, powers, m](std::size_t p, std::size_t i, std::size_t q, std::size_t j) {
    const std::size_t s = bond->lattice.join(p, q);
    const Partition& ps = bond->partitions[p];
    const Partition& qs = bond->partitions[q];
    const Partition& ss = bond->partitions[s];
    const auto& Ts = powers[s];
    // excess multiplicity of the Euler class on each block of s
    std::vector<int> excess(ss.block_count(), 0);
    for (int d = 0; d < ss.block_count(); ++d) excess[d] = -(static_cast<int>(ss.blocks()[d].size()) - 1);
    for (const auto& blk : ps.blocks()) excess[ss.block_of(blk.front())] += static_cast<int>(blk.size()) - 1;
    for (const auto& blk : qs.blocks()) excess[ss.block_of(blk.front())] += static_cast<int>(blk.size()) - 1;
    for (int k : excess)
      if (k >= 2) return std::vector<ProductTerm<F>>{};
    auto pulled = [&](const Partition& part, std::size_t index, const TensorPower<F>& T) {
      const auto slots = detail::slot_map(part, ss);
      Sparse<F> acc{{Ts.unit(), F(1)}};
      const auto t = T.decode(index);
      for (std::size_t k = 0; k < t.size(); ++k) acc = Ts.multiply(acc, Sparse<F>{{Ts.place(slots[k], t[k]), F(1)}});
      return acc;
    };
    Sparse<F> prod = Ts.multiply(pulled(ps, i, powers[p]), pulled(qs, j, powers[q]));
    for (int d = 0; d < ss.block_count() && !prod.empty(); ++d) {
      if (excess[d] == 0) continue;
      Sparse<F> eu;
      for (const auto& [k, c] : ring->euler_class()) add_into(eu, Ts.place(d, k), c);
      prod = Ts.multiply(prod, eu);
    }
    const bool negate = (powers[p].degree(i) * m * qs.rank()) % 2;
    std::vector<ProductTerm<F>> out;
    for (const auto& [k, c] : prod) out.push_back({s, k, negate ? F(-c) : c});
    return out;
  });
  return DiagonalPresheaf<F>{bond, M, ring, std::move(C)};
}

}  // namespace osa
