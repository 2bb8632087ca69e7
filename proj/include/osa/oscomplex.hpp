#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "osa/error.hpp"
#include "osa/laurent.hpp"
#include "osa/matrix.hpp"
#include "osa/osalg.hpp"
#include "osa/presheaf.hpp"

namespace osa {

/// (column, row) = (-r(p), coefficient degree).
using Bidegree = std::pair<int, int>;

inline std::string bidegree_string(const Bidegree& b) {
  return "(" + std::to_string(b.first) + "," + std::to_string(b.second) + ")";
}

/// Basis element x (x) c of a block: grade p, NBC monomial of A([0,p])_p,
/// index of c in C_p.
struct Generator {
  std::size_t grade = 0;
  Mask monomial = 0;
  std::size_t coeff = 0;

  friend bool operator==(const Generator&, const Generator&) = default;
  friend bool operator<(const Generator& a, const Generator& b) {
    if (a.grade != b.grade) return a.grade < b.grade;
    if (a.monomial != b.monomial) return OSAlgebra::mask_order(a.monomial, b.monomial);
    return a.coeff < b.coeff;
  }
};

template <class F>
using ComplexElement = std::map<Generator, F>;

template <class F>
void add_into(ComplexElement<F>& v, const Generator& g, const F& c) {
  if (is_zero(c)) return;
  auto [it, fresh] = v.try_emplace(g, c);
  if (!fresh) {
    it->second += c;
    if (is_zero(it->second)) v.erase(it);
  }
}

/// Rewrites a monomial of one local algebra in the atom positions of another.
inline Mask relabel(const OSAlgebra& from, Mask m, const OSAlgebra& to) {
  Mask out = 0;
  const auto& target = to.atoms();
  for (std::size_t a : from.atoms_of(m)) {
    auto it = std::find(target.begin(), target.end(), a);
    if (it == target.end()) throw Error("relabel: atom missing from target algebra");
    out |= Mask{1} << (it - target.begin());
  }
  return out;
}

/// Generalized Orlik-Solomon complex with coefficients in a presheaf.
template <class F>
class OSComplex {
 public:
  explicit OSComplex(std::shared_ptr<const Presheaf<F>> coefficients, std::vector<std::size_t> atom_order = {})
      : C_(std::move(coefficients)) {
    const auto& P = C_->poset();
    if (atom_order.empty()) atom_order = P.atoms();
    atom_order_ = atom_order;
    const auto geo = check_locally_geometric(P);
    if (!geo.ok) throw ValidationError("OS complex needs a locally geometric poset: " + geo.reason);
    const auto v = validate(*C_, {.associativity = false});
    if (!v) throw ValidationError("coefficient presheaf is invalid: " + v.certificate);

    for (std::size_t p = 0; p < P.size(); ++p) {
      local_.push_back(std::make_unique<OSAlgebra>(P, p, atom_order));
      for (Mask x : local_.back()->basis(p))
        for (std::size_t c = 0; c < C_->space(p).dim(); ++c) {
          const Generator g{p, x, c};
          cells_[cell_of(g)].push_back(g);
        }
    }
    for (auto& [cell, gens] : cells_) {
      std::sort(gens.begin(), gens.end());
      for (std::size_t k = 0; k < gens.size(); ++k) position_[gens[k]] = k;
    }
    for (const auto& [cell, gens] : cells_) {
      const Bidegree target{cell.first + 1, cell.second};
      Matrix<F> d(dim(target), gens.size());
      for (std::size_t k = 0; k < gens.size(); ++k)
        for (const auto& [g, c] : boundary(gens[k])) d(index_of(g), k) += c;
      differential_.emplace(cell, std::move(d));
    }
    for (const auto& [cell, d] : differential_) {
      const Bidegree next{cell.first + 1, cell.second};
      auto it = differential_.find(next);
      if (it != differential_.end() && !(it->second * d).is_zero())
        throw Error("OS complex: boundary squared is nonzero at " + bidegree_string(cell));
    }
  }

  const Presheaf<F>& presheaf() const { return *C_; }
  const RankedPoset& poset() const { return C_->poset(); }
  const OSAlgebra& local_algebra(std::size_t p) const { return *local_.at(p); }
  const std::vector<std::size_t>& atom_order() const { return atom_order_; }

  Bidegree cell_of(const Generator& g) const { return {-poset().rank(g.grade), C_->degree(g.grade, g.coeff)}; }

  const std::map<Bidegree, std::vector<Generator>>& cells() const { return cells_; }

  std::size_t dim(const Bidegree& b) const {
    auto it = cells_.find(b);
    return it == cells_.end() ? 0 : it->second.size();
  }

  std::size_t total_dim() const {
    std::size_t n = 0;
    for (const auto& [b, gens] : cells_) n += gens.size();
    return n;
  }

  std::size_t index_of(const Generator& g) const { return position_.at(g); }

  /// Matrix of the boundary from b to (b.col + 1, b.row).
  Matrix<F> differential(const Bidegree& b) const {
    auto it = differential_.find(b);
    if (it != differential_.end()) return it->second;
    return Matrix<F>(dim({b.first + 1, b.second}), dim(b));
  }

  ComplexElement<F> boundary(const Generator& g) const {
    ComplexElement<F> out;
    const OSAlgebra& A = local_algebra(g.grade);
    for (const auto& [face, coef] : A.boundary(g.monomial)) {
      const std::size_t lower = A.grade(face);
      const Mask local_face = relabel(A, face, local_algebra(lower));
      const auto& f = C_->cover_map(g.grade, lower);
      for (std::size_t r = 0; r < f.rows(); ++r)
        if (!is_zero(f(r, g.coeff))) add_into(out, Generator{lower, local_face, r}, F(from_int<F>(coef) * f(r, g.coeff)));
    }
    return out;
  }

  ComplexElement<F> boundary(const ComplexElement<F>& x) const {
    ComplexElement<F> out;
    for (const auto& [g, c] : x)
      for (const auto& [h, d] : boundary(g)) add_into(out, h, F(c * d));
    return out;
  }

  /// (x (x) c1)(y (x) c2) = (-1)^{deg(c1) r(q)} sum_s (x y)_s (x) (c1 c2)_s.
  ComplexElement<F> multiply(const Generator& a, const Generator& b) const {
    ComplexElement<F> out;
    const bool negate = (C_->degree(a.grade, a.coeff) * poset().rank(b.grade)) % 2;
    for (const auto& t : C_->product(a.grade, a.coeff, b.grade, b.coeff)) {
      const OSAlgebra& S = local_algebra(t.element);
      const Mask x = relabel(local_algebra(a.grade), a.monomial, S);
      const Mask y = relabel(local_algebra(b.grade), b.monomial, S);
      for (const auto& [m, c] : S.mul(x, y)) {
        if (S.grade(m) != t.element) continue;
        F coef = F(from_int<F>(c) * t.coeff);
        if (negate) coef = -coef;
        add_into(out, Generator{t.element, m, t.index}, coef);
      }
    }
    return out;
  }

  ComplexElement<F> multiply(const ComplexElement<F>& x, const ComplexElement<F>& y) const {
    ComplexElement<F> out;
    for (const auto& [a, ca] : x)
      for (const auto& [b, cb] : y)
        for (const auto& [g, c] : multiply(a, b)) add_into(out, g, F(ca * cb * c));
    return out;
  }

  Vector<F> to_vector(const Bidegree& b, const ComplexElement<F>& x) const {
    Vector<F> v(dim(b), F(0));
    for (const auto& [g, c] : x) {
      if (cell_of(g) != b) throw Error("element has a component outside bidegree " + bidegree_string(b));
      v[index_of(g)] += c;
    }
    return v;
  }

  ComplexElement<F> from_vector(const Bidegree& b, const Vector<F>& v) const {
    ComplexElement<F> out;
    const auto& gens = cells_.at(b);
    for (std::size_t k = 0; k < v.size(); ++k) add_into(out, gens[k], v[k]);
    return out;
  }

  std::string generator_string(const Generator& g) const {
    return local_algebra(g.grade).monomial_string(g.monomial) + "(x)" + C_->space(g.grade).labels.at(g.coeff) + "@" +
           poset().label(g.grade);
  }

 private:
  std::shared_ptr<const Presheaf<F>> C_;
  std::vector<std::size_t> atom_order_;
  std::vector<std::unique_ptr<OSAlgebra>> local_;
  std::map<Bidegree, std::vector<Generator>> cells_;
  std::map<Generator, std::size_t> position_;
  std::map<Bidegree, Matrix<F>> differential_;
};

/// Homology page with optional product table on the chosen representatives.
template <class F>
struct E2Page {
  struct Class {
    Bidegree cell;
    Vector<F> representative;  // coordinates in the complex cell, empty for abstract pages
  };
  using Combination = std::map<std::size_t, F>;

  std::vector<Class> classes;
  std::optional<std::vector<std::vector<Combination>>> products;
  std::string collapse = "unknown";
  bool weights = false;

  std::map<Bidegree, std::size_t> dims() const {
    std::map<Bidegree, std::size_t> d;
    for (const auto& c : classes) ++d[c.cell];
    return d;
  }

  std::size_t dim(const Bidegree& b) const {
    std::size_t n = 0;
    for (const auto& c : classes) n += c.cell == b;
    return n;
  }

  std::size_t total_dim() const { return classes.size(); }

  /// Sum of dim * t^{row + col}.
  LaurentPoly2 poincare() const {
    LaurentPoly2 p;
    for (const auto& c : classes) p += LaurentPoly2::t_pow(c.cell.first + c.cell.second);
    return p;
  }

  /// Sum of dim * s^col t^row.
  LaurentPoly2 two_variable() const {
    LaurentPoly2 p;
    for (const auto& c : classes) p += LaurentPoly2::monomial(c.cell.first, c.cell.second);
    return p;
  }

  std::vector<long> betti() const {
    std::vector<long> b;
    for (const auto& c : classes) {
      const int k = c.cell.first + c.cell.second;
      if (k < 0) throw Error("page has a class of negative total degree");
      if (static_cast<std::size_t>(k) >= b.size()) b.resize(k + 1, 0);
      ++b[k];
    }
    return b;
  }

  long euler_characteristic() const {
    long chi = 0;
    for (const auto& c : classes) chi += (c.cell.first + c.cell.second) % 2 ? -1 : 1;
    return chi;
  }

  Combination multiply(const Combination& x, const Combination& y) const {
    if (!products) throw Error("page has no product table");
    Combination out;
    for (const auto& [a, ca] : x)
      for (const auto& [b, cb] : y)
        for (const auto& [k, c] : (*products)[a][b]) {
          auto [it, fresh] = out.try_emplace(k, F(ca * cb * c));
          if (!fresh) {
            it->second += F(ca * cb * c);
            if (is_zero(it->second)) out.erase(it);
          } else if (is_zero(it->second)) {
            out.erase(it);
          }
        }
    return out;
  }
};

namespace detail {

// Image of the incoming boundary plus the representatives, for reading off
// class coordinates of cycles.
template <class F>
struct CellReducer {
  SpanReducer<F> span;
  std::size_t image_rank = 0;
  std::vector<std::size_t> class_ids;

  CellReducer(std::size_t dim) : span(dim, true) {}
};

}  // namespace detail

/// Homology of every cell; representatives are the first kernel vectors
/// independent modulo the image.
template <class F>
E2Page<F> homology(const OSComplex<F>& K) {
  E2Page<F> page;
  for (const auto& [cell, gens] : K.cells()) {
    const Matrix<F> in = K.differential({cell.first - 1, cell.second});
    std::vector<Vector<F>> image;
    for (std::size_t j = 0; j < in.cols(); ++j) image.push_back(in.column(j));
    const auto kernel = kernel_basis(K.differential(cell));
    for (auto& rep : quotient_basis(gens.size(), image, &kernel)) page.classes.push_back({cell, std::move(rep)});
  }
  return page;
}

/// Coordinates of a cycle in the page classes of its cell.
template <class F>
class ClassReader {
 public:
  ClassReader(const OSComplex<F>& K, const E2Page<F>& page) : K_(&K) {
    for (const auto& [cell, gens] : K.cells()) {
      auto& red = cells_.try_emplace(cell, gens.size()).first->second;
      const Matrix<F> in = K.differential({cell.first - 1, cell.second});
      for (std::size_t j = 0; j < in.cols(); ++j) red.span.add(in.column(j));
      red.image_rank = red.span.rank();
    }
    for (std::size_t k = 0; k < page.classes.size(); ++k) {
      auto& red = cells_.at(page.classes[k].cell);
      if (!red.span.add(page.classes[k].representative)) throw Error("page representatives are dependent");
      red.class_ids.push_back(k);
    }
  }

  std::optional<typename E2Page<F>::Combination> read(const ComplexElement<F>& x) const {
    typename E2Page<F>::Combination out;
    if (x.empty()) return out;
    const Bidegree cell = K_->cell_of(x.begin()->first);
    auto it = cells_.find(cell);
    if (it == cells_.end()) return std::nullopt;
    const auto coords = it->second.span.coordinates(K_->to_vector(cell, x));
    if (!coords) return std::nullopt;
    for (std::size_t k = 0; k < it->second.class_ids.size(); ++k) {
      const F& c = (*coords)[it->second.image_rank + k];
      if (!is_zero(c)) out[it->second.class_ids[k]] = c;
    }
    return out;
  }

 private:
  const OSComplex<F>* K_;
  std::map<Bidegree, detail::CellReducer<F>> cells_;
};

/// Homology with the induced product on representatives.
template <class F>
E2Page<F> e2_ring(const OSComplex<F>& K) {
  if (!K.presheaf().monoidal()) throw Error("e2_ring: coefficient presheaf has no product");
  E2Page<F> page = homology(K);
  const ClassReader<F> reader(K, page);
  std::vector<ComplexElement<F>> reps;
  for (const auto& c : page.classes) reps.push_back(K.from_vector(c.cell, c.representative));
  const std::size_t n = reps.size();
  std::vector<std::vector<typename E2Page<F>::Combination>> table(n, std::vector<typename E2Page<F>::Combination>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const auto coords = reader.read(K.multiply(reps[a], reps[b]));
      if (!coords) throw Error("e2_ring: product of classes " + std::to_string(a) + ", " + std::to_string(b) + " is not a cycle");
      table[a][b] = *coords;
    }
  page.products = std::move(table);
  return page;
}

/// Does the subalgebra generated by columns 0 and -1 fill the page?
template <class F>
bool dg1_generation_check(const E2Page<F>& page) {
  if (!page.products) throw Error("dg1_generation_check: page has no product table");
  std::map<Bidegree, SpanReducer<F>> spans;
  std::vector<std::size_t> cell_pos(page.classes.size());
  std::map<Bidegree, std::vector<std::size_t>> members;
  for (std::size_t k = 0; k < page.classes.size(); ++k) {
    auto& list = members[page.classes[k].cell];
    cell_pos[k] = list.size();
    list.push_back(k);
  }
  for (const auto& [cell, list] : members) spans.try_emplace(cell, list.size());

  using Combination = typename E2Page<F>::Combination;
  std::vector<std::pair<Bidegree, Combination>> generated, frontier;
  auto offer = [&](const Combination& x) {
    if (x.empty()) return;
    const Bidegree cell = page.classes[x.begin()->first].cell;
    Vector<F> v(members[cell].size(), F(0));
    for (const auto& [k, c] : x) {
      if (page.classes[k].cell != cell) throw Error("dg1_generation_check: inhomogeneous product");
      v[cell_pos[k]] = c;
    }
    if (spans.at(cell).add(v)) frontier.push_back({cell, x});
  };
  std::vector<std::size_t> gens;
  for (std::size_t k = 0; k < page.classes.size(); ++k)
    if (page.classes[k].cell.first >= -1) gens.push_back(k);
  for (std::size_t k : gens) offer(Combination{{k, F(1)}});
  while (!frontier.empty()) {
    auto current = std::move(frontier);
    frontier.clear();
    for (const auto& [cell, x] : current)
      for (std::size_t g : gens) offer(page.multiply(Combination{{g, F(1)}}, x));
  }
  for (const auto& [cell, list] : members)
    if (spans.at(cell).rank() != list.size()) return false;
  return true;
}

/// d(ab) = d(a) b + (-1)^{deg(c_a) - r(p)} a d(b) on all basis pairs.
template <class F>
Verdict leibniz_check(const OSComplex<F>& K) {
  std::vector<Generator> all;
  for (const auto& [cell, gens] : K.cells()) all.insert(all.end(), gens.begin(), gens.end());
  std::vector<ComplexElement<F>> boundaries;
  for (const auto& g : all) boundaries.push_back(K.boundary(g));
  for (std::size_t i = 0; i < all.size(); ++i) {
    const ComplexElement<F> a{{all[i], F(1)}};
    const bool odd = (K.presheaf().degree(all[i].grade, all[i].coeff) + K.poset().rank(all[i].grade)) % 2;
    for (std::size_t j = 0; j < all.size(); ++j) {
      const ComplexElement<F> b{{all[j], F(1)}};
      ComplexElement<F> rhs = K.multiply(boundaries[i], b);
      for (const auto& [g, c] : K.multiply(a, boundaries[j])) add_into(rhs, g, odd ? F(-c) : c);
      if (K.boundary(K.multiply(all[i], all[j])) != rhs)
        return Verdict::failure("Leibniz rule fails on " + K.generator_string(all[i]) + " * " + K.generator_string(all[j]));
    }
  }
  return {};
}

/// Restriction of a presheaf to the lower interval [0, p], re-indexed.
template <class F>
std::pair<std::shared_ptr<const Presheaf<F>>, Subposet> restrict_to_interval(const Presheaf<F>& C, std::size_t p) {
  const auto& P = C.poset();
  Subposet sub = interval(P, *P.bottom(), p);
  auto poset = std::make_shared<const RankedPoset>(sub.poset);
  std::vector<GradedSpace> spaces;
  for (std::size_t q : sub.to_parent) spaces.push_back(C.space(q));
  auto out = std::make_shared<Presheaf<F>>(poset, std::move(spaces));
  for (const auto& c : poset->covers())
    out->set_cover_map(c.upper, c.lower, C.cover_map(sub.to_parent[c.upper], sub.to_parent[c.lower]));
  if (C.monoidal()) {
    auto parent = std::make_shared<const Presheaf<F>>(C);
    auto shared_sub = std::make_shared<const Subposet>(sub);
    out->set_product([parent, shared_sub](std::size_t a, std::size_t i, std::size_t b, std::size_t j) {
      std::vector<ProductTerm<F>> terms;
      for (auto t : parent->product(shared_sub->to_parent[a], i, shared_sub->to_parent[b], j))
        if (const auto local = shared_sub->from_parent(t.element)) {
          t.element = *local;
          terms.push_back(t);
        }
      return terms;
    });
  }
  return {out, std::move(sub)};
}

/// Ring map E2(A([0,p], C)) -> E2(A(L, C)) induced by the inclusion of grades
/// below p, one matrix per bidegree (rows: big page classes of the cell).
template <class F>
struct SubinclusionMap {
  E2Page<F> source;
  E2Page<F> target;
  std::map<Bidegree, Matrix<F>> matrices;
};

template <class F>
SubinclusionMap<F> subinclusion_e2(const OSComplex<F>& K, std::size_t p) {
  auto [restricted, sub] = restrict_to_interval(K.presheaf(), p);
  std::vector<std::size_t> order;
  for (std::size_t a : K.atom_order())
    if (const auto local = sub.from_parent(a)) order.push_back(*local);
  const OSComplex<F> small(restricted, order);
  SubinclusionMap<F> out{homology(small), homology(K), {}};
  const ClassReader<F> reader(K, out.target);
  std::map<Bidegree, std::size_t> col_of;
  std::map<Bidegree, std::vector<std::size_t>> target_index;
  for (std::size_t k = 0; k < out.target.classes.size(); ++k)
    target_index[out.target.classes[k].cell].push_back(k);
  for (const auto& [cell, d] : out.source.dims()) out.matrices.emplace(cell, Matrix<F>(out.target.dim(cell), d));
  for (const auto& cls : out.source.classes) {
    ComplexElement<F> image;
    for (const auto& [g, c] : small.from_vector(cls.cell, cls.representative)) {
      const Mask m = relabel(small.local_algebra(g.grade), g.monomial, K.local_algebra(sub.to_parent[g.grade]));
      add_into(image, Generator{sub.to_parent[g.grade], m, g.coeff}, c);
    }
    const auto coords = reader.read(image);
    if (!coords) throw Error("subinclusion_e2: image of a class is not a cycle");
    const std::size_t column = col_of[cls.cell]++;
    const auto& idx = target_index[cls.cell];
    for (const auto& [k, c] : *coords) {
      const auto pos = std::find(idx.begin(), idx.end(), k) - idx.begin();
      out.matrices.at(cls.cell)(pos, column) = c;
    }
  }
  return out;
}

template <class F>
nlohmann::json page_to_json(const E2Page<F>& page) {
  nlohmann::json dims = nlohmann::json::array();
  for (const auto& [cell, d] : page.dims()) dims.push_back({{"col", cell.first}, {"row", cell.second}, {"dim", d}});
  nlohmann::json j{{"dims", dims}, {"poincare", page.poincare().to_string()}, {"collapse", page.collapse}};
  if (page.weights) {
    nlohmann::json w = nlohmann::json::array();
    for (const auto& [cell, d] : page.dims())
      w.push_back({{"degree", cell.first + cell.second}, {"weight", cell.second}, {"dim", d}});
    j["weights"] = w;
  }
  if (page.products) {
    nlohmann::json table = nlohmann::json::array();
    for (std::size_t a = 0; a < page.classes.size(); ++a)
      for (std::size_t b = 0; b < page.classes.size(); ++b) {
        const auto& prod = (*page.products)[a][b];
        if (prod.empty()) continue;
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& [k, c] : prod) terms.push_back({FieldTraits<F>::to_string(c), k});
        table.push_back({{"left", a}, {"right", b}, {"terms", terms}});
      }
    j["product_table"] = table;
  }
  return j;
}

}  // namespace osa
