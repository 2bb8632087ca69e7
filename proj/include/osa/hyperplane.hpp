#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "osa/error.hpp"
#include "osa/field.hpp"
#include "osa/laurent.hpp"
#include "osa/manifold.hpp"
#include "osa/matrix.hpp"
#include "osa/osalg.hpp"
#include "osa/poset.hpp"

namespace osa {

inline constexpr std::size_t kMaxHyperplanes = 20;

/// Central hyperplanes in Q^d given by normal vectors.
struct CentralArrangement {
  int dim = 0;
  std::vector<Vector<Rational>> normals;

  CentralArrangement() = default;

  CentralArrangement(int d, std::vector<Vector<Rational>> normal_vectors, std::size_t max_hyperplanes = kMaxHyperplanes)
      : dim(d), normals(std::move(normal_vectors)) {
    if (dim < 1) throw ValidationError("arrangement: dimension must be positive");
    if (normals.size() > max_hyperplanes)
      throw SizeGuardError("arrangement: " + std::to_string(normals.size()) + " hyperplanes exceed the cap of " +
                           std::to_string(max_hyperplanes));
    for (std::size_t i = 0; i < normals.size(); ++i) {
      if (normals[i].size() != static_cast<std::size_t>(dim))
        throw ValidationError("arrangement: normal " + std::to_string(i) + " has the wrong length");
      if (rank(Matrix<Rational>::from_rows({normals[i]}, dim)) == 0)
        throw ValidationError("arrangement: normal " + std::to_string(i) + " is zero");
      for (std::size_t j = 0; j < i; ++j)
        if (rank(Matrix<Rational>::from_rows({normals[j], normals[i]}, dim)) < 2)
          throw ValidationError("arrangement: hyperplanes " + std::to_string(j) + " and " + std::to_string(i) +
                                " coincide");
    }
  }

  std::size_t size() const { return normals.size(); }

  /// x_i = x_j for all i < j in Q^n.
  static CentralArrangement braid(int n) {
    std::vector<Vector<Rational>> normals;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        Vector<Rational> v(n, Rational(0));
        v[i] = 1;
        v[j] = -1;
        normals.push_back(std::move(v));
      }
    return CentralArrangement(n, std::move(normals));
  }

  static CentralArrangement coordinate(int d) {
    std::vector<Vector<Rational>> normals;
    for (int i = 0; i < d; ++i) {
      Vector<Rational> v(d, Rational(0));
      v[i] = 1;
      normals.push_back(std::move(v));
    }
    return CentralArrangement(d, std::move(normals));
  }
};

/// Flats of an arrangement ordered by reverse inclusion, each recorded as the
/// set of hyperplanes containing it. Rank is codimension.
struct IntersectionPoset {
  CentralArrangement arrangement;
  RankedPoset poset;
  std::vector<std::uint32_t> flats;  // by poset element
  std::vector<std::size_t> hyperplane_atoms;  // atom of each hyperplane
};

namespace detail {

inline std::string flat_label(std::uint32_t mask) {
  std::string s = "{";
  bool first = true;
  for (std::uint32_t r = mask; r; r &= r - 1) {
    if (!first) s += ",";
    s += std::to_string(std::countr_zero(r));
    first = false;
  }
  return s + "}";
}

}  // namespace detail

/// Intersection poset, truncated above max_rank when given.
inline IntersectionPoset intersection_poset(const CentralArrangement& A, std::optional<int> max_rank = std::nullopt,
                                            std::size_t max_elements = kDefaultMaxElements) {
  const std::size_t n = A.size();
  auto closure = [&](std::uint32_t mask) {
    SpanReducer<Rational> span(A.dim);
    for (std::uint32_t r = mask; r; r &= r - 1) span.add(A.normals[std::countr_zero(r)]);
    std::uint32_t out = 0;
    for (std::size_t h = 0; h < n; ++h)
      if (span.contains(A.normals[h])) out |= std::uint32_t{1} << h;
    return std::make_pair(out, static_cast<int>(span.rank()));
  };

  std::map<std::uint32_t, int> rank_of{{0u, 0}};
  std::vector<std::uint32_t> order{0u};
  std::vector<Cover> raw_covers;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> cover_masks;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::uint32_t flat = order[k];
    if (max_rank && rank_of[flat] >= *max_rank) continue;
    for (std::size_t h = 0; h < n; ++h) {
      if (flat >> h & 1u) continue;
      const auto [next, r] = closure(flat | std::uint32_t{1} << h);
      if (rank_of.emplace(next, r).second) {
        order.push_back(next);
        if (order.size() > max_elements)
          throw SizeGuardError("intersection poset exceeds " + std::to_string(max_elements) + " elements");
      }
      cover_masks.push_back({flat, next});
    }
  }
  std::vector<std::string> labels;
  std::vector<int> ranks;
  for (std::uint32_t f : order) {
    labels.push_back(detail::flat_label(f));
    ranks.push_back(rank_of[f]);
  }
  std::sort(cover_masks.begin(), cover_masks.end());
  cover_masks.erase(std::unique(cover_masks.begin(), cover_masks.end()), cover_masks.end());
  std::map<std::uint32_t, std::size_t> pos;
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  for (const auto& [lo, hi] : cover_masks) raw_covers.push_back({pos[lo], pos[hi]});

  IntersectionPoset out{A, RankedPoset(labels, ranks, raw_covers, max_elements), {}, {}};
  out.flats.resize(order.size());
  for (std::uint32_t f : order) out.flats[out.poset.index_of(detail::flat_label(f))] = f;
  for (std::size_t h = 0; h < n; ++h) out.hyperplane_atoms.push_back(out.poset.index_of(detail::flat_label(closure(1u << h).first)));
  return out;
}

/// Full intersection lattice as a geometric lattice.
struct IntersectionLattice {
  IntersectionPoset flats;
  GeometricLattice lattice;

  const RankedPoset& poset() const { return lattice.poset(); }
};

inline IntersectionLattice intersection_lattice(const CentralArrangement& A,
                                                std::size_t max_elements = kDefaultMaxElements) {
  auto flats = intersection_poset(A, std::nullopt, max_elements);
  GeometricLattice L(flats.poset);
  return {std::move(flats), std::move(L)};
}

/// Number of k-dimensional faces of the real arrangement, k = 0..d.
inline std::vector<long long> zaslavsky_f(const IntersectionLattice& L) {
  const auto& P = L.poset();
  const int d = L.flats.arrangement.dim;
  std::vector<long long> f(d + 1, 0);
  const std::size_t top = L.lattice.top();
  for (std::size_t p = 0; p < P.size(); ++p) {
    const Subposet upper = interval(P, p, top);
    const OSAlgebra A(upper.poset, *upper.poset.top(), upper.poset.atoms());
    f.at(d - P.rank(p)) += static_cast<long long>(A.total_dim());
  }
  return f;
}

inline std::vector<long long> zaslavsky_f(const CentralArrangement& A) { return zaslavsky_f(intersection_lattice(A)); }

/// Sum of |mu(0, p)| over the lattice.
inline long long chamber_count(const IntersectionLattice& L) {
  long long total = 0;
  for (long long mu : L.poset().mobius_row(L.lattice.bottom())) total += mu < 0 ? -mu : mu;
  return total;
}

/// Poincare polynomial of the complexified complement.
inline LaurentPoly2 complex_poincare(const IntersectionLattice& L) {
  const OSAlgebra A = OSAlgebra::of_lattice(L.lattice);
  LaurentPoly2 out;
  for (const auto& [p, list] : A.basis_by_grade())
    out += LaurentPoly2::monomial(0, L.poset().rank(p), static_cast<long>(list.size()));
  return out;
}

inline LaurentPoly2 complex_poincare(const CentralArrangement& A) { return complex_poincare(intersection_lattice(A)); }

inline std::string f_vector_string(const std::vector<long long>& f) {
  std::string s = "f = (";
  for (std::size_t k = 0; k < f.size(); ++k) s += (k ? ", " : "") + std::to_string(f[k]);
  return s + ")";
}

inline CentralArrangement arrangement_from_json(const nlohmann::json& j, std::size_t max_hyperplanes = kMaxHyperplanes) {
  try {
    const int d = j.at("dim").get<int>();
    std::vector<Vector<Rational>> normals;
    for (const auto& row : j.at("normals")) {
      Vector<Rational> v;
      for (const auto& x : row) v.push_back(detail::json_scalar(x));
      normals.push_back(std::move(v));
    }
    return CentralArrangement(d, std::move(normals), max_hyperplanes);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("arrangement JSON: ") + e.what());
  }
}

inline nlohmann::json arrangement_to_json(const CentralArrangement& A) {
  nlohmann::json normals = nlohmann::json::array();
  for (const auto& v : A.normals) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& x : v) row.push_back(x.get_str());
    normals.push_back(row);
  }
  return {{"dim", A.dim}, {"normals", normals}};
}

}  // namespace osa
