#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>
#include <nlohmann/json.hpp>

#include "osa/error.hpp"

namespace osa {

using Bits = boost::dynamic_bitset<std::uint64_t>;

struct Cover {
  std::size_t lower;
  std::size_t upper;
};

/// Finite ranked poset. Elements are dense indices sorted by (rank, label);
/// the order relation is stored as up/down reachability bitsets.
class RankedPoset {
 public:
  RankedPoset() = default;

  RankedPoset(std::vector<std::string> labels, std::vector<int> ranks, std::vector<Cover> covers,
              std::size_t max_elements = kDefaultMaxElements) {
    const std::size_t n = labels.size();
    if (n > max_elements)
      throw SizeGuardError("poset has " + std::to_string(n) + " elements, cap is " + std::to_string(max_elements));
    if (ranks.size() != n) throw ValidationError("poset: ranks and labels differ in length");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::tie(ranks[a], labels[a]) < std::tie(ranks[b], labels[b]);
    });
    std::vector<std::size_t> where(n);
    for (std::size_t i = 0; i < n; ++i) where[order[i]] = i;

    labels_.resize(n);
    ranks_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      labels_[i] = std::move(labels[order[i]]);
      ranks_[i] = ranks[order[i]];
      index_.emplace(labels_[i], i);
    }
    if (index_.size() != n) throw ValidationError("poset: duplicate element labels");

    up_covers_.assign(n, {});
    down_covers_.assign(n, {});
    for (const auto& c : covers) {
      if (c.lower >= n || c.upper >= n) throw ValidationError("poset: cover references unknown element");
      const std::size_t q = where[c.lower], p = where[c.upper];
      if (ranks_[p] != ranks_[q] + 1)
        throw ValidationError("poset: cover (" + labels_[q] + ", " + labels_[p] + ") does not raise rank by one");
      up_covers_[q].push_back(p);
      down_covers_[p].push_back(q);
    }
    for (auto& v : up_covers_) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    for (auto& v : down_covers_) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }

    down_.assign(n, Bits(n));
    for (std::size_t p = 0; p < n; ++p) {
      down_[p].set(p);
      for (std::size_t q : down_covers_[p]) down_[p] |= down_[q];
    }
    up_.assign(n, Bits(n));
    for (std::size_t p = n; p-- > 0;) {
      up_[p].set(p);
      for (std::size_t q : up_covers_[p]) up_[p] |= up_[q];
    }
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q : down_covers_[p])
        if ((up_[q] & down_[p]).count() != 2)
          throw ValidationError("poset: pair (" + labels_[q] + ", " + labels_[p] + ") listed as cover but is not one");
    mobius_ = std::make_shared<MobiusMemo>(n);
  }

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t p) const { return labels_.at(p); }
  const std::vector<std::string>& labels() const { return labels_; }
  int rank(std::size_t p) const { return ranks_.at(p); }
  const std::vector<int>& ranks() const { return ranks_; }
  int max_rank() const { return ranks_.empty() ? -1 : *std::max_element(ranks_.begin(), ranks_.end()); }

  std::size_t index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) throw Error("poset: no element labelled '" + label + "'");
    return it->second;
  }

  bool leq(std::size_t a, std::size_t b) const { return down_[b].test(a); }
  const Bits& up(std::size_t p) const { return up_[p]; }
  const Bits& down(std::size_t p) const { return down_[p]; }
  const std::vector<std::size_t>& covers_above(std::size_t p) const { return up_covers_[p]; }
  const std::vector<std::size_t>& covers_below(std::size_t p) const { return down_covers_[p]; }

  std::vector<Cover> covers() const {
    std::vector<Cover> out;
    for (std::size_t p = 0; p < size(); ++p)
      for (std::size_t q : down_covers_[p]) out.push_back({q, p});
    return out;
  }

  /// The unique minimum, if any.
  std::optional<std::size_t> bottom() const {
    for (std::size_t p = 0; p < size(); ++p)
      if (up_[p].count() == size()) return p;
    return std::nullopt;
  }
  std::optional<std::size_t> top() const {
    for (std::size_t p = 0; p < size(); ++p)
      if (down_[p].count() == size()) return p;
    return std::nullopt;
  }

  std::vector<std::size_t> elements_of_rank(int r) const {
    std::vector<std::size_t> out;
    for (std::size_t p = 0; p < size(); ++p)
      if (ranks_[p] == r) out.push_back(p);
    return out;
  }
  std::vector<std::size_t> atoms() const { return elements_of_rank(1); }

  long long mobius(std::size_t p, std::size_t q) const {
    if (!leq(p, q)) throw Error("mobius: " + label(p) + " is not below " + label(q));
    return mobius_row(p)[q];
  }

  /// mu(p, .) for every element; entries outside [p, inf) are zero.
  const std::vector<long long>& mobius_row(std::size_t p) const {
    std::lock_guard<std::mutex> lock(mobius_->mutex);
    auto& slot = mobius_->rows[p];
    if (!slot) {
      std::vector<long long> row(size(), 0);
      row[p] = 1;
      for (std::size_t q = up_[p].find_next(p); q != Bits::npos; q = up_[p].find_next(q)) {
        long long s = 0;
        const Bits between = up_[p] & down_[q];
        for (std::size_t l = between.find_first(); l != Bits::npos; l = between.find_next(l))
          if (l != q) s += row[l];
        row[q] = -s;
      }
      slot = std::make_unique<std::vector<long long>>(std::move(row));
    }
    return *slot;
  }

  /// Minimal elements of a set.
  std::vector<std::size_t> minimal_elements(const Bits& set) const {
    std::vector<std::size_t> out;
    for (std::size_t e = set.find_first(); e != Bits::npos; e = set.find_next(e))
      if ((down_[e] & set).count() == 1) out.push_back(e);
    return out;
  }

 private:
  struct MobiusMemo {
    explicit MobiusMemo(std::size_t n) : rows(n) {}
    std::mutex mutex;
    std::vector<std::unique_ptr<std::vector<long long>>> rows;
  };

  std::vector<std::string> labels_;
  std::vector<int> ranks_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> up_covers_;
  std::vector<std::vector<std::size_t>> down_covers_;
  std::vector<Bits> up_;
  std::vector<Bits> down_;
  std::shared_ptr<MobiusMemo> mobius_;
};

/// Induced subposet together with the embedding into its parent.
struct Subposet {
  RankedPoset poset;
  std::vector<std::size_t> to_parent;

  std::optional<std::size_t> from_parent(std::size_t p) const {
    auto it = std::lower_bound(to_parent.begin(), to_parent.end(), p);
    if (it == to_parent.end() || *it != p) return std::nullopt;
    return static_cast<std::size_t>(it - to_parent.begin());
  }
};

/// Induced subposet on a convex set of elements, ranks shifted by -shift.
inline Subposet induced(const RankedPoset& P, const Bits& members, int shift) {
  Subposet out;
  std::vector<std::string> labels;
  std::vector<int> ranks;
  for (std::size_t p = members.find_first(); p != Bits::npos; p = members.find_next(p)) {
    out.to_parent.push_back(p);
    labels.push_back(P.label(p));
    ranks.push_back(P.rank(p) - shift);
  }
  std::vector<Cover> covers;
  for (std::size_t i = 0; i < out.to_parent.size(); ++i)
    for (std::size_t q : P.covers_below(out.to_parent[i]))
      if (members.test(q)) {
        auto j = std::lower_bound(out.to_parent.begin(), out.to_parent.end(), q) - out.to_parent.begin();
        covers.push_back({static_cast<std::size_t>(j), i});
      }
  out.poset = RankedPoset(std::move(labels), std::move(ranks), std::move(covers), P.size());
  return out;
}

inline Subposet interval(const RankedPoset& P, std::size_t a, std::size_t b) {
  if (!P.leq(a, b)) throw Error("interval: " + P.label(a) + " is not below " + P.label(b));
  return induced(P, P.up(a) & P.down(b), P.rank(a));
}

inline Subposet upper_set(const RankedPoset& P, std::size_t p) { return induced(P, P.up(p), P.rank(p)); }

inline std::vector<std::size_t> min_upper_bounds(const RankedPoset& P, std::size_t p, std::size_t q) {
  return P.minimal_elements(P.up(p) & P.up(q));
}

/// For each s in p1 (join) q1, the unique t in p2 (join) q2 with t <= s.
inline std::map<std::size_t, std::size_t> canonical_lambda(const RankedPoset& P, std::size_t p1, std::size_t q1,
                                                           std::size_t p2, std::size_t q2) {
  if (!P.leq(p2, p1) || !P.leq(q2, q1)) throw Error("canonical_lambda: requires p2 <= p1 and q2 <= q1");
  const auto targets = min_upper_bounds(P, p2, q2);
  std::map<std::size_t, std::size_t> out;
  for (std::size_t s : min_upper_bounds(P, p1, q1)) {
    std::optional<std::size_t> found;
    for (std::size_t t : targets) {
      if (!P.leq(t, s)) continue;
      if (found) throw ValidationError("canonical_lambda: two targets below " + P.label(s) + "; poset is not locally geometric");
      found = t;
    }
    if (!found) throw ValidationError("canonical_lambda: no target below " + P.label(s));
    out.emplace(s, *found);
  }
  return out;
}

struct GeometricVerdict {
  bool ok = true;
  std::string reason;
  std::vector<std::size_t> witness;

  explicit operator bool() const { return ok; }
};

namespace detail {

// Least element of a set when it exists (it must lie below every member).
inline std::optional<std::size_t> least_of(const RankedPoset& P, const Bits& set) {
  const std::size_t first = set.find_first();
  if (first == Bits::npos) return std::nullopt;
  // elements are rank sorted, so a least element must be the first member
  if ((P.up(first) & set) == set) return first;
  return std::nullopt;
}

inline std::optional<std::size_t> greatest_of(const RankedPoset& P, const Bits& set) {
  std::size_t last = Bits::npos;
  for (std::size_t e = set.find_first(); e != Bits::npos; e = set.find_next(e)) last = e;
  if (last == Bits::npos) return std::nullopt;
  if ((P.down(last) & set) == set) return last;
  return std::nullopt;
}

}  // namespace detail

/// Verdict true iff P is a ranked, semimodular, atomic lattice.
inline GeometricVerdict check_geometric(const RankedPoset& P) {
  GeometricVerdict v;
  auto fail = [&](std::string why, std::vector<std::size_t> w) {
    v.ok = false;
    v.reason = std::move(why);
    v.witness = std::move(w);
    return v;
  };
  if (P.size() == 0) return fail("empty poset", {});
  const auto bot = P.bottom();
  if (!bot) return fail("no minimum element", {});
  if (P.rank(*bot) != 0) return fail("minimum does not have rank 0", {*bot});
  if (!P.top()) return fail("no maximum element", {});
  const std::size_t n = P.size();
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q) {
      const auto j = detail::least_of(P, P.up(p) & P.up(q));
      if (!j) return fail("no join of " + P.label(p) + " and " + P.label(q), {p, q});
      const auto m = detail::greatest_of(P, P.down(p) & P.down(q));
      if (!m) return fail("no meet of " + P.label(p) + " and " + P.label(q), {p, q});
      if (P.rank(*m) + P.rank(*j) > P.rank(p) + P.rank(q))
        return fail("semimodular inequality fails for " + P.label(p) + " and " + P.label(q), {p, q});
    }
  const auto atoms = P.atoms();
  for (std::size_t p = 0; p < n; ++p) {
    if (p == *bot) continue;
    Bits common(n);
    common.set();
    bool any = false;
    for (std::size_t a : atoms)
      if (P.leq(a, p)) {
        common &= P.up(a);
        any = true;
      }
    if (!any || detail::least_of(P, common) != p)
      return fail("element " + P.label(p) + " is not a join of atoms", {p});
  }
  return v;
}

/// Geometric lattice with join/meet tables.
class GeometricLattice {
 public:
  GeometricLattice() = default;

  explicit GeometricLattice(RankedPoset P) : poset_(std::move(P)) {
    const auto verdict = check_geometric(poset_);
    if (!verdict) throw ValidationError("not a geometric lattice: " + verdict.reason);
    const std::size_t n = poset_.size();
    join_.assign(n * n, 0);
    meet_.assign(n * n, 0);
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p; q < n; ++q) {
        const std::size_t j = *detail::least_of(poset_, poset_.up(p) & poset_.up(q));
        const std::size_t m = *detail::greatest_of(poset_, poset_.down(p) & poset_.down(q));
        join_[p * n + q] = join_[q * n + p] = j;
        meet_[p * n + q] = meet_[q * n + p] = m;
      }
    atoms_ = poset_.atoms();
    bottom_ = *poset_.bottom();
    top_ = *poset_.top();
  }

  const RankedPoset& poset() const { return poset_; }
  std::size_t size() const { return poset_.size(); }
  int rank(std::size_t p) const { return poset_.rank(p); }
  std::size_t join(std::size_t p, std::size_t q) const { return join_[p * size() + q]; }
  std::size_t meet(std::size_t p, std::size_t q) const { return meet_[p * size() + q]; }
  const std::vector<std::size_t>& atoms() const { return atoms_; }
  std::size_t bottom() const { return bottom_; }
  std::size_t top() const { return top_; }

  std::size_t join_all(const std::vector<std::size_t>& elems) const {
    std::size_t j = bottom_;
    for (std::size_t e : elems) j = join(j, e);
    return j;
  }

 private:
  RankedPoset poset_;
  std::vector<std::size_t> join_;
  std::vector<std::size_t> meet_;
  std::vector<std::size_t> atoms_;
  std::size_t bottom_ = 0;
  std::size_t top_ = 0;
};

/// r(join S) == sum of r(p) over S.
inline bool independent(const GeometricLattice& L, const std::vector<std::size_t>& elems) {
  if (elems.empty()) throw Error("independent: empty element set");
  int sum = 0;
  for (std::size_t e : elems) sum += L.rank(e);
  return L.rank(L.join_all(elems)) == sum;
}

/// Every lower interval [0, p] is a geometric lattice.
inline GeometricVerdict check_locally_geometric(const RankedPoset& P) {
  GeometricVerdict v;
  const auto bot = P.bottom();
  if (!bot) {
    v.ok = false;
    v.reason = "no minimum element";
    return v;
  }
  for (std::size_t p = 0; p < P.size(); ++p) {
    const auto sub = interval(P, *bot, p);
    const auto inner = check_geometric(sub.poset);
    if (!inner) {
      v.ok = false;
      v.reason = "interval below " + P.label(p) + ": " + inner.reason;
      v.witness = {p};
      return v;
    }
  }
  return v;
}

inline nlohmann::json poset_to_json(const RankedPoset& P) {
  nlohmann::json covers = nlohmann::json::array();
  for (const auto& c : P.covers()) covers.push_back({c.lower, c.upper});
  return {{"elements", P.labels()}, {"covers", covers}, {"ranks", P.ranks()}};
}

inline RankedPoset poset_from_json(const nlohmann::json& j, std::size_t max_elements = kDefaultMaxElements) {
  try {
    std::vector<std::string> labels;
    for (const auto& e : j.at("elements")) labels.push_back(e.is_string() ? e.get<std::string>() : e.dump());
    std::vector<int> ranks = j.at("ranks").get<std::vector<int>>();
    std::vector<Cover> covers;
    for (const auto& c : j.at("covers")) covers.push_back({c.at(0).get<std::size_t>(), c.at(1).get<std::size_t>()});
    return RankedPoset(std::move(labels), std::move(ranks), std::move(covers), max_elements);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("poset JSON: ") + e.what());
  }
}

}  // namespace osa
