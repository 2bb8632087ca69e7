#pragma once

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "osa/error.hpp"
#include "osa/laurent.hpp"
#include "osa/poset.hpp"

namespace osa {

using Edge = std::pair<int, int>;

/// Simple graph on vertices 0..n-1 with edges stored as sorted pairs i < j.
class SimpleGraph {
 public:
  SimpleGraph() = default;
  SimpleGraph(int n, std::vector<Edge> edges) : n_(n) {
    if (n < 0) throw ValidationError("graph: negative vertex count");
    for (auto [i, j] : edges) {
      if (i == j) throw ValidationError("graph: loop at vertex " + std::to_string(i));
      if (i > j) std::swap(i, j);
      if (i < 0 || j >= n) throw ValidationError("graph: edge references unknown vertex");
      edges_.push_back({i, j});
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
      throw ValidationError("graph: repeated edge");
  }

  static SimpleGraph complete(int n) {
    std::vector<Edge> e;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) e.push_back({i, j});
    return SimpleGraph(n, std::move(e));
  }
  static SimpleGraph path(int n) {
    std::vector<Edge> e;
    for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
    return SimpleGraph(n, std::move(e));
  }
  static SimpleGraph cycle(int n) {
    auto e = path(n).edges();
    if (n >= 3) e.push_back({0, n - 1});
    return SimpleGraph(n, std::move(e));
  }

  int vertices() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  bool has_edge(int i, int j) const {
    if (i > j) std::swap(i, j);
    return std::binary_search(edges_.begin(), edges_.end(), Edge{i, j});
  }

  std::string encoding() const {
    std::string s = std::to_string(n_) + ":";
    for (auto [i, j] : edges_) s += std::to_string(i) + "-" + std::to_string(j) + ",";
    return s;
  }

  friend bool operator==(const SimpleGraph& a, const SimpleGraph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
};

inline SimpleGraph delete_edge(const SimpleGraph& G, Edge e) {
  if (e.first > e.second) std::swap(e.first, e.second);
  if (!G.has_edge(e.first, e.second)) throw Error("delete: edge not in graph");
  std::vector<Edge> rest;
  for (const auto& f : G.edges())
    if (f != e) rest.push_back(f);
  return SimpleGraph(G.vertices(), std::move(rest));
}

/// Merges the endpoints of e; vertices are renumbered by first appearance.
inline SimpleGraph contract_edge(const SimpleGraph& G, Edge e) {
  auto [keep, gone] = e;
  if (keep > gone) std::swap(keep, gone);
  if (!G.has_edge(keep, gone)) throw Error("contract: edge not in graph");
  auto relabel = [&](int v) {
    if (v == gone) v = keep;
    return v > gone ? v - 1 : v;
  };
  std::vector<Edge> out;
  for (auto [i, j] : G.edges()) {
    int a = relabel(i), b = relabel(j);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    out.push_back({a, b});
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return SimpleGraph(G.vertices() - 1, std::move(out));
}

/// Set partition of 0..n-1, blocks sorted internally and by minimum.
class Partition {
 public:
  Partition() = default;

  /// From a block id per vertex (any labelling).
  static Partition from_block_ids(const std::vector<int>& ids) {
    Partition p;
    std::map<int, int> renum;
    p.rgs_.resize(ids.size());
    for (std::size_t v = 0; v < ids.size(); ++v) {
      auto [it, fresh] = renum.try_emplace(ids[v], static_cast<int>(renum.size()));
      p.rgs_[v] = it->second;
    }
    p.blocks_.assign(renum.size(), {});
    for (std::size_t v = 0; v < ids.size(); ++v) p.blocks_[p.rgs_[v]].push_back(static_cast<int>(v));
    return p;
  }

  static Partition singletons(int n) {
    std::vector<int> ids(n);
    for (int v = 0; v < n; ++v) ids[v] = v;
    return from_block_ids(ids);
  }

  static Partition from_blocks(const std::vector<std::vector<int>>& blocks, int n) {
    std::vector<int> ids(n, -1);
    for (std::size_t b = 0; b < blocks.size(); ++b)
      for (int v : blocks[b]) {
        if (v < 0 || v >= n || ids[v] != -1) throw ValidationError("partition: blocks are not a set partition");
        ids[v] = static_cast<int>(b);
      }
    if (std::find(ids.begin(), ids.end(), -1) != ids.end()) throw ValidationError("partition: blocks do not cover");
    return from_block_ids(ids);
  }

  int size() const { return static_cast<int>(rgs_.size()); }
  int block_count() const { return static_cast<int>(blocks_.size()); }
  int rank() const { return size() - block_count(); }
  int block_of(int v) const { return rgs_.at(v); }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  const std::vector<int>& rgs() const { return rgs_; }

  Partition merged(int b1, int b2) const {
    std::vector<int> ids = rgs_;
    for (int& x : ids)
      if (x == b2) x = b1;
    return from_block_ids(ids);
  }

  /// Every block of this partition lies inside a block of other.
  bool refines(const Partition& other) const {
    std::vector<int> image(block_count(), -1);
    for (int v = 0; v < size(); ++v) {
      int& slot = image[rgs_[v]];
      if (slot == -1) slot = other.block_of(v);
      else if (slot != other.block_of(v)) return false;
    }
    return true;
  }

  std::string label() const {
    std::string s;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      if (b) s += ',';
      s += '{';
      for (std::size_t k = 0; k < blocks_[b].size(); ++k) s += (k ? "," : "") + std::to_string(blocks_[b][k]);
      s += '}';
    }
    return s;
  }

  friend bool operator==(const Partition& a, const Partition& b) { return a.rgs_ == b.rgs_; }
  friend bool operator<(const Partition& a, const Partition& b) { return a.rgs_ < b.rgs_; }

 private:
  std::vector<int> rgs_;
  std::vector<std::vector<int>> blocks_;
};

/// Bond lattice with partition labels and the lexicographic edge order on atoms.
struct BondLattice {
  SimpleGraph graph;
  GeometricLattice lattice;
  std::vector<Partition> partitions;   // by element index
  std::vector<std::size_t> atom_order;  // atom elements in edge order
  std::map<Edge, std::size_t> atom_of_edge;

  const RankedPoset& poset() const { return lattice.poset(); }
  std::size_t index_of(const Partition& p) const { return poset().index_of(p.label()); }
};

inline BondLattice bond_lattice(const SimpleGraph& G, std::size_t max_elements = kDefaultMaxElements) {
  if (G.vertices() < 1) throw Error("bond_lattice: graph needs at least one vertex");
  std::map<Partition, std::size_t> seen;
  std::vector<Partition> found;
  std::vector<Cover> covers;
  std::deque<std::size_t> queue;
  auto visit = [&](Partition p) {
    auto [it, fresh] = seen.try_emplace(p, found.size());
    if (fresh) {
      if (found.size() >= max_elements)
        throw SizeGuardError("bond lattice exceeds " + std::to_string(max_elements) + " elements");
      found.push_back(std::move(p));
      queue.push_back(it->second);
    }
    return it->second;
  };
  visit(Partition::singletons(G.vertices()));
  while (!queue.empty()) {
    const std::size_t q = queue.front();
    queue.pop_front();
    const Partition base = found[q];
    for (auto [i, j] : G.edges()) {
      const int bi = base.block_of(i), bj = base.block_of(j);
      if (bi == bj) continue;
      const std::size_t p = visit(base.merged(bi, bj));
      covers.push_back({q, p});
    }
  }
  std::vector<std::string> labels;
  std::vector<int> ranks;
  for (const auto& p : found) {
    labels.push_back(p.label());
    ranks.push_back(p.rank());
  }
  BondLattice out;
  out.graph = G;
  out.lattice = GeometricLattice(RankedPoset(std::move(labels), std::move(ranks), std::move(covers), max_elements));
  out.partitions.resize(found.size());
  for (const auto& p : found) out.partitions[out.poset().index_of(p.label())] = p;
  for (auto [i, j] : G.edges()) {
    std::vector<int> ids(G.vertices());
    for (int v = 0; v < G.vertices(); ++v) ids[v] = v;
    ids[j] = i;
    const std::size_t a = out.poset().index_of(Partition::from_block_ids(ids).label());
    out.atom_order.push_back(a);
    out.atom_of_edge.emplace(Edge{i, j}, a);
  }
  return out;
}

/// The spanning subgraph keeping only edges inside blocks of p.
inline SimpleGraph restrict_graph(const SimpleGraph& G, const Partition& p) {
  if (p.size() != G.vertices()) throw Error("restrict: partition size differs from vertex count");
  std::vector<Edge> kept;
  for (auto [i, j] : G.edges())
    if (p.block_of(i) == p.block_of(j)) kept.push_back({i, j});
  // each block must be connected by kept edges
  std::vector<int> comp(G.vertices());
  for (int v = 0; v < G.vertices(); ++v) comp[v] = v;
  auto find = [&](int v) {
    while (comp[v] != v) v = comp[v] = comp[comp[v]];
    return v;
  };
  for (auto [i, j] : kept) comp[find(i)] = find(j);
  for (const auto& block : p.blocks())
    for (int v : block)
      if (find(v) != find(block.front())) throw Error("restrict: partition " + p.label() + " is not in the bond lattice");
  return SimpleGraph(G.vertices(), std::move(kept));
}

/// Chromatic polynomial by deletion and contraction with memoization.
class ChromaticMemo {
 public:
  LaurentPoly2 operator()(const SimpleGraph& G) {
    const std::string key = G.encoding();
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    LaurentPoly2 result;
    if (G.edges().empty()) {
      result = LaurentPoly2::t_pow(G.vertices());
    } else {
      const Edge e = G.edges().back();
      result = (*this)(delete_edge(G, e)) - (*this)(contract_edge(G, e));
    }
    memo_.emplace(key, result);
    return result;
  }

 private:
  std::map<std::string, LaurentPoly2> memo_;
};

inline LaurentPoly2 chromatic_poly_dc(const SimpleGraph& G) {
  ChromaticMemo memo;
  return memo(G);
}

inline LaurentPoly2 chromatic_poly_mobius(const BondLattice& B) {
  const auto& P = B.poset();
  const std::size_t bot = B.lattice.bottom();
  const auto& mu = P.mobius_row(bot);
  LaurentPoly2 chi;
  for (std::size_t p = 0; p < P.size(); ++p) chi.add_term(0, B.graph.vertices() - P.rank(p), mpz_class(static_cast<long>(mu[p])));
  return chi;
}

inline LaurentPoly2 chromatic_poly_mobius(const SimpleGraph& G, std::size_t max_elements = kDefaultMaxElements) {
  return chromatic_poly_mobius(bond_lattice(G, max_elements));
}

/// One representative per isomorphism class of graphs on n vertices.
inline std::vector<SimpleGraph> nonisomorphic_graphs(int n) {
  std::vector<Edge> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> perms;
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
  std::vector<std::vector<int>> image(perms.size(), std::vector<int>(pairs.size()));
  for (std::size_t k = 0; k < perms.size(); ++k)
    for (std::size_t e = 0; e < pairs.size(); ++e) {
      int a = perms[k][pairs[e].first], b = perms[k][pairs[e].second];
      if (a > b) std::swap(a, b);
      image[k][e] = static_cast<int>(std::find(pairs.begin(), pairs.end(), Edge{a, b}) - pairs.begin());
    }
  std::set<std::uint32_t> seen;
  std::vector<SimpleGraph> out;
  for (std::uint32_t mask = 0; mask < (1u << pairs.size()); ++mask) {
    std::uint32_t canon = mask;
    for (const auto& img : image) {
      std::uint32_t m = 0;
      for (std::size_t e = 0; e < pairs.size(); ++e)
        if (mask >> e & 1) m |= 1u << img[e];
      canon = std::min(canon, m);
    }
    if (!seen.insert(canon).second) continue;
    std::vector<Edge> edges;
    for (std::size_t e = 0; e < pairs.size(); ++e)
      if (canon >> e & 1) edges.push_back(pairs[e]);
    out.emplace_back(n, std::move(edges));
  }
  return out;
}

/// Representatives of all graphs with min_n..max_n vertices.
inline std::vector<SimpleGraph> nonisomorphic_graphs(int min_n, int max_n) {
  std::vector<SimpleGraph> out;
  for (int n = min_n; n <= max_n; ++n) {
    auto g = nonisomorphic_graphs(n);
    out.insert(out.end(), g.begin(), g.end());
  }
  return out;
}

/// Proper k-colourings by enumerating all k^n assignments.
inline long long count_proper_colorings(const SimpleGraph& G, int k) {
  const int n = G.vertices();
  if (n == 0) return 1;
  if (k <= 0) return 0;
  std::vector<int> color(n, 0);
  long long count = 0;
  while (true) {
    bool proper = true;
    for (auto [i, j] : G.edges())
      if (color[i] == color[j]) {
        proper = false;
        break;
      }
    count += proper;
    int v = 0;
    while (v < n && ++color[v] == k) color[v++] = 0;
    if (v == n) break;
  }
  return count;
}

inline nlohmann::json graph_to_json(const SimpleGraph& G) {
  nlohmann::json edges = nlohmann::json::array();
  for (auto [i, j] : G.edges()) edges.push_back({i, j});
  return {{"vertices", G.vertices()}, {"edges", edges}};
}

inline SimpleGraph graph_from_json(const nlohmann::json& j) {
  try {
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    return SimpleGraph(j.at("vertices").get<int>(), std::move(edges));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("graph JSON: ") + e.what());
  }
}

}  // namespace osa
