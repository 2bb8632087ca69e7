#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "osa/checks.hpp"
#include "osa/chromatic.hpp"
#include "osa/graph.hpp"
#include "osa/hyperplane.hpp"
#include "osa/oscomplex.hpp"

namespace osa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidation = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Settings {
  std::optional<std::string> field;
  std::string format = "text";
  std::size_t max_lattice = kDefaultMaxElements;
  std::uint64_t seed = 1;
  std::vector<std::string> inputs;
  std::optional<std::string> suite;
};

struct Output {
  std::string text;
  nlohmann::json json;
  int code = kExitOk;
};

namespace detail {

inline nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

inline FieldTag field_or(const Settings& s, FieldTag fallback) {
  return s.field ? parse_field(*s.field) : fallback;
}

inline ManifoldData read_manifold(const Settings& s, const std::string& path) {
  ManifoldData M = manifold_from_json(read_json(path));
  M.field = field_or(s, M.field);
  return M;
}

inline std::string tuple_string(const std::vector<long>& v) {
  std::string out = "(";
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? "," : "") + std::to_string(v[k]);
  return out + ")";
}

inline std::string ring_label(const ManifoldData& M) {
  return M.field == FieldTag::GF2 && check_thm_alg(M) ? "cohomology ring" : "associated graded";
}

template <class F>
void describe_page(const E2Page<F>& page, Output& out) {
  std::ostringstream os;
  for (const auto& [cell, d] : page.dims()) os << "E2 " << bidegree_string(cell) << ": " << d << "\n";
  os << "poincare: " << page.poincare().to_string() << "\n";
  if (page.weights)
    for (const auto& [cell, d] : page.dims())
      os << "degree " << cell.first + cell.second << " weight " << cell.second << ": " << d << "\n";
  out.text += os.str();
  out.json = page_to_json(page);
}

inline Output bond_lattice_cmd(const Settings& s) {
  const auto B = bond_lattice(graph_from_json(read_json(s.inputs.at(0))), s.max_lattice);
  const auto& P = B.poset();
  const auto& mu = P.mobius_row(B.lattice.bottom());
  Output out;
  std::ostringstream os;
  os << "elements: " << P.size() << "\n";
  for (std::size_t p = 0; p < P.size(); ++p) os << "rank " << P.rank(p) << "  " << P.label(p) << "  mu " << mu[p] << "\n";
  out.text = os.str();
  out.json = poset_to_json(P);
  out.json["mobius"] = mu;
  return out;
}

inline Output chromatic_cmd(const Settings& s) {
  const auto G = graph_from_json(read_json(s.inputs.at(0)));
  const auto chi = chromatic_poly_mobius(G, s.max_lattice);
  if (chi != chromatic_poly_dc(G)) throw ValidationError("chromatic polynomial: Mobius sum and deletion-contraction differ");
  const std::string text = chi.to_string(LaurentPoly2::Order::TDesc);
  return {text + "\n", {{"chromatic", text}}};
}

inline Output os_dims_cmd(const Settings& s) {
  const auto j = read_json(s.inputs.at(0));
  std::optional<BondLattice> bond;
  std::optional<IntersectionLattice> flats;
  if (j.contains("normals"))
    flats = intersection_lattice(arrangement_from_json(j), s.max_lattice);
  else
    bond = bond_lattice(graph_from_json(j), s.max_lattice);
  const OSAlgebra A = bond ? OSAlgebra::of_lattice(bond->lattice, bond->atom_order) : OSAlgebra::of_lattice(flats->lattice);
  const RankedPoset& P = A.poset();
  Output out;
  std::ostringstream os;
  std::vector<long> by_degree(P.max_rank() + 1, 0);
  nlohmann::json grades = nlohmann::json::array();
  for (std::size_t p = 0; p < P.size(); ++p) {
    os << P.label(p) << "  " << A.dim(p) << "\n";
    by_degree[P.rank(p)] += static_cast<long>(A.dim(p));
    grades.push_back({{"element", P.label(p)}, {"rank", P.rank(p)}, {"dim", A.dim(p)}});
  }
  os << "by degree: " << tuple_string(by_degree) << "\n";
  os << "total: " << A.total_dim() << "\n";
  out.text = os.str();
  out.json = {{"grades", grades}, {"by_degree", by_degree}, {"total", A.total_dim()}};
  return out;
}

inline Output e1_poly_cmd(const Settings& s) {
  const auto M = read_manifold(s, s.inputs.at(0));
  const auto G = graph_from_json(read_json(s.inputs.at(1)));
  const auto closed = e1_poly_closed(M, G);
  if (closed != e1_poly_direct(M, G, s.max_lattice))
    throw ValidationError("E1 polynomial: closed form and lattice sum differ");
  return {closed.to_string() + "\n", {{"e1_poly", closed.to_string()}}};
}

inline Output poincare_z2_cmd(const Settings& s) {
  const auto M = read_manifold(s, s.inputs.at(0));
  const auto P = poincare_z2(M, graph_from_json(read_json(s.inputs.at(1))));
  return {P.to_string() + "\n", {{"poincare", P.to_string()}}};
}

template <class F>
Output betti_with(const ManifoldData& M, const SimpleGraph& G, const Settings& s) {
  E2Page<F> page;
  if constexpr (std::is_same_v<F, Rational>) {
    if (M.projective_complex && M.diagonal_class) page = betti_projective(M, G, s.max_lattice);
  }
  if (page.classes.empty()) page = chromatic_page<F>(M, G, s.max_lattice);
  Output out;
  const bool collapses = page.collapse != "unknown";
  out.text = std::string(collapses ? "Betti " : "E2 totals ") + tuple_string(page.betti()) + "\n";
  out.text += "collapse: " + page.collapse + "\n";
  out.text += "ring: " + ring_label(M) + "\n";
  describe_page(page, out);
  out.json[collapses ? "betti" : "e2_totals"] = page.betti();
  out.json["ring"] = ring_label(M);
  out.json["euler_characteristic"] = page.euler_characteristic();
  return out;
}

inline Output betti_cmd(const Settings& s) {
  const auto M = read_manifold(s, s.inputs.at(0));
  const auto G = graph_from_json(read_json(s.inputs.at(1)));
  if (M.field == FieldTag::GF2) return betti_with<Gf2>(M, G, s);
  return betti_with<Rational>(M, G, s);
}

inline Output presentation_cmd(const Settings& s) {
  const auto M = read_manifold(s, s.inputs.at(0));
  const auto pres = presentation(M, graph_from_json(read_json(s.inputs.at(1))));
  Output out;
  std::ostringstream os;
  os << "base dimension: " << pres.base_dim << "\n";
  os << "edge generators: " << pres.generators.size() << "\n";
  os << "diagonal relations: " << pres.diagonal_relations << "\n";
  os << "cycle relations: " << pres.cycles.size() << "\n";
  nlohmann::json dims = nlohmann::json::array();
  for (const auto& [key, d] : pres.dims) {
    os << "edges " << key.first << ", base degree " << key.second << ": " << d << "\n";
    dims.push_back({{"edges", key.first}, {"base_degree", key.second}, {"dim", d}});
  }
  os << "poincare: " << pres.poincare().to_string() << "\n";
  os << "ring: " << ring_label(M) << "\n";
  out.text = os.str();
  out.json = {{"base_dim", pres.base_dim},
              {"edge_generators", pres.generators.size()},
              {"diagonal_relations", pres.diagonal_relations},
              {"cycle_relations", pres.cycles.size()},
              {"dims", dims},
              {"poincare", pres.poincare().to_string()},
              {"ring", ring_label(M)}};
  return out;
}

inline Output zaslavsky_cmd(const Settings& s) {
  const auto L = intersection_lattice(arrangement_from_json(read_json(s.inputs.at(0))), s.max_lattice);
  const auto f = zaslavsky_f(L);
  if (f.back() != chamber_count(L)) throw ValidationError("face count: top entry differs from the Mobius chamber count");
  return {f_vector_string(f) + "\n", {{"f", f}}};
}

inline Output complex_poincare_cmd(const Settings& s) {
  const auto P = complex_poincare(intersection_lattice(arrangement_from_json(read_json(s.inputs.at(0))), s.max_lattice));
  return {P.to_string() + "\n", {{"poincare", P.to_string()}}};
}

template <class F>
Output e2_with(const Settings& s) {
  auto P = std::make_shared<const RankedPoset>(poset_from_json(read_json(s.inputs.at(0)), s.max_lattice));
  auto C = std::make_shared<const Presheaf<F>>(presheaf_from_json<F>(P, read_json(s.inputs.at(1))));
  const OSComplex<F> K(C);
  Output out;
  describe_page(C->monoidal() ? e2_ring(K) : homology(K), out);
  return out;
}

inline Output e2_cmd(const Settings& s) {
  return field_or(s, FieldTag::Q) == FieldTag::GF2 ? e2_with<Gf2>(s) : e2_with<Rational>(s);
}

inline Output check_cmd(const Settings& s) {
  std::vector<const Criterion*> selected;
  if (s.suite) {
    const Criterion* c = find_criterion(*s.suite);
    if (!c) throw UsageError("unknown suite '" + *s.suite + "'");
    selected.push_back(c);
  } else {
    for (const auto& c : criteria()) selected.push_back(&c);
  }
  Output out;
  out.json = nlohmann::json::array();
  for (const Criterion* c : selected) {
    const auto r = run_criterion(*c, {.seed = s.seed});
    out.text += std::string(r.passed ? "PASS " : "FAIL ") + r.name + ": " + r.detail + "\n";
    out.json.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    if (!r.passed) out.code = kExitValidation;
  }
  return out;
}

}  // namespace detail

/// Parses argv, runs one subcommand and writes its output. Returns the exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Orlik-Solomon models of chromatic configuration spaces and arrangement complements", "osa"};
  app.require_subcommand(1);
  app.fallthrough();
  Settings s;
  app.add_option("--field", s.field, "Coefficient field")->check(CLI::IsMember({"Q", "GF2"}));
  app.add_option("--format", s.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--max-lattice", s.max_lattice, "Maximum number of poset elements")->check(CLI::PositiveNumber);
  app.add_option("--seed", s.seed, "Seed for sampled checks");

  using Handler = Output (*)(const Settings&);
  struct Command {
    const char* name;
    const char* help;
    std::vector<const char*> args;
    Handler handler;
  };
  const std::vector<Command> commands{
      {"bond-lattice", "Bond lattice of a graph with Mobius values", {"graph"}, detail::bond_lattice_cmd},
      {"chromatic", "Chromatic polynomial of a graph", {"graph"}, detail::chromatic_cmd},
      {"os-dims", "Orlik-Solomon dimensions of a graph or arrangement", {"input"}, detail::os_dims_cmd},
      {"e1-poly", "Two-variable E1 polynomial", {"manifold", "graph"}, detail::e1_poly_cmd},
      {"poincare-z2", "GF2 Poincare polynomial of the chromatic configuration space", {"manifold", "graph"},
       detail::poincare_z2_cmd},
      {"betti", "Betti numbers from the E2 page", {"manifold", "graph"}, detail::betti_cmd},
      {"presentation", "Graded dimensions of the GF2 presentation", {"manifold", "graph"}, detail::presentation_cmd},
      {"zaslavsky", "Face counts of a real central arrangement", {"arrangement"}, detail::zaslavsky_cmd},
      {"complex-poincare", "Poincare polynomial of the complexified complement", {"arrangement"},
       detail::complex_poincare_cmd},
      {"e2", "E2 page of a presheaf on a locally geometric poset", {"poset", "presheaf"}, detail::e2_cmd},
      {"check", "Run the invariant suites", {}, detail::check_cmd},
  };
  std::vector<std::string> positional(2);
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    for (std::size_t k = 0; k < c.args.size(); ++k) sub->add_option(c.args[k], positional[k])->required();
    if (std::string(c.name) == "check") sub->add_option("--suite", s.suite, "Suite name or number");
    subs.push_back({sub, &c});
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  for (const auto& [sub, command] : subs) {
    if (!sub->parsed()) continue;
    s.inputs.assign(positional.begin(), positional.begin() + static_cast<long>(command->args.size()));
    try {
      const Output result = command->handler(s);
      if (s.format == "json")
        out << result.json.dump(2) << "\n";
      else
        out << result.text;
      return result.code;
    } catch (const UsageError& e) {
      err << "usage error: " << e.what() << "\n";
      return kExitUsage;
    } catch (const Error& e) {
      err << "validation failed: " << e.what() << "\n";
      return kExitValidation;
    }
  }
  return kExitUsage;
}

}  // namespace osa::cli
