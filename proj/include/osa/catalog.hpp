#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "osa/manifold.hpp"

namespace osa::catalog {

/// R^m with zero diagonal class.
inline ManifoldData euclidean(int m, FieldTag field = FieldTag::GF2) {
  return manifold_from_json({{"real_dim", m},
                             {"field", std::string(field_name(field))},
                             {"basis", {{{"name", "1"}, {"deg", 0}}}},
                             {"zero_diagonal", true}});
}

/// S^1 over GF(2).
inline ManifoldData circle() {
  return manifold_from_json(nlohmann::json::parse(R"({
    "real_dim": 1, "field": "GF2",
    "basis": [{"name": "1", "deg": 0}, {"name": "a", "deg": 1}],
    "diagonal_class": [[1, "1", "a"], [1, "a", "1"]]
  })"));
}

/// S^1 x R over GF(2).
inline ManifoldData cylinder() {
  return manifold_from_json(nlohmann::json::parse(R"({
    "real_dim": 2, "field": "GF2",
    "basis": [{"name": "1", "deg": 0}, {"name": "a", "deg": 1}],
    "zero_diagonal": true
  })"));
}

/// CP^1 over Q.
inline ManifoldData projective_line() {
  return manifold_from_json(nlohmann::json::parse(R"({
    "real_dim": 2, "field": "Q",
    "basis": [{"name": "1", "deg": 0}, {"name": "w", "deg": 2}],
    "diagonal_class": [[1, "1", "w"], [1, "w", "1"]],
    "projective_complex": true
  })"));
}

/// Complex elliptic curve over Q.
inline ManifoldData elliptic_curve() {
  return manifold_from_json(nlohmann::json::parse(R"({
    "real_dim": 2, "field": "Q",
    "basis": [{"name": "1", "deg": 0}, {"name": "a", "deg": 1}, {"name": "b", "deg": 1}, {"name": "w", "deg": 2}],
    "cup": [{"i": "a", "j": "b", "out": [[1, "w"]]}],
    "diagonal_class": [[1, "1", "w"], [1, "w", "1"], [-1, "a", "b"], [1, "b", "a"]],
    "projective_complex": true
  })"));
}

}  // namespace osa::catalog
