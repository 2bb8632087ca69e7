#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "osa/error.hpp"
#include "osa/field.hpp"

namespace osa {

template <class F>
using Vector = std::vector<F>;

/// Dense row-major matrix over an exact field.
template <class F>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, F(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = F(1);
    return m;
  }

  static Matrix from_rows(const std::vector<Vector<F>>& rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw Error("Matrix::from_rows: ragged input");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static Matrix from_columns(const std::vector<Vector<F>>& columns, std::size_t rows) {
    Matrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j].size() != rows) throw Error("Matrix::from_columns: ragged input");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  F& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const F& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vector<F> row(std::size_t i) const {
    return Vector<F>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }
  Vector<F> column(std::size_t j) const {
    Vector<F> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const F& x) { return osa::is_zero(x); });
  }

  Vector<F> apply(const Vector<F>& v) const {
    if (v.size() != cols_) throw Error("Matrix::apply: dimension mismatch");
    Vector<F> out(rows_, F(0));
    for (std::size_t j = 0; j < cols_; ++j) {
      if (osa::is_zero(v[j])) continue;
      for (std::size_t i = 0; i < rows_; ++i) {
        const F& a = (*this)(i, j);
        if (!osa::is_zero(a)) out[i] += a * v[j];
      }
    }
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw Error("Matrix product: dimension mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const F& x = a(i, k);
        if (osa::is_zero(x)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          const F& y = b(k, j);
          if (!osa::is_zero(y)) c(i, j) += x * y;
        }
      }
    return c;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::string to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < rows_; ++i) {
      os << '[';
      for (std::size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << FieldTraits<F>::to_string((*this)(i, j));
      os << "]\n";
    }
    return os.str();
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<F> data_;
};

template <class F>
struct Echelon {
  Matrix<F> reduced;                 // reduced row echelon form
  std::vector<std::size_t> pivots;   // pivot column of each nonzero row
};

namespace detail {

inline std::vector<std::vector<std::uint64_t>> pack_rows(const Matrix<Gf2>& m) {
  const std::size_t words = (m.cols() + 63) / 64;
  std::vector<std::vector<std::uint64_t>> rows(m.rows(), std::vector<std::uint64_t>(words, 0));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j).v) rows[i][j / 64] |= std::uint64_t{1} << (j % 64);
  return rows;
}

}  // namespace detail

/// Reduced row echelon form. Pivots are taken column by column, using the
/// first available row with a nonzero entry, so the result is deterministic.
template <class F>
Echelon<F> rref(Matrix<F> m) {
  Echelon<F> out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && is_zero(m(piv, c))) ++piv;
    if (piv == m.rows()) continue;
    if (piv != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
    const F inv = F(1) / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || is_zero(m(i, c))) continue;
      const F factor = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (!is_zero(m(r, j))) m(i, j) -= factor * m(r, j);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.reduced = std::move(m);
  return out;
}

template <>
inline Echelon<Gf2> rref(Matrix<Gf2> m) {
  auto rows = detail::pack_rows(m);
  Echelon<Gf2> out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < rows.size(); ++c) {
    const std::size_t w = c / 64;
    const std::uint64_t bit = std::uint64_t{1} << (c % 64);
    std::size_t piv = r;
    while (piv < rows.size() && !(rows[piv][w] & bit)) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[r]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || !(rows[i][w] & bit)) continue;
      for (std::size_t k = w; k < rows[i].size(); ++k) rows[i][k] ^= rows[r][k];
    }
    out.pivots.push_back(c);
    ++r;
  }
  Matrix<Gf2> red(m.rows(), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) red(i, j) = Gf2((rows[i][j / 64] >> (j % 64)) & 1);
  out.reduced = std::move(red);
  return out;
}

template <class F>
std::size_t rank(const Matrix<F>& m) {
  if (m.empty()) return 0;
  return rref(m).pivots.size();
}

/// Basis of the null space {v : m v = 0}; one vector per free column.
template <class F>
std::vector<Vector<F>> kernel_basis(const Matrix<F>& m) {
  std::vector<Vector<F>> basis;
  const std::size_t n = m.cols();
  if (m.rows() == 0) {
    for (std::size_t j = 0; j < n; ++j) {
      Vector<F> v(n, F(0));
      v[j] = F(1);
      basis.push_back(std::move(v));
    }
    return basis;
  }
  const auto e = rref(m);
  std::vector<int> pivot_row(n, -1);
  for (std::size_t i = 0; i < e.pivots.size(); ++i) pivot_row[e.pivots[i]] = static_cast<int>(i);
  for (std::size_t f = 0; f < n; ++f) {
    if (pivot_row[f] >= 0) continue;
    Vector<F> v(n, F(0));
    v[f] = F(1);
    for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.reduced(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Incrementally maintained span with optional bookkeeping of how each stored
/// row is expressed through the accepted input vectors.
template <class F>
class SpanReducer {
 public:
  explicit SpanReducer(std::size_t dim, bool track = false) : dim_(dim), track_(track) {}

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return rows_.size(); }

  /// Adds v if it is independent of the current span; returns whether it was.
  bool add(const Vector<F>& v) {
    check(v);
    Vector<F> combo;
    Vector<F> r = reduce_impl(v, track_ ? &combo : nullptr);
    std::size_t p = 0;
    while (p < dim_ && is_zero(r[p])) ++p;
    if (p == dim_) return false;
    const F inv = F(1) / r[p];
    for (auto& x : r) x *= inv;
    if (track_) {
      // row = (v - sum combo_k row_k) / pivot; rewritten over accepted inputs
      Vector<F> expr(accepted_ + 1, F(0));
      for (std::size_t k = 0; k < combo.size(); ++k) {
        if (is_zero(combo[k])) continue;
        for (std::size_t a = 0; a < combos_[k].size(); ++a) expr[a] -= combo[k] * combos_[k][a];
      }
      expr[accepted_] += F(1);
      for (auto& x : expr) x *= inv;
      combos_.push_back(std::move(expr));
    }
    rows_.push_back(std::move(r));
    pivots_.push_back(p);
    ++accepted_;
    return true;
  }

  Vector<F> reduce(const Vector<F>& v) const {
    check(v);
    return reduce_impl(v, nullptr);
  }

  bool contains(const Vector<F>& v) const {
    const auto r = reduce(v);
    return std::all_of(r.begin(), r.end(), [](const F& x) { return is_zero(x); });
  }

  /// Coordinates of v with respect to the accepted input vectors, or nullopt
  /// if v lies outside the span. Requires tracking.
  std::optional<Vector<F>> coordinates(const Vector<F>& v) const {
    if (!track_) throw Error("SpanReducer::coordinates requires tracking");
    check(v);
    Vector<F> combo;
    const Vector<F> r = reduce_impl(v, &combo);
    if (!std::all_of(r.begin(), r.end(), [](const F& x) { return is_zero(x); })) return std::nullopt;
    Vector<F> out(accepted_, F(0));
    for (std::size_t k = 0; k < combo.size(); ++k) {
      if (is_zero(combo[k])) continue;
      for (std::size_t a = 0; a < combos_[k].size(); ++a) out[a] += combo[k] * combos_[k][a];
    }
    return out;
  }

 private:
  void check(const Vector<F>& v) const {
    if (v.size() != dim_) throw Error("SpanReducer: vector of wrong dimension");
  }

  Vector<F> reduce_impl(Vector<F> v, Vector<F>* combo) const {
    if (combo) combo->assign(rows_.size(), F(0));
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const std::size_t p = pivots_[k];
      if (is_zero(v[p])) continue;
      const F factor = v[p];
      const auto& row = rows_[k];
      for (std::size_t j = p; j < dim_; ++j)
        if (!is_zero(row[j])) v[j] -= factor * row[j];
      if (combo) (*combo)[k] = factor;
    }
    return v;
  }

  std::size_t dim_;
  bool track_;
  std::size_t accepted_ = 0;
  std::vector<Vector<F>> rows_;
  std::vector<std::size_t> pivots_;
  std::vector<Vector<F>> combos_;
};

/// Bit-packed GF(2) specialization.
template <>
class SpanReducer<Gf2> {
  using Words = std::vector<std::uint64_t>;

 public:
  explicit SpanReducer(std::size_t dim, bool track = false)
      : dim_(dim), words_((dim + 63) / 64), track_(track) {}

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return rows_.size(); }

  bool add(const Vector<Gf2>& v) { return add_packed(pack(v)); }

  /// Packed entry point for callers that build bit rows directly.
  bool add_packed(Words r) {
    Words combo;
    reduce_words(r, track_ ? &combo : nullptr);
    std::size_t p = first_bit(r);
    if (p == dim_) return false;
    if (track_) {
      Words expr((accepted_ + 1 + 63) / 64, 0);
      for (std::size_t k = 0; k < rows_.size(); ++k) {
        if (!((combo[k / 64] >> (k % 64)) & 1)) continue;
        for (std::size_t w = 0; w < combos_[k].size(); ++w) expr[w] ^= combos_[k][w];
      }
      expr[accepted_ / 64] ^= std::uint64_t{1} << (accepted_ % 64);
      combos_.push_back(std::move(expr));
    }
    rows_.push_back(std::move(r));
    pivots_.push_back(p);
    ++accepted_;
    return true;
  }

  Vector<Gf2> reduce(const Vector<Gf2>& v) const {
    Words r = pack(v);
    reduce_words(r, nullptr);
    return unpack(r, dim_);
  }

  bool contains(const Vector<Gf2>& v) const {
    Words r = pack(v);
    reduce_words(r, nullptr);
    return first_bit(r) == dim_;
  }

  std::optional<Vector<Gf2>> coordinates(const Vector<Gf2>& v) const {
    if (!track_) throw Error("SpanReducer::coordinates requires tracking");
    Words r = pack(v);
    Words combo;
    reduce_words(r, &combo);
    if (first_bit(r) != dim_) return std::nullopt;
    Words out((accepted_ + 63) / 64, 0);
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      if (!((combo[k / 64] >> (k % 64)) & 1)) continue;
      for (std::size_t w = 0; w < combos_[k].size(); ++w) out[w] ^= combos_[k][w];
    }
    return unpack(out, accepted_);
  }

  Words pack(const Vector<Gf2>& v) const {
    if (v.size() != dim_) throw Error("SpanReducer: vector of wrong dimension");
    Words r(words_, 0);
    for (std::size_t j = 0; j < dim_; ++j)
      if (v[j].v) r[j / 64] |= std::uint64_t{1} << (j % 64);
    return r;
  }

 private:
  static Vector<Gf2> unpack(const Words& r, std::size_t n) {
    Vector<Gf2> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = Gf2((r[j / 64] >> (j % 64)) & 1);
    return v;
  }

  std::size_t first_bit(const Words& r) const {
    for (std::size_t w = 0; w < r.size(); ++w)
      if (r[w]) return std::min(dim_, w * 64 + static_cast<std::size_t>(__builtin_ctzll(r[w])));
    return dim_;
  }

  void reduce_words(Words& r, Words* combo) const {
    if (combo) combo->assign((rows_.size() + 63) / 64 + 1, 0);
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const std::size_t p = pivots_[k];
      if (!((r[p / 64] >> (p % 64)) & 1)) continue;
      for (std::size_t w = p / 64; w < words_; ++w) r[w] ^= rows_[k][w];
      if (combo) (*combo)[k / 64] |= std::uint64_t{1} << (k % 64);
    }
  }

  std::size_t dim_;
  std::size_t words_;
  bool track_;
  std::size_t accepted_ = 0;
  std::vector<Words> rows_;
  std::vector<std::size_t> pivots_;
  std::vector<Words> combos_;
};

/// Representatives completing span(image) to the whole space. Candidates are
/// tried in order (standard basis vectors by default) and kept when they
/// enlarge the span, so the lowest-index pivots win.
template <class F>
std::vector<Vector<F>> quotient_basis(std::size_t space_dim, const std::vector<Vector<F>>& image_vectors,
                                      const std::vector<Vector<F>>* candidates = nullptr) {
  SpanReducer<F> span(space_dim);
  for (const auto& v : image_vectors) span.add(v);
  std::vector<Vector<F>> reps;
  auto consider = [&](const Vector<F>& c) {
    if (span.add(c)) reps.push_back(c);
  };
  if (candidates) {
    for (const auto& c : *candidates) consider(c);
  } else {
    for (std::size_t j = 0; j < space_dim; ++j) {
      Vector<F> e(space_dim, F(0));
      e[j] = F(1);
      consider(e);
    }
  }
  return reps;
}

}  // namespace osa
