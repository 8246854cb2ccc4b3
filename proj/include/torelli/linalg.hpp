#pragma once

// Exact linear algebra over a coefficient field: rank, kernels, column-space
// intersection with coordinate subspaces, and Smith normal form over Z.
//
// Over the rationals the elimination is fraction-free: rows are kept as
// primitive integer vectors and every combination step is followed by
// content removal. A partially reduced vector is always the primitive part of
// a vector that is unique given the pivots seen so far, so coefficient sizes
// stay bounded by the minors of the input.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "torelli/field.hpp"

namespace torelli {

/// Sparse vector: (index, value) pairs sorted by index, no stored zeros.
template <class F>
using SparseVector = std::vector<std::pair<std::size_t, F>>;

template <class F>
std::vector<F> to_dense(const SparseVector<F>& v, std::size_t dim) {
  std::vector<F> d(dim, F(0));
  for (const auto& [i, x] : v) d[i] = x;
  return d;
}

template <class F>
SparseVector<F> to_sparse(const std::vector<F>& d) {
  SparseVector<F> v;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (!is_zero(d[i])) v.emplace_back(i, d[i]);
  return v;
}

/// Sparse matrix stored by columns.
template <class F>
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), columns_(cols) {}

  static SparseMatrix from_columns(std::size_t rows, std::vector<SparseVector<F>> columns) {
    SparseMatrix m;
    m.rows_ = rows;
    m.columns_ = std::move(columns);
    for (auto& c : m.columns_) {
      std::sort(c.begin(), c.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      std::erase_if(c, [](const auto& e) { return is_zero(e.second); });
      for (const auto& e : c)
        if (e.first >= rows) throw std::out_of_range("SparseMatrix: row index out of range");
    }
    return m;
  }

  static SparseMatrix from_dense(const std::vector<std::vector<F>>& rows) {
    const std::size_t nr = rows.size();
    const std::size_t nc = nr == 0 ? 0 : rows.front().size();
    SparseMatrix m(nr, nc);
    for (std::size_t r = 0; r < nr; ++r)
      for (std::size_t c = 0; c < nc; ++c)
        if (!is_zero(rows[r][c])) m.columns_[c].emplace_back(r, rows[r][c]);
    return m;
  }

  static SparseMatrix identity(std::size_t n) {
    SparseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.columns_[i].emplace_back(i, F(1));
    return m;
  }

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return columns_.size(); }
  [[nodiscard]] const SparseVector<F>& column(std::size_t c) const { return columns_[c]; }
  [[nodiscard]] const std::vector<SparseVector<F>>& columns() const { return columns_; }

  void append_column(SparseVector<F> c) {
    std::erase_if(c, [](const auto& e) { return is_zero(e.second); });
    columns_.push_back(std::move(c));
  }

  [[nodiscard]] F at(std::size_t r, std::size_t c) const {
    for (const auto& [i, x] : columns_[c])
      if (i == r) return x;
    return F(0);
  }

  [[nodiscard]] std::size_t nonzeros() const {
    std::size_t n = 0;
    for (const auto& c : columns_) n += c.size();
    return n;
  }

  /// Rows of the matrix as sparse vectors of length cols().
  [[nodiscard]] std::vector<SparseVector<F>> row_vectors() const {
    std::vector<SparseVector<F>> out(rows_);
    for (std::size_t c = 0; c < columns_.size(); ++c)
      for (const auto& [r, x] : columns_[c]) out[r].emplace_back(c, x);
    return out;
  }

  [[nodiscard]] SparseMatrix transpose() const {
    return SparseMatrix::from_columns(cols(), row_vectors());
  }

  [[nodiscard]] std::vector<F> apply(const std::vector<F>& x) const {
    std::vector<F> y(rows_, F(0));
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      if (is_zero(x[c])) continue;
      for (const auto& [r, a] : columns_[c]) y[r] += a * x[c];
    }
    return y;
  }

  /// Submatrix on the given rows (renumbered in the given order).
  [[nodiscard]] SparseMatrix select_rows(std::span<const std::size_t> keep) const {
    std::vector<std::size_t> map(rows_, rows_);
    for (std::size_t i = 0; i < keep.size(); ++i) map[keep[i]] = i;
    SparseMatrix m(keep.size(), cols());
    for (std::size_t c = 0; c < cols(); ++c)
      for (const auto& [r, x] : columns_[c])
        if (map[r] != rows_) m.columns_[c].emplace_back(map[r], x);
    for (auto& col : m.columns_)
      std::sort(col.begin(), col.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return m;
  }

  /// Horizontal concatenation [A | B].
  friend SparseMatrix hconcat(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.rows_ != b.rows_) throw std::invalid_argument("hconcat: row counts differ");
    SparseMatrix m = a;
    m.columns_.insert(m.columns_.end(), b.columns_.begin(), b.columns_.end());
    return m;
  }

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
    return a.rows_ == b.rows_ && a.columns_ == b.columns_;
  }

 private:
  std::size_t rows_ = 0;
  std::vector<SparseVector<F>> columns_;
};

using RationalMatrix = SparseMatrix<Rational>;

namespace detail {

/// Row arithmetic for elimination over a field: pivots normalized to one.
template <class F>
struct FieldRows {
  using Entry = F;
  static std::vector<Entry> load(std::vector<F> v, F* scale = nullptr) {
    if (scale != nullptr) *scale = F(1);
    return v;
  }
  static void normalize(std::vector<Entry>& row, std::size_t pivot) {
    F inv = inverse(row[pivot]);
    for (auto& x : row)
      if (!is_zero(x)) x *= inv;
  }
  /// v <- v - v[p] * row, with row[p] == 1.
  static void eliminate(std::vector<Entry>& v, const std::vector<Entry>& row, std::size_t p,
                        std::span<const std::size_t> row_support, F* /*scale*/ = nullptr) {
    F f = v[p];
    for (std::size_t i : row_support) v[i] -= f * row[i];
  }
  static F value(const std::vector<Entry>& row, std::size_t i, std::size_t /*pivot*/) { return row[i]; }
};

/// Fraction-free row arithmetic for rational input: primitive integer rows.
struct IntegerRows {
  using Entry = Integer;
  /// Integer vector proportional to v; `scale` receives v / result.
  static std::vector<Entry> load(const std::vector<Rational>& v, Rational* scale = nullptr) {
    Integer l = 1;
    for (const auto& x : v)
      if (!is_zero(x)) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    std::vector<Entry> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      if (!is_zero(v[i])) out[i] = v[i].get_num() * (l / v[i].get_den());
    Integer g = make_primitive(out);
    if (scale != nullptr) {
      *scale = Rational(g, l);
      scale->canonicalize();
    }
    return out;
  }
  /// Divides out the content; returns it (1 for the zero vector).
  static Integer make_primitive(std::vector<Entry>& v) {
    Integer g = 0;
    for (const auto& x : v) {
      if (sgn(x) == 0) continue;
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
      if (g == 1) return g;
    }
    if (g == 0 || g == 1) return 1;
    for (auto& x : v)
      if (sgn(x) != 0) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    return g;
  }
  static void normalize(std::vector<Entry>& row, std::size_t pivot) {
    if (sgn(row[pivot]) < 0)
      for (auto& x : row) x = -x;
  }
  /// v <- ((row[p]/g) * v - (v[p]/g) * row) / content. Modulo the row,
  /// the old v equals (content / (row[p]/g)) times the new one; that factor
  /// is multiplied into `scale` when given.
  static void eliminate(std::vector<Entry>& v, const std::vector<Entry>& row, std::size_t p,
                        std::span<const std::size_t> row_support, Rational* scale = nullptr) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), row[p].get_mpz_t(), v[p].get_mpz_t());
    Integer a = row[p] / g;
    Integer b = v[p] / g;
    if (a != 1)
      for (auto& x : v)
        if (sgn(x) != 0) x *= a;
    for (std::size_t i : row_support) mpz_submul(v[i].get_mpz_t(), b.get_mpz_t(), row[i].get_mpz_t());
    Integer c = make_primitive(v);
    if (scale != nullptr) {
      Rational f(c, a);
      f.canonicalize();
      *scale *= f;
    }
  }
  static Rational value(const std::vector<Entry>& row, std::size_t i, std::size_t pivot) {
    Rational q(row[i], row[pivot]);
    q.canonicalize();
    return q;
  }
};

template <class F>
struct RowsFor {
  using type = FieldRows<F>;
};
template <>
struct RowsFor<Rational> {
  using type = IntegerRows;
};

}  // namespace detail

/// Incrementally built echelon basis of a subspace of F^dim.
///
/// Pivot of a row = its first nonzero coordinate in the elimination order
/// (identity order unless a coordinate priority is supplied). Insertion is
/// deterministic; after reduce() the basis is the unique reduced echelon form.
template <class F>
class Echelon {
  using Rows = typename detail::RowsFor<F>::type;
  using Entry = typename Rows::Entry;

 public:
  explicit Echelon(std::size_t dim) : dim_(dim), rank_of_(dim, npos) {
    order_.resize(dim);
    std::iota(order_.begin(), order_.end(), 0);
    position_ = order_;
  }

  /// `order` lists coordinates from highest to lowest elimination priority.
  Echelon(std::size_t dim, std::vector<std::size_t> order) : dim_(dim), rank_of_(dim, npos), order_(std::move(order)) {
    if (order_.size() != dim_) throw std::invalid_argument("Echelon: order must be a permutation");
    position_.assign(dim_, npos);
    for (std::size_t i = 0; i < dim_; ++i) position_[order_[i]] = i;
  }

  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] std::size_t rank() const { return rows_.size(); }

  /// Inserts v; true iff v was independent of the current basis.
  bool insert(const std::vector<F>& v) {
    std::vector<Entry> r = reduce_entries(Rows::load(v));
    std::size_t p = leading(r);
    if (p == npos) return false;
    Rows::normalize(r, p);
    add_row(std::move(r), p);
    return true;
  }
  bool insert(const SparseVector<F>& v) { return insert(to_dense(v, dim_)); }

  /// True iff v lies in the span.
  [[nodiscard]] bool contains(const std::vector<F>& v) const {
    return leading(reduce_entries(Rows::load(v))) == npos;
  }
  [[nodiscard]] bool contains(const SparseVector<F>& v) const { return contains(to_dense(v, dim_)); }

  /// The unique vector of v + span that vanishes on every pivot coordinate.
  /// Linear in v.
  [[nodiscard]] std::vector<F> remainder(const std::vector<F>& v) const {
    F scale(1);
    auto r = reduce_entries(Rows::load(v, &scale), &scale);
    std::vector<F> out(dim_, F(0));
    for (std::size_t i = 0; i < dim_; ++i)
      if (!is_zero_entry(r[i])) out[i] = F(r[i]) * scale;
    return out;
  }

  /// Brings the basis into reduced echelon form.
  void reduce() {
    if (reduced_) return;
    // Process pivots from last to first in elimination order.
    std::vector<std::size_t> by_pos;
    for (std::size_t pos = dim_; pos > 0; --pos) {
      std::size_t coord = order_[pos - 1];
      if (rank_of_[coord] != npos) by_pos.push_back(coord);
    }
    for (std::size_t coord : by_pos) {
      const std::size_t ri = rank_of_[coord];
      auto support = support_of(rows_[ri]);
      for (std::size_t rj = 0; rj < rows_.size(); ++rj) {
        if (rj == ri || is_zero_entry(rows_[rj][coord])) continue;
        Rows::eliminate(rows_[rj], rows_[ri], coord, support);
        Rows::normalize(rows_[rj], pivots_[rj]);
      }
    }
    for (std::size_t ri = 0; ri < rows_.size(); ++ri) supports_[ri] = support_of(rows_[ri]);
    reduced_ = true;
  }

  /// Basis rows (pivot entry scaled to one), ordered by pivot position.
  [[nodiscard]] std::vector<std::vector<F>> basis() const {
    std::vector<std::vector<F>> out;
    for (std::size_t ri : rows_by_position()) {
      std::vector<F> row(dim_, F(0));
      for (std::size_t i = 0; i < dim_; ++i)
        if (!is_zero_entry(rows_[ri][i])) row[i] = Rows::value(rows_[ri], i, pivots_[ri]);
      out.push_back(std::move(row));
    }
    return out;
  }

  /// Pivot coordinates, ordered by elimination position.
  [[nodiscard]] std::vector<std::size_t> pivots() const {
    std::vector<std::size_t> out;
    for (std::size_t ri : rows_by_position()) out.push_back(pivots_[ri]);
    return out;
  }

  [[nodiscard]] bool is_pivot(std::size_t coord) const { return rank_of_[coord] != npos; }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  static bool is_zero_entry(const Entry& x) {
    if constexpr (std::is_same_v<Entry, Integer>) {
      return sgn(x) == 0;
    } else {
      return is_zero(x);
    }
  }

  [[nodiscard]] std::size_t leading(const std::vector<Entry>& r) const {
    for (std::size_t pos = 0; pos < dim_; ++pos)
      if (!is_zero_entry(r[order_[pos]])) return order_[pos];
    return npos;
  }

  [[nodiscard]] std::vector<std::size_t> support_of(const std::vector<Entry>& r) const {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < dim_; ++i)
      if (!is_zero_entry(r[i])) s.push_back(i);
    return s;
  }

  [[nodiscard]] std::vector<std::size_t> rows_by_position() const {
    std::vector<std::size_t> idx;
    for (std::size_t pos = 0; pos < dim_; ++pos) {
      std::size_t ri = rank_of_[order_[pos]];
      if (ri != npos) idx.push_back(ri);
    }
    return idx;
  }

  [[nodiscard]] std::vector<Entry> reduce_entries(std::vector<Entry> v, F* scale = nullptr) const {
    for (std::size_t pos = 0; pos < dim_; ++pos) {
      const std::size_t coord = order_[pos];
      const std::size_t ri = rank_of_[coord];
      if (ri == npos || is_zero_entry(v[coord])) continue;
      Rows::eliminate(v, rows_[ri], coord, supports_[ri], scale);
    }
    return v;
  }

  void add_row(std::vector<Entry> r, std::size_t p) {
    rank_of_[p] = rows_.size();
    supports_.push_back(support_of(r));
    rows_.push_back(std::move(r));
    pivots_.push_back(p);
    reduced_ = false;
  }

  std::size_t dim_;
  std::vector<std::size_t> rank_of_;  // coordinate -> row index, npos if not a pivot
  std::vector<std::size_t> order_;
  std::vector<std::size_t> position_;
  std::vector<std::vector<Entry>> rows_;
  std::vector<std::vector<std::size_t>> supports_;
  std::vector<std::size_t> pivots_;
  bool reduced_ = true;
};

/// Echelon basis of the column space of A.
template <class F>
Echelon<F> column_echelon(const SparseMatrix<F>& a) {
  Echelon<F> e(a.rows());
  for (const auto& c : a.columns()) e.insert(c);
  return e;
}

template <class F>
std::size_t rank(const SparseMatrix<F>& a) {
  // Eliminate along the shorter side.
  if (a.rows() < a.cols()) {
    auto t = a.transpose();
    return column_echelon(t).rank();
  }
  return column_echelon(a).rank();
}

/// Basis of the right null space {x : A x = 0}, read off the reduced row
/// echelon form: one vector per free column, with a one in that column.
template <class F>
std::vector<std::vector<F>> kernel_basis(const SparseMatrix<F>& a) {
  Echelon<F> e(a.cols());
  for (const auto& r : a.row_vectors()) e.insert(r);
  e.reduce();
  auto rows = e.basis();
  auto piv = e.pivots();
  std::vector<std::vector<F>> out;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (e.is_pivot(free)) continue;
    std::vector<F> x(a.cols(), F(0));
    x[free] = F(1);
    for (std::size_t i = 0; i < rows.size(); ++i) x[piv[i]] = -rows[i][free];
    out.push_back(std::move(x));
  }
  return out;
}

/// Basis of the left null space {y : y^T A = 0}.
template <class F>
std::vector<std::vector<F>> left_kernel_basis(const SparseMatrix<F>& a) {
  return kernel_basis(a.transpose());
}

template <class F>
struct SubspaceBasis {
  std::size_t dim = 0;
  std::vector<std::vector<F>> basis;
};

/// {v in colspace(A) : v_i = 0 for every row i not in keep}.
///
/// Columns are echelonized with the discarded coordinates placed first in the
/// elimination order; the basis rows whose pivot falls on a kept coordinate
/// then vanish on every discarded coordinate and span the intersection.
template <class F>
SubspaceBasis<F> colspace_intersect_coords(const SparseMatrix<F>& a, std::span<const std::size_t> keep) {
  std::vector<bool> kept(a.rows(), false);
  for (std::size_t i : keep) {
    if (i >= a.rows()) throw std::out_of_range("colspace_intersect_coords: index out of range");
    kept[i] = true;
  }
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < a.rows(); ++i)
    if (!kept[i]) order.push_back(i);
  for (std::size_t i = 0; i < a.rows(); ++i)
    if (kept[i]) order.push_back(i);
  Echelon<F> e(a.rows(), order);
  for (const auto& c : a.columns()) e.insert(c);
  SubspaceBasis<F> out;
  auto rows = e.basis();
  auto piv = e.pivots();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (kept[piv[i]]) out.basis.push_back(std::move(rows[i]));
  }
  out.dim = out.basis.size();
  return out;
}

/// Dimension of span(A) + span(B) via ranks; spans are equal iff this equals
/// both individual ranks.
template <class F>
bool same_column_space(const SparseMatrix<F>& a, const SparseMatrix<F>& b) {
  std::size_t ra = rank(a);
  return ra == rank(b) && ra == rank(hconcat(a, b));
}

// ---------------------------------------------------------------------------
// Integer matrices and Smith normal form

/// Dense matrix with arbitrary-precision integer entries.
class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  IntegerMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  static IntegerMatrix identity(std::size_t n) {
    IntegerMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  Integer& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  friend IntegerMatrix operator*(const IntegerMatrix& x, const IntegerMatrix& y) {
    if (x.cols_ != y.rows_) throw std::invalid_argument("IntegerMatrix: shape mismatch");
    IntegerMatrix z(x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t k = 0; k < x.cols_; ++k) {
        if (sgn(x(i, k)) == 0) continue;
        for (std::size_t j = 0; j < y.cols_; ++j) z(i, j) += x(i, k) * y(k, j);
      }
    return z;
  }
  friend bool operator==(const IntegerMatrix&, const IntegerMatrix&) = default;

  void swap_rows(std::size_t i, std::size_t j) {
    for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, i), (*this)(r, j));
  }
  /// row_i <- row_i + f * row_j
  void add_row(std::size_t i, std::size_t j, const Integer& f) {
    for (std::size_t c = 0; c < cols_; ++c) (*this)(i, c) += f * (*this)(j, c);
  }
  /// col_i <- col_i + f * col_j
  void add_col(std::size_t i, std::size_t j, const Integer& f) {
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, i) += f * (*this)(r, j);
  }
  void negate_row(std::size_t i) {
    for (std::size_t c = 0; c < cols_; ++c) (*this)(i, c) = -(*this)(i, c);
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> a_;
};

/// Determinant of a square integer matrix.
inline Integer determinant(IntegerMatrix a) {
  const std::size_t n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("determinant: matrix not square");
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && sgn(a(piv, k)) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      a.swap_rows(piv, k);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return n == 0 ? Integer(1) : sign * a(n - 1, n - 1);
}

struct SmithForm {
  /// Nonzero elementary divisors d_1 | d_2 | ... (length = rank).
  std::vector<Integer> invariants;
  IntegerMatrix u;  ///< unimodular, rows x rows
  IntegerMatrix v;  ///< unimodular, cols x cols
  IntegerMatrix d;  ///< U * A * V
};

/// Smith normal form by alternating row/column gcd elimination.
inline SmithForm smith_normal_form(const IntegerMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  IntegerMatrix d = a;
  IntegerMatrix u = IntegerMatrix::identity(m);
  IntegerMatrix v = IntegerMatrix::identity(n);

  std::size_t t = 0;
  for (; t < std::min(m, n); ++t) {
    // Pivot: smallest nonzero absolute value in the trailing block.
    std::size_t pr = m;
    std::size_t pc = n;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j)
        if (sgn(d(i, j)) != 0 && (pr == m || abs(d(i, j)) < abs(d(pr, pc)))) {
          pr = i;
          pc = j;
        }
    if (pr == m) break;
    d.swap_rows(t, pr);
    u.swap_rows(t, pr);
    d.swap_cols(t, pc);
    v.swap_cols(t, pc);

    bool done = false;
    while (!done) {
      done = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (sgn(d(i, t)) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), d(i, t).get_mpz_t(), d(t, t).get_mpz_t());
        d.add_row(i, t, -q);
        u.add_row(i, t, -q);
        if (sgn(d(i, t)) != 0) {
          d.swap_rows(t, i);
          u.swap_rows(t, i);
          done = false;
        }
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (sgn(d(t, j)) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), d(t, j).get_mpz_t(), d(t, t).get_mpz_t());
        d.add_col(j, t, -q);
        v.add_col(j, t, -q);
        if (sgn(d(t, j)) != 0) {
          d.swap_cols(t, j);
          v.swap_cols(t, j);
          done = false;
        }
      }
      if (!done) continue;
      // Divisibility: d(t,t) must divide the whole trailing block.
      for (std::size_t i = t + 1; i < m && done; ++i)
        for (std::size_t j = t + 1; j < n && done; ++j) {
          if (!mpz_divisible_p(d(i, j).get_mpz_t(), d(t, t).get_mpz_t())) {
            d.add_row(t, i, 1);
            u.add_row(t, i, 1);
            done = false;
          }
        }
    }
    if (sgn(d(t, t)) < 0) {
      d.negate_row(t);
      u.negate_row(t);
    }
  }

  SmithForm out{{}, std::move(u), std::move(v), std::move(d)};
  for (std::size_t i = 0; i < t; ++i) out.invariants.push_back(out.d(i, i));
  return out;
}

}  // namespace torelli
