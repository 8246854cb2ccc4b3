#pragma once

// Slow, independent reference computations for the tests. Nothing here calls
// the library's elimination code.

#include <cstddef>
#include <cstdint>
#include <algorithm>
#include <map>
#include <ostream>
#include <vector>

#include "torelli/torelli.hpp"

namespace torelli {
inline void PrintTo(const LatticePoint& m, std::ostream* os) { *os << m.str(); }
}  // namespace torelli

namespace oracle {

using torelli::Coord;
using torelli::LatticePoint;
using torelli::Rational;

inline std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < k) return 0;
  std::int64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Plain Gauss-Jordan over Q on a dense copy.
inline std::size_t dense_rank(std::vector<std::vector<Rational>> a) {
  if (a.empty()) return 0;
  const std::size_t rows = a.size();
  const std::size_t cols = a.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational f = a[i][c] / a[r][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return r;
}

/// Right null space by Gauss-Jordan.
inline std::vector<std::vector<Rational>> dense_kernel(std::vector<std::vector<Rational>> a, std::size_t cols) {
  const std::size_t rows = a.size();
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    const Rational inv = 1 / a[r][c];
    for (std::size_t j = 0; j < cols; ++j) a[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational f = a[i][c];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<bool> is_piv(cols, false);
  for (auto c : pivot_col) is_piv[c] = true;
  std::vector<std::vector<Rational>> out;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_piv[free]) continue;
    std::vector<Rational> x(cols, Rational(0));
    x[free] = 1;
    for (std::size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = -a[i][free];
    out.push_back(std::move(x));
  }
  return out;
}

/// Lattice points of a box satisfying all halfspaces, by exhaustive search.
inline std::vector<LatticePoint> box_points(const std::vector<LatticePoint>& vertices, Coord k,
                                            const std::vector<torelli::Halfspace>& hs, bool strict) {
  const std::size_t n = vertices.front().dim();
  LatticePoint lo = vertices.front(), hi = vertices.front();
  for (const auto& v : vertices)
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = std::min(lo[i], k * v[i]);
      hi[i] = std::max(hi[i], k * v[i]);
    }
  std::vector<LatticePoint> out;
  LatticePoint m = lo;
  while (true) {
    bool ok = true;
    for (const auto& h : hs) {
      const Coord val = torelli::dot(h.normal, m) + k * h.offset;
      if (strict ? val <= 0 : val < 0) ok = false;
    }
    if (ok) out.push_back(m);
    std::size_t i = 0;
    while (i < n && m[i] == hi[i]) {
      m[i] = lo[i];
      ++i;
    }
    if (i == n) break;
    ++m[i];
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Dense matrix of J^k spanned by x^v F_i (the log derivatives of x0 f),
/// v in L((k-1)P), rows indexed by L(kP) in lexicographic order.
struct DenseJacobian {
  std::vector<LatticePoint> rows;
  std::vector<std::vector<Rational>> a;  ///< row-major
  std::vector<bool> interior;
};

inline DenseJacobian dense_jacobian(const torelli::LatticePolytope& p, const torelli::LaurentPolynomial<Rational>& f,
                                    Coord k) {
  DenseJacobian d;
  d.rows = torelli::points(torelli::dilate(p, k), false);
  std::map<LatticePoint, std::size_t> idx;
  for (std::size_t i = 0; i < d.rows.size(); ++i) idx[d.rows[i]] = i;
  const auto shifts = k == 1 ? std::vector<LatticePoint>{LatticePoint(p.dim())}
                             : torelli::points(torelli::dilate(p, k - 1), false);
  const std::size_t n = p.dim();
  std::vector<std::vector<Rational>> cols;
  for (const auto& v : shifts)
    for (std::size_t i = 0; i <= n; ++i) {
      std::vector<Rational> c(d.rows.size(), Rational(0));
      for (const auto& [m, a] : f.terms()) c[idx.at(m + v)] += i == 0 ? a : a * m[i - 1];
      cols.push_back(std::move(c));
    }
  d.a.assign(d.rows.size(), std::vector<Rational>(cols.size(), Rational(0)));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < d.rows.size(); ++i) d.a[i][j] = cols[j][i];
  const auto inner = torelli::points(torelli::dilate(p, k), true);
  d.interior.assign(d.rows.size(), false);
  for (const auto& m : inner) d.interior[idx.at(m)] = true;
  return d;
}

struct DenseDims {
  std::size_t ring = 0;
  std::size_t interior_module = 0;
};

/// dim R_f^k = l - rank J^k; dim J^k cap L* through the kernel of the
/// boundary block: J^k cap L* = A ker(A_boundary).
inline DenseDims dense_dims(const torelli::LatticePolytope& p, const torelli::LaurentPolynomial<Rational>& f, Coord k) {
  const auto d = dense_jacobian(p, f, k);
  const std::size_t cols = d.a.front().size();
  DenseDims out;
  out.ring = d.rows.size() - dense_rank(d.a);
  std::vector<std::vector<Rational>> boundary;
  for (std::size_t i = 0; i < d.rows.size(); ++i)
    if (!d.interior[i]) boundary.push_back(d.a[i]);
  const auto ker = dense_kernel(boundary, cols);
  std::vector<std::vector<Rational>> image;
  for (const auto& x : ker) {
    std::vector<Rational> y(d.rows.size(), Rational(0));
    for (std::size_t i = 0; i < d.rows.size(); ++i)
      for (std::size_t j = 0; j < cols; ++j)
        if (x[j] != 0) y[i] += d.a[i][j] * x[j];
    image.push_back(std::move(y));
  }
  std::size_t l_star = 0;
  for (bool b : d.interior) l_star += b ? 1 : 0;
  out.interior_module = l_star - dense_rank(image);
  return out;
}

}  // namespace oracle
