#pragma once

// Integral polytopes in M = Z^n: convex hulls with primitive inner facet
// normals, dilations, and exact lattice-point enumeration.
//
// Sign convention: every facet inequality reads <n, m> + b >= 0 with
// b = -min_{v in P} <n, v>, so the inequality is tight exactly on the facet.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "torelli/errors.hpp"
#include "torelli/field.hpp"

namespace torelli {

using Coord = std::int64_t;

/// A point of the lattice M (or of the dual lattice N). Ordered
/// lexicographically, which fixes every basis derived from a point list.
class LatticePoint {
 public:
  LatticePoint() = default;
  explicit LatticePoint(std::size_t dim) : c_(dim, 0) {}
  explicit LatticePoint(std::vector<Coord> coords) : c_(std::move(coords)) {}
  LatticePoint(std::initializer_list<Coord> coords) : c_(coords) {}

  static LatticePoint unit(std::size_t dim, std::size_t i) {
    LatticePoint e(dim);
    e[i] = 1;
    return e;
  }

  [[nodiscard]] std::size_t dim() const { return c_.size(); }
  Coord& operator[](std::size_t i) { return c_[i]; }
  Coord operator[](std::size_t i) const { return c_[i]; }
  [[nodiscard]] const std::vector<Coord>& coords() const { return c_; }
  [[nodiscard]] auto begin() const { return c_.begin(); }
  [[nodiscard]] auto end() const { return c_.end(); }

  [[nodiscard]] bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](Coord x) { return x == 0; });
  }

  LatticePoint& operator+=(const LatticePoint& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  LatticePoint& operator-=(const LatticePoint& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  friend LatticePoint operator+(LatticePoint a, const LatticePoint& b) { return a += b; }
  friend LatticePoint operator-(LatticePoint a, const LatticePoint& b) { return a -= b; }
  friend LatticePoint operator-(LatticePoint a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }
  friend LatticePoint operator*(Coord k, LatticePoint a) {
    for (auto& x : a.c_) x *= k;
    return a;
  }

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;

  [[nodiscard]] std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (i != 0) s += ",";
      s += std::to_string(c_[i]);
    }
    return s + ")";
  }

 private:
  std::vector<Coord> c_;
};

inline Coord dot(const LatticePoint& a, const LatticePoint& b) {
  Coord s = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

/// Affine inequality <normal, x> + offset >= 0.
struct Halfspace {
  LatticePoint normal;
  Coord offset = 0;

  [[nodiscard]] Coord eval(const LatticePoint& m) const { return dot(normal, m) + offset; }
};

/// A facet of a lattice polytope: primitive inner normal n, offset b, and the
/// indices (into the polytope's vertex list) of the vertices it contains.
struct Facet : Halfspace {
  std::vector<std::size_t> vertex_indices;
};

namespace detail {

inline Coord gcd_all(const LatticePoint& v) {
  Coord g = 0;
  for (Coord x : v) g = std::gcd(g, x);
  return g;
}

/// Rank of a list of integer vectors, exact.
inline std::size_t integer_rank(std::vector<std::vector<Integer>> rows) {
  std::size_t rank = 0;
  std::size_t cols = rows.empty() ? 0 : rows.front().size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (rows[r][c] == 0) continue;
      Integer a = rows[rank][c];
      Integer b = rows[r][c];
      for (std::size_t j = c; j < cols; ++j) rows[r][j] = a * rows[r][j] - b * rows[rank][j];
    }
    ++rank;
  }
  return rank;
}

/// Determinant by fraction-free elimination.
inline Integer integer_det(std::vector<std::vector<Integer>> a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a[piv][k] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      std::swap(a[piv], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      }
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

/// Normal vector to the affine span of n points in Z^n via signed cofactors
/// of the difference matrix; the zero vector when the points are dependent.
inline LatticePoint hyperplane_normal(std::span<const LatticePoint> pts) {
  const std::size_t n = pts.front().dim();
  std::vector<std::vector<Integer>> diff;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    std::vector<Integer> row(n);
    for (std::size_t j = 0; j < n; ++j) row[j] = Integer(static_cast<long>(pts[i][j] - pts[0][j]));  // NOLINT(google-runtime-int)
    diff.push_back(std::move(row));
  }
  LatticePoint normal(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<Integer>> minor;
    for (const auto& row : diff) {
      std::vector<Integer> r;
      for (std::size_t c = 0; c < n; ++c)
        if (c != j) r.push_back(row[c]);
      minor.push_back(std::move(r));
    }
    Integer d = integer_det(std::move(minor));
    if ((j % 2) == 1) d = -d;
    normal[j] = d.get_si();
  }
  return normal;
}

template <class Visit>
void for_each_subset(std::size_t n, std::size_t k, Visit&& visit) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    visit(std::span<const std::size_t>(idx));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Visit all lattice points of the box [lo, hi] in lexicographic order.
template <class Visit>
void for_each_in_box(const LatticePoint& lo, const LatticePoint& hi, Visit&& visit) {
  const std::size_t n = lo.dim();
  for (std::size_t i = 0; i < n; ++i)
    if (lo[i] > hi[i]) return;
  LatticePoint m = lo;
  while (true) {
    visit(m);
    bool advanced = false;
    for (std::size_t i = n; i > 0 && !advanced; --i) {
      if (m[i - 1] < hi[i - 1]) {
        ++m[i - 1];
        for (std::size_t j = i; j < n; ++j) m[j] = lo[j];
        advanced = true;
      }
    }
    if (!advanced) return;
  }
}

}  // namespace detail

/// Dimension of the affine span of a point set (-1 for the empty set).
inline long affine_rank(std::span<const LatticePoint> pts) {  // NOLINT(google-runtime-int)
  if (pts.empty()) return -1;
  std::vector<std::vector<Integer>> rows;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    std::vector<Integer> r(pts[i].dim());
    for (std::size_t j = 0; j < pts[i].dim(); ++j) r[j] = Integer(static_cast<long>(pts[i][j] - pts[0][j]));  // NOLINT(google-runtime-int)
    rows.push_back(std::move(r));
  }
  return static_cast<long>(detail::integer_rank(std::move(rows)));  // NOLINT(google-runtime-int)
}

/// Full-dimensional lattice polytope with vertices (lexicographically sorted)
/// and facets (sorted by normal). Only constructible through hull().
class LatticePolytope {
 public:
  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] const std::vector<LatticePoint>& vertices() const { return vertices_; }
  [[nodiscard]] const std::vector<Facet>& facets() const { return facets_; }

  [[nodiscard]] std::pair<LatticePoint, LatticePoint> bounding_box() const {
    LatticePoint lo = vertices_.front();
    LatticePoint hi = vertices_.front();
    for (const auto& v : vertices_) {
      for (std::size_t i = 0; i < dim_; ++i) {
        lo[i] = std::min(lo[i], v[i]);
        hi[i] = std::max(hi[i], v[i]);
      }
    }
    return {lo, hi};
  }

  friend bool operator==(const LatticePolytope& a, const LatticePolytope& b) {
    return a.vertices_ == b.vertices_;
  }

 private:
  friend LatticePolytope hull(std::vector<LatticePoint> points);
  friend LatticePolytope dilate(const LatticePolytope& p, Coord k);
  friend LatticePolytope translate(const LatticePolytope& p, const LatticePoint& t);

  std::size_t dim_ = 0;
  std::vector<LatticePoint> vertices_;
  std::vector<Facet> facets_;
};

/// Convex hull of integer points. Duplicates and non-vertex inputs are
/// accepted and dropped. Throws NotFullDimensional when the affine hull is a
/// proper subspace.
inline LatticePolytope hull(std::vector<LatticePoint> points) {
  if (points.empty()) throw NotFullDimensional("hull: empty point set");
  const std::size_t n = points.front().dim();
  if (n == 0) throw NotFullDimensional("hull: zero-dimensional ambient lattice");
  for (const auto& p : points)
    if (p.dim() != n) throw NotFullDimensional("hull: points of mixed dimension");
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (affine_rank(points) != static_cast<long>(n))  // NOLINT(google-runtime-int)
    throw NotFullDimensional("hull: points do not affinely span R^" + std::to_string(n));

  std::map<LatticePoint, Coord> normals;  // inner normal -> offset
  std::vector<LatticePoint> chosen(n);
  detail::for_each_subset(points.size(), n, [&](std::span<const std::size_t> idx) {
    for (std::size_t i = 0; i < n; ++i) chosen[i] = points[idx[i]];
    LatticePoint normal = detail::hyperplane_normal(chosen);
    if (normal.is_zero()) return;
    Coord g = detail::gcd_all(normal);
    for (std::size_t i = 0; i < n; ++i) normal[i] /= g;
    const Coord level = dot(normal, chosen[0]);
    bool above = true;
    bool below = true;
    for (const auto& p : points) {
      Coord v = dot(normal, p);
      above = above && v >= level;
      below = below && v <= level;
      if (!above && !below) return;
    }
    if (above) normals.emplace(normal, -level);
    if (below) normals.emplace(-normal, level);
  });

  LatticePolytope poly;
  poly.dim_ = n;
  for (const auto& p : points) {
    std::vector<std::vector<Integer>> tight;
    for (const auto& [normal, offset] : normals) {
      if (dot(normal, p) + offset != 0) continue;
      std::vector<Integer> row(n);
      for (std::size_t j = 0; j < n; ++j) row[j] = Integer(static_cast<long>(normal[j]));  // NOLINT(google-runtime-int)
      tight.push_back(std::move(row));
    }
    if (detail::integer_rank(std::move(tight)) == n) poly.vertices_.push_back(p);
  }
  for (const auto& [normal, offset] : normals) {
    Facet f;
    f.normal = normal;
    f.offset = offset;
    for (std::size_t i = 0; i < poly.vertices_.size(); ++i)
      if (f.eval(poly.vertices_[i]) == 0) f.vertex_indices.push_back(i);
    poly.facets_.push_back(std::move(f));
  }
  return poly;
}

/// Vertices scaled by k >= 1; facet normals unchanged, offsets scaled.
inline LatticePolytope dilate(const LatticePolytope& p, Coord k) {
  if (k < 1) throw Error("dilate: factor must be positive");
  LatticePolytope q = p;
  for (auto& v : q.vertices_) v = k * v;
  for (auto& f : q.facets_) f.offset *= k;
  return q;
}

inline LatticePolytope translate(const LatticePolytope& p, const LatticePoint& t) {
  LatticePolytope q = p;
  for (auto& v : q.vertices_) v += t;
  for (auto& f : q.facets_) f.offset -= dot(f.normal, t);
  return q;
}

inline bool contains(const LatticePolytope& p, const LatticePoint& m, bool strict) {
  for (const auto& f : p.facets()) {
    Coord v = f.eval(m);
    if (v < 0 || (strict && v == 0)) return false;
  }
  return true;
}

/// Lattice points of P (or of its interior), lexicographic order.
inline std::vector<LatticePoint> points(const LatticePolytope& p, bool interior) {
  std::vector<LatticePoint> out;
  auto [lo, hi] = p.bounding_box();
  detail::for_each_in_box(lo, hi, [&](const LatticePoint& m) {
    if (contains(p, m, interior)) out.push_back(m);
  });
  return out;
}

/// Lattice points of k*Gamma for the facet with index `facet` of P. With
/// `interior`, only points of the relative interior of k*Gamma, i.e. points
/// strictly inside every other facet inequality.
inline std::vector<LatticePoint> face_points(const LatticePolytope& p, std::size_t facet, Coord k,
                                             bool interior) {
  const LatticePolytope kp = dilate(p, k);
  std::vector<LatticePoint> out;
  auto [lo, hi] = kp.bounding_box();
  const Facet& gamma = kp.facets()[facet];
  detail::for_each_in_box(lo, hi, [&](const LatticePoint& m) {
    if (gamma.eval(m) != 0) return;
    for (std::size_t i = 0; i < kp.facets().size(); ++i) {
      if (i == facet) continue;
      Coord v = kp.facets()[i].eval(m);
      if (v < 0 || (interior && v == 0)) return;
    }
    out.push_back(m);
  });
  return out;
}

/// True iff the interior lattice points affinely span R^n.
inline bool interior_affinely_spanning(const LatticePolytope& p) {
  auto inner = points(p, true);
  return affine_rank(inner) == static_cast<long>(p.dim());  // NOLINT(google-runtime-int)
}

/// Integral shift t with 0 in Int(P + t): minus the lexicographically first
/// interior lattice point. Zero shift when 0 is already interior.
inline std::optional<LatticePoint> interior_normalizing_shift(const LatticePolytope& p) {
  LatticePoint zero(p.dim());
  if (contains(p, zero, true)) return zero;
  auto inner = points(p, true);
  if (inner.empty()) return std::nullopt;
  return -inner.front();
}

/// Vertices of the bounded H-polytope {x : <a_i, x> + c_i >= 0}, exact.
inline std::vector<std::vector<Rational>> halfspace_vertices(std::span<const Halfspace> hs) {
  std::set<std::vector<Rational>> verts;
  if (hs.empty()) return {};
  const std::size_t n = hs.front().normal.dim();
  detail::for_each_subset(hs.size(), n, [&](std::span<const std::size_t> idx) {
    // Solve <a_i, x> = -c_i on the chosen rows by Gauss-Jordan over Q.
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1));
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t j = 0; j < n; ++j) a[r][j] = Rational(static_cast<long>(hs[idx[r]].normal[j]));  // NOLINT(google-runtime-int)
      a[r][n] = Rational(static_cast<long>(-hs[idx[r]].offset));  // NOLINT(google-runtime-int)
    }
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = c;
      while (piv < n && is_zero(a[piv][c])) ++piv;
      if (piv == n) return;
      std::swap(a[piv], a[c]);
      for (std::size_t r = 0; r < n; ++r) {
        if (r == c || is_zero(a[r][c])) continue;
        Rational f = a[r][c] / a[c][c];
        for (std::size_t j = c; j <= n; ++j) a[r][j] -= f * a[c][j];
      }
    }
    std::vector<Rational> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n] / a[i][i];
    for (const auto& h : hs) {
      Rational v(static_cast<long>(h.offset));  // NOLINT(google-runtime-int)
      for (std::size_t j = 0; j < n; ++j) v += Rational(static_cast<long>(h.normal[j])) * x[j];  // NOLINT(google-runtime-int)
      if (sgn(v) < 0) return;
    }
    verts.insert(std::move(x));
  });
  return {verts.begin(), verts.end()};
}

/// Lattice points of the bounded H-polytope {x : <a_i, x> + c_i >= 0},
/// lexicographic order. Empty if the polytope is empty.
inline std::vector<LatticePoint> halfspace_lattice_points(std::span<const Halfspace> hs) {
  auto verts = halfspace_vertices(hs);
  if (verts.empty()) return {};
  const std::size_t n = hs.front().normal.dim();
  LatticePoint lo(n);
  LatticePoint hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rational mn = verts.front()[i];
    Rational mx = verts.front()[i];
    for (const auto& v : verts) {
      mn = std::min(mn, v[i]);
      mx = std::max(mx, v[i]);
    }
    Integer f;
    mpz_fdiv_q(f.get_mpz_t(), mn.get_num_mpz_t(), mn.get_den_mpz_t());
    Integer c;
    mpz_cdiv_q(c.get_mpz_t(), mx.get_num_mpz_t(), mx.get_den_mpz_t());
    lo[i] = f.get_si();
    hi[i] = c.get_si();
  }
  std::vector<LatticePoint> out;
  detail::for_each_in_box(lo, hi, [&](const LatticePoint& m) {
    for (const auto& h : hs)
      if (h.eval(m) < 0) return;
    out.push_back(m);
  });
  return out;
}

/// Image of P under the unimodular map m -> U m (U given row-major, det +-1).
inline LatticePolytope transform(const LatticePolytope& p, const std::vector<std::vector<Coord>>& u) {
  std::vector<LatticePoint> img;
  for (const auto& v : p.vertices()) {
    LatticePoint w(p.dim());
    for (std::size_t i = 0; i < p.dim(); ++i)
      for (std::size_t j = 0; j < p.dim(); ++j) w[i] += u[i][j] * v[j];
    img.push_back(std::move(w));
  }
  return hull(std::move(img));
}

/// Common test polytopes.
namespace polytopes {

/// conv{+-e_i}.
inline LatticePolytope cross_polytope(std::size_t n) {
  std::vector<LatticePoint> v;
  for (std::size_t i = 0; i < n; ++i) {
    v.push_back(LatticePoint::unit(n, i));
    v.push_back(-LatticePoint::unit(n, i));
  }
  return hull(std::move(v));
}

/// conv{0, e_1, ..., e_n}.
inline LatticePolytope standard_simplex(std::size_t n) {
  std::vector<LatticePoint> v{LatticePoint(n)};
  for (std::size_t i = 0; i < n; ++i) v.push_back(LatticePoint::unit(n, i));
  return hull(std::move(v));
}

/// d * standard simplex translated by (-1, ..., -1): the Newton polytope of
/// a degree-d projective hypersurface written in torus coordinates.
inline LatticePolytope projective_hypersurface(std::size_t n, Coord degree) {
  LatticePoint shift(n);
  for (std::size_t i = 0; i < n; ++i) shift[i] = -1;
  return translate(dilate(standard_simplex(n), degree), shift);
}

/// [-r, r]^n.
inline LatticePolytope cube(std::size_t n, Coord r = 1) {
  std::vector<LatticePoint> v;
  detail::for_each_in_box(LatticePoint(std::vector<Coord>(n, -r)), LatticePoint(std::vector<Coord>(n, r)),
                          [&](const LatticePoint& m) {
                            for (Coord x : m)
                              if (x != -r && x != r) return;
                            v.push_back(m);
                          });
  return hull(std::move(v));
}

}  // namespace polytopes

}  // namespace torelli
