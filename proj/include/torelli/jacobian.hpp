#pragma once

// Graded pieces of the jacobian ring R_f = S_P / J_{P,f} and of the interior
// module R_{Int,f}, computed as quotients of lattice-point spaces:
//
//   S_P^k    = span{ x0^k x^m : m in kP }              (coordinates L(kP))
//   J^k      = span{ x0^{k-1} x^v G : v in (k-1)P, G a degree-one generator }
//   R_Int^k  = L*(kP) / (J^k cap L*(kP))
//
// All linear algebra runs over the template field F.

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "torelli/certified.hpp"
#include "torelli/errors.hpp"
#include "torelli/field.hpp"
#include "torelli/lattice.hpp"
#include "torelli/laurent.hpp"
#include "torelli/linalg.hpp"

namespace torelli {

/// Which degree-one generating set of J^1 spans the columns of J^k.
enum class Generators {
  LogDerivatives,   ///< F_0, ..., F_n
  FacetGenerators,  ///< g_Gamma(f) for every facet Gamma
};

struct GradedDims {
  int k = 0;
  std::size_t lattice_points = 0;       ///< l(kP)
  std::size_t interior_points = 0;      ///< l*(kP)
  std::size_t jacobian = 0;             ///< dim J^k
  std::size_t jacobian_interior = 0;    ///< dim J^k cap L*(kP)
  std::size_t ring = 0;                 ///< dim R_f^k
  std::size_t interior_module = 0;      ///< dim R_Int^k
};

/// Lattice points of kP in lexicographic order with a reverse index, plus the
/// interior subset.
struct GradedPoints {
  std::vector<LatticePoint> all;
  std::vector<LatticePoint> interior;
  std::vector<std::size_t> interior_indices;  ///< positions of interior points in `all`
  std::vector<std::size_t> boundary_indices;
  std::map<LatticePoint, std::size_t> index;

  [[nodiscard]] std::optional<std::size_t> find(const LatticePoint& m) const {
    auto it = index.find(m);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
};

inline GradedPoints graded_points(const LatticePolytope& p, Coord k) {
  GradedPoints g;
  if (k == 0) {
    g.all.emplace_back(p.dim());
    g.index.emplace(g.all.front(), 0);
    g.boundary_indices.push_back(0);
    return g;
  }
  const LatticePolytope kp = dilate(p, k);
  g.all = points(kp, false);
  for (std::size_t i = 0; i < g.all.size(); ++i) {
    g.index.emplace(g.all[i], i);
    if (contains(kp, g.all[i], true)) {
      g.interior.push_back(g.all[i]);
      g.interior_indices.push_back(i);
    } else {
      g.boundary_indices.push_back(i);
    }
  }
  return g;
}

/// Working state for all computations attached to (P, f): point sets of the
/// dilations, the log-derivatives F_i, the facet generators g_Gamma(f), and
/// lazily computed rank data of J^k. Thread-safe after construction.
template <class F>
class JacobianContext {
 public:
  JacobianContext(LatticePolytope polytope, const LaurentPolynomial<Rational>& f, int k_max)
      : polytope_(std::move(polytope)), k_max_(k_max), cache_(std::make_unique<Cache>()) {
    if (k_max_ < 1) throw Error("JacobianContext: k_max must be at least 1");
    if (f.dim() != polytope_.dim()) throw NewtonPolytopeMismatch("JacobianContext: dimension mismatch");
    for (const auto& m : f.support())
      if (!contains(polytope_, m, false))
        throw NewtonPolytopeMismatch("JacobianContext: exponent " + m.str() + " outside the polytope");
    for (const auto& v : polytope_.vertices())
      if (is_zero(f.coefficient(v)))
        throw NewtonPolytopeMismatch("JacobianContext: vertex " + v.str() + " missing from the support");
    if constexpr (std::same_as<F, Rational>) {
      f_ = f;
    } else {
      f_ = f.template cast<F>();
      for (const auto& v : polytope_.vertices())
        if (is_zero(f_.coefficient(v)))
          throw NewtonPolytopeMismatch("JacobianContext: vertex coefficient vanishes in " + field_name<F>());
    }
    f_rational_ = f;
    derivatives_ = log_derivatives(f_);
    for (const auto& facet : polytope_.facets()) facet_generators_.push_back(facet_generator(f_, facet));
    for (int k = 0; k <= k_max_; ++k) points_.push_back(graded_points(polytope_, k));
  }

  [[nodiscard]] const LatticePolytope& polytope() const { return polytope_; }
  [[nodiscard]] std::size_t dim() const { return polytope_.dim(); }
  [[nodiscard]] int k_max() const { return k_max_; }
  [[nodiscard]] const LaurentPolynomial<F>& f() const { return f_; }
  [[nodiscard]] const LaurentPolynomial<Rational>& f_rational() const { return f_rational_; }
  [[nodiscard]] const std::vector<Facet>& facets() const { return polytope_.facets(); }
  [[nodiscard]] const std::vector<LaurentPolynomial<F>>& derivatives() const { return derivatives_; }
  [[nodiscard]] const std::vector<LaurentPolynomial<F>>& facet_generators() const { return facet_generators_; }

  [[nodiscard]] const GradedPoints& points(int k) const {
    check_degree(k, 0);
    return points_[static_cast<std::size_t>(k)];
  }

  /// Coefficient vector of a polynomial in the coordinates L(kP). Throws if
  /// the support leaves kP.
  [[nodiscard]] SparseVector<F> coordinates(const LaurentPolynomial<F>& p, int k) const {
    const auto& g = points(k);
    SparseVector<F> v;
    for (const auto& [m, c] : p.terms()) {
      auto idx = g.find(m);
      if (!idx) throw Error("coordinates: exponent " + m.str() + " outside " + std::to_string(k) + "P");
      v.emplace_back(*idx, c);
    }
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return v;
  }

  [[nodiscard]] LaurentPolynomial<F> polynomial(const std::vector<F>& coords, int k) const {
    const auto& g = points(k);
    LaurentPolynomial<F> p(dim(), k);
    for (std::size_t i = 0; i < coords.size(); ++i) p.add_term(g.all[i], coords[i]);
    return p;
  }

  [[nodiscard]] const std::vector<LaurentPolynomial<F>>& generators(Generators which) const {
    return which == Generators::LogDerivatives ? derivatives_ : facet_generators_;
  }

  /// Matrix with rows indexed by L(kP) and columns x^v G for v in L((k-1)P)
  /// (lexicographic, outer) and G in the chosen generating set (inner).
  [[nodiscard]] SparseMatrix<F> jacobian_component(int k, Generators which = Generators::FacetGenerators) const {
    check_degree(k, 1);
    const auto& shifts = points(k - 1).all;
    const auto& gens = generators(which);
    std::vector<SparseVector<F>> cols;
    cols.reserve(shifts.size() * gens.size());
    for (const auto& v : shifts)
      for (const auto& g : gens) cols.push_back(coordinates(shift(g, v), k));
    return SparseMatrix<F>::from_columns(points(k).all.size(), std::move(cols));
  }

  /// Rank data of J^k together with linear functionals on L(kP) whose common
  /// zero set is exactly J^k.
  struct Piece {
    std::size_t rank = 0;
    std::size_t interior_dim = 0;  ///< dim J^k cap L*(kP)
    std::vector<std::vector<F>> annihilator;
  };

  [[nodiscard]] const Piece& piece(int k) const {
    check_degree(k, 1);
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->pieces.find(k);
    if (it != cache_->pieces.end()) return *it->second;
    return *cache_->pieces.emplace(k, std::make_unique<Piece>(compute_piece(k))).first->second;
  }

  [[nodiscard]] bool in_jacobian(const SparseVector<F>& u, int k) const {
    for (const auto& y : piece(k).annihilator) {
      F s(0);
      for (const auto& [i, x] : u) s += y[i] * x;
      if (!is_zero(s)) return false;
    }
    return true;
  }

  [[nodiscard]] GradedDims graded_dims(int k) const {
    const auto& pc = piece(k);
    const auto& g = points(k);
    GradedDims d;
    d.k = k;
    d.lattice_points = g.all.size();
    d.interior_points = g.interior.size();
    d.jacobian = pc.rank;
    d.jacobian_interior = pc.interior_dim;
    d.ring = d.lattice_points - d.jacobian;
    d.interior_module = d.interior_points - d.jacobian_interior;
    return d;
  }

 private:
  struct Cache {
    std::mutex mutex;
    std::map<int, std::unique_ptr<Piece>> pieces;
  };

  // Over Q the ranks are certified by lifting (see certified.hpp); over a
  // prime field one echelon with boundary coordinates eliminated first gives
  // both ranks, since the rows pivoting on interior coordinates span
  // J^k cap L*(kP).
  Piece compute_piece(int k) const {
    const auto a = jacobian_component(k, Generators::LogDerivatives);
    const auto& g = points(k);
    Piece pc;
    if constexpr (std::same_as<F, Rational>) {
      auto ker = certified_kernel(a.transpose());
      pc.rank = ker.rank;
      for (auto& y : ker.basis) pc.annihilator.push_back(primitive_integer_vector(std::move(y)));
      pc.interior_dim = pc.rank - certified_rank(a.select_rows(g.boundary_indices));
    } else {
      std::vector<std::size_t> order = g.boundary_indices;
      order.insert(order.end(), g.interior_indices.begin(), g.interior_indices.end());
      Echelon<F> e(g.all.size(), std::move(order));
      for (const auto& c : a.columns()) {
        e.insert(c);
        if (e.rank() == g.all.size()) break;
      }
      pc.rank = e.rank();
      for (std::size_t p : e.pivots())
        if (std::binary_search(g.interior_indices.begin(), g.interior_indices.end(), p)) ++pc.interior_dim;
      e.reduce();
      const auto rows = e.basis();
      const auto piv = e.pivots();
      for (std::size_t j = 0; j < g.all.size(); ++j) {
        if (e.is_pivot(j)) continue;
        std::vector<F> y(g.all.size(), F(0));
        y[j] = F(1);
        for (std::size_t i = 0; i < rows.size(); ++i) y[piv[i]] = -rows[i][j];
        pc.annihilator.push_back(std::move(y));
      }
    }
    return pc;
  }

  void check_degree(int k, int lowest) const {
    if (k < lowest || k > k_max_)
      throw Error("degree " + std::to_string(k) + " outside [" + std::to_string(lowest) + ", " +
                  std::to_string(k_max_) + "]");
  }

  LatticePolytope polytope_;
  int k_max_;
  LaurentPolynomial<F> f_;
  LaurentPolynomial<Rational> f_rational_;
  std::vector<LaurentPolynomial<F>> derivatives_;
  std::vector<LaurentPolynomial<F>> facet_generators_;
  std::vector<GradedPoints> points_;
  std::unique_ptr<Cache> cache_;
};

/// Context builder with the default degree cap n + 2.
template <class F>
JacobianContext<F> build_context(const LatticePolytope& p, const LaurentPolynomial<Rational>& f,
                                 std::optional<int> k_max = std::nullopt) {
  return JacobianContext<F>(p, f, k_max.value_or(static_cast<int>(p.dim()) + 2));
}

// ---------------------------------------------------------------------------
// U_{f,k}: explicit generators of J^k cap L*(kP)

struct GeneratorTerm {
  std::size_t facet = 0;
  LatticePoint shift;
};

template <class F>
struct UGenerators {
  int k = 0;
  std::vector<std::size_t> chosen_facets;  ///< n+1 facets with independent (b, n) rows
  std::vector<GeneratorTerm> interior_family;  ///< g_{Gamma_i} x^v, v in Int((k-1)P)
  std::vector<GeneratorTerm> facet_family;     ///< g_Gamma x^v, v in relint((k-1)Gamma)
  std::vector<LaurentPolynomial<F>> polynomials;  ///< both families, in that order

  [[nodiscard]] std::size_t size() const { return polynomials.size(); }
};

/// Greedy choice, in facet order, of n+1 facets whose rows (b_Gamma, n_Gamma)
/// are linearly independent.
inline std::vector<std::size_t> independent_facets(const LatticePolytope& p) {
  std::vector<std::size_t> chosen;
  std::vector<std::vector<Integer>> rows;
  for (std::size_t i = 0; i < p.facets().size() && chosen.size() < p.dim() + 1; ++i) {
    const auto& f = p.facets()[i];
    std::vector<Integer> row{Integer(static_cast<long>(f.offset))};  // NOLINT(google-runtime-int)
    for (Coord x : f.normal) row.emplace_back(static_cast<long>(x));  // NOLINT(google-runtime-int)
    rows.push_back(row);
    if (detail::integer_rank(rows) == rows.size()) {
      chosen.push_back(i);
    } else {
      rows.pop_back();
    }
  }
  if (chosen.size() != p.dim() + 1) throw NoIndependentFacetChoice("no n+1 facets with independent (b, n) rows");
  return chosen;
}

template <class F>
UGenerators<F> u_generators(const JacobianContext<F>& ctx, int k) {
  const auto n = static_cast<int>(ctx.dim());
  if (k < 2 || k > n + 1) throw Error("u_generators: degree must lie in [2, n+1]");
  UGenerators<F> u;
  u.k = k;
  u.chosen_facets = independent_facets(ctx.polytope());
  const auto inner = points(dilate(ctx.polytope(), k - 1), true);
  for (std::size_t i : u.chosen_facets)
    for (const auto& v : inner) u.interior_family.push_back({i, v});
  for (std::size_t i = 0; i < ctx.facets().size(); ++i)
    for (const auto& v : face_points(ctx.polytope(), i, k - 1, true)) u.facet_family.push_back({i, v});
  for (const auto* fam : {&u.interior_family, &u.facet_family})
    for (const auto& t : *fam) u.polynomials.push_back(shift(ctx.facet_generators()[t.facet], t.shift));
  return u;
}

struct PropositionReport {
  int k = 0;
  std::size_t generator_count = 0;
  std::size_t generator_rank = 0;
  std::size_t intersection_dim = 0;  ///< dim J^k cap L*(kP)
  bool span_equal = false;
  bool independence_checked = false;  ///< only for k = 2
  bool independent = false;
};

namespace detail {
/// An element of J^k cap L*(kP) outside span(U), found modulo a prime.
template <class F>
std::string proposition_witness(const JacobianContext<F>& ctx, const UGenerators<F>& u, int k) {
  JacobianContext<Fp> mod(ctx.polytope(), ctx.f_rational(), k);
  const auto a = mod.jacobian_component(k, Generators::LogDerivatives);
  const auto inter = colspace_intersect_coords(a, std::span<const std::size_t>(mod.points(k).interior_indices));
  Echelon<Fp> span_u(mod.points(k).all.size());
  for (const auto& t : u.interior_family) span_u.insert(mod.coordinates(shift(mod.facet_generators()[t.facet], t.shift), k));
  for (const auto& t : u.facet_family) span_u.insert(mod.coordinates(shift(mod.facet_generators()[t.facet], t.shift), k));
  for (const auto& v : inter.basis)
    if (!span_u.contains(v)) return mod.polynomial(v, k).str() + " (mod p)";
  return "none found modulo p";
}
}  // namespace detail

/// Checks span(U_{f,k}) = J^k cap L*(kP) exactly, and for k = 2 that the
/// generators are linearly independent. Since U lies in J^k cap L*(kP), span
/// equality is equivalent to rank U = dim J^k cap L*(kP). Throws
/// PropositionViolation with a witness on failure.
template <class F>
PropositionReport verify_proposition(const JacobianContext<F>& ctx, int k) {
  if (points(ctx.polytope(), true).empty()) throw Error("verify_proposition: requires l*(P) > 0");
  const auto u = u_generators(ctx, k);
  const auto& g = ctx.points(k);
  std::vector<SparseVector<F>> cols;
  for (const auto& p : u.polynomials) {
    for (const auto& [m, c] : p.terms())
      if (!std::binary_search(g.interior.begin(), g.interior.end(), m))
        throw PropositionViolation("generator leaves L*(kP): " + p.str());
    auto v = ctx.coordinates(p, k);
    if (!ctx.in_jacobian(v, k)) throw PropositionViolation("generator outside J^k: " + p.str());
    cols.push_back(std::move(v));
  }
  PropositionReport r;
  r.k = k;
  r.generator_count = u.size();
  r.generator_rank = exact_rank(SparseMatrix<F>::from_columns(g.all.size(), std::move(cols)));
  r.intersection_dim = ctx.piece(k).interior_dim;
  r.span_equal = r.generator_rank == r.intersection_dim;
  if (!r.span_equal)
    throw PropositionViolation("span(U_{f," + std::to_string(k) + "}) has dim " + std::to_string(r.generator_rank) +
                               " but J^k cap L* has dim " + std::to_string(r.intersection_dim) +
                               "; element of J^k cap L* outside span(U): " + detail::proposition_witness(ctx, u, k));
  if (k == 2) {
    r.independence_checked = true;
    r.independent = r.generator_rank == r.generator_count;
    if (!r.independent)
      throw PropositionViolation("U_{f,2} generators are dependent: rank " + std::to_string(r.generator_rank) +
                                 " < count " + std::to_string(r.generator_count));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Hodge numbers and closed forms

struct HodgeReport {
  std::size_t n = 0;
  std::vector<GradedDims> dims;      ///< k = 1..n+1
  std::vector<std::size_t> hodge;    ///< hodge[p] = h^{p, n-1-p} = dim R_Int^{n-p}, p = 0..n-1
  bool duality = false;              ///< dim R_Int^k = dim R_Int^{n+1-k} for k = 1..n
};

template <class F>
HodgeReport hodge_report(const JacobianContext<F>& ctx) {
  const std::size_t n = ctx.dim();
  if (ctx.k_max() < static_cast<int>(n) + 1) throw Error("hodge_report: context needs k_max >= n+1");
  HodgeReport h;
  h.n = n;
  for (std::size_t k = 1; k <= n + 1; ++k) h.dims.push_back(ctx.graded_dims(static_cast<int>(k)));
  for (std::size_t p = 0; p < n; ++p) h.hodge.push_back(h.dims[n - p - 1].interior_module);
  h.duality = true;
  for (std::size_t k = 1; k <= n; ++k)
    h.duality = h.duality && h.dims[k - 1].interior_module == h.dims[n - k].interior_module;
  return h;
}

/// dim R_Int^2 from lattice counts only:
/// l*(2P) - (n+1) l*(P) - sum over facets of l*(Gamma).
inline long long batyrev_dim2(const LatticePolytope& p) {  // NOLINT(google-runtime-int)
  auto l2 = static_cast<long long>(points(dilate(p, 2), true).size());  // NOLINT(google-runtime-int)
  auto l1 = static_cast<long long>(points(p, true).size());             // NOLINT(google-runtime-int)
  long long facets = 0;                                                  // NOLINT(google-runtime-int)
  for (std::size_t i = 0; i < p.facets().size(); ++i)
    facets += static_cast<long long>(face_points(p, i, 1, true).size());  // NOLINT(google-runtime-int)
  return l2 - static_cast<long long>(p.dim() + 1) * l1 - facets;          // NOLINT(google-runtime-int)
}

/// dim R_f^1, cross-checked against l(P) minus the rank of
/// {f, x_1 df/dx_1, ..., x_n df/dx_n} built directly from the exponents.
template <class F>
std::size_t tangent_dim(const JacobianContext<F>& ctx) {
  const auto d = ctx.graded_dims(1);
  const auto& g = ctx.points(1);
  const std::size_t n = ctx.dim();
  std::vector<std::vector<F>> rows(n + 1, std::vector<F>(g.all.size(), F(0)));
  for (const auto& [m, c] : ctx.f().terms()) {
    const std::size_t idx = *g.find(m);
    rows[0][idx] = c;
    for (std::size_t i = 0; i < n; ++i) rows[i + 1][idx] = F(m[i]) * c;
  }
  Echelon<F> e(g.all.size());
  for (const auto& r : rows) e.insert(r);
  const std::size_t direct = g.all.size() - e.rank();
  if (direct != d.ring)
    throw Error("tangent_dim: dim R_f^1 = " + std::to_string(d.ring) + " but l(P) - rank = " + std::to_string(direct));
  return d.ring;
}

// ---------------------------------------------------------------------------
// Nondegeneracy certificate

enum class Certificate { CertifiedGeneric, DegenerateSuspect, Inconclusive };

inline std::string to_string(Certificate c) {
  switch (c) {
    case Certificate::CertifiedGeneric:
      return "certified_generic";
    case Certificate::DegenerateSuspect:
      return "degenerate_suspect";
    case Certificate::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

struct CertificateReport {
  Certificate status = Certificate::Inconclusive;
  std::vector<std::size_t> dims;                      ///< dim R_f^k, k = 1..n+1, for f
  std::vector<std::vector<std::size_t>> trial_dims;   ///< same for each random trial
  std::vector<std::size_t> minimum;                   ///< elementwise minimum over f and trials
};

template <class F>
std::vector<std::size_t> ring_dims(const LatticePolytope& p, const LaurentPolynomial<Rational>& f) {
  const auto n = static_cast<int>(p.dim());
  JacobianContext<F> ctx(p, f, n + 1);
  std::vector<std::size_t> out;
  for (int k = 1; k <= n + 1; ++k) out.push_back(ctx.graded_dims(k).ring);
  return out;
}

/// Compares dim R_f^k (k = 1..n+1) of f against `trials` seeded random
/// polynomials on the same polytope. f is certified generic when it attains
/// the elementwise minimum, which the random trials must agree on; it is a
/// degeneracy suspect when some dimension exceeds the minimum.
template <class F>
CertificateReport nondegeneracy_certificate(const LatticePolytope& p, const LaurentPolynomial<Rational>& f,
                                            int trials, std::uint64_t seed = 1) {
  if (trials < 1) throw Error("nondegeneracy_certificate: trials must be >= 1");
  CertificateReport r;
  r.dims = ring_dims<F>(p, f);
  r.minimum = r.dims;
  for (int t = 0; t < trials; ++t) {
    auto g = realize(RandomCoefficients{seed + static_cast<std::uint64_t>(t), 997, std::nullopt}, p);
    r.trial_dims.push_back(ring_dims<F>(p, g));
    for (std::size_t i = 0; i < r.minimum.size(); ++i) r.minimum[i] = std::min(r.minimum[i], r.trial_dims.back()[i]);
  }
  if (r.dims != r.minimum) {
    r.status = Certificate::DegenerateSuspect;
  } else {
    bool trials_agree = std::all_of(r.trial_dims.begin(), r.trial_dims.end(),
                                    [&](const auto& d) { return d == r.minimum; });
    r.status = trials_agree ? Certificate::CertifiedGeneric : Certificate::Inconclusive;
  }
  return r;
}

}  // namespace torelli
