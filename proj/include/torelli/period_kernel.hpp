#pragma once

// Kernel of the period-map differential dphi^k : R_f^1 -> Hom(R_Int^k, R_Int^{k+1}).
//
// Two independent routes:
//   theorem     span of g_Gamma(f) x^w over facet/shift pairs with
//               w + v in Int((k+1)P) or relint((k+1)Gamma) for all v in Int(kP)
//   brute force {h in L(P) : h x^v in J^{k+1} for all v in Int(kP)} / J^1
// plus the Demazure roots of the normal fan, which give the Kodaira-Spencer part.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "torelli/certified.hpp"
#include "torelli/errors.hpp"
#include "torelli/jacobian.hpp"
#include "torelli/lattice.hpp"
#include "torelli/laurent.hpp"
#include "torelli/linalg.hpp"

namespace torelli {

enum class KernelClass { Zero, Root, TorelliObstruction };

inline std::string to_string(KernelClass c) {
  switch (c) {
    case KernelClass::Zero:
      return "Zero";
    case KernelClass::Root:
      return "Root";
    case KernelClass::TorelliObstruction:
      return "TorelliObstruction";
  }
  return "Zero";
}

/// alpha pairs to -1 with the normal of `facet` and nonnegatively with the rest.
struct Root {
  LatticePoint alpha;
  std::size_t facet = 0;
};

template <class F>
struct KernelElement {
  std::size_t facet = 0;
  LatticePoint shift;
  LaurentPolynomial<F> representative;  ///< g_Gamma(f) x^w
  Coord pairing = 0;                    ///< <w, n_Gamma>
  KernelClass cls = KernelClass::Zero;
};

template <class F>
struct KernelSubspace {
  int k = 0;
  std::vector<KernelElement<F>> elements;  ///< empty for the brute-force route
  std::size_t dim = 0;                     ///< dimension inside R_f^1
  std::vector<std::vector<F>> basis;       ///< coset representatives in L(P) coordinates
  /// Dimension in L(P)/C f taken modulo the torus directions x_i df/dx_i.
  [[nodiscard]] std::size_t torus_convention_dim(std::size_t n) const { return dim + n; }
};

// ---------------------------------------------------------------------------
// Roots

inline std::vector<Root> demazure_roots(const LatticePolytope& p) {
  std::vector<Halfspace> hs;
  for (const auto& f : p.facets()) hs.push_back({f.normal, 1});
  std::vector<Root> out;
  for (const auto& a : halfspace_lattice_points(hs)) {
    std::optional<std::size_t> ray;
    bool ok = true;
    for (std::size_t i = 0; i < p.facets().size() && ok; ++i) {
      const Coord d = dot(a, p.facets()[i].normal);
      if (d == -1) {
        if (ray) ok = false;
        ray = i;
      }
    }
    if (ok && ray) out.push_back({a, *ray});
  }
  return out;
}

inline KernelClass classify_pairing(Coord pairing) {
  if (pairing == 0) return KernelClass::Zero;
  if (pairing == -1) return KernelClass::Root;
  if (pairing <= -2) return KernelClass::TorelliObstruction;
  throw ClassificationInconsistency("positive facet pairing " + std::to_string(pairing));
}

// ---------------------------------------------------------------------------
// Spans modulo J^1

namespace detail {

/// Coordinates of J^1 = span{F_0, ..., F_n} in L(P).
template <class F>
std::vector<SparseVector<F>> degree_one_jacobian(const JacobianContext<F>& ctx) {
  std::vector<SparseVector<F>> out;
  for (const auto& d : ctx.derivatives()) out.push_back(ctx.coordinates(d, 1));
  return out;
}

/// Span of the vectors inside R_f^1: dimension plus representatives that are
/// independent modulo J^1, chosen greedily in input order.
template <class F>
std::pair<std::size_t, std::vector<std::vector<F>>> span_mod_jacobian(const JacobianContext<F>& ctx,
                                                                      const std::vector<std::vector<F>>& vecs) {
  Echelon<F> e(ctx.points(1).all.size());
  for (const auto& c : degree_one_jacobian(ctx)) e.insert(c);
  const std::size_t base = e.rank();
  std::vector<std::vector<F>> basis;
  for (const auto& v : vecs)
    if (e.insert(v)) basis.push_back(v);
  return {e.rank() - base, basis};
}

}  // namespace detail

/// Span of the given elements' representatives inside R_f^1.
template <class F>
KernelSubspace<F> span_of_elements(const JacobianContext<F>& ctx, std::vector<KernelElement<F>> elements, int k) {
  const std::size_t l = ctx.points(1).all.size();
  std::vector<std::vector<F>> vecs;
  for (const auto& e : elements) vecs.push_back(to_dense(ctx.coordinates(e.representative, 1), l));
  KernelSubspace<F> s;
  s.k = k;
  auto [dim, basis] = detail::span_mod_jacobian(ctx, vecs);
  s.dim = dim;
  s.basis = std::move(basis);
  s.elements = std::move(elements);
  return s;
}

// ---------------------------------------------------------------------------
// Kodaira-Spencer part

template <class F>
LaurentPolynomial<F> root_representative(const JacobianContext<F>& ctx, const Root& r) {
  return shift(ctx.facet_generators()[r.facet], r.alpha);
}

/// Span of g_{Gamma_alpha}(f) x^alpha over the roots alpha.
template <class F>
KernelSubspace<F> ker_kodaira_spencer(const JacobianContext<F>& ctx) {
  std::vector<KernelElement<F>> elems;
  for (const auto& r : demazure_roots(ctx.polytope())) {
    KernelElement<F> e;
    e.facet = r.facet;
    e.shift = r.alpha;
    e.representative = root_representative(ctx, r);
    e.pairing = -1;
    e.cls = KernelClass::Root;
    elems.push_back(std::move(e));
  }
  return span_of_elements(ctx, std::move(elems), 1);
}

// ---------------------------------------------------------------------------
// Theorem route

/// Shifts w with Supp(g_Gamma(f)) + w inside P: lattice points of the
/// intersection of P - p over the support.
template <class F>
std::vector<LatticePoint> admissible_shifts(const JacobianContext<F>& ctx, std::size_t facet) {
  const auto& g = ctx.facet_generators()[facet];
  if (g.is_zero()) return {};
  std::vector<Halfspace> hs;
  for (const auto& fc : ctx.facets()) {
    Coord lowest = 0;
    bool first = true;
    for (const auto& [m, c] : g.terms()) {
      const Coord d = dot(m, fc.normal);
      lowest = first ? d : std::min(lowest, d);
      first = false;
    }
    hs.push_back({fc.normal, fc.offset + lowest});
  }
  return halfspace_lattice_points(hs);
}

template <class F>
KernelElement<F> make_element(const JacobianContext<F>& ctx, std::size_t facet, const LatticePoint& w) {
  KernelElement<F> e;
  e.facet = facet;
  e.shift = w;
  e.representative = shift(ctx.facet_generators()[facet], w);
  e.pairing = dot(w, ctx.facets()[facet].normal);
  for (std::size_t j = 0; j < ctx.facets().size(); ++j)
    if (j != facet && dot(w, ctx.facets()[j].normal) < 0)
      throw ClassificationInconsistency("shift " + w.str() + " pairs negatively with a second facet");
  e.cls = classify_pairing(e.pairing);
  return e;
}

/// Enforce: refuse polytopes whose interior points lie in a hyperplane.
/// Evaluate: run the enumeration anyway; the result is then not certified.
enum class HypothesisPolicy { Enforce, Evaluate };

/// Enumeration formula for ker(dphi^k); requires the interior lattice points
/// to affinely span.
template <class F>
KernelSubspace<F> ker_theorem(const JacobianContext<F>& ctx, int k,
                              HypothesisPolicy policy = HypothesisPolicy::Enforce) {
  const auto& p = ctx.polytope();
  const auto n = static_cast<int>(p.dim());
  if (k < 1 || k > n) throw Error("ker_theorem: k must lie in [1, n]");
  if (policy == HypothesisPolicy::Enforce && !interior_affinely_spanning(p))
    throw HypothesisViolated("interior lattice points do not affinely span; enumeration formula not certified");
  const auto inner = points(dilate(p, k), true);
  const auto kk = static_cast<Coord>(k + 1);
  std::vector<KernelElement<F>> elems;
  for (std::size_t fi = 0; fi < p.facets().size(); ++fi) {
    for (const auto& w : admissible_shifts(ctx, fi)) {
      bool ok = true;
      for (const auto& v : inner) {
        const LatticePoint u = w + v;
        for (std::size_t j = 0; j < p.facets().size() && ok; ++j) {
          const auto& fc = p.facets()[j];
          const Coord val = dot(u, fc.normal) + kk * fc.offset;
          ok = j == fi ? val >= 0 : val > 0;
        }
        if (!ok) break;
      }
      if (ok) elems.push_back(make_element(ctx, fi, w));
    }
  }
  return span_of_elements(ctx, std::move(elems), k);
}

// ---------------------------------------------------------------------------
// Brute force

/// {h in L(P) : h x^v in J^{k+1} for all v in Int(kP)} modulo J^1, from the
/// linear functionals cutting out J^{k+1}.
template <class F>
KernelSubspace<F> ker_bruteforce(const JacobianContext<F>& ctx, int k) {
  const auto n = static_cast<int>(ctx.dim());
  if (k < 1 || k > n) throw Error("ker_bruteforce: k must lie in [1, n]");
  if (ctx.k_max() < k + 1) throw Error("ker_bruteforce: context needs k_max >= k+1");
  const auto& dom = ctx.points(1).all;
  const auto& target = ctx.points(k + 1);
  const auto inner = points(dilate(ctx.polytope(), k), true);
  const auto& ann = ctx.piece(k + 1).annihilator;
  std::vector<SparseVector<F>> cols(dom.size());
  std::size_t row = 0;
  for (const auto& v : inner) {
    for (const auto& y : ann) {
      for (std::size_t c = 0; c < dom.size(); ++c) {
        const std::size_t idx = *target.find(dom[c] + v);
        if (!is_zero(y[idx])) cols[c].emplace_back(row, y[idx]);
      }
      ++row;
    }
  }
  const auto kernel = nullspace(SparseMatrix<F>::from_columns(row, std::move(cols)));
  KernelSubspace<F> s;
  s.k = k;
  auto [dim, basis] = detail::span_mod_jacobian(ctx, kernel);
  s.dim = dim;
  s.basis = std::move(basis);
  return s;
}

/// True iff every vector of `a` lies in span(b) + J^1 and vice versa.
template <class F>
bool same_subspace_mod_jacobian(const JacobianContext<F>& ctx, const KernelSubspace<F>& a, const KernelSubspace<F>& b) {
  if (a.dim != b.dim) return false;
  std::vector<std::vector<F>> both = a.basis;
  both.insert(both.end(), b.basis.begin(), b.basis.end());
  return detail::span_mod_jacobian(ctx, both).first == a.dim;
}

/// True iff span(a) is contained in span(b) modulo J^1.
template <class F>
bool contained_mod_jacobian(const JacobianContext<F>& ctx, const KernelSubspace<F>& a, const KernelSubspace<F>& b) {
  std::vector<std::vector<F>> both = b.basis;
  both.insert(both.end(), a.basis.begin(), a.basis.end());
  return detail::span_mod_jacobian(ctx, both).first == b.dim;
}

// ---------------------------------------------------------------------------
// Classification

/// Checks the class of a theorem element: Zero elements vanish in R_f^1 and
/// Root elements coincide with the Kodaira-Spencer representative.
template <class F>
KernelClass classify(const JacobianContext<F>& ctx, const KernelElement<F>& e) {
  const KernelClass c = classify_pairing(e.pairing);
  if (c == KernelClass::Zero) {
    if (!ctx.in_jacobian(ctx.coordinates(e.representative, 1), 1))
      throw ClassificationInconsistency("pairing-zero element is nonzero in R_f^1: " + e.representative.str());
  } else if (c == KernelClass::Root) {
    const auto roots = demazure_roots(ctx.polytope());
    auto it = std::find_if(roots.begin(), roots.end(), [&](const Root& r) { return r.alpha == e.shift; });
    if (it == roots.end() || it->facet != e.facet)
      throw ClassificationInconsistency("pairing -1 shift " + e.shift.str() + " is not a root of this facet");
    if (!(root_representative(ctx, *it) == e.representative))
      throw ClassificationInconsistency("representative differs from the root element for " + e.shift.str());
  }
  return c;
}

// ---------------------------------------------------------------------------
// Reports

template <class F>
struct KernelComparison {
  int k = 0;
  std::optional<KernelSubspace<F>> theorem;  ///< absent when the hypothesis fails
  KernelSubspace<F> bruteforce;
  bool spans_equal = false;
};

template <class F>
KernelComparison<F> compare_kernels(const JacobianContext<F>& ctx, int k) {
  KernelComparison<F> c;
  c.k = k;
  c.bruteforce = ker_bruteforce(ctx, k);
  if (interior_affinely_spanning(ctx.polytope())) {
    c.theorem = ker_theorem(ctx, k);
    for (const auto& e : c.theorem->elements) classify(ctx, e);
    c.spans_equal = same_subspace_mod_jacobian(ctx, *c.theorem, c.bruteforce);
  }
  return c;
}

template <class F>
struct IndependenceReport {
  std::vector<KernelComparison<F>> by_degree;  ///< k = 1..n-1
  bool equal = true;                           ///< all theorem and brute-force spans agree across k
};

/// ker(dphi^k) for k = 1..n-1 against ker(dphi^1).
template <class F>
IndependenceReport<F> k_independence_check(const JacobianContext<F>& ctx) {
  IndependenceReport<F> r;
  const auto n = static_cast<int>(ctx.dim());
  for (int k = 1; k <= std::max(1, n - 1); ++k) r.by_degree.push_back(compare_kernels(ctx, k));
  const auto& first = r.by_degree.front().bruteforce;
  for (const auto& c : r.by_degree) {
    r.equal = r.equal && (!c.theorem || c.spans_equal);
    r.equal = r.equal && same_subspace_mod_jacobian(ctx, first, c.bruteforce);
  }
  return r;
}

enum class Verdict { Holds, Fails, Inapplicable };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds:
      return "HOLDS";
    case Verdict::Fails:
      return "FAILS";
    case Verdict::Inapplicable:
      return "INAPPLICABLE";
  }
  return "INAPPLICABLE";
}

template <class F>
struct IttReport {
  Verdict verdict = Verdict::Inapplicable;
  std::vector<KernelComparison<F>> by_degree;
  std::vector<KernelElement<F>> obstructions;
  std::size_t root_count = 0;
  std::size_t kodaira_spencer_dim = 0;
  bool kodaira_spencer_contained = false;  ///< in the brute-force kernel at k = 1
  bool kernel_in_kodaira_spencer = false;  ///< brute-force kernel at k = 1 inside the root span
};

template <class F>
IttReport<F> itt_report(const JacobianContext<F>& ctx) {
  IttReport<F> r;
  const auto n = static_cast<int>(ctx.dim());
  for (int k = 1; k <= std::max(1, n - 1); ++k) r.by_degree.push_back(compare_kernels(ctx, k));
  const auto ks = ker_kodaira_spencer(ctx);
  r.root_count = ks.elements.size();
  r.kodaira_spencer_dim = ks.dim;
  r.kodaira_spencer_contained = contained_mod_jacobian(ctx, ks, r.by_degree.front().bruteforce);
  r.kernel_in_kodaira_spencer = contained_mod_jacobian(ctx, r.by_degree.front().bruteforce, ks);
  if (!interior_affinely_spanning(ctx.polytope())) {
    r.verdict = Verdict::Inapplicable;
    return r;
  }
  for (const auto& c : r.by_degree)
    for (const auto& e : c.theorem->elements)
      if (e.cls == KernelClass::TorelliObstruction) r.obstructions.push_back(e);
  r.verdict = r.obstructions.empty() ? Verdict::Holds : Verdict::Fails;
  return r;
}

}  // namespace torelli
