#pragma once

// Audits around the infinitesimal Torelli statement in dimension three:
// White normal forms of empty tetrahedra and the six-point polytope Q built
// from them, GIT stability of coefficient vectors, and a corpus scan for
// kernel elements with facet pairing <= -2.

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "torelli/errors.hpp"
#include "torelli/jacobian.hpp"
#include "torelli/lattice.hpp"
#include "torelli/laurent.hpp"
#include "torelli/linalg.hpp"
#include "torelli/period_kernel.hpp"

namespace torelli {

// ---------------------------------------------------------------------------
// Empty simplices

/// Which vertex of the normal form plays the translation vector w.
enum class WhiteCase { E1, E3, Apex };

inline std::string to_string(WhiteCase c) {
  switch (c) {
    case WhiteCase::E1:
      return "(1,0,0)";
    case WhiteCase::E3:
      return "(0,0,1)";
    case WhiteCase::Apex:
      return "(1,p,q)";
  }
  return "";
}

/// conv{0, e1, e3, (1,p,q)} with 0 < p < q, gcd(p, q) = 1.
struct EmptySimplexForm {
  Coord p = 0;
  Coord q = 0;
  WhiteCase which = WhiteCase::E1;

  [[nodiscard]] std::vector<LatticePoint> vertices() const {
    return {LatticePoint({0, 0, 0}), LatticePoint({1, 0, 0}), LatticePoint({0, 0, 1}), LatticePoint({1, p, q})};
  }
  [[nodiscard]] LatticePoint w() const {
    switch (which) {
      case WhiteCase::E1:
        return LatticePoint({1, 0, 0});
      case WhiteCase::E3:
        return LatticePoint({0, 0, 1});
      case WhiteCase::Apex:
        return LatticePoint({1, p, q});
    }
    return LatticePoint(3);
  }
};

struct WhiteAudit {
  EmptySimplexForm form;
  std::vector<LatticePoint> generators;  ///< 0, y, z, w, y+w, z+w
  std::size_t count = 0;                 ///< |Q cap M|
  std::optional<LatticePoint> witness;   ///< explicit point from the parity case, if one applies
  std::string witness_rule;
  bool witness_ok = false;               ///< witness in Q cap M and not a generator
  /// Apex case with q even, p odd: whether lambda + mu = r with
  /// r q + mu = 0 mod p has a solution mu in [0, r].
  std::optional<bool> lambda_mu_solvable;
};

inline bool empty_tetrahedron(Coord p, Coord q) {
  EmptySimplexForm f{p, q, WhiteCase::E1};
  return points(hull(f.vertices()), false).size() == 4;
}

inline WhiteAudit white_audit(const EmptySimplexForm& form) {
  const Coord p = form.p;
  const Coord q = form.q;
  if (!(0 < p && p < q) || std::gcd(p, q) != 1 || p < 2)
    throw Error("white_audit: need 2 <= p < q with gcd(p, q) = 1");
  if (!empty_tetrahedron(p, q))
    throw FormNotEmpty("conv{0, e1, e3, (1," + std::to_string(p) + "," + std::to_string(q) + ")} has extra lattice points");

  WhiteAudit a;
  a.form = form;
  const LatticePoint w = form.w();
  std::vector<LatticePoint> yz;
  for (const auto& v : form.vertices())
    if (!v.is_zero() && !(v == w)) yz.push_back(v);
  a.generators = {LatticePoint(3), yz[0], yz[1], w, yz[0] + w, yz[1] + w};
  const auto q_poly = hull(a.generators);
  a.count = points(q_poly, false).size();

  const bool p_odd = p % 2 != 0;
  const bool q_odd = q % 2 != 0;
  if (form.which != WhiteCase::Apex) {
    if (!q_odd && p_odd) {
      const Coord r = q / p;
      a.witness = LatticePoint({1, 1, r + 1});
      a.witness_rule = "q even, p odd: (1, 1, floor(q/p) + 1)";
    } else if (q_odd && !p_odd) {
      a.witness = LatticePoint({1, p / 2, (q + 1) / 2});
      a.witness_rule = "q odd, p even: (1, p/2, (q+1)/2)";
    }
  } else if (!q_odd && p_odd) {
    const Coord r = q % p;
    a.lambda_mu_solvable = false;
    for (Coord mu = 0; mu <= r; ++mu) {
      const Coord lambda = r - mu;
      const Coord total = lambda * q + mu * (q + 1);
      if (total % p == 0) {
        a.lambda_mu_solvable = true;
        a.witness = LatticePoint({1, r, total / p});
        a.witness_rule = "apex, q even, p odd: (1, q mod p, (lambda q + mu (q+1)) / p)";
        break;
      }
    }
  }
  if (a.witness) {
    bool is_generator = false;
    for (const auto& g : a.generators) is_generator = is_generator || g == *a.witness;
    a.witness_ok = !is_generator && contains(q_poly, *a.witness, false);
  }
  return a;
}

struct WhiteSweep {
  Coord q_max = 0;
  std::vector<WhiteAudit> audits;
  std::vector<WhiteAudit> violations;  ///< |Q cap M| <= 6
  std::size_t witnesses_checked = 0;
  std::size_t witnesses_failed = 0;
  std::size_t lambda_mu_cases = 0;
  std::size_t lambda_mu_unsolvable = 0;
};

inline WhiteSweep white_sweep(Coord q_max) {
  if (q_max < 3) throw Error("white_sweep: q_max must be at least 3");
  WhiteSweep s;
  s.q_max = q_max;
  for (Coord q = 3; q <= q_max; ++q) {
    for (Coord p = 2; p < q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      for (WhiteCase c : {WhiteCase::E1, WhiteCase::E3, WhiteCase::Apex}) {
        auto a = white_audit({p, q, c});
        if (a.count <= 6) s.violations.push_back(a);
        if (a.witness) {
          ++s.witnesses_checked;
          if (!a.witness_ok) ++s.witnesses_failed;
        }
        if (a.lambda_mu_solvable) {
          ++s.lambda_mu_cases;
          if (!*a.lambda_mu_solvable) ++s.lambda_mu_unsolvable;
        }
        s.audits.push_back(std::move(a));
      }
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Stability

struct StabilityReport {
  bool origin_interior = false;                  ///< 0 in Int(P)
  bool support_hull_fulldim = false;             ///< conv(Supp f) has dimension n
  bool origin_in_support_hull_interior = false;  ///< 0 in Int(conv(Supp f))
  std::vector<Integer> stabilizer_invariants;    ///< nonzero Smith invariants of the support matrix
  bool stabilizer_trivial = false;               ///< n invariants, all equal to one
  bool stable = false;
  bool smooth = false;                           ///< stable with trivial torus stabilizer
};

/// Support matrix: column j holds the j-th exponent of f (lexicographic).
inline IntegerMatrix support_matrix(const LaurentPolynomial<Rational>& f) {
  const auto supp = f.support();
  IntegerMatrix a(f.dim(), supp.size());
  for (std::size_t j = 0; j < supp.size(); ++j)
    for (std::size_t i = 0; i < f.dim(); ++i) a(i, j) = static_cast<long>(supp[j][i]);  // NOLINT(google-runtime-int)
  return a;
}

inline StabilityReport stability_check(const LatticePolytope& p, const LaurentPolynomial<Rational>& f) {
  StabilityReport r;
  const std::size_t n = p.dim();
  const LatticePoint zero(n);
  r.origin_interior = contains(p, zero, true);
  const auto supp = f.support();
  r.support_hull_fulldim = !supp.empty() && affine_rank(supp) == static_cast<long>(n);  // NOLINT(google-runtime-int)
  if (r.support_hull_fulldim) r.origin_in_support_hull_interior = contains(hull(supp), zero, true);

  const auto snf = smith_normal_form(support_matrix(f));
  r.stabilizer_invariants = snf.invariants;
  r.stabilizer_trivial = snf.invariants.size() == n;
  for (const auto& d : snf.invariants) r.stabilizer_trivial = r.stabilizer_trivial && d == 1;
  if (r.stabilizer_trivial) {
    // The first n columns of A V form a lattice basis: A V = U^{-1} [I 0].
    const auto av = support_matrix(f) * snf.v;
    IntegerMatrix basis(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) basis(i, j) = av(i, j);
    if (abs(determinant(basis)) != 1)
      throw Error("stability_check: support columns fail to generate the lattice despite unit invariants");
  }
  r.stable = r.origin_interior && r.support_hull_fulldim && r.origin_in_support_hull_interior;
  r.smooth = r.stable && r.stabilizer_trivial;
  return r;
}

// ---------------------------------------------------------------------------
// Corpus scan

struct ScanEntry {
  std::string name;
  bool skipped = false;  ///< interior points lie in a hyperplane
  std::string certificate;
  std::optional<Verdict> verdict;
  std::vector<std::size_t> kernel_dims;  ///< brute force, k = 1..n-1
  std::size_t root_count = 0;
  std::vector<std::string> obstructions;  ///< facet index and shift of each pairing <= -2 element
};

/// For every polytope whose interior points affinely span, draws f from the
/// seed, certifies it against `trials` further seeds and records the verdict.
inline std::vector<ScanEntry> scan_obstructions(const std::vector<std::pair<std::string, LatticePolytope>>& corpus,
                                                std::uint64_t seed, int trials = 3) {
  std::vector<ScanEntry> out;
  for (const auto& [name, p] : corpus) {
    ScanEntry e;
    e.name = name;
    e.root_count = demazure_roots(p).size();
    if (!interior_affinely_spanning(p)) {
      e.skipped = true;
      out.push_back(std::move(e));
      continue;
    }
    const auto f = realize(RandomCoefficients{seed, 997, std::nullopt}, p);
    e.certificate = to_string(nondegeneracy_certificate<Fp>(p, f, trials, seed + 1).status);
    const auto ctx = build_context<Rational>(p, f);
    const auto itt = itt_report(ctx);
    e.verdict = itt.verdict;
    for (const auto& c : itt.by_degree) e.kernel_dims.push_back(c.bruteforce.dim);
    for (const auto& o : itt.obstructions)
      e.obstructions.push_back("facet " + std::to_string(o.facet) + " shift " + o.shift.str());
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace torelli
