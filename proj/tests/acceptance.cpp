// Acceptance criteria: one PASS/FAIL line each. Criteria listed in
// kKnownRed fail for mathematical reasons recorded in the README; every
// other failure, and any known-red criterion that starts passing, makes the
// exit status nonzero.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "torelli/cli.hpp"
#include "torelli/torelli.hpp"

using namespace torelli;

namespace {

const std::string kData = TORELLI_DATA_DIR;
const std::string kTool = TORELLI_TOOL_PATH;
const std::set<int> kKnownRed{5};
constexpr std::uint64_t kSeed = 7;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[x] ";
    }
    detail << what << "; ";
  }
};

LaurentPolynomial<Rational> random_poly(const LatticePolytope& p, std::uint64_t seed = kSeed) {
  return realize(RandomCoefficients{seed, 997, std::nullopt}, p);
}

std::string str(std::size_t x) { return std::to_string(x); }

template <class T>
std::string eq(const std::string& name, const T& got, const T& want) {
  std::ostringstream s;
  s << name << " = " << got;
  if (!(got == want)) s << " (want " << want << ")";
  return s.str();
}

/// Rational contexts shared between criteria, built on first use.
struct Contexts {
  std::vector<std::pair<LatticePolytope, std::unique_ptr<JacobianContext<Rational>>>> items;

  const JacobianContext<Rational>& get(const LatticePolytope& p) {
    for (const auto& [q, c] : items)
      if (q == p) return *c;
    items.emplace_back(p, std::make_unique<JacobianContext<Rational>>(build_context<Rational>(p, random_poly(p))));
    return *items.back().second;
  }
};

Contexts contexts;

// ---------------------------------------------------------------------------

void ehrhart(Outcome& o) {
  const auto s = polytopes::standard_simplex(3);
  for (Coord k = 1; k <= 6; ++k) {
    const auto l = static_cast<std::int64_t>(points(dilate(s, k), false).size());
    const auto li = static_cast<std::int64_t>(points(dilate(s, k), true).size());
    if (l != oracle::binomial(k + 3, 3) || li != oracle::binomial(k - 1, 3))
      o.check(false, "k = " + std::to_string(k) + ": l = " + std::to_string(l) + ", l* = " + std::to_string(li));
  }
  o.check(true, "l(kS) = C(k+3,3) and l*(kS) = C(k-1,3) for k = 1..6");
}

void octahedron(Outcome& o) {
  const auto p = polytopes::cross_polytope(3);
  o.check(points(p, false).size() == 7, eq("l", points(p, false).size(), std::size_t{7}));
  o.check(points(p, true).size() == 1, eq("l*", points(p, true).size(), std::size_t{1}));
  o.check(points(dilate(p, 2), true).size() == 7, eq("l*(2P)", points(dilate(p, 2), true).size(), std::size_t{7}));
  const auto& ctx = contexts.get(p);
  o.check(ctx.graded_dims(1).ring == 3, eq("R_f^1", ctx.graded_dims(1).ring, std::size_t{3}));
  const std::size_t want[3] = {1, 3, 1};
  for (int k = 1; k <= 3; ++k)
    o.check(ctx.graded_dims(k).interior_module == want[k - 1],
            eq("R_Int^" + std::to_string(k), ctx.graded_dims(k).interior_module, want[k - 1]));
  o.check(batyrev_dim2(p) == 3, eq("closed form 7-4-0", batyrev_dim2(p), 3LL));
  for (int k = 1; k <= 2; ++k) {
    const auto t = ker_theorem(ctx, k, HypothesisPolicy::Evaluate);
    const auto b = ker_bruteforce(ctx, k);
    o.check(t.dim == 0 && b.dim == 0, "ker k=" + std::to_string(k) + ": enumeration " + str(t.dim) + " (outside hypothesis), brute force " + str(b.dim));
  }
  o.check(demazure_roots(p).empty(), eq("roots", demazure_roots(p).size(), std::size_t{0}));
}

void quintic(Outcome& o) {
  const auto p = polytopes::projective_hypersurface(3, 5);
  const auto& ctx = contexts.get(p);
  o.check(ctx.graded_dims(1).interior_module == 4, eq("R_Int^1", ctx.graded_dims(1).interior_module, std::size_t{4}));
  o.check(ctx.graded_dims(2).interior_module == 44, eq("R_Int^2", ctx.graded_dims(2).interior_module, std::size_t{44}));
  o.check(ctx.graded_dims(1).ring == 52, eq("R_f^1", ctx.graded_dims(1).ring, std::size_t{52}));
  o.check(demazure_roots(p).size() == 12, eq("roots", demazure_roots(p).size(), std::size_t{12}));
  const auto itt = itt_report(ctx);
  for (const auto& c : itt.by_degree) {
    const bool ok = c.theorem && c.theorem->dim == 12 && c.bruteforce.dim == 12 && c.spans_equal;
    o.check(ok, "ker k=" + std::to_string(c.k) + ": enumeration " + (c.theorem ? str(c.theorem->dim) : "-") +
                    ", brute force " + str(c.bruteforce.dim) + (c.spans_equal ? ", spans equal" : ", spans differ"));
    bool classes = true;
    if (c.theorem)
      for (const auto& e : c.theorem->elements) classes = classes && e.cls != KernelClass::TorelliObstruction;
    o.check(classes, "classes in {Zero, Root}");
  }
  o.check(itt.verdict == Verdict::Holds, "verdict " + to_string(itt.verdict));
}

void quartic_curve(Outcome& o) {
  const auto p = polytopes::projective_hypersurface(2, 4);
  const auto& ctx = contexts.get(p);
  o.check(ctx.graded_dims(1).interior_module == 3, eq("genus", ctx.graded_dims(1).interior_module, std::size_t{3}));
  o.check(demazure_roots(p).size() == 6, eq("roots", demazure_roots(p).size(), std::size_t{6}));
  const auto c = compare_kernels(ctx, 1);
  bool roots_only = c.theorem.has_value();
  std::size_t root_elements = 0;
  if (c.theorem)
    for (const auto& e : c.theorem->elements) {
      if (e.cls == KernelClass::Root) ++root_elements;
      if (e.cls == KernelClass::TorelliObstruction) roots_only = false;
    }
  o.check(c.theorem && c.theorem->dim == 6 && c.bruteforce.dim == 6 && c.spans_equal,
          "ker k=1: enumeration " + (c.theorem ? str(c.theorem->dim) : "-") + ", brute force " + str(c.bruteforce.dim));
  o.check(roots_only && root_elements == 6, "nonzero classes all Root (" + str(root_elements) + " root elements)");
}

void proposition(Outcome& o) {
  const auto run_one = [&](const std::string& name, const LatticePolytope& p, int k, std::size_t want_count) {
    const auto& ctx = contexts.get(p);
    try {
      const auto r = verify_proposition(ctx, k);
      std::string line = name + " k=" + std::to_string(k) + ": rank " + str(r.generator_rank) + " = dim J^k cap L* " +
                         str(r.intersection_dim);
      if (k == 2) line += ", " + str(r.generator_count) + " generators independent";
      o.check(r.span_equal && (k != 2 || (r.independent && r.generator_count == want_count)), line);
    } catch (const PropositionViolation& e) {
      const std::string msg = e.what();
      o.check(false, name + " k=" + std::to_string(k) + ": " + msg.substr(0, msg.find(';')));
    }
  };
  run_one("octahedron", polytopes::cross_polytope(3), 2, 4);
  run_one("quintic", polytopes::projective_hypersurface(3, 5), 2, 40);
  run_one("octahedron", polytopes::cross_polytope(3), 3, 0);
  run_one("quintic", polytopes::projective_hypersurface(3, 5), 3, 0);
}

void nondegeneracy(Outcome& o) {
  const auto p = polytopes::cross_polytope(3);
  ExplicitTerms t;
  for (std::size_t i = 0; i < 3; ++i) {
    t.terms.emplace_back(LatticePoint::unit(3, i), Rational(1));
    t.terms.emplace_back(-LatticePoint::unit(3, i), Rational(1));
  }
  t.terms.emplace_back(LatticePoint(3), Rational(-6));
  const auto singular = nondegeneracy_certificate<Rational>(p, realize(t, p), 5, 100);
  o.check(singular.status == Certificate::DegenerateSuspect && singular.trial_dims.size() >= 5,
          "singular octahedron: " + to_string(singular.status) + " over " + str(singular.trial_dims.size()) + " trials");
  for (const auto& [name, poly] : {std::pair{"octahedron", p}, std::pair{"quartic curve", polytopes::projective_hypersurface(2, 4)}}) {
    std::vector<std::size_t> first;
    bool all = true;
    for (std::uint64_t s = 1; s <= 5; ++s) {
      const auto r = nondegeneracy_certificate<Rational>(poly, random_poly(poly, s), 3, 1000 + s);
      all = all && r.status == Certificate::CertifiedGeneric;
      if (first.empty()) first = r.dims;
      all = all && r.dims == first;
    }
    o.check(all, std::string(name) + ": seeds 1..5 certified_generic with identical dims");
  }
}

void containment(Outcome& o) {
  std::vector<std::pair<std::string, LatticePolytope>> corpus;
  for (const auto& e : std::filesystem::directory_iterator(kData + "/corpus"))
    corpus.emplace_back(e.path().stem().string(), polytope_from_json(read_json_file(e.path().string())));
  for (const auto* f : {"unit_cube", "quartic_curve"})
    corpus.emplace_back(f, polytope_from_json(read_json_file(kData + "/inputs/" + std::string(f) + ".json")));
  std::sort(corpus.begin(), corpus.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [name, p] : corpus) {
    const auto& ctx = contexts.get(p);
    const auto ks = ker_kodaira_spencer(ctx);
    const auto bf = ker_bruteforce(ctx, 1);
    o.check(contained_mod_jacobian(ctx, ks, bf), name + " " + str(ks.dim) + " in " + str(bf.dim));
  }
}

void white(Outcome& o) {
  const auto s = white_sweep(30);
  o.check(s.violations.empty(), str(s.audits.size()) + " triples, " + str(s.violations.size()) + " with |Q cap M| <= 6");
  o.check(s.witnesses_failed == 0, str(s.witnesses_checked) + " parity witnesses, " + str(s.witnesses_failed) + " outside Q");
  o.detail << "apex lambda/mu solvable in " << s.lambda_mu_cases - s.lambda_mu_unsolvable << " of " << s.lambda_mu_cases
           << " cases (reported only); ";
}

void stability(Outcome& o) {
  const auto oct = polytopes::cross_polytope(3);
  const auto a = stability_check(oct, realize(RandomCoefficients{kSeed, 997, oct.vertices()}, oct));
  o.check(a.stable && a.stabilizer_trivial, std::string("octahedron vertex support: stable ") + (a.stable ? "yes" : "no") +
                                                ", invariants " + str(a.stabilizer_invariants.size()) + " ones");
  const auto sq = hull({LatticePoint{1, 1}, LatticePoint{1, -1}, LatticePoint{-1, 1}, LatticePoint{-1, -1}});
  const auto b = stability_check(sq, realize(RandomCoefficients{kSeed, 997, sq.vertices()}, sq));
  o.check(b.stabilizer_invariants == std::vector<Integer>{1, 2} && !b.stabilizer_trivial,
          "rotated square: invariants (1, " + (b.stabilizer_invariants.size() == 2 ? b.stabilizer_invariants[1].get_str() : "?") + ")");
  const auto s = polytopes::standard_simplex(3);
  bool none = true;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) none = none && !stability_check(s, random_poly(s, seed)).stable;
  o.check(none && !interior_normalizing_shift(s), "standard simplex: no stable points");
}

void determinism(Outcome& o) {
  unsetenv("TORELLI_CACHE_DIR");
  const auto dir = std::filesystem::temp_directory_path() / "torelli_acceptance";
  std::filesystem::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> runs{
      {"hodge", "--polytope " + kData + "/corpus/octahedron.json --seed 7"},
      {"classify", "--polytope " + kData + "/inputs/quartic_curve.json --seed 7"},
      {"kernel", "--polytope " + kData + "/inputs/quartic_curve.json --seed 7 --k 1"},
      {"verify-white", "--q-max 12"}};
  for (const auto& [cmd, args] : runs) {
    std::string text[2];
    for (int i = 0; i < 2; ++i) {
      const auto out = dir / (cmd + std::to_string(i) + ".json");
      const std::string line = kTool + " " + cmd + " " + args + " -o " + out.string() + " 2>/dev/null";
      const int rc = std::system(line.c_str());
      if (rc == -1) {
        o.check(false, cmd + ": could not start the tool");
        continue;
      }
      auto j = read_json_file(out.string());
      j.erase("timing");
      text[i] = j.dump();
    }
    o.check(!text[0].empty() && text[0] == text[1], cmd + " byte-identical");
  }
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    double limit_seconds;  ///< 0 for no limit
    std::function<void(Outcome&)> body;
  };
  const std::vector<Criterion> criteria{
      {1, "Ehrhart oracle", 1, ehrhart},
      {2, "octahedron suite", 10, octahedron},
      {3, "quintic surface suite", 120, quintic},
      {4, "quartic curve suite", 10, quartic_curve},
      {5, "generators of J^k cap L*", 0, proposition},
      {6, "nondegeneracy certificate", 0, nondegeneracy},
      {7, "Kodaira-Spencer kernel containment", 0, containment},
      {8, "empty tetrahedron sweep", 30, white},
      {9, "stability", 0, stability},
      {10, "determinism", 0, determinism},
  };
  int passed = 0;
  int unexpected = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0) {
      std::ostringstream t;
      t.precision(3);
      t << "time " << secs << " s (limit " << c.limit_seconds << " s)";
      o.check(secs < c.limit_seconds, t.str());
    } else {
      std::ostringstream t;
      t.precision(3);
      t << "time " << secs << " s";
      o.detail << t.str();
    }
    const bool red = kKnownRed.contains(c.id);
    if (o.pass) ++passed;
    if (o.pass == red) ++unexpected;
    std::printf("[%s] %2d %s: %s%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), o.detail.str().c_str(),
                red ? (o.pass ? "  (known-red criterion now passes)" : "  (known-red)") : "");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria pass; %d unexpected outcomes\n", passed, criteria.size(), unexpected);
  return unexpected == 0 ? 0 : 1;
}
