#pragma once

// Sparse Laurent polynomials sum a_m x^m over a coefficient field, with an
// optional power of the homogenizing variable x0 carried as a degree tag.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "torelli/errors.hpp"
#include "torelli/field.hpp"
#include "torelli/lattice.hpp"

namespace torelli {

template <class F = Rational>
class LaurentPolynomial {
 public:
  using Terms = std::map<LatticePoint, F>;

  LaurentPolynomial() = default;
  explicit LaurentPolynomial(std::size_t dim, int x0_degree = 0) : dim_(dim), x0_degree_(x0_degree) {}

  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] int x0_degree() const { return x0_degree_; }
  void set_x0_degree(int d) { x0_degree_ = d; }
  [[nodiscard]] const Terms& terms() const { return terms_; }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }

  [[nodiscard]] F coefficient(const LatticePoint& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? F(0) : it->second;
  }

  /// Adds c to the coefficient of x^m; zero results are erased.
  void add_term(const LatticePoint& m, const F& c) {
    if (torelli::is_zero(c)) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (torelli::is_zero(it->second)) terms_.erase(it);
    }
  }

  [[nodiscard]] std::vector<LatticePoint> support() const {
    std::vector<LatticePoint> s;
    s.reserve(terms_.size());
    for (const auto& [m, c] : terms_) s.push_back(m);
    return s;
  }

  [[nodiscard]] LatticePolytope newton_polytope() const { return hull(support()); }

  LaurentPolynomial& operator+=(const LaurentPolynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  LaurentPolynomial& operator-=(const LaurentPolynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend LaurentPolynomial operator+(LaurentPolynomial a, const LaurentPolynomial& b) { return a += b; }
  friend LaurentPolynomial operator-(LaurentPolynomial a, const LaurentPolynomial& b) { return a -= b; }
  friend LaurentPolynomial operator*(const F& s, LaurentPolynomial a) {
    if (torelli::is_zero(s)) {
      a.terms_.clear();
      return a;
    }
    for (auto& [m, c] : a.terms_) c *= s;
    return a;
  }
  friend bool operator==(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }

  /// Same polynomial over another field.
  template <class G>
  [[nodiscard]] LaurentPolynomial<G> cast() const
    requires std::same_as<F, Rational>
  {
    LaurentPolynomial<G> g(dim_, x0_degree_);
    for (const auto& [m, c] : terms_) g.add_term(m, field_cast<G>(c));
    return g;
  }

  [[nodiscard]] std::string str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : terms_) {
      if (!s.empty()) s += " + ";
      s += "(" + to_string(c) + ")*x^" + m.str();
    }
    return s;
  }

 private:
  std::size_t dim_ = 0;
  int x0_degree_ = 0;
  Terms terms_;
};

/// x^w * f: exponents translated by w, coefficients unchanged.
template <class F>
LaurentPolynomial<F> shift(const LaurentPolynomial<F>& f, const LatticePoint& w) {
  LaurentPolynomial<F> g(f.dim(), f.x0_degree());
  for (const auto& [m, c] : f.terms()) g.add_term(m + w, c);
  return g;
}

/// Terms of f whose exponent lies on the facet.
template <class F>
LaurentPolynomial<F> restrict_to_face(const LaurentPolynomial<F>& f, const Facet& facet) {
  LaurentPolynomial<F> g(f.dim(), f.x0_degree());
  for (const auto& [m, c] : f.terms())
    if (facet.eval(m) == 0) g.add_term(m, c);
  return g;
}

/// [F_0, ..., F_n] with F_0 = x0 f and F_i = x_i d(x0 f)/dx_i, i.e. the
/// coefficient of x0 x^m in F_i is a_m m_i.
template <class F>
std::vector<LaurentPolynomial<F>> log_derivatives(const LaurentPolynomial<F>& f) {
  const std::size_t n = f.dim();
  std::vector<LaurentPolynomial<F>> out(n + 1, LaurentPolynomial<F>(n, f.x0_degree() + 1));
  for (const auto& [m, c] : f.terms()) {
    out[0].add_term(m, c);
    for (std::size_t i = 0; i < n; ++i) out[i + 1].add_term(m, c * F(m[i]));
  }
  return out;
}

/// g_Gamma(f) = sum a_m (<n_Gamma, m> + b_Gamma) x0 x^m. Vanishes on the facet.
template <class F>
LaurentPolynomial<F> facet_generator(const LaurentPolynomial<F>& f, const Facet& facet) {
  LaurentPolynomial<F> g(f.dim(), f.x0_degree() + 1);
  for (const auto& [m, c] : f.terms()) g.add_term(m, c * F(facet.eval(m)));
  return g;
}

/// The same element written as b_Gamma F_0 + sum_j (n_Gamma)_j F_j.
template <class F>
LaurentPolynomial<F> facet_generator_from_derivatives(const std::vector<LaurentPolynomial<F>>& derivs,
                                                      const Facet& facet) {
  LaurentPolynomial<F> g = F(facet.offset) * derivs[0];
  for (std::size_t j = 0; j < facet.normal.dim(); ++j) g += F(facet.normal[j]) * derivs[j + 1];
  return g;
}

// ---------------------------------------------------------------------------
// Realizing polynomials from a specification

struct ExplicitTerms {
  std::vector<std::pair<LatticePoint, Rational>> terms;
};

/// Uniform nonzero integers in [-bound, bound], drawn in lexicographic order
/// of the support from a 64-bit Mersenne twister seeded with `seed`.
struct RandomCoefficients {
  std::uint64_t seed = 0;
  std::int64_t bound = 997;
  /// Defaults to all lattice points of the polytope.
  std::optional<std::vector<LatticePoint>> support;
};

using PolynomialSpec = std::variant<ExplicitTerms, RandomCoefficients>;

namespace detail {
/// Rejection sampling on raw engine output, so the stream of values does not
/// depend on the standard library's distribution implementation.
inline std::int64_t draw_nonzero(std::mt19937_64& gen, std::int64_t bound) {
  const auto span = static_cast<std::uint64_t>(2 * bound);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % span);
  std::uint64_t x = 0;
  do {
    x = gen();
  } while (x >= limit);
  auto v = static_cast<std::int64_t>(x % span);  // 0 .. 2B-1
  return v < bound ? v - bound : v - bound + 1;   // -B..-1, 1..B
}
}  // namespace detail

/// Builds f from the spec and checks Supp(f) in P with all vertex
/// coefficients nonzero, so that Newton(f) = P.
inline LaurentPolynomial<Rational> realize(const PolynomialSpec& spec, const LatticePolytope& p) {
  LaurentPolynomial<Rational> f(p.dim());
  if (const auto* ex = std::get_if<ExplicitTerms>(&spec)) {
    for (const auto& [m, c] : ex->terms) {
      if (m.dim() != p.dim()) throw SupportOutsidePolytope("realize: exponent " + m.str() + " has wrong dimension");
      if (!contains(p, m, false)) throw SupportOutsidePolytope("realize: exponent " + m.str() + " outside polytope");
      f.add_term(m, c);
    }
  } else {
    const auto& rnd = std::get<RandomCoefficients>(spec);
    if (rnd.bound < 1) throw Error("realize: coefficient bound must be positive");
    std::mt19937_64 gen(rnd.seed);
    std::vector<LatticePoint> support = rnd.support ? *rnd.support : points(p, false);
    std::sort(support.begin(), support.end());
    for (const auto& m : support) {
      if (!contains(p, m, false)) throw SupportOutsidePolytope("realize: exponent " + m.str() + " outside polytope");
      f.add_term(m, Rational(static_cast<long>(detail::draw_nonzero(gen, rnd.bound))));  // NOLINT(google-runtime-int)
    }
  }
  for (const auto& v : p.vertices())
    if (is_zero(f.coefficient(v)))
      throw NewtonPolytopeMismatch("realize: vertex " + v.str() + " has zero coefficient");
  return f;
}

}  // namespace torelli
