#pragma once

// Exact rational kernels and ranks through modular arithmetic.
//
// The rank of an integer matrix modulo a prime never exceeds its rank over Q.
// Kernel vectors over Q are obtained by p-adic lifting against an invertible
// block found modulo p and are then checked against every row in exact
// integer arithmetic. A verified kernel of dimension cols - rank_p closes the
// gap, so every result returned here is exact. An unlucky prime shows up as a
// failed verification and the next prime is tried.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "torelli/errors.hpp"
#include "torelli/field.hpp"
#include "torelli/linalg.hpp"

namespace torelli {

struct CertifiedKernel {
  std::size_t rank = 0;
  std::vector<std::vector<Rational>> basis;  ///< one vector per free column, one in that column
  std::string prime;                         ///< field used for the modular elimination
};

namespace detail {

/// Dense PLU factorization modulo a prime.
template <class G>
class DenseLU {
 public:
  explicit DenseLU(std::vector<std::vector<G>> a) : n_(a.size()), lu_(std::move(a)), perm_(n_) {
    for (std::size_t i = 0; i < n_; ++i) perm_[i] = i;
    for (std::size_t j = 0; j < n_; ++j) {
      std::size_t p = j;
      while (p < n_ && is_zero(lu_[p][j])) ++p;
      if (p == n_) throw Error("DenseLU: singular block");
      std::swap(lu_[p], lu_[j]);
      std::swap(perm_[p], perm_[j]);
      const G inv = inverse(lu_[j][j]);
      for (std::size_t i = j + 1; i < n_; ++i) {
        if (is_zero(lu_[i][j])) continue;
        const G l = lu_[i][j] * inv;
        lu_[i][j] = l;
        auto& ri = lu_[i];
        const auto& rj = lu_[j];
        for (std::size_t k = j + 1; k < n_; ++k) ri[k] -= l * rj[k];
      }
    }
    for (std::size_t i = 0; i < n_; ++i) diag_inv_.push_back(inverse(lu_[i][i]));
  }

  [[nodiscard]] std::vector<G> solve(const std::vector<G>& b) const {
    std::vector<G> y(n_);
    for (std::size_t i = 0; i < n_; ++i) y[i] = b[perm_[i]];
    for (std::size_t i = 0; i < n_; ++i) {
      G s = y[i];
      for (std::size_t k = 0; k < i; ++k) s -= lu_[i][k] * y[k];
      y[i] = s;
    }
    for (std::size_t i = n_; i-- > 0;) {
      G s = y[i];
      for (std::size_t k = i + 1; k < n_; ++k) s -= lu_[i][k] * y[k];
      y[i] = s * diag_inv_[i];
    }
    return y;
  }

 private:
  std::size_t n_;
  std::vector<std::vector<G>> lu_;
  std::vector<std::size_t> perm_;
  std::vector<G> diag_inv_;
};

/// Finds a/b = u mod m with |a| <= bound and 0 < b <= bound.
inline bool rational_reconstruct(const Integer& u, const Integer& m, const Integer& bound, Integer& a, Integer& b) {
  Integer r0 = m;
  Integer r1 = u % m;
  if (r1 < 0) r1 += m;
  Integer t0 = 0;
  Integer t1 = 1;
  Integer q;
  Integer tmp;
  while (r1 > bound) {
    mpz_fdiv_q(q.get_mpz_t(), r0.get_mpz_t(), r1.get_mpz_t());
    tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  if (t1 == 0 || abs(t1) > bound) return false;
  Integer g;
  mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), t1.get_mpz_t());
  if (g != 1) return false;
  if (t1 < 0) {
    a = -r1;
    b = -t1;
  } else {
    a = r1;
    b = t1;
  }
  return true;
}

/// Rows scaled to integers (each by the lcm of its denominators).
inline std::vector<SparseVector<Integer>> integer_rows(const SparseMatrix<Rational>& m) {
  std::vector<SparseVector<Integer>> out;
  for (const auto& row : m.row_vectors()) {
    Integer l = 1;
    for (const auto& e : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), e.second.get_den_mpz_t());
    SparseVector<Integer> r;
    r.reserve(row.size());
    for (const auto& [i, x] : row) r.emplace_back(i, Integer(x * l));
    out.push_back(std::move(r));
  }
  return out;
}

template <class G>
G residue_of(const Integer& z) {
  return G(static_cast<std::uint64_t>(mpz_fdiv_ui(z.get_mpz_t(), G::modulus)));
}

inline double log2_abs(const Integer& z) {
  if (sgn(z) == 0) return 0.0;
  long e = 0;  // NOLINT(google-runtime-int)
  const double d = mpz_get_d_2exp(&e, z.get_mpz_t());
  return std::log2(std::fabs(d)) + static_cast<double>(e);
}

/// Modular elimination of the rows: rank, independent rows, pivot columns.
template <class G>
struct ModularProfile {
  std::size_t rank = 0;
  std::vector<std::size_t> rows;    ///< indices of independent rows, in insertion order
  std::vector<std::size_t> pivots;  ///< pivot columns
};

template <class G>
ModularProfile<G> modular_profile(const std::vector<SparseVector<Integer>>& rows, std::size_t cols) {
  ModularProfile<G> p;
  Echelon<G> e(cols);
  for (std::size_t i = 0; i < rows.size() && e.rank() < cols; ++i) {
    SparseVector<G> v;
    for (const auto& [j, x] : rows[i]) {
      G g = residue_of<G>(x);
      if (!is_zero(g)) v.emplace_back(j, g);
    }
    if (e.insert(v)) p.rows.push_back(i);
  }
  p.rank = e.rank();
  p.pivots = e.pivots();
  std::sort(p.pivots.begin(), p.pivots.end());
  return p;
}

/// Kernel of the integer matrix by lifting modulo G::modulus. Returns nullopt
/// when the prime is unlucky (rank drops modulo p).
template <class G>
std::optional<CertifiedKernel> lifted_kernel(const std::vector<SparseVector<Integer>>& rows, std::size_t cols) {
  const auto prof = modular_profile<G>(rows, cols);
  CertifiedKernel out;
  out.rank = prof.rank;
  out.prime = field_name<G>();
  const std::size_t r = prof.rank;
  if (r == cols) return out;

  std::vector<std::size_t> slot(cols, static_cast<std::size_t>(-1));
  for (std::size_t k = 0; k < r; ++k) slot[prof.pivots[k]] = k;
  std::vector<std::size_t> free_cols;
  for (std::size_t j = 0; j < cols; ++j)
    if (slot[j] == static_cast<std::size_t>(-1)) free_cols.push_back(j);
  const std::size_t t = free_cols.size();
  std::vector<std::size_t> free_slot(cols, static_cast<std::size_t>(-1));
  for (std::size_t c = 0; c < t; ++c) free_slot[free_cols[c]] = c;

  // B = M[rows, pivots] (r x r), right-hand sides -M[rows, free] (r x t).
  std::vector<SparseVector<Integer>> b_rows(r);
  std::vector<std::vector<G>> b_mod(r, std::vector<G>(r, G(0)));
  std::vector<std::vector<Integer>> residual(t, std::vector<Integer>(r, Integer(0)));
  double log_det = 0.0;
  double log_rhs = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    double largest = 0.0;
    for (const auto& [j, x] : rows[prof.rows[i]]) {
      if (slot[j] != static_cast<std::size_t>(-1)) {
        b_rows[i].emplace_back(slot[j], x);
        b_mod[i][slot[j]] = residue_of<G>(x);
        largest = std::max(largest, log2_abs(x));
      } else {
        residual[free_slot[j]][i] = -x;
        log_rhs = std::max(log_rhs, log2_abs(x));
      }
    }
    // Hadamard: log2 |row| <= log2 max + log2 sqrt(length).
    log_det += largest + 0.5 * std::log2(static_cast<double>(b_rows[i].size()) + 1.0);
  }
  const DenseLU<G> lu(std::move(b_mod));

  const double log_p = std::log2(static_cast<double>(G::modulus));
  const double needed = 2.0 * (log_det + log_rhs + std::log2(static_cast<double>(r) + 1.0)) + 4.0;
  const auto max_iter = static_cast<std::size_t>(std::ceil(needed / log_p)) + 2;

  std::vector<std::vector<Integer>> lifted(t, std::vector<Integer>(r, Integer(0)));
  Integer modulus = 1;
  const Integer p(static_cast<unsigned long>(G::modulus));  // NOLINT(google-runtime-int)
  std::size_t next_try = 2;

  for (std::size_t iter = 1; iter <= max_iter; ++iter) {
    for (std::size_t c = 0; c < t; ++c) {
      std::vector<G> rhs(r);
      for (std::size_t i = 0; i < r; ++i) rhs[i] = residue_of<G>(residual[c][i]);
      const auto x = lu.solve(rhs);
      for (std::size_t k = 0; k < r; ++k) {
        const auto xv = static_cast<unsigned long>(x[k].value());  // NOLINT(google-runtime-int)
        if (xv != 0) mpz_addmul_ui(lifted[c][k].get_mpz_t(), modulus.get_mpz_t(), xv);
      }
      for (std::size_t i = 0; i < r; ++i) {
        auto* ri = residual[c][i].get_mpz_t();
        for (const auto& [k, e] : b_rows[i]) {
          const auto xv = static_cast<unsigned long>(x[k].value());  // NOLINT(google-runtime-int)
          if (xv != 0) mpz_submul_ui(ri, e.get_mpz_t(), xv);
        }
        mpz_divexact_ui(ri, ri, static_cast<unsigned long>(G::modulus));  // NOLINT(google-runtime-int)
      }
    }
    modulus *= p;
    if (iter != next_try && iter != max_iter) continue;
    next_try = std::max(next_try + 1, next_try * 3 / 2);

    // Reconstruct all solutions with a shared denominator.
    Integer bound;
    mpz_sqrt(bound.get_mpz_t(), Integer(modulus / 2).get_mpz_t());
    Integer den = 1;
    bool ok = true;
    std::vector<std::vector<Integer>> num(t, std::vector<Integer>(r));
    for (std::size_t c = 0; c < t && ok; ++c) {
      for (std::size_t k = 0; k < r && ok; ++k) {
        Integer w = (den * lifted[c][k]) % modulus;
        if (w < 0) w += modulus;
        if (w > modulus / 2) w -= modulus;
        if (abs(w) <= bound) {
          num[c][k] = w;
          continue;
        }
        Integer a;
        Integer bden;
        if (!rational_reconstruct(w, modulus, bound, a, bden) || den * bden > bound) {
          ok = false;
          break;
        }
        for (std::size_t c2 = 0; c2 <= c; ++c2)
          for (std::size_t k2 = 0; k2 < (c2 == c ? k : r); ++k2) num[c2][k2] *= bden;
        den *= bden;
        num[c][k] = a;
      }
    }
    if (!ok) {
      if (iter == max_iter) throw Error("lifted_kernel: reconstruction failed within the determinant bound");
      continue;
    }

    // z = den * solution, with den in the free column.
    std::vector<std::vector<Integer>> z(t, std::vector<Integer>(cols, Integer(0)));
    for (std::size_t c = 0; c < t; ++c) {
      for (std::size_t k = 0; k < r; ++k) z[c][prof.pivots[k]] = num[c][k];
      z[c][free_cols[c]] = den;
    }
    auto row_zero = [&](std::size_t row, std::size_t c) {
      Integer s = 0;
      for (const auto& [j, x] : rows[row]) s += x * z[c][j];
      return sgn(s) == 0;
    };
    bool block_ok = true;
    for (std::size_t c = 0; c < t && block_ok; ++c)
      for (std::size_t i : prof.rows)
        if (!row_zero(i, c)) {
          block_ok = false;
          break;
        }
    if (!block_ok) {
      if (iter == max_iter) throw Error("lifted_kernel: lifted solution does not satisfy the pivot block");
      continue;
    }
    for (std::size_t c = 0; c < t; ++c)
      for (std::size_t i = 0; i < rows.size(); ++i)
        if (!row_zero(i, c)) return std::nullopt;

    for (std::size_t c = 0; c < t; ++c) {
      std::vector<Rational> v(cols);
      for (std::size_t j = 0; j < cols; ++j) {
        v[j] = Rational(z[c][j], den);
        v[j].canonicalize();
      }
      out.basis.push_back(std::move(v));
    }
    return out;
  }
  throw Error("lifted_kernel: iteration bound exceeded");
}

}  // namespace detail

/// Positive rational multiple with coprime integer entries.
inline std::vector<Rational> primitive_integer_vector(std::vector<Rational> v) {
  Integer den = 1;
  for (const auto& x : v) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  Integer content = 0;
  for (auto& x : v) {
    x *= den;
    mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), x.get_num_mpz_t());
  }
  if (content > 1)
    for (auto& x : v) x /= content;
  return v;
}

/// Exact right kernel {x : M x = 0} over Q.
inline CertifiedKernel certified_kernel(const SparseMatrix<Rational>& m) {
  const auto rows = detail::integer_rows(m);
  if (auto k = detail::lifted_kernel<Fp>(rows, m.cols())) return *k;
  if (auto k = detail::lifted_kernel<Fq>(rows, m.cols())) return *k;
  throw Error("certified_kernel: rank drops modulo both primes");
}

/// Exact rank over Q; the kernel is certified on the shorter side.
inline std::size_t certified_rank(const SparseMatrix<Rational>& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  const auto rows = detail::integer_rows(m);
  const auto prof = detail::modular_profile<Fp>(rows, m.cols());
  if (prof.rank == std::min(m.rows(), m.cols())) return prof.rank;
  if (m.cols() <= m.rows()) return certified_kernel(m).rank;
  return certified_kernel(m.transpose()).rank;
}

/// Field-generic front ends: exact lifting over Q, plain elimination otherwise.
template <class F>
std::vector<std::vector<F>> nullspace(const SparseMatrix<F>& m) {
  if constexpr (std::same_as<F, Rational>) {
    return certified_kernel(m).basis;
  } else {
    return kernel_basis(m);
  }
}

template <class F>
std::size_t exact_rank(const SparseMatrix<F>& m) {
  if constexpr (std::same_as<F, Rational>) {
    return certified_rank(m);
  } else {
    return rank(m);
  }
}

}  // namespace torelli
