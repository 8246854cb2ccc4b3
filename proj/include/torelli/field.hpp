#pragma once

// Coefficient fields for the graded linear algebra.
//
// Every algorithm in the library is written against the small interface
// below (is_zero / field_cast / inverse / to_string), so the same code runs
// over the exact rationals and over a prime field. The rationals are the
// reference; the prime field is the fast path for large graded pieces.

#include <gmpxx.h>

#include <concepts>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

namespace torelli {

using Integer = mpz_class;
using Rational = mpq_class;

/// Element of Z/PZ for a prime P < 2^62. Multiplication goes through a
/// 128-bit product; the Mersenne prime 2^61-1 gets a shift-and-add reduction.
template <std::uint64_t P>
class ModPrime {
  static_assert(P > 2 && P < (std::uint64_t{1} << 62));

 public:
  static constexpr std::uint64_t modulus = P;

  constexpr ModPrime() = default;
  constexpr ModPrime(std::int64_t x)  // NOLINT(google-explicit-constructor)
      : v_(reduce_signed(x)) {}

  [[nodiscard]] constexpr std::uint64_t value() const { return v_; }

  friend constexpr ModPrime operator+(ModPrime a, ModPrime b) {
    std::uint64_t s = a.v_ + b.v_;
    return raw(s >= P ? s - P : s);
  }
  friend constexpr ModPrime operator-(ModPrime a, ModPrime b) {
    return raw(a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + P - b.v_);
  }
  friend constexpr ModPrime operator*(ModPrime a, ModPrime b) {
    return raw(mul(a.v_, b.v_));
  }
  friend ModPrime operator/(ModPrime a, ModPrime b) { return a * inverse(b); }
  constexpr ModPrime operator-() const { return raw(v_ == 0 ? 0 : P - v_); }
  ModPrime& operator+=(ModPrime o) { return *this = *this + o; }
  ModPrime& operator-=(ModPrime o) { return *this = *this - o; }
  ModPrime& operator*=(ModPrime o) { return *this = *this * o; }
  ModPrime& operator/=(ModPrime o) { return *this = *this / o; }
  friend constexpr bool operator==(ModPrime a, ModPrime b) { return a.v_ == b.v_; }

  friend ModPrime inverse(ModPrime a) {
    if (a.v_ == 0) throw std::domain_error("ModPrime: inverse of zero");
    return pow(a, P - 2);
  }
  friend ModPrime pow(ModPrime a, std::uint64_t e) {
    ModPrime r = raw(1);
    while (e != 0) {
      if ((e & 1U) != 0) r *= a;
      a *= a;
      e >>= 1U;
    }
    return r;
  }
  friend std::ostream& operator<<(std::ostream& os, ModPrime a) { return os << a.v_; }

 private:
  static constexpr ModPrime raw(std::uint64_t v) {
    ModPrime r;
    r.v_ = v;
    return r;
  }
  static constexpr std::uint64_t reduce_signed(std::int64_t x) {
    auto m = static_cast<std::int64_t>(P);
    std::int64_t r = x % m;
    return static_cast<std::uint64_t>(r < 0 ? r + m : r);
  }
  static constexpr std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
    unsigned __int128 t = static_cast<unsigned __int128>(a) * b;
    if constexpr (P == (std::uint64_t{1} << 61) - 1) {
      std::uint64_t lo = static_cast<std::uint64_t>(t) & P;
      std::uint64_t hi = static_cast<std::uint64_t>(t >> 61);
      std::uint64_t s = lo + hi;
      return s >= P ? s - P : s;
    } else {
      return static_cast<std::uint64_t>(t % P);
    }
  }

  std::uint64_t v_ = 0;
};

/// Default prime field for the modular engine.
using Fp = ModPrime<(std::uint64_t{1} << 61) - 1>;
/// Independent second prime, used to cross-check modular results.
using Fq = ModPrime<4611686018427387847ULL>;

template <class F>
concept CoefficientField = requires(F a, F b) {
  { a + b } -> std::convertible_to<F>;
  { a - b } -> std::convertible_to<F>;
  { a * b } -> std::convertible_to<F>;
  { a / b } -> std::convertible_to<F>;
  { -a } -> std::convertible_to<F>;
  { a == b } -> std::convertible_to<bool>;
};

inline bool is_zero(const Rational& x) { return sgn(x) == 0; }
template <std::uint64_t P>
constexpr bool is_zero(ModPrime<P> x) { return x.value() == 0; }

inline Rational inverse(const Rational& x) {
  if (is_zero(x)) throw std::domain_error("Rational: inverse of zero");
  return Rational(1) / x;
}

inline std::string to_string(const Rational& x) { return x.get_str(); }
template <std::uint64_t P>
std::string to_string(ModPrime<P> x) { return std::to_string(x.value()); }

/// Map an exact rational into the target field. Throws std::domain_error when
/// the denominator vanishes modulo the field characteristic.
template <class F>
F field_cast(const Rational& q);

template <>
inline Rational field_cast<Rational>(const Rational& q) { return q; }

namespace detail {
template <std::uint64_t P>
ModPrime<P> residue(const Integer& z) {
  Integer r = z % Integer(static_cast<unsigned long>(P));  // NOLINT(google-runtime-int)
  if (r < 0) r += Integer(static_cast<unsigned long>(P));  // NOLINT(google-runtime-int)
  return ModPrime<P>(static_cast<std::int64_t>(r.get_ui()));
}
}  // namespace detail

template <class F>
  requires requires { F::modulus; }
F field_cast(const Rational& q) {
  F den = detail::residue<F::modulus>(q.get_den());
  if (is_zero(den)) throw std::domain_error("field_cast: denominator divisible by modulus");
  return detail::residue<F::modulus>(q.get_num()) / den;
}

/// Human-readable name of the field, used in reports.
template <class F>
std::string field_name() {
  if constexpr (std::same_as<F, Rational>) {
    return "QQ";
  } else {
    return "GF(" + std::to_string(F::modulus) + ")";
  }
}

}  // namespace torelli
