// Witt vectors of length two over the prime field F_p.
//
// An element is a pair (a0, a1) of residues mod p. Addition carries into the
// second component through (a0^p + b0^p - (a0 + b0)^p) / p, which is evaluated
// over the integers before reduction; multiplication is
// (a0 b0, a0^p b1 + b0^p a1). Over F_p the ring is isomorphic to Z/p^2 via
// the Teichmueller decomposition x = tau(a0) + p a1.
#pragma once

#include "torvan/arith.hpp"

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>

namespace torvan {

class WittElem {
 public:
  /// Zero of W2(F_p).
  explicit WittElem(std::int64_t p) : WittElem(p, 0, 0) {}

  /// Reduces both components into [0, p).
  WittElem(std::int64_t p, std::int64_t a0, std::int64_t a1) : p_(p) {
    if (!is_prime(p)) throw InputError("Witt vectors need a prime p, got " + std::to_string(p));
    a0_ = mod_floor(a0, p);
    a1_ = mod_floor(a1, p);
  }

  static WittElem one(std::int64_t p) { return WittElem(p, 1, 0); }

  /// The element (0, x): the image of F_p = pW2 inside W2.
  static WittElem from_kernel(std::int64_t p, std::int64_t x) { return WittElem(p, 0, x); }

  std::int64_t prime() const { return p_; }
  std::int64_t a0() const { return a0_; }
  std::int64_t a1() const { return a1_; }
  bool is_zero() const { return a0_ == 0 && a1_ == 0; }

  friend bool operator==(const WittElem&, const WittElem&) = default;
  friend auto operator<=>(const WittElem&, const WittElem&) = default;

 private:
  std::int64_t p_;
  std::int64_t a0_ = 0;
  std::int64_t a1_ = 0;
};

namespace detail {

inline void require_same_prime(const WittElem& a, const WittElem& b) {
  if (a.prime() != b.prime())
    throw InputError("Witt operands over different primes: " + std::to_string(a.prime()) + " vs " +
                     std::to_string(b.prime()));
}

inline std::int64_t pow_mod(std::int64_t base, std::int64_t exp, std::int64_t m) {
  std::int64_t result = 1 % m;
  base = mod_floor(base, m);
  while (exp > 0) {
    if (exp & 1) result = static_cast<std::int64_t>(static_cast<__int128>(result) * base % m);
    base = static_cast<std::int64_t>(static_cast<__int128>(base) * base % m);
    exp >>= 1;
  }
  return result;
}

}  // namespace detail

inline WittElem witt_add(const WittElem& a, const WittElem& b) {
  detail::require_same_prime(a, b);
  const std::int64_t p = a.prime();
  // sum_{0<i<p} C(p,i) a0^i b0^(p-i), exactly.
  Integer carry = 0;
  Integer binom = 1;
  const Integer x = a.a0(), y = b.a0();
  for (std::int64_t i = 1; i < p; ++i) {
    binom = binom * (p - i + 1) / i;
    carry += binom * boost::multiprecision::pow(x, static_cast<unsigned>(i)) *
             boost::multiprecision::pow(y, static_cast<unsigned>(p - i));
  }
  if (carry % p != 0) throw InternalError("Witt carry not divisible by p");
  Integer second = Integer(a.a1()) + Integer(b.a1()) - carry / p;
  Integer reduced = second % p;
  if (reduced < 0) reduced += p;
  return WittElem(p, a.a0() + b.a0(), static_cast<std::int64_t>(reduced));
}

inline WittElem witt_neg(const WittElem& a) {
  // Solve a + b = 0: b0 = -a0, then b1 is whatever cancels the carry.
  const std::int64_t p = a.prime();
  WittElem partial = witt_add(a, WittElem(p, -a.a0(), 0));
  return WittElem(p, -a.a0(), -partial.a1());
}

inline WittElem witt_sub(const WittElem& a, const WittElem& b) { return witt_add(a, witt_neg(b)); }

inline WittElem witt_mul(const WittElem& a, const WittElem& b) {
  detail::require_same_prime(a, b);
  const std::int64_t p = a.prime();
  const std::int64_t first = a.a0() * b.a0();
  const std::int64_t second = detail::pow_mod(a.a0(), p, p) * b.a1() + detail::pow_mod(b.a0(), p, p) * a.a1();
  return WittElem(p, first, second);
}

/// Componentwise p-th power. On F_p this is the identity, but it is computed
/// from the formula.
inline WittElem witt_frobenius(const WittElem& a) {
  const std::int64_t p = a.prime();
  return WittElem(p, detail::pow_mod(a.a0(), p, p), detail::pow_mod(a.a1(), p, p));
}

/// Reduction W2(F_p) -> F_p.
inline std::int64_t witt_pr1(const WittElem& a) { return a.a0(); }

/// Teichmueller representative of a0 in Z/p^2: the stable value of a0^(p^n).
inline std::int64_t teichmuller(std::int64_t a0, std::int64_t p) {
  const std::int64_t m = p * p;
  std::int64_t x = mod_floor(a0, p);
  // a^(p^n) mod p^2 is constant from n = 1 on.
  for (int n = 0; n < 2; ++n) x = detail::pow_mod(x, p, m);
  return x;
}

/// W2(F_p) -> Z/p^2, (a0, a1) |-> tau(a0) + p a1.
inline std::int64_t witt_to_zp2(const WittElem& a) {
  const std::int64_t p = a.prime();
  return mod_floor(teichmuller(a.a0(), p) + p * a.a1(), p * p);
}

/// Inverse of witt_to_zp2.
inline WittElem witt_from_zp2(std::int64_t x, std::int64_t p) {
  const std::int64_t m = p * p;
  x = mod_floor(x, m);
  const std::int64_t a0 = x % p;
  const std::int64_t rest = mod_floor(x - teichmuller(a0, p), m);
  return WittElem(p, a0, rest / p);
}

inline WittElem operator+(const WittElem& a, const WittElem& b) { return witt_add(a, b); }
inline WittElem operator-(const WittElem& a, const WittElem& b) { return witt_sub(a, b); }
inline WittElem operator-(const WittElem& a) { return witt_neg(a); }
inline WittElem operator*(const WittElem& a, const WittElem& b) { return witt_mul(a, b); }

inline std::ostream& operator<<(std::ostream& os, const WittElem& a) {
  return os << "(" << a.a0() << "," << a.a1() << ")_" << a.prime();
}

}  // namespace torvan
