#pragma once

// Exact residue arithmetic: reduction, extended Euclid, inverses, powers,
// multiplicative order, Euler's totient, Carmichael's lambda and CRT.
//
// Every product of two residues is formed in 128 bits, so the kernels here
// are exact for any modulus below 2^64. The transform layer narrows that to
// moduli below 2^31 so that a single 64-bit product never truncates.

#include <cstdint>
#include <initializer_list>
#include <string>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "fntt/error.hpp"

namespace fntt {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

/// Moduli strictly below this bound have (m-1)^2 < 2^62.
inline constexpr u64 kExactModulusLimit = u64{1} << 31;

/// Threshold below which multiplicative_order scans powers linearly.
inline constexpr u64 kOrderLinearScanLimit = u64{1} << 20;

/// A canonical residue: 0 <= value < modulus, modulus >= 2.
class Residue {
 public:
  Residue(u64 value, u64 modulus) : value_(value), modulus_(modulus) {
    if (modulus < 2) throw Error(Errc::modulus_too_small, "modulus must be >= 2");
    if (value >= modulus) value_ = value % modulus;
  }

  u64 value() const noexcept { return value_; }
  u64 modulus() const noexcept { return modulus_; }

  friend Residue operator+(Residue a, Residue b) {
    check_same(a, b);
    u64 s = a.value_ + b.value_;
    if (s < a.value_ || s >= a.modulus_) s -= a.modulus_;
    return Residue(s, a.modulus_);
  }
  friend Residue operator-(Residue a, Residue b) {
    check_same(a, b);
    return Residue(a.value_ >= b.value_ ? a.value_ - b.value_
                                        : a.modulus_ - (b.value_ - a.value_),
                   a.modulus_);
  }
  friend Residue operator*(Residue a, Residue b) {
    check_same(a, b);
    return Residue(static_cast<u64>(u128{a.value_} * b.value_ % a.modulus_),
                   a.modulus_);
  }
  friend bool operator==(const Residue&, const Residue&) = default;

 private:
  static void check_same(const Residue& a, const Residue& b) {
    if (a.modulus_ != b.modulus_)
      throw Error(Errc::modulus_mismatch, "residues from different rings");
  }

  u64 value_;
  u64 modulus_;
};

struct ExtGcdResult {
  u64 g;
  i64 x;
  i64 y;
};

/// Canonical representative of `a` modulo `m`, nonnegative for negative `a`.
inline Residue mod_reduce(i64 a, u64 m) {
  if (m < 2) throw Error(Errc::modulus_too_small, "modulus must be >= 2");
  i128 r = static_cast<i128>(a) % static_cast<i128>(m);
  if (r < 0) r += m;
  return Residue(static_cast<u64>(r), m);
}

inline u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(u128{a} * b % m);
}

/// Iterative extended Euclid; returns g = gcd(a, b) and a*x + b*y = g.
inline ExtGcdResult ext_gcd(u64 a, u64 b) {
  if (a == 0 && b == 0) throw Error(Errc::bad_input, "ext_gcd(0, 0) is undefined");
  i128 old_r = a, r = b;
  i128 old_x = 1, x = 0;
  i128 old_y = 0, y = 1;
  while (r != 0) {
    const i128 q = old_r / r;
    old_r = std::exchange(r, old_r - q * r);
    old_x = std::exchange(x, old_x - q * x);
    old_y = std::exchange(y, old_y - q * y);
  }
  return {static_cast<u64>(old_r), static_cast<i64>(old_x), static_cast<i64>(old_y)};
}

inline Residue mod_inverse(u64 b, u64 m) {
  if (m < 2) throw Error(Errc::modulus_too_small, "modulus must be >= 2");
  const auto [g, x, y] = ext_gcd(b % m, m);
  (void)y;
  if (g != 1)
    throw Error(Errc::not_invertible,
                std::to_string(b) + " shares the factor " + std::to_string(g) +
                    " with modulus " + std::to_string(m));
  return mod_reduce(x, m);
}

inline Residue mod_inverse(Residue b) { return mod_inverse(b.value(), b.modulus()); }

/// Square-and-multiply: O(log exp) multiplications.
inline Residue mod_pow(u64 base, u64 exp, u64 m) {
  if (m < 2) throw Error(Errc::modulus_too_small, "modulus must be >= 2");
  u64 result = 1;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return Residue(result, m);
}

inline Residue mod_pow(Residue base, u64 exp) {
  return mod_pow(base.value(), exp, base.modulus());
}

/// Prime-power factorization by trial division, ascending primes.
inline std::vector<std::pair<u64, unsigned>> factorize(u64 m) {
  std::vector<std::pair<u64, unsigned>> factors;
  auto strip = [&](u64 p) {
    unsigned e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    if (e != 0) factors.emplace_back(p, e);
  };
  strip(2);
  strip(3);
  for (u64 p = 5; p <= m / p; p += 6) {
    strip(p);
    strip(p + 2);
  }
  if (m > 1) factors.emplace_back(m, 1);
  return factors;
}

inline bool is_prime(u64 m) {
  if (m < 2) return false;
  const auto f = factorize(m);
  return f.size() == 1 && f.front().second == 1;
}

inline u64 totient(u64 m) {
  if (m == 0) throw Error(Errc::bad_input, "totient(0) is undefined");
  u64 phi = m;
  for (const auto& [p, e] : factorize(m)) phi = phi / p * (p - 1);
  return phi;
}

/// lambda(p^k) = phi(p^k) for odd p; lambda(2) = 1, lambda(4) = 2,
/// lambda(2^k) = 2^(k-2) for k >= 3; lcm over the prime powers of m.
inline u64 carmichael_lambda(u64 m) {
  if (m == 0) throw Error(Errc::bad_input, "carmichael_lambda(0) is undefined");
  u64 lambda = 1;
  for (const auto& [p, e] : factorize(m)) {
    u64 pk_1 = 1;
    for (unsigned i = 1; i < e; ++i) pk_1 *= p;
    u64 part = pk_1 * (p - 1);
    if (p == 2 && e >= 3) part /= 2;
    lambda = std::lcm(lambda, part);
  }
  return lambda;
}

/// Smallest nu >= 1 with a^nu == 1 (mod m).
inline u64 multiplicative_order(u64 a, u64 m) {
  if (m < 2) throw Error(Errc::modulus_too_small, "modulus must be >= 2");
  a %= m;
  if (std::gcd(a, m) != 1)
    throw Error(Errc::not_invertible,
                std::to_string(a) + " is not a unit modulo " + std::to_string(m));
  if (m < kOrderLinearScanLimit) {
    u64 nu = 1;
    for (u64 x = a; x != 1; x = mul_mod(x, a, m)) ++nu;
    return nu;
  }
  u64 nu = carmichael_lambda(m);
  for (const auto& [p, e] : factorize(nu)) {
    (void)e;
    while (nu % p == 0 && mod_pow(a, nu / p, m).value() == 1) nu /= p;
  }
  return nu;
}

/// Garner reconstruction of the unique x in [0, prod m_i) matching every
/// residue. The product of the moduli must fit in 128 bits.
inline u128 crt_combine(std::span<const Residue> residues) {
  if (residues.empty()) throw Error(Errc::bad_input, "crt_combine needs at least one residue");
  for (std::size_t i = 0; i < residues.size(); ++i)
    for (std::size_t j = i + 1; j < residues.size(); ++j)
      if (std::gcd(residues[i].modulus(), residues[j].modulus()) != 1)
        throw Error(Errc::moduli_not_coprime,
                    std::to_string(residues[i].modulus()) + " and " +
                        std::to_string(residues[j].modulus()));

  u128 x = residues.front().value();
  u128 product = residues.front().modulus();
  for (const Residue& r : residues.subspan(1)) {
    const u64 m = r.modulus();
    if (product > ~u128{0} / m)
      throw Error(Errc::bound_exceeded, "product of CRT moduli exceeds 128 bits");
    const u64 x_mod = static_cast<u64>(x % m);
    const u64 diff = r.value() >= x_mod ? r.value() - x_mod : m - (x_mod - r.value());
    const u64 t = mul_mod(diff, mod_inverse(static_cast<u64>(product % m), m).value(), m);
    x += product * t;
    product *= m;
  }
  return x;
}

inline u128 crt_combine(std::initializer_list<Residue> residues) {
  return crt_combine(std::span<const Residue>(residues.begin(), residues.size()));
}

}  // namespace fntt
