#pragma once

// Rader primes (prime factors of Fermat numbers F_j = 2^(2^j) + 1) and the
// number-theoretic facts that make them usable as transform moduli with
// root 2: the order of 2 modulo such a prime is exactly 2^(j+1).

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fntt/error.hpp"
#include "fntt/modular.hpp"

namespace fntt {

/// A transform modulus. `n_max` is the multiplicative order of 2, the
/// longest transform the modulus supports with root 2. `fermat_index` is j
/// with prime | F_j, when the prime is a Fermat factor.
struct RaderModulus {
  u64 prime = 0;
  std::optional<unsigned> fermat_index;
  u64 n_max = 0;

  /// Smallest machine word (8/16/32/64 bits) holding the prime.
  unsigned word_size_bits() const noexcept {
    const auto width = static_cast<unsigned>(std::bit_width(prime));
    for (unsigned w : {8u, 16u, 32u}) {
      if (width <= w) return w;
    }
    return 64;
  }

  friend bool operator==(const RaderModulus&, const RaderModulus&) = default;
};

/// Raised by the verifiers; `clause()` names the property that failed.
class VerificationError : public Error {
 public:
  VerificationError(std::string clause, const std::string& what)
      : Error(Errc::verification_failed, clause + ": " + what), clause_(std::move(clause)) {}
  const std::string& clause() const noexcept { return clause_; }

 private:
  std::string clause_;
};

/// 2^(2^j) mod m by j successive squarings.
inline u64 pow2_pow2_mod(unsigned j, u64 m) {
  u64 x = 2 % m;
  for (unsigned i = 0; i < j; ++i) x = mul_mod(x, x, m);
  return x;
}

/// True iff m divides F_j, checked as 2^(2^j) == -1 (mod m).
inline bool divides_fermat(u64 m, unsigned j) {
  if (m < 2) return false;
  return pow2_pow2_mod(j, m) == m - 1;
}

/// Wraps an odd prime below 2^31 as a transform modulus with root 2. The
/// Fermat index is recovered when the order of 2 is a power of two 2^(j+1)
/// with 2^(2^j) == -1.
inline RaderModulus make_modulus(u64 m) {
  if (m < 3 || m % 2 == 0 || m >= kExactModulusLimit || !is_prime(m))
    throw Error(Errc::bad_input,
                "transform modulus must be an odd prime below 2^31, got " + std::to_string(m));
  RaderModulus r;
  r.prime = m;
  r.n_max = multiplicative_order(2, m);
  if (std::has_single_bit(r.n_max) && r.n_max >= 2) {
    const auto j = static_cast<unsigned>(std::countr_zero(r.n_max)) - 1;
    if (divides_fermat(m, j)) r.fermat_index = j;
  }
  return r;
}

/// Euler/Lucas form of Fermat factors: for j >= 2 every prime factor of F_j
/// is k * 2^(j+2) + 1. F_0 = 3 and F_1 = 5 are exempt.
inline bool has_euler_form(u64 m, unsigned j) {
  if (j < 2) return true;
  if (j + 2 >= 64) return false;
  return (m - 1) % (u64{1} << (j + 2)) == 0;
}

/// Checks the claims of a Fermat factor modulus, throwing on the first
/// failure: (a) m | F_j, (b) the order of 2 is exactly n_max, confirmed by
/// 2^l != 1 for every power of two l < n_max, (c) n_max = 2^(j+1).
inline bool verify_fermat_factor_modulus(const RaderModulus& m) {
  if (!m.fermat_index)
    throw VerificationError("divisibility", std::to_string(m.prime) + " has no Fermat index");
  const unsigned j = *m.fermat_index;
  if (!divides_fermat(m.prime, j))
    throw VerificationError("divisibility", std::to_string(m.prime) + " does not divide F_" +
                                                std::to_string(j));
  if (!std::has_single_bit(m.n_max))
    throw VerificationError("order", "claimed n_max " + std::to_string(m.n_max) +
                                         " is not a power of two");
  for (u64 l = 1; l < m.n_max; l <<= 1) {
    if (mod_pow(2, l, m.prime).value() == 1)
      throw VerificationError("order", "2^" + std::to_string(l) + " == 1 (mod " +
                                           std::to_string(m.prime) + "), order is below n_max " +
                                           std::to_string(m.n_max));
  }
  if (mod_pow(2, m.n_max, m.prime).value() != 1)
    throw VerificationError("order", "2^" + std::to_string(m.n_max) + " != 1 (mod " +
                                         std::to_string(m.prime) + ")");
  if (j + 1 >= 64 || m.n_max != (u64{1} << (j + 1)))
    throw VerificationError("length", "n_max " + std::to_string(m.n_max) + " != 2^" +
                                          std::to_string(j + 1));
  return true;
}

/// Full registry invariants: primality, Fermat-factor clauses and Euler form.
inline void verify_rader_modulus(const RaderModulus& m) {
  if (m.prime >= kExactModulusLimit || !is_prime(m.prime))
    throw VerificationError("prime", std::to_string(m.prime) + " is not a prime below 2^31");
  verify_fermat_factor_modulus(m);
  if (!has_euler_form(m.prime, *m.fermat_index))
    throw VerificationError("euler-form", std::to_string(m.prime) + " - 1 is not divisible by 2^" +
                                              std::to_string(*m.fermat_index + 2));
}

// ---------------------------------------------------------------------------
// Fermat, Rader and Mersenne numbers at desk scale

/// Largest index whose Fermat number fits the 128-bit helper (F_6 = 2^64 + 1).
inline constexpr unsigned kMaxFermatIndex = 6;

struct FermatNumber {
  unsigned index;
  u128 value;
};

inline FermatNumber fermat_number(unsigned n) {
  if (n > kMaxFermatIndex)
    throw Error(Errc::index_too_large, "F_" + std::to_string(n) + " exceeds 128 bits");
  return {n, (u128{1} << (u64{1} << n)) + 1};
}

/// 2^(2^n) - 1.
inline u128 rader_number(unsigned n) {
  if (n > kMaxFermatIndex)
    throw Error(Errc::index_too_large, "Rader number index " + std::to_string(n) + " too large");
  return (u128{1} << (u64{1} << n)) - 1;
}

/// F_0 * F_1 * ... * F_{n-1} == F_n - 2, in exact arithmetic.
inline bool verify_fermat_product_identity(unsigned n) {
  if (n == 0) throw Error(Errc::bad_input, "identity needs n >= 1");
  if (n > kMaxFermatIndex)
    throw Error(Errc::index_too_large, "identity index " + std::to_string(n) + " too large");
  u128 product = 1;
  for (unsigned i = 0; i < n; ++i) product *= fermat_number(i).value;
  return product == fermat_number(n).value - 2;
}

struct MersenneFactorization {
  unsigned n;
  std::vector<std::pair<u64, unsigned>> factors;  // of 2^n - 1
};

inline std::vector<MersenneFactorization> mersenne_factor_table(unsigned limit) {
  if (limit > 32) throw Error(Errc::index_too_large, "mersenne table limit is 32");
  std::vector<MersenneFactorization> table;
  for (unsigned n = 1; n <= limit; ++n) table.push_back({n, factorize((u64{1} << n) - 1)});
  return table;
}

inline std::string to_decimal(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v != 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return {s.rbegin(), s.rend()};
}

// ---------------------------------------------------------------------------
// Registry

/// The built-in registry: the four published 16/32-bit rows plus the second
/// prime factor of F_5. Same content as data/rader_primes.txt.
inline constexpr std::string_view kBuiltinRegistry = R"(# Rader primes: prime factors of Fermat numbers F_j = 2^(2^j) + 1.
# Record: m fermat_index n_max   (m | F_j, order of 2 mod m is n_max = 2^(j+1))
641 5 64
6700417 5 64
2424833 9 1024
319489 11 4096
13631489 18 524288
)";

struct PublishedPrime {
  u64 prime;
  u64 n_max;
  unsigned fermat_index;
  unsigned word_size_bits;
};

inline constexpr std::array<PublishedPrime, 4> kPublishedPrimes = {{
    {641, 64, 5, 16},
    {2424833, 1024, 9, 32},
    {319489, 4096, 11, 32},
    {13631489, 524288, 18, 32},
}};

/// Immutable, verified list of Rader primes sorted by ascending prime.
class RaderRegistry {
 public:
  /// Parses `m fermat_index n_max` records; '#' starts a comment. Every
  /// record is verified before the registry is returned.
  static RaderRegistry parse(std::string_view text, std::string_view source = "<registry>") {
    RaderRegistry reg;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream fields(line);
      std::vector<std::string> tok;
      for (std::string t; fields >> t;) tok.push_back(t);
      if (tok.empty()) continue;
      auto where = [&] { return std::string(source) + ":" + std::to_string(lineno); };
      if (tok.size() != 3) throw Error(Errc::parse_error, where() + ": expected 'm fermat_index n_max'");
      u64 vals[3];
      for (int i = 0; i < 3; ++i) {
        const auto& t = tok[i];
        auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), vals[i]);
        if (ec != std::errc{} || p != t.data() + t.size())
          throw Error(Errc::parse_error, where() + ": bad number '" + t + "'");
      }
      if (vals[1] > 63) throw Error(Errc::parse_error, where() + ": fermat_index out of range");
      RaderModulus m{vals[0], static_cast<unsigned>(vals[1]), vals[2]};
      verify_rader_modulus(m);
      if (reg.find(m.prime)) throw Error(Errc::parse_error, where() + ": duplicate prime");
      reg.entries_.push_back(m);
    }
    std::ranges::sort(reg.entries_, {}, &RaderModulus::prime);
    return reg;
  }

  static RaderRegistry load_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(Errc::parse_error, "cannot open registry file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str(), path);
  }

  static const RaderRegistry& builtin() {
    static const RaderRegistry reg = parse(kBuiltinRegistry, "<builtin>");
    return reg;
  }

  const std::vector<RaderModulus>& entries() const noexcept { return entries_; }

  std::optional<RaderModulus> find(u64 prime) const {
    for (const auto& e : entries_)
      if (e.prime == prime) return e;
    return std::nullopt;
  }

  /// Entries whose maximum length is a multiple of n, ascending prime.
  std::vector<RaderModulus> admitting(u64 n) const {
    std::vector<RaderModulus> out;
    for (const auto& e : entries_)
      if (n != 0 && e.n_max % n == 0) out.push_back(e);
    return out;
  }

 private:
  std::vector<RaderModulus> entries_;
};

// ---------------------------------------------------------------------------
// Named checks shared by the CLI and the acceptance suite

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

inline std::vector<CheckResult> check_published_primes(const RaderRegistry& reg) {
  std::vector<CheckResult> out;
  for (const auto& row : kPublishedPrimes) {
    const std::string name = "published m=" + std::to_string(row.prime);
    try {
      const RaderModulus m{row.prime, row.fermat_index, row.n_max};
      verify_rader_modulus(m);
      const u64 order = multiplicative_order(2, row.prime);
      const bool in_registry = reg.find(row.prime) == m;
      const bool ok = order == row.n_max && in_registry && m.word_size_bits() == row.word_size_bits;
      out.push_back({name, ok,
                     "order=" + std::to_string(order) + " F_" + std::to_string(row.fermat_index) +
                         " word=" + std::to_string(m.word_size_bits()) +
                         (in_registry ? "" : " (missing from registry)")});
    } catch (const Error& e) {
      out.push_back({name, false, e.what()});
    }
  }
  return out;
}

/// 341 = 11 * 31 is composite yet 2^340 == 1 (mod 341); the order of 2 is 10
/// and lambda(341) = 30 annihilates every unit.
inline std::vector<CheckResult> check_poulet_341() {
  constexpr u64 m = 341;
  std::vector<CheckResult> out;
  const u64 nu = multiplicative_order(2, m);
  out.push_back({"poulet order", nu == 10, "nu=" + std::to_string(nu)});
  out.push_back({"poulet fermat pseudoprime", mod_pow(2, m - 1, m).value() == 1 && !is_prime(m),
                 "2^340 mod 341 = " + std::to_string(mod_pow(2, m - 1, m).value())});
  const u64 lambda = carmichael_lambda(m);
  bool all_units = true;
  for (u64 a = 1; a < m; ++a)
    if (std::gcd(a, m) == 1 && mod_pow(a, lambda, m).value() != 1) all_units = false;
  out.push_back({"poulet lambda", lambda == 30 && all_units, "lambda=" + std::to_string(lambda)});
  return out;
}

inline CheckResult check_fermat_identity(unsigned n) {
  const std::string name = "fermat identity n=" + std::to_string(n);
  try {
    const bool ok = verify_fermat_product_identity(n);
    return {name, ok, "F_" + std::to_string(n) + " - 2 = " + to_decimal(fermat_number(n).value - 2)};
  } catch (const Error& e) {
    return {name, false, e.what()};
  }
}

inline CheckResult check_fermat_factor_modulus(const RaderModulus& m) {
  const std::string name = "fermat factor m=" + std::to_string(m.prime);
  try {
    verify_fermat_factor_modulus(m);
    return {name, true, "order=" + std::to_string(m.n_max)};
  } catch (const VerificationError& e) {
    return {name, false, e.what()};
  }
}

}  // namespace fntt
