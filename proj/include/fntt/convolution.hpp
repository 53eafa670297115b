#pragma once

// Exact cyclic convolution, deconvolution and big-integer multiplication on
// top of the Rader-prime transform.
//
// Recovery bound: with B_f, B_g bounding |f| and |g|, every output
// coefficient has magnitude at most C = N * B_f * B_g. Nonnegative data is
// recovered exactly when C < M, signed data when 2C < M (symmetric lift into
// (-M/2, M/2]), where M is the modulus or the product of the CRT moduli.

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fntt/error.hpp"
#include "fntt/modular.hpp"
#include "fntt/rader_registry.hpp"
#include "fntt/transform.hpp"

namespace fntt {

/// Signed integer samples with a magnitude bound. A declared bound is
/// checked on construction; otherwise the bound is the observed max |value|.
class IntegerSequence {
 public:
  IntegerSequence() = default;
  IntegerSequence(std::initializer_list<i64> values) : IntegerSequence(std::vector<i64>(values)) {}
  explicit IntegerSequence(std::vector<i64> values, std::optional<u64> declared_bound = std::nullopt)
      : values_(std::move(values)) {
    u64 observed = 0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      const i64 v = values_[i];
      if (v == std::numeric_limits<i64>::min())
        throw Error(Errc::input_out_of_range, "value at " + std::to_string(i) + " has no magnitude in i64", i);
      const u64 mag = static_cast<u64>(v < 0 ? -v : v);
      if (declared_bound && mag > *declared_bound)
        throw Error(Errc::input_out_of_range,
                    "value " + std::to_string(v) + " at " + std::to_string(i) +
                        " exceeds declared bound " + std::to_string(*declared_bound),
                    i);
      observed = std::max(observed, mag);
      negative_ = negative_ || v < 0;
    }
    bound_ = declared_bound.value_or(observed);
    declared_ = declared_bound.has_value();
  }

  const std::vector<i64>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  i64 operator[](std::size_t i) const { return values_[i]; }
  u64 bound() const noexcept { return bound_; }
  bool declared_bound() const noexcept { return declared_; }
  bool has_negative() const noexcept { return negative_; }

  /// Value equality; the bound is metadata.
  friend bool operator==(const IntegerSequence& a, const IntegerSequence& b) {
    return a.values_ == b.values_;
  }

 private:
  std::vector<i64> values_;
  u64 bound_ = 0;
  bool declared_ = false;
  bool negative_ = false;
};

/// Worst-case |h(j)| = N * B_f * B_g, saturating at 2^128 - 1.
inline u128 coefficient_bound(u64 n, u64 bf, u64 bg) {
  const u128 fg = u128{bf} * bg;
  if (fg != 0 && u128{n} > ~u128{0} / fg) return ~u128{0};
  return fg * n;
}

/// True when a ring of size `ring` recovers every coefficient exactly.
inline bool recovers_exactly(u128 ring, u128 bound, bool is_signed) {
  if (!is_signed) return bound < ring;
  return bound <= (ring - 1) / 2;
}

/// Exact cyclic convolution by definition; the oracle for every other path.
inline IntegerSequence convolve_direct(const IntegerSequence& f, const IntegerSequence& g) {
  if (f.size() != g.size())
    throw Error(Errc::length_mismatch, "convolution operands have different lengths");
  const std::size_t n = f.size();
  std::vector<i64> h(n);
  for (std::size_t j = 0; j < n; ++j) {
    // g index j - k, wrapping once past k = j.
    i128 acc = 0;
    for (std::size_t k = 0; k <= j; ++k) acc += i128{f[k]} * g[j - k];
    for (std::size_t k = j + 1; k < n; ++k) acc += i128{f[k]} * g[j + n - k];
    if (acc > std::numeric_limits<i64>::max() || acc < -std::numeric_limits<i64>::max())
      throw Error(Errc::bound_exceeded, "coefficient " + std::to_string(j) + " exceeds 64 bits", j);
    h[j] = static_cast<i64>(acc);
  }
  return IntegerSequence(std::move(h));
}

namespace detail {

inline void check_convolution_operands(const IntegerSequence& f, const IntegerSequence& g) {
  if (f.size() != g.size())
    throw Error(Errc::length_mismatch, "convolution operands have different lengths");
  if (f.size() == 0) throw Error(Errc::invalid_length, "empty sequences");
}

inline ResidueSequence spectrum(const IntegerSequence& x, const TransformPlan& plan) {
  return forward_fast(ResidueSequence::reduce(x.values(), plan.prime()), plan);
}

/// Residues of f * g modulo one prime.
inline ResidueSequence convolve_residues(const IntegerSequence& f, const IntegerSequence& g,
                                         const TransformPlan& plan) {
  return inverse_fast(pointwise_multiply(spectrum(f, plan), spectrum(g, plan)), plan);
}

inline i64 lift(u128 x, u128 ring, bool is_signed) {
  if (is_signed && x > ring / 2) return -static_cast<i64>(ring - x);
  return static_cast<i64>(x);
}

inline void check_i64_range(u128 bound) {
  if (bound > static_cast<u128>(std::numeric_limits<i64>::max()))
    throw Error(Errc::bound_exceeded, "coefficient bound exceeds 64-bit output range");
}

}  // namespace detail

/// inverse(forward(f) . forward(g)) over one prime, lifted to integers.
inline IntegerSequence convolve_ntt(const IntegerSequence& f, const IntegerSequence& g,
                                    const RaderModulus& m, Kernel kernel = Kernel::multiply) {
  detail::check_convolution_operands(f, g);
  const TransformPlan plan(f.size(), m, kernel);
  const bool is_signed = f.has_negative() || g.has_negative();
  const u128 bound = coefficient_bound(f.size(), f.bound(), g.bound());
  if (!recovers_exactly(m.prime, bound, is_signed))
    throw Error(Errc::bound_exceeded,
                std::string(is_signed ? "signed" : "unsigned") + " coefficient bound " + to_decimal(bound) +
                    " does not fit modulus " + std::to_string(m.prime));
  const auto h = detail::convolve_residues(f, g, plan);
  std::vector<i64> out(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) out[i] = detail::lift(h[i], m.prime, is_signed);
  return IntegerSequence(std::move(out));
}

/// One transform per prime, then Garner reconstruction per coefficient.
inline IntegerSequence convolve_crt(const IntegerSequence& f, const IntegerSequence& g,
                                    std::span<const RaderModulus> moduli) {
  detail::check_convolution_operands(f, g);
  if (moduli.empty()) throw Error(Errc::bad_input, "convolve_crt needs at least one modulus");
  u128 ring = 1;
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j)
      if (std::gcd(moduli[i].prime, moduli[j].prime) != 1)
        throw Error(Errc::moduli_not_coprime,
                    std::to_string(moduli[i].prime) + " and " + std::to_string(moduli[j].prime));
    if (ring > ~u128{0} / moduli[i].prime)
      throw Error(Errc::bound_exceeded, "product of moduli exceeds 128 bits");
    ring *= moduli[i].prime;
  }
  const bool is_signed = f.has_negative() || g.has_negative();
  const u128 bound = coefficient_bound(f.size(), f.bound(), g.bound());
  if (!recovers_exactly(ring, bound, is_signed))
    throw Error(Errc::bound_exceeded, "coefficient bound " + to_decimal(bound) +
                                          " does not fit the moduli product " + to_decimal(ring));
  detail::check_i64_range(bound);

  std::vector<ResidueSequence> parts;
  parts.reserve(moduli.size());
  for (const auto& m : moduli) parts.push_back(detail::convolve_residues(f, g, TransformPlan(f.size(), m)));

  std::vector<i64> out(f.size());
  std::vector<Residue> column;
  for (std::size_t i = 0; i < out.size(); ++i) {
    column.clear();
    for (const auto& p : parts) column.emplace_back(p[i], p.modulus());
    out[i] = detail::lift(crt_combine(column), ring, is_signed);
  }
  return IntegerSequence(std::move(out));
}

inline IntegerSequence convolve_crt(const IntegerSequence& f, const IntegerSequence& g,
                                    std::initializer_list<RaderModulus> moduli) {
  return convolve_crt(f, g, std::span<const RaderModulus>(moduli.begin(), moduli.size()));
}

enum class Lift { canonical, symmetric };

/// f with f * g == h (mod m): inverse(H(u) * G(u)^-1). Throws NotInvertible
/// carrying the first spectral bin u where G(u) == 0.
inline IntegerSequence deconvolve(const IntegerSequence& h, const IntegerSequence& g,
                                  const RaderModulus& m, Lift lift = Lift::canonical) {
  detail::check_convolution_operands(h, g);
  const TransformPlan plan(h.size(), m);
  const auto hs = detail::spectrum(h, plan);
  const auto gs = detail::spectrum(g, plan);
  std::vector<u64> quotient(h.size());
  for (std::size_t u = 0; u < quotient.size(); ++u) {
    if (gs[u] == 0)
      throw Error(Errc::not_invertible,
                  "filter spectrum vanishes at bin " + std::to_string(u) + " modulo " + std::to_string(m.prime), u);
    quotient[u] = mul_mod(hs[u], mod_inverse(gs[u], m.prime).value(), m.prime);
  }
  const auto f = inverse_fast(ResidueSequence(std::move(quotient), m.prime), plan);
  std::vector<i64> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = detail::lift(f[i], m.prime, lift == Lift::symmetric);
  return IntegerSequence(std::move(out));
}

/// Moduli for an exact length-n convolution with the given bound: the
/// smallest single admitting prime if one suffices, otherwise admitting
/// primes taken largest first until their product does.
inline std::vector<RaderModulus> choose_moduli(const RaderRegistry& registry, u64 n, u128 bound,
                                               bool is_signed) {
  auto candidates = registry.admitting(n);
  if (candidates.empty())
    throw Error(Errc::invalid_length, "no registry modulus admits length " + std::to_string(n));
  for (const auto& m : candidates)
    if (recovers_exactly(m.prime, bound, is_signed)) return {m};
  std::vector<RaderModulus> chosen;
  u128 ring = 1;
  for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) {
    if (ring > ~u128{0} / it->prime) break;
    ring *= it->prime;
    chosen.push_back(*it);
    if (recovers_exactly(ring, bound, is_signed) &&
        bound <= static_cast<u128>(std::numeric_limits<i64>::max()))
      return chosen;
  }
  throw Error(Errc::bound_exceeded, "registry moduli admitting length " + std::to_string(n) +
                                        " cannot recover bound " + to_decimal(bound));
}

// ---------------------------------------------------------------------------
// Big integers

/// Sign-magnitude integer as little-endian digits in base B (2 <= B <= 2^32).
/// Canonical: no leading zero digits; zero has no digits and is nonnegative.
class BigDigits {
 public:
  static constexpr u64 kDefaultBase = 256;

  explicit BigDigits(u64 base = kDefaultBase) : base_(base) { check_base(base); }
  BigDigits(std::vector<u64> digits, u64 base, bool negative = false)
      : digits_(std::move(digits)), base_(base), negative_(negative) {
    check_base(base);
    for (std::size_t i = 0; i < digits_.size(); ++i)
      if (digits_[i] >= base)
        throw Error(Errc::input_out_of_range, "digit " + std::to_string(i) + " is not below base", i);
    trim();
  }

  /// Parses an optionally signed decimal string.
  static BigDigits from_decimal(std::string_view text, u64 base = kDefaultBase) {
    check_base(base);
    bool negative = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
      negative = text.front() == '-';
      text.remove_prefix(1);
    }
    if (text.empty() || !std::ranges::all_of(text, [](char c) { return c >= '0' && c <= '9'; }))
      throw Error(Errc::parse_error, "malformed decimal integer");

    // Big-endian limbs in base 10^9, then repeated division by `base`.
    std::vector<u64> limbs;
    const std::size_t head = text.size() % 9;
    if (head != 0) limbs.push_back(parse_chunk(text.substr(0, head)));
    for (std::size_t i = head; i < text.size(); i += 9) limbs.push_back(parse_chunk(text.substr(i, 9)));

    std::vector<u64> digits;
    std::size_t first = 0;
    while (first < limbs.size()) {
      u64 rem = 0;
      for (std::size_t i = first; i < limbs.size(); ++i) {
        const u64 cur = rem * kLimb + limbs[i];
        limbs[i] = cur / base;
        rem = cur % base;
      }
      digits.push_back(rem);
      while (first < limbs.size() && limbs[first] == 0) ++first;
    }
    return BigDigits(std::move(digits), base, negative);
  }

  std::string to_decimal() const {
    if (is_zero()) return "0";
    // Little-endian base-10^9 accumulator, Horner from the top digit.
    std::vector<u64> acc;
    for (auto it = digits_.rbegin(); it != digits_.rend(); ++it) {
      u64 carry = *it;
      for (auto& limb : acc) {
        const u64 cur = limb * base_ + carry;
        limb = cur % kLimb;
        carry = cur / kLimb;
      }
      while (carry != 0) {
        acc.push_back(carry % kLimb);
        carry /= kLimb;
      }
    }
    std::string s = negative_ ? "-" : "";
    s += std::to_string(acc.back());
    for (auto it = acc.rbegin() + 1; it != acc.rend(); ++it) {
      const std::string part = std::to_string(*it);
      s.append(9 - part.size(), '0');
      s += part;
    }
    return s;
  }

  const std::vector<u64>& digits() const noexcept { return digits_; }
  u64 base() const noexcept { return base_; }
  bool negative() const noexcept { return negative_; }
  bool is_zero() const noexcept { return digits_.empty(); }

  friend bool operator==(const BigDigits&, const BigDigits&) = default;

 private:
  static constexpr u64 kLimb = 1'000'000'000;

  static void check_base(u64 base) {
    if (base < 2 || base > (u64{1} << 32)) throw Error(Errc::bad_input, "digit base must lie in [2, 2^32]");
  }

  static u64 parse_chunk(std::string_view s) {
    u64 v = 0;
    for (char c : s) v = v * 10 + static_cast<u64>(c - '0');
    return v;
  }

  void trim() {
    while (!digits_.empty() && digits_.back() == 0) digits_.pop_back();
    if (digits_.empty()) negative_ = false;
  }

  std::vector<u64> digits_;
  u64 base_;
  bool negative_ = false;
};

/// Transform length for multiplying operands of la and lb digits: the next
/// power of two >= la + lb, so the cyclic product equals the linear one.
inline u64 product_length(std::size_t la, std::size_t lb) { return std::bit_ceil(u64{la + lb}); }

/// Exact product: zero-padded cyclic convolution of the digit vectors over
/// the given primes, then carry propagation in base B. Digits are bounded by
/// B - 1 for the recovery check.
inline BigDigits bigint_multiply(const BigDigits& a, const BigDigits& b, std::span<const RaderModulus> moduli) {
  if (a.base() != b.base()) throw Error(Errc::bad_input, "operands use different digit bases");
  const u64 base = a.base();
  if (a.is_zero() || b.is_zero()) return BigDigits(base);
  const u64 n = product_length(a.digits().size(), b.digits().size());
  auto padded = [&](const BigDigits& x) {
    std::vector<i64> v(n, 0);
    std::ranges::transform(x.digits(), v.begin(), [](u64 d) { return static_cast<i64>(d); });
    return IntegerSequence(std::move(v), base - 1);
  };
  const auto raw = convolve_crt(padded(a), padded(b), moduli);

  std::vector<u64> digits;
  digits.reserve(n + 2);
  u128 carry = 0;
  for (i64 c : raw.values()) {
    carry += static_cast<u64>(c);
    digits.push_back(static_cast<u64>(carry % base));
    carry /= base;
  }
  while (carry != 0) {
    digits.push_back(static_cast<u64>(carry % base));
    carry /= base;
  }
  return BigDigits(std::move(digits), base, a.negative() != b.negative());
}

inline BigDigits bigint_multiply(const BigDigits& a, const BigDigits& b,
                                 std::initializer_list<RaderModulus> moduli) {
  return bigint_multiply(a, b, std::span<const RaderModulus>(moduli.begin(), moduli.size()));
}

/// Moduli for bigint_multiply picked from a registry.
inline std::vector<RaderModulus> choose_bigint_moduli(const RaderRegistry& registry, std::size_t la,
                                                      std::size_t lb, u64 base) {
  const u64 n = product_length(la, lb);
  return choose_moduli(registry, n, coefficient_bound(n, base - 1, base - 1), false);
}

inline BigDigits bigint_multiply(const BigDigits& a, const BigDigits& b,
                                 const RaderRegistry& registry = RaderRegistry::builtin()) {
  if (a.is_zero() || b.is_zero()) return BigDigits(a.base());
  const auto moduli = choose_bigint_moduli(registry, a.digits().size(), b.digits().size(), a.base());
  return bigint_multiply(a, b, moduli);
}

/// Decimal product. Starts at `base` and halves the digit width (base 16,
/// 4, 2) while the registry cannot satisfy the recovery bound.
inline std::string multiply_decimal(std::string_view a, std::string_view b,
                                    const RaderRegistry& registry = RaderRegistry::builtin(),
                                    u64 base = BigDigits::kDefaultBase) {
  for (;;) {
    try {
      return bigint_multiply(BigDigits::from_decimal(a, base), BigDigits::from_decimal(b, base), registry)
          .to_decimal();
    } catch (const Error& e) {
      if (e.code() != Errc::bound_exceeded || base <= 2) throw;
      base = std::bit_width(base) > 2 ? u64{1} << ((std::bit_width(base) - 1) / 2) : 2;
    }
  }
}

}  // namespace fntt
