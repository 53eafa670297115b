#pragma once

// Number-theoretic transform over a Rader modulus with root 2^s:
//
//   X(u) = sum_t x(t) 2^(s u t)        x(t) = N^-1 sum_u X(u) 2^(-s u t)
//
// where s = n_max / N. The direct path evaluates the sums in O(N^2) and is
// the reference for the radix-2 decimation-in-time path. Both paths run
// with either kernel; the shift kernel multiplies by twiddles using only
// doubling and conditional subtraction.

#include <bit>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "fntt/error.hpp"
#include "fntt/modular.hpp"
#include "fntt/rader_registry.hpp"

namespace fntt {

enum class Kernel { multiply, shift };

/// x * 2^alpha mod m by alpha rounds of (double; subtract m if needed).
/// x must be canonical and m below 2^63.
inline u64 shift_mul(u64 x, u64 alpha, u64 m) {
  for (u64 i = 0; i < alpha; ++i) {
    x <<= 1;
    if (x >= m) x -= m;
  }
  return x;
}

/// Canonical residues sharing one modulus.
class ResidueSequence {
 public:
  ResidueSequence(std::vector<u64> values, u64 modulus)
      : values_(std::move(values)), modulus_(modulus) {
    if (modulus < 2) throw Error(Errc::modulus_too_small, "modulus must be >= 2");
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (values_[i] >= modulus)
        throw Error(Errc::input_out_of_range,
                    "element " + std::to_string(i) + " is not reduced modulo " + std::to_string(modulus), i);
  }

  /// Reduces signed integers into canonical residues.
  static ResidueSequence reduce(std::span<const i64> xs, u64 modulus) {
    std::vector<u64> v;
    v.reserve(xs.size());
    for (i64 x : xs) v.push_back(mod_reduce(x, modulus).value());
    return ResidueSequence(std::move(v), modulus);
  }

  const std::vector<u64>& values() const noexcept { return values_; }
  u64 modulus() const noexcept { return modulus_; }
  std::size_t size() const noexcept { return values_.size(); }
  u64 operator[](std::size_t i) const { return values_[i]; }

  friend bool operator==(const ResidueSequence&, const ResidueSequence&) = default;

 private:
  std::vector<u64> values_;
  u64 modulus_;
};

/// Validated (N, modulus, root 2^s) with precomputed twiddles. Immutable.
class TransformPlan {
 public:
  TransformPlan(u64 length, const RaderModulus& modulus, Kernel kernel = Kernel::multiply)
      : length_(length), modulus_(modulus), kernel_(kernel) {
    const u64 m = modulus.prime;
    if (m < 3 || m >= kExactModulusLimit)
      throw Error(Errc::bad_input, "transform modulus must lie in [3, 2^31)");
    if (length == 0 || modulus.n_max == 0 || modulus.n_max % length != 0)
      throw Error(Errc::invalid_length, "length " + std::to_string(length) + " does not divide n_max " +
                                            std::to_string(modulus.n_max) + " of modulus " +
                                            std::to_string(m));
    step_ = modulus.n_max / length;
    const u64 root = mod_pow(2, step_, m).value();

    twiddles_.resize(length);
    u64 w = 1;
    for (u64 j = 0; j < length; ++j) {
      if (j != 0 && w == 1)
        throw Error(Errc::invalid_length, "2^" + std::to_string(step_ * j) + " == 1 (mod " +
                                              std::to_string(m) + "): root order below length");
      twiddles_[j] = w;
      w = mul_mod(w, root, m);
    }
    if (w != 1)
      throw Error(Errc::invalid_length, "root 2^" + std::to_string(step_) + " does not close after " +
                                            std::to_string(length) + " steps");

    inverse_twiddles_.resize(length);
    for (u64 j = 0; j < length; ++j) inverse_twiddles_[j] = twiddles_[(length - j) % length];
    n_inverse_ = mod_inverse(length % m, m).value();
    half_turn_negates_ = modulus.n_max % 2 == 0 && mod_pow(2, modulus.n_max / 2, m).value() == m - 1;
  }

  u64 length() const noexcept { return length_; }
  const RaderModulus& modulus() const noexcept { return modulus_; }
  u64 prime() const noexcept { return modulus_.prime; }
  Kernel kernel() const noexcept { return kernel_; }
  bool power_of_two() const noexcept { return std::has_single_bit(length_); }

  /// s = n_max / N; the working root is 2^s.
  u64 root_exponent_step() const noexcept { return step_; }
  const std::vector<u64>& twiddles() const noexcept { return twiddles_; }
  const std::vector<u64>& inverse_twiddles() const noexcept { return inverse_twiddles_; }
  u64 n_inverse() const noexcept { return n_inverse_; }

  /// x * 2^(s j) (forward) or x * 2^(-s j) (inverse), j in [0, N).
  u64 twiddle(u64 x, u64 j, bool inverse) const {
    if (kernel_ == Kernel::multiply)
      return mul_mod(x, inverse ? inverse_twiddles_[j] : twiddles_[j], modulus_.prime);
    return shift_by(x, step_ * (inverse ? (length_ - j) % length_ : j));
  }

  /// x * N^-1. With the shift kernel and N = 2^k this is x * 2^(n_max - k).
  u64 normalize(u64 x) const {
    if (kernel_ == Kernel::shift && power_of_two())
      return shift_by(x, modulus_.n_max - static_cast<u64>(std::countr_zero(length_)));
    return mul_mod(x, n_inverse_, modulus_.prime);
  }

  /// x * 2^e for any e, reduced modulo the order of 2. When 2^(n_max/2) is
  /// -1 the upper half-turn becomes a negation.
  u64 shift_by(u64 x, u64 e) const {
    const u64 m = modulus_.prime;
    e %= modulus_.n_max;
    if (half_turn_negates_ && e >= modulus_.n_max / 2) {
      const u64 y = shift_mul(x, e - modulus_.n_max / 2, m);
      return y == 0 ? 0 : m - y;
    }
    return shift_mul(x, e, m);
  }

 private:
  u64 length_;
  RaderModulus modulus_;
  Kernel kernel_;
  u64 step_ = 0;
  std::vector<u64> twiddles_;
  std::vector<u64> inverse_twiddles_;
  u64 n_inverse_ = 0;
  bool half_turn_negates_ = false;
};

inline TransformPlan build_plan(u64 length, const RaderModulus& modulus,
                                Kernel kernel = Kernel::multiply) {
  return TransformPlan(length, modulus, kernel);
}

namespace detail {

inline u64 add_mod(u64 a, u64 b, u64 m) {
  const u64 s = a + b;
  return s >= m ? s - m : s;
}

inline u64 sub_mod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + m - b; }

inline void check_operand(const ResidueSequence& x, const TransformPlan& plan) {
  if (x.size() != plan.length())
    throw Error(Errc::length_mismatch, "sequence length " + std::to_string(x.size()) +
                                           " != plan length " + std::to_string(plan.length()));
  if (x.modulus() != plan.prime())
    throw Error(Errc::modulus_mismatch, "sequence modulus " + std::to_string(x.modulus()) +
                                            " != plan modulus " + std::to_string(plan.prime()));
}

inline std::vector<u64> direct(const ResidueSequence& x, const TransformPlan& plan, bool inverse) {
  check_operand(x, plan);
  const u64 n = plan.length();
  const u64 m = plan.prime();
  const auto& in = x.values();
  std::vector<u64> out(n);
  if (plan.kernel() == Kernel::multiply) {
    const auto& tw = inverse ? plan.inverse_twiddles() : plan.twiddles();
    for (u64 u = 0; u < n; ++u) {
      u128 acc = 0;
      u64 idx = 0;
      for (u64 t = 0; t < n; ++t) {
        acc += u128{in[t]} * tw[idx];
        idx += u;
        if (idx >= n) idx -= n;
      }
      out[u] = static_cast<u64>(acc % m);
    }
  } else {
    for (u64 u = 0; u < n; ++u) {
      u64 acc = 0;
      u64 idx = 0;
      for (u64 t = 0; t < n; ++t) {
        acc = add_mod(acc, plan.twiddle(in[t], idx, inverse), m);
        idx += u;
        if (idx >= n) idx -= n;
      }
      out[u] = acc;
    }
  }
  if (inverse)
    for (auto& v : out) v = plan.normalize(v);
  return out;
}

inline void bit_reverse_permute(std::vector<u64>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
}

inline std::vector<u64> fast(const ResidueSequence& x, const TransformPlan& plan, bool inverse) {
  check_operand(x, plan);
  if (!plan.power_of_two()) return direct(x, plan, inverse);
  const u64 n = plan.length();
  const u64 m = plan.prime();
  std::vector<u64> a = x.values();
  bit_reverse_permute(a);
  for (u64 len = 2; len <= n; len <<= 1) {
    const u64 half = len / 2;
    const u64 stride = n / len;
    for (u64 start = 0; start < n; start += len) {
      for (u64 k = 0; k < half; ++k) {
        const u64 even = a[start + k];
        const u64 odd = plan.twiddle(a[start + k + half], k * stride, inverse);
        a[start + k] = add_mod(even, odd, m);
        a[start + k + half] = sub_mod(even, odd, m);
      }
    }
  }
  if (inverse)
    for (auto& v : a) v = plan.normalize(v);
  return a;
}

}  // namespace detail

/// O(N^2) evaluation of the forward sum; any length dividing n_max.
inline ResidueSequence forward_direct(const ResidueSequence& x, const TransformPlan& plan) {
  return ResidueSequence(detail::direct(x, plan, false), plan.prime());
}

inline ResidueSequence inverse_direct(const ResidueSequence& x, const TransformPlan& plan) {
  return ResidueSequence(detail::direct(x, plan, true), plan.prime());
}

/// Radix-2 Cooley-Tukey; lengths that are not powers of two use the direct path.
inline ResidueSequence forward_fast(const ResidueSequence& x, const TransformPlan& plan) {
  return ResidueSequence(detail::fast(x, plan, false), plan.prime());
}

inline ResidueSequence inverse_fast(const ResidueSequence& x, const TransformPlan& plan) {
  return ResidueSequence(detail::fast(x, plan, true), plan.prime());
}

inline ResidueSequence pointwise_multiply(const ResidueSequence& a, const ResidueSequence& b) {
  if (a.modulus() != b.modulus()) throw Error(Errc::modulus_mismatch, "pointwise product moduli differ");
  if (a.size() != b.size()) throw Error(Errc::length_mismatch, "pointwise product lengths differ");
  std::vector<u64> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = mul_mod(a[i], b[i], a.modulus());
  return ResidueSequence(std::move(out), a.modulus());
}

}  // namespace fntt
