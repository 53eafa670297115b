#pragma once

// Modulus-free transform: arithmetic modulo 2^alpha realised purely by
// truncating products and sums to alpha bits. For odd a, a^(2^(alpha-2)) == 1
// (mod 2^alpha), so the powers of a trace a digital circle without a single
// modulo instruction. Division by N has no inverse in this ring; it is an
// exact right shift guaranteed by headroom alpha >= beta + N, beta being the
// data bit depth.
//
// Orthogonality does not follow from the order alone (a = 3, N = 4 mod 16
// fails), so every plan is built through a brute-force check and the
// kernels refuse plans that were rejected.

#include <bit>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fntt/error.hpp"
#include "fntt/modular.hpp"

namespace fntt {

namespace detail {

inline u64 low_mask(unsigned alpha) { return alpha >= 64 ? ~u64{0} : (u64{1} << alpha) - 1; }

inline void check_dyadic_width(unsigned alpha) {
  if (alpha < 3 || alpha > 64) throw Error(Errc::bad_input, "alpha must lie in [3, 64]");
}

}  // namespace detail

/// Executable witness that a^(2^(alpha-2)) == 1 (mod 2^alpha) for odd a.
inline bool verify_carmichael_dyadic(u64 a, unsigned alpha) {
  detail::check_dyadic_width(alpha);
  if (a % 2 == 0) throw Error(Errc::bad_input, "root must be odd");
  const u64 mask = detail::low_mask(alpha);
  u64 x = a & mask;
  for (unsigned i = 0; i < alpha - 2; ++i) x = (x * x) & mask;
  return x == 1;
}

class DyadicPlan {
 public:
  enum class Status { validated, rejected };

  unsigned alpha() const noexcept { return alpha_; }
  unsigned beta() const noexcept { return beta_; }
  u64 length() const noexcept { return length_; }
  u64 root() const noexcept { return root_; }
  u64 mask() const noexcept { return detail::low_mask(alpha_); }
  Status status() const noexcept { return status_; }
  bool validated() const noexcept { return status_ == Status::validated; }

  /// Rejection witness: the reason, and for orthogonality failures the
  /// first k with a nonzero sum and that sum modulo 2^alpha.
  const std::string& reason() const noexcept { return reason_; }
  std::optional<u64> witness_k() const noexcept { return witness_k_; }
  std::optional<u64> witness_sum() const noexcept { return witness_sum_; }

  /// a^j truncated to alpha bits, j in [0, N).
  const std::vector<u64>& powers() const noexcept { return powers_; }

  /// Spare bits beyond beta + N.
  u64 headroom() const noexcept { return alpha_ - beta_ - length_; }

 private:
  friend DyadicPlan build_dyadic_plan(u64, unsigned, unsigned, u64);

  unsigned alpha_ = 0;
  unsigned beta_ = 0;
  u64 length_ = 0;
  u64 root_ = 0;
  Status status_ = Status::rejected;
  std::string reason_;
  std::optional<u64> witness_k_;
  std::optional<u64> witness_sum_;
  std::vector<u64> powers_;
};

/// Validated only if a has exact order N modulo 2^alpha and every
/// orthogonality sum sum_u a^(uk), k in [1, N), truncates to zero.
inline DyadicPlan build_dyadic_plan(u64 length, unsigned alpha, unsigned beta, u64 root) {
  detail::check_dyadic_width(alpha);
  if (root % 2 == 0) throw Error(Errc::bad_input, "root must be odd");
  if (length == 0) throw Error(Errc::invalid_length, "length must be positive");
  if (u128{alpha} < u128{beta} + length)
    throw Error(Errc::headroom_violation, "alpha " + std::to_string(alpha) + " < beta + N = " +
                                              std::to_string(beta) + " + " + std::to_string(length));

  DyadicPlan plan;
  plan.alpha_ = alpha;
  plan.beta_ = beta;
  plan.length_ = length;
  const u64 mask = plan.mask();
  plan.root_ = root & mask;

  // length <= alpha <= 64 here, so the table is tiny.
  plan.powers_.resize(length);
  u64 p = 1;
  for (u64 j = 0; j < length; ++j) {
    if (j != 0 && p == 1) {
      plan.reason_ = "order of root is " + std::to_string(j) + ", not " + std::to_string(length);
      return plan;
    }
    plan.powers_[j] = p;
    p = (p * plan.root_) & mask;
  }
  if (p != 1) {
    plan.reason_ = "root^" + std::to_string(length) + " != 1 modulo 2^" + std::to_string(alpha);
    return plan;
  }
  for (u64 k = 1; k < length; ++k) {
    u64 sum = 0;
    for (u64 u = 0; u < length; ++u) sum = (sum + plan.powers_[(u * k) % length]) & mask;
    if (sum != 0) {
      plan.reason_ = "orthogonality sum for k=" + std::to_string(k) + " is " + std::to_string(sum);
      plan.witness_k_ = k;
      plan.witness_sum_ = sum;
      return plan;
    }
  }
  plan.status_ = DyadicPlan::Status::validated;
  return plan;
}

namespace detail {

inline void require_validated(const DyadicPlan& plan) {
  if (!plan.validated()) throw Error(Errc::bad_input, "dyadic plan was rejected: " + plan.reason());
}

inline void check_dyadic_inputs(std::span<const u64> x, const DyadicPlan& plan) {
  if (x.size() != plan.length())
    throw Error(Errc::length_mismatch, "sequence length " + std::to_string(x.size()) +
                                           " != plan length " + std::to_string(plan.length()));
  const u64 limit = plan.beta() >= 64 ? ~u64{0} : (u64{1} << plan.beta()) - 1;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > limit)
      throw Error(Errc::input_out_of_range,
                  "value " + std::to_string(x[i]) + " does not fit " + std::to_string(plan.beta()) + " bits", i);
}

/// sum_t x(t) a^(+-ut), every product and sum truncated to alpha bits.
inline std::vector<u64> dyadic_sum(std::span<const u64> x, const DyadicPlan& plan, bool inverse) {
  const u64 n = plan.length();
  const u64 mask = plan.mask();
  const auto& pw = plan.powers();
  std::vector<u64> out(n);
  for (u64 u = 0; u < n; ++u) {
    u64 acc = 0;
    for (u64 t = 0; t < n; ++t) {
      const u64 e = (u * t) % n;
      acc = (acc + ((x[t] & mask) * pw[inverse ? (n - e) % n : e])) & mask;
    }
    out[u] = acc;
  }
  return out;
}

inline std::vector<u64> dyadic_normalize(std::vector<u64> values, const DyadicPlan& plan) {
  const auto shift = static_cast<unsigned>(std::countr_zero(plan.length()));
  const u64 low = (plan.length()) - 1;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if ((values[i] & low) != 0)
      throw Error(Errc::normalization_wrap,
                  "unnormalised value " + std::to_string(values[i]) + " at " + std::to_string(i) +
                      " is not divisible by N = " + std::to_string(plan.length()),
                  i);
    values[i] >>= shift;
  }
  return values;
}

}  // namespace detail

inline std::vector<u64> dyadic_forward(std::span<const u64> x, const DyadicPlan& plan) {
  detail::require_validated(plan);
  detail::check_dyadic_inputs(x, plan);
  return detail::dyadic_sum(x, plan, false);
}

/// Inverse sum with a^(-ut) = a^(N - ut mod N), then an exact shift by log2 N.
inline std::vector<u64> dyadic_inverse(std::span<const u64> spectrum, const DyadicPlan& plan) {
  detail::require_validated(plan);
  if (spectrum.size() != plan.length())
    throw Error(Errc::length_mismatch, "spectrum length differs from plan length");
  return detail::dyadic_normalize(detail::dyadic_sum(spectrum, plan, true), plan);
}

/// Cyclic convolution modulo 2^alpha. Requires N * h(j) < 2^alpha for the
/// largest possible coefficient h(j) = N (2^beta - 1)^2.
inline std::vector<u64> dyadic_convolve(std::span<const u64> f, std::span<const u64> g, const DyadicPlan& plan) {
  detail::require_validated(plan);
  detail::check_dyadic_inputs(f, plan);
  detail::check_dyadic_inputs(g, plan);
  // alpha >= beta + N and alpha <= 64 keep top^2 and N^2 well inside 128 bits.
  const u128 top = (u128{1} << plan.beta()) - 1;
  const u128 n2 = u128{plan.length()} * plan.length();
  if (top * top >= ((u128{1} << plan.alpha()) + n2 - 1) / n2)
    throw Error(Errc::headroom_violation, "N^2 (2^beta - 1)^2 does not fit in alpha = " +
                                              std::to_string(plan.alpha()) + " bits");
  const auto fs = detail::dyadic_sum(f, plan, false);
  const auto gs = detail::dyadic_sum(g, plan, false);
  std::vector<u64> prod(fs.size());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = (fs[i] * gs[i]) & plan.mask();
  return detail::dyadic_normalize(detail::dyadic_sum(prod, plan, true), plan);
}

}  // namespace fntt
