#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fntt/transform.hpp"
#include "oracles.hpp"

namespace fntt {
namespace {

ResidueSequence seq(std::vector<u64> v, u64 m) { return ResidueSequence(std::move(v), m); }

ResidueSequence random_sequence(std::mt19937_64& rng, u64 n, u64 m) {
  std::vector<u64> v(n);
  for (auto& x : v) x = rng() % m;
  return ResidueSequence(std::move(v), m);
}

const RaderModulus& m641() {
  static const auto m = *RaderRegistry::builtin().find(641);
  return m;
}

TEST(BuildPlan, PublishedLengths) {
  const TransformPlan plan(64, m641());
  EXPECT_EQ(plan.root_exponent_step(), 1u);
  EXPECT_EQ(plan.twiddles()[1], 2u);
  try {
    TransformPlan(128, m641());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::invalid_length);
  }
  EXPECT_THROW(TransformPlan(3, m641()), Error);
  EXPECT_THROW(TransformPlan(0, m641()), Error);
}

TEST(BuildPlan, SmallFermatPrime) {
  const TransformPlan plan(4, make_modulus(5));
  EXPECT_EQ(plan.twiddles(), (std::vector<u64>{1, 2, 4, 3}));
  EXPECT_EQ(plan.inverse_twiddles(), (std::vector<u64>{1, 3, 4, 2}));
  EXPECT_EQ(plan.n_inverse(), 4u);
}

TEST(BuildPlan, Invariants) {
  for (const auto& m : RaderRegistry::builtin().entries()) {
    for (u64 n = 1; n <= std::min<u64>(m.n_max, 4096); n *= 2) {
      const TransformPlan plan(n, m);
      SCOPED_TRACE(std::to_string(m.prime) + " N=" + std::to_string(n));
      ASSERT_EQ(plan.twiddles()[0], 1u);
      ASSERT_EQ(std::set<u64>(plan.twiddles().begin(), plan.twiddles().end()).size(), n);
      ASSERT_EQ(mul_mod(n, plan.n_inverse(), m.prime), 1u);
      for (u64 j = 0; j < n; ++j) ASSERT_EQ(mul_mod(plan.twiddles()[j], plan.inverse_twiddles()[j], m.prime), 1u);
      // Orthogonality: sum_u w^(uk) is N for k = 0 and 0 otherwise.
      if (n <= 256) {
        for (u64 k = 0; k < n; ++k) {
          u64 s = 0;
          for (u64 u = 0; u < n; ++u) s = (s + plan.twiddles()[(u * k) % n]) % m.prime;
          ASSERT_EQ(s, k == 0 ? n % m.prime : 0u) << "k=" << k;
        }
      }
    }
  }
}

TEST(DirectTransform, DeltaAndOnesOverSeven) {
  const TransformPlan plan(3, make_modulus(7));
  EXPECT_EQ(forward_direct(seq({1, 0, 0}, 7), plan), seq({1, 1, 1}, 7));
  EXPECT_EQ(forward_direct(seq({1, 1, 1}, 7), plan), seq({3, 0, 0}, 7));
  EXPECT_EQ(inverse_direct(seq({1, 1, 1}, 7), plan), seq({1, 0, 0}, 7));
  EXPECT_EQ(inverse_direct(seq({3, 0, 0}, 7), plan), seq({1, 1, 1}, 7));
}

TEST(DirectTransform, LengthFourOverFive) {
  const TransformPlan plan(4, make_modulus(5));
  EXPECT_EQ(forward_direct(seq({1, 2, 3, 4}, 5), plan), seq({0, 4, 3, 2}, 5));
  EXPECT_EQ(inverse_direct(seq({0, 4, 3, 2}, 5), plan), seq({1, 2, 3, 4}, 5));
  EXPECT_EQ(forward_fast(seq({1, 2, 3, 4}, 5), plan), seq({0, 4, 3, 2}, 5));
}

TEST(DirectTransform, OperandErrors) {
  const TransformPlan plan(4, make_modulus(5));
  try {
    forward_direct(seq({1, 2, 3}, 5), plan);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::length_mismatch);
  }
  try {
    forward_fast(seq({1, 2, 3, 4}, 7), plan);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::modulus_mismatch);
  }
  EXPECT_THROW(seq({5}, 5), Error);
}

TEST(DirectTransform, MatchesFreshPowerOracle) {
  std::mt19937_64 rng(17);
  for (u64 n : {1u, 2u, 8u, 32u, 64u}) {
    const TransformPlan plan(n, m641());
    const auto x = random_sequence(rng, n, 641);
    const u64 root = oracle::iterated_pow(2, 64 / n, 641);
    EXPECT_EQ(forward_direct(x, plan).values(), oracle::dft(x.values(), root, 641)) << n;
  }
}

TEST(FastTransform, LengthOneIsIdentity) {
  const TransformPlan plan(1, m641());
  EXPECT_EQ(forward_fast(seq({123}, 641), plan), seq({123}, 641));
  EXPECT_EQ(inverse_fast(seq({123}, 641), plan), seq({123}, 641));
}

TEST(FastTransform, NonPowerOfTwoFallsBackToDirect) {
  const TransformPlan plan(3, make_modulus(7));
  EXPECT_EQ(forward_fast(seq({1, 1, 1}, 7), plan), seq({3, 0, 0}, 7));
  EXPECT_EQ(inverse_fast(seq({3, 0, 0}, 7), plan), seq({1, 1, 1}, 7));
}

TEST(FastTransform, EquivalentToDirectAcrossRegistry) {
  std::mt19937_64 rng(23);
  for (const auto& m : RaderRegistry::builtin().entries()) {
    for (u64 n = 2; n <= std::min<u64>(m.n_max, 1024); n *= 2) {
      const TransformPlan plan(n, m);
      for (int rep = 0; rep < 3; ++rep) {
        const auto x = random_sequence(rng, n, m.prime);
        const auto X = forward_fast(x, plan);
        ASSERT_EQ(X, forward_direct(x, plan)) << m.prime << " N=" << n;
        ASSERT_EQ(inverse_fast(X, plan), inverse_direct(X, plan));
        ASSERT_EQ(inverse_fast(X, plan), x);
      }
    }
  }
}

TEST(FastTransform, DoesNotMutateInput) {
  std::mt19937_64 rng(1);
  const TransformPlan plan(64, m641());
  const auto x = random_sequence(rng, 64, 641);
  const auto copy = x;
  (void)forward_fast(x, plan);
  EXPECT_EQ(x, copy);
}

TEST(Transform, Linearity) {
  std::mt19937_64 rng(29);
  const auto m = *RaderRegistry::builtin().find(2424833);
  const TransformPlan plan(1024, m);
  for (int rep = 0; rep < 5; ++rep) {
    const auto x = random_sequence(rng, 1024, m.prime);
    const auto y = random_sequence(rng, 1024, m.prime);
    const u64 a = rng() % m.prime, b = rng() % m.prime;
    std::vector<u64> combo(1024);
    for (std::size_t i = 0; i < combo.size(); ++i)
      combo[i] = (mul_mod(a, x[i], m.prime) + mul_mod(b, y[i], m.prime)) % m.prime;
    const auto lhs = forward_fast(ResidueSequence(combo, m.prime), plan);
    const auto fx = forward_fast(x, plan), fy = forward_fast(y, plan);
    for (std::size_t i = 0; i < combo.size(); ++i)
      ASSERT_EQ(lhs[i], (mul_mod(a, fx[i], m.prime) + mul_mod(b, fy[i], m.prime)) % m.prime);
  }
}

TEST(ShiftMul, Examples) {
  EXPECT_EQ(shift_mul(3, 1, 7), 6u);
  EXPECT_EQ(shift_mul(5, 3, 7), 5u);
  for (u64 x = 0; x < 641; ++x) ASSERT_EQ(shift_mul(x, 64, 641), x);
}

TEST(ShiftMul, EqualsMultiplyKernelExhaustively) {
  // Every x < m and every shift within one full turn, for moduli below 2^16.
  for (u64 m : {5ull, 17ull, 257ull, 641ull}) {
    const u64 n_max = multiplicative_order(2, m);
    for (u64 a = 0; a <= n_max; ++a) {
      const u64 p = mod_pow(2, a, m).value();
      for (u64 x = 0; x < m; ++x) ASSERT_EQ(shift_mul(x, a, m), mul_mod(x, p, m)) << x << "<<" << a << " mod " << m;
    }
  }
}

TEST(ShiftMul, RandomLargeModuli) {
  std::mt19937_64 rng(31);
  for (const auto& m : RaderRegistry::builtin().entries()) {
    for (int i = 0; i < 200; ++i) {
      const u64 x = rng() % m.prime, a = rng() % 2048;
      ASSERT_EQ(shift_mul(x, a, m.prime), mul_mod(x, mod_pow(2, a, m.prime).value(), m.prime));
    }
  }
}

TEST(ShiftKernel, BitIdenticalToMultiplyKernel) {
  std::mt19937_64 rng(37);
  const RaderModulus moduli[] = {make_modulus(5), make_modulus(17), make_modulus(257), m641(),
                                 *RaderRegistry::builtin().find(2424833)};
  for (const auto& m : moduli) {
    for (u64 n = 1; n <= std::min<u64>(m.n_max, 256); n *= 2) {
      const TransformPlan mul(n, m, Kernel::multiply), shift(n, m, Kernel::shift);
      const auto x = random_sequence(rng, n, m.prime);
      SCOPED_TRACE(std::to_string(m.prime) + " N=" + std::to_string(n));
      ASSERT_EQ(forward_fast(x, shift), forward_fast(x, mul));
      ASSERT_EQ(inverse_fast(x, shift), inverse_fast(x, mul));
      if (n <= 64) {
        ASSERT_EQ(forward_direct(x, shift), forward_direct(x, mul));
        ASSERT_EQ(inverse_direct(x, shift), inverse_direct(x, mul));
      }
    }
  }
  // Non-power-of-two length normalises by multiplication.
  const TransformPlan shift7(3, make_modulus(7), Kernel::shift);
  EXPECT_EQ(inverse_direct(seq({3, 0, 0}, 7), shift7), seq({1, 1, 1}, 7));
}

TEST(ShiftKernel, HalfTurnNegation) {
  const TransformPlan plan(64, m641(), Kernel::shift);
  for (u64 x = 0; x < 641; ++x) ASSERT_EQ(plan.shift_by(x, 32), x == 0 ? 0 : 641 - x);
  for (u64 e = 0; e < 200; ++e) ASSERT_EQ(plan.shift_by(7, e), mul_mod(7, mod_pow(2, e, 641).value(), 641));
}

}  // namespace
}  // namespace fntt
