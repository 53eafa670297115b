#include <gtest/gtest.h>

#include <random>

#include "fntt/convolution.hpp"
#include "oracles.hpp"

namespace fntt {
namespace {

const RaderRegistry& reg() { return RaderRegistry::builtin(); }
RaderModulus prime(u64 p) { return *reg().find(p); }

IntegerSequence random_ints(std::mt19937_64& rng, std::size_t n, i64 lo, i64 hi) {
  std::uniform_int_distribution<i64> dist(lo, hi);
  std::vector<i64> v(n);
  for (auto& x : v) x = dist(rng);
  return IntegerSequence(std::move(v));
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::bad_input;  // sentinel: nothing thrown
}

TEST(ConvolveDirect, Examples) {
  EXPECT_EQ(convolve_direct({1, 1, 0}, {1, 0, 1}), (IntegerSequence{2, 1, 1}));
  EXPECT_EQ(convolve_direct({1, 1}, {1, -1}), (IntegerSequence{0, 0}));
  EXPECT_EQ(code_of([] { convolve_direct({1, 2}, {1}); }), Errc::length_mismatch);
}

TEST(ConvolveNtt, SmallExamples) {
  EXPECT_EQ(convolve_ntt({1, 1, 0}, {1, 0, 1}, make_modulus(7)), (IntegerSequence{2, 1, 1}));
  EXPECT_EQ(convolve_ntt({1, 1}, {1, -1}, prime(641)), (IntegerSequence{0, 0}));
  EXPECT_EQ(convolve_ntt({3, -2, 0, 5}, {1, 0, 0, 0}, prime(641)), (IntegerSequence{3, -2, 0, 5}));
  // Length 3 is not admitted by 641 (order 64).
  EXPECT_EQ(code_of([] { convolve_ntt({1, 1, 0}, {1, 0, 1}, prime(641)); }), Errc::invalid_length);
}

TEST(ConvolveNtt, BoundIsEnforced) {
  // 4 * 20 * 20 = 1600 >= 641.
  const IntegerSequence big{20, 20, 20, 20};
  EXPECT_EQ(code_of([&] { convolve_ntt(big, big, prime(641)); }), Errc::bound_exceeded);
  // Unsigned: 2 * 17 * 18 = 612 < 641 recovers; signed needs 2C < 641.
  const IntegerSequence a{17, 0}, b{18, 0};
  EXPECT_EQ(convolve_ntt(a, b, prime(641)), (IntegerSequence{306, 0}));
  const IntegerSequence c{-17, 0};
  EXPECT_EQ(code_of([&] { convolve_ntt(c, b, prime(641)); }), Errc::bound_exceeded);
  // Declared bounds count even when the observed values are small.
  const IntegerSequence declared(std::vector<i64>{1, 0}, 400);
  EXPECT_EQ(code_of([&] { convolve_ntt(declared, declared, prime(641)); }), Errc::bound_exceeded);
}

TEST(ConvolveNtt, SignedLiftAtEdge) {
  // C = 2 * 10 * 16 = 320, 2C = 640 < 641.
  const IntegerSequence f{-10, 10}, g{16, 16};
  EXPECT_EQ(convolve_ntt(f, g, prime(641)), convolve_direct(f, g));
}

TEST(ConvolveNtt, RandomAgainstDirect) {
  std::mt19937_64 rng(41);
  for (int rep = 0; rep < 30; ++rep) {
    const auto f = random_ints(rng, 64, -300, 300);
    const auto g = random_ints(rng, 64, -300, 300);
    ASSERT_EQ(convolve_ntt(f, g, prime(13631489)), convolve_direct(f, g));
    ASSERT_EQ(convolve_ntt(f, g, prime(13631489), Kernel::shift), convolve_direct(f, g));
  }
  for (int rep = 0; rep < 30; ++rep) {
    const auto f = random_ints(rng, 64, 0, 15);
    const auto g = random_ints(rng, 64, 0, 15);
    ASSERT_EQ(convolve_ntt(f, g, prime(13631489)), convolve_direct(f, g));
  }
  for (int rep = 0; rep < 10; ++rep) {
    const auto f = random_ints(rng, 1024, 0, 40);
    const auto g = random_ints(rng, 1024, 0, 40);
    ASSERT_EQ(convolve_ntt(f, g, prime(2424833)), convolve_direct(f, g));
  }
}

TEST(ConvolveNtt, DeltaIsIdentity) {
  std::mt19937_64 rng(43);
  for (const auto& m : reg().entries()) {
    const u64 n = std::min<u64>(m.n_max, 256);
    auto f = random_ints(rng, n, -5, 5);
    std::vector<i64> delta(n, 0);
    delta[0] = 1;
    EXPECT_EQ(convolve_ntt(f, IntegerSequence(delta), m), f) << m.prime;
  }
}

TEST(ConvolveNtt, CommutativeAndBilinear) {
  std::mt19937_64 rng(47);
  const auto m = prime(13631489);
  for (int rep = 0; rep < 10; ++rep) {
    const auto f = random_ints(rng, 128, -50, 50);
    const auto g = random_ints(rng, 128, -50, 50);
    const auto h = random_ints(rng, 128, -50, 50);
    ASSERT_EQ(convolve_ntt(f, g, m), convolve_ntt(g, f, m));
    std::vector<i64> gh(128);
    for (std::size_t i = 0; i < gh.size(); ++i) gh[i] = g[i] + h[i];
    const auto lhs = convolve_ntt(f, IntegerSequence(gh), m);
    const auto a = convolve_ntt(f, g, m), b = convolve_ntt(f, h, m);
    for (std::size_t i = 0; i < gh.size(); ++i) ASSERT_EQ(lhs[i], a[i] + b[i]);
  }
}

TEST(ConvolveCrt, TwoPrimesLargeEntries) {
  std::mt19937_64 rng(53);
  const auto f = random_ints(rng, 1024, 0, 1'000'000);
  const auto g = random_ints(rng, 1024, 0, 1'000'000);
  // N * 10^12 ~ 10^15 exceeds every single prime.
  EXPECT_EQ(code_of([&] { convolve_ntt(f, g, prime(13631489)); }), Errc::bound_exceeded);
  // 2424833 * 13631489 ~ 3.3e13 is below the 1.02e15 bound, so the pair refuses.
  EXPECT_EQ(code_of([&] { convolve_crt(f, g, {prime(2424833), prime(13631489)}); }), Errc::bound_exceeded);
  // The same pair is exact once the entries shrink to 10^5 (bound 1.02e13).
  const auto f5 = random_ints(rng, 1024, 0, 100'000);
  const auto g5 = random_ints(rng, 1024, 0, 100'000);
  EXPECT_EQ(convolve_crt(f5, g5, {prime(2424833), prime(13631489)}), convolve_direct(f5, g5));
}

TEST(ConvolveCrt, MatchesDirect) {
  std::mt19937_64 rng(59);
  const std::vector<RaderModulus> three{prime(2424833), prime(13631489), prime(319489)};
  const auto f = random_ints(rng, 1024, 0, 1'000'000);
  const auto g = random_ints(rng, 1024, 0, 1'000'000);
  EXPECT_EQ(convolve_crt(f, g, three), convolve_direct(f, g));
  const auto fs = random_ints(rng, 1024, -1'000'000, 1'000'000);
  const auto gs = random_ints(rng, 1024, -1'000'000, 1'000'000);
  EXPECT_EQ(convolve_crt(fs, gs, three), convolve_direct(fs, gs));
  // A single prime through the CRT path agrees with convolve_ntt.
  const auto small = random_ints(rng, 64, -2, 2);
  EXPECT_EQ(convolve_crt(small, small, {prime(641)}), convolve_ntt(small, small, prime(641)));
}

TEST(ConvolveCrt, Errors) {
  const IntegerSequence f{1, 2}, g{3, 4};
  EXPECT_EQ(code_of([&] { convolve_crt(f, g, std::span<const RaderModulus>{}); }), Errc::bad_input);
  EXPECT_EQ(code_of([&] { convolve_crt(f, g, {prime(641), prime(641)}); }), Errc::moduli_not_coprime);
  std::mt19937_64 rng(61);
  const auto a = random_ints(rng, 1024, 0, 1'000'000);
  EXPECT_EQ(code_of([&] { convolve_crt(a, a, {prime(2424833), prime(13631489)}); }), Errc::bound_exceeded);
}

TEST(ChooseModuli, SmallestSingleOrLargestFirst) {
  auto single = choose_moduli(reg(), 64, 600, false);
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0].prime, 641u);
  single = choose_moduli(reg(), 64, 320, true);
  EXPECT_EQ(single[0].prime, 641u);
  single = choose_moduli(reg(), 64, 321, true);
  EXPECT_EQ(single[0].prime, 319489u);

  const auto multi = choose_moduli(reg(), 1024, coefficient_bound(1024, 1'000'000, 1'000'000), false);
  ASSERT_EQ(multi.size(), 3u);
  EXPECT_EQ(multi[0].prime, 13631489u);
  EXPECT_EQ(multi[1].prime, 2424833u);
  EXPECT_EQ(multi[2].prime, 319489u);

  EXPECT_EQ(code_of([] { choose_moduli(reg(), 3, 1, false); }), Errc::invalid_length);
  EXPECT_EQ(code_of([] { choose_moduli(reg(), 1u << 19, u128{1} << 100, false); }), Errc::bound_exceeded);
}

TEST(Deconvolve, RoundTrip) {
  std::mt19937_64 rng(67);
  const auto m = prime(13631489);
  for (int rep = 0; rep < 20; ++rep) {
    const auto f = random_ints(rng, 64, 0, 100);
    const auto g = random_ints(rng, 64, 0, 100);
    const auto h = convolve_ntt(f, g, m);
    // A random filter is almost surely invertible; a vanishing bin is still a valid outcome.
    try {
      EXPECT_EQ(deconvolve(h, g, m), f);
    } catch (const Error& e) {
      ASSERT_EQ(e.code(), Errc::not_invertible);
    }
  }
  const IntegerSequence f{-3, 4, 0, -1}, g{2, 1, 0, 0};
  EXPECT_EQ(deconvolve(convolve_ntt(f, g, prime(641)), g, prime(641), Lift::symmetric), f);
}

TEST(Deconvolve, VanishingSpectrum) {
  // The all-ones filter has spectrum (N, 0, ..., 0).
  try {
    deconvolve({1, 2, 3, 4}, {1, 1, 1, 1}, prime(641));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::not_invertible);
    EXPECT_EQ(e.index(), 1u);
  }
}

TEST(BigInt, Examples) {
  EXPECT_EQ(multiply_decimal("12", "34"), "408");
  EXPECT_EQ(multiply_decimal("0", "999"), "0");
  EXPECT_EQ(multiply_decimal("-12", "34"), "-408");
  EXPECT_EQ(multiply_decimal("-12", "-34"), "408");
  const BigDigits a({2, 1}, 10), b({4, 3}, 10);
  const auto c = bigint_multiply(a, b, {prime(641)});
  EXPECT_EQ(c, BigDigits({8, 0, 4}, 10));
  EXPECT_EQ(c.to_decimal(), "408");
  EXPECT_EQ(code_of([] { BigDigits::from_decimal("12a"); }), Errc::parse_error);
  EXPECT_EQ(code_of([] { BigDigits::from_decimal(""); }), Errc::parse_error);
}

TEST(BigInt, DecimalConversionRoundTrip) {
  std::mt19937_64 rng(71);
  for (u64 base : {2ull, 10ull, 256ull, 65536ull, 1ull << 32}) {
    for (int rep = 0; rep < 20; ++rep) {
      const auto s = oracle::random_decimal(rng, 1 + rng() % 200);
      ASSERT_EQ(BigDigits::from_decimal(s, base).to_decimal(), s) << base;
    }
  }
  EXPECT_EQ(BigDigits::from_decimal("000123").to_decimal(), "123");
  EXPECT_EQ(BigDigits::from_decimal("-0").to_decimal(), "0");
}

TEST(BigInt, RandomAgainstSchoolbook) {
  std::mt19937_64 rng(73);
  for (int rep = 0; rep < 60; ++rep) {
    const auto a = oracle::random_decimal(rng, 1 + rng() % 600);
    const auto b = oracle::random_decimal(rng, 1 + rng() % 600);
    ASSERT_EQ(multiply_decimal(a, b), oracle::schoolbook(a, b)) << a << " * " << b;
  }
}

TEST(BigInt, AlgebraicProperties) {
  std::mt19937_64 rng(79);
  for (int rep = 0; rep < 20; ++rep) {
    const auto a = oracle::random_decimal(rng, 1 + rng() % 300);
    const auto b = oracle::random_decimal(rng, 1 + rng() % 300);
    ASSERT_EQ(multiply_decimal(a, b), multiply_decimal(b, a));
    ASSERT_EQ(multiply_decimal(a, "1"), a);
  }
}

TEST(BigInt, FallsBackToNarrowerDigits) {
  // A registry with only 641 cannot take base-256 digits; base 2 with N = 2
  // gives C = 2 < 641.
  const auto tiny = RaderRegistry::parse("641 5 64");
  EXPECT_EQ(multiply_decimal("3", "3", tiny), "9");
  EXPECT_EQ(multiply_decimal("12", "34", tiny), "408");
  EXPECT_THROW(bigint_multiply(BigDigits::from_decimal("12"), BigDigits::from_decimal("34"), tiny), Error);
}

TEST(BigInt, ProductLength) {
  EXPECT_EQ(product_length(1, 1), 2u);
  EXPECT_EQ(product_length(2, 2), 4u);
  EXPECT_EQ(product_length(3, 2), 8u);
}

}  // namespace
}  // namespace fntt
