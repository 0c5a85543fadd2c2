#include "torvan/witt.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace torvan;

namespace {

// Independent Teichmueller oracle: the unique x in Z/p^2 with x = a (mod p)
// and x^p = x (mod p^2), found by search.
std::int64_t teichmuller_by_search(std::int64_t a, std::int64_t p) {
  const std::int64_t m = p * p;
  for (std::int64_t x = a % p; x < m; x += p) {
    std::int64_t pw = 1;
    for (std::int64_t i = 0; i < p; ++i) pw = pw * x % m;
    if (pw == x) return x;
  }
  ADD_FAILURE() << "no Teichmueller representative for " << a << " mod " << p;
  return -1;
}

std::int64_t oracle_encode(const WittElem& a) {
  const std::int64_t p = a.prime();
  return (teichmuller_by_search(a.a0(), p) + p * a.a1()) % (p * p);
}

std::vector<WittElem> all_elements(std::int64_t p) {
  std::vector<WittElem> out;
  for (std::int64_t a0 = 0; a0 < p; ++a0)
    for (std::int64_t a1 = 0; a1 < p; ++a1) out.emplace_back(p, a0, a1);
  return out;
}

}  // namespace

TEST(Witt, WorkedExamples) {
  EXPECT_EQ(witt_add(WittElem(2, 1, 0), WittElem(2, 1, 0)), WittElem(2, 0, 1));
  EXPECT_EQ(witt_add(WittElem(3, 2, 0), WittElem(3, 2, 0)), WittElem(3, 1, 2));
  EXPECT_EQ(witt_mul(WittElem(2, 1, 1), WittElem(2, 1, 1)), WittElem(2, 1, 0));
  EXPECT_EQ(witt_to_zp2(WittElem(2, 1, 1)), 3);
  EXPECT_EQ(witt_to_zp2(WittElem(3, 2, 0)), 8);
  EXPECT_EQ(witt_to_zp2(WittElem(7, 0, 0)), 0);
  EXPECT_EQ(witt_frobenius(WittElem(5, 3, 2)), WittElem(5, 3, 2));
  EXPECT_EQ(witt_frobenius(WittElem(2, 1, 1)), WittElem(2, 1, 1));
}

TEST(Witt, CanonicalRepresentativesAndIdentities) {
  WittElem a(5, 12, -3);
  EXPECT_EQ(a.a0(), 2);
  EXPECT_EQ(a.a1(), 2);
  for (std::int64_t p : {2, 3, 5, 7}) {
    for (const auto& x : all_elements(p)) {
      EXPECT_EQ(x + WittElem(p), x);
      EXPECT_EQ(x * WittElem::one(p), x);
      EXPECT_EQ(x * WittElem(p), WittElem(p));
      EXPECT_EQ(witt_frobenius(x), x);
    }
  }
}

TEST(Witt, MismatchedPrimesRejected) {
  EXPECT_THROW(witt_add(WittElem(2, 1, 0), WittElem(3, 1, 0)), InputError);
  EXPECT_THROW(witt_mul(WittElem(2, 1, 0), WittElem(3, 1, 0)), InputError);
  EXPECT_THROW(WittElem(4, 1, 0), InputError);
}

TEST(Witt, CarryDoesNotOverflowForLargePrimes) {
  // C(31, i) * 30^31 is far beyond 64 bits.
  const std::int64_t p = 31;
  WittElem a(p, 30, 7), b(p, 29, 3);
  EXPECT_EQ(witt_to_zp2(a + b), (oracle_encode(a) + oracle_encode(b)) % (p * p));
}

TEST(Witt, IsomorphismWithZp2Exhaustive) {
  for (std::int64_t p : {2, 3, 5}) {
    const std::int64_t m = p * p;
    for (std::int64_t x = 0; x < m; ++x) EXPECT_EQ(witt_to_zp2(witt_from_zp2(x, p)), x);
    for (const auto& a : all_elements(p)) {
      EXPECT_EQ(witt_to_zp2(a), oracle_encode(a));
      EXPECT_EQ(witt_from_zp2(witt_to_zp2(a), p), a);
      for (const auto& b : all_elements(p)) {
        EXPECT_EQ(witt_to_zp2(a + b), (oracle_encode(a) + oracle_encode(b)) % m);
        EXPECT_EQ(witt_to_zp2(a * b), oracle_encode(a) * oracle_encode(b) % m);
      }
    }
  }
}

TEST(Witt, RingAxiomsExhaustiveSmallPrimes) {
  for (std::int64_t p : {2, 3}) {
    const auto els = all_elements(p);
    for (const auto& a : els) {
      EXPECT_EQ(a + (-a), WittElem(p));
      for (const auto& b : els) {
        EXPECT_EQ(a + b, b + a);
        EXPECT_EQ(a * b, b * a);
        for (const auto& c : els) {
          EXPECT_EQ((a + b) + c, a + (b + c));
          EXPECT_EQ((a * b) * c, a * (b * c));
          EXPECT_EQ(a * (b + c), a * b + a * c);
        }
      }
    }
  }
}

TEST(Witt, RingAxiomsRandomLargerPrimes) {
  std::mt19937_64 rng(7);
  for (std::int64_t p : {5, 7}) {
    std::uniform_int_distribution<std::int64_t> d(0, p - 1);
    auto draw = [&] { return WittElem(p, d(rng), d(rng)); };
    for (int i = 0; i < 10000; ++i) {
      const auto a = draw(), b = draw(), c = draw();
      ASSERT_EQ((a + b) + c, a + (b + c));
      ASSERT_EQ((a * b) * c, a * (b * c));
      ASSERT_EQ(a * (b + c), a * b + a * c);
      ASSERT_EQ(a + b, b + a);
      ASSERT_EQ(a * b, b * a);
    }
  }
}

TEST(Witt, ReductionAndKernelStructure) {
  for (std::int64_t p : {2, 3, 5}) {
    const auto els = all_elements(p);
    for (const auto& a : els) {
      for (const auto& b : els) {
        EXPECT_EQ(witt_pr1(a + b), (witt_pr1(a) + witt_pr1(b)) % p);
        EXPECT_EQ(witt_pr1(a * b), witt_pr1(a) * witt_pr1(b) % p);
        EXPECT_EQ(witt_frobenius(a + b), witt_frobenius(a) + witt_frobenius(b));
        EXPECT_EQ(witt_frobenius(a * b), witt_frobenius(a) * witt_frobenius(b));
      }
      // pr1 o F equals the p-power map on F_p.
      std::int64_t pw = 1;
      for (std::int64_t i = 0; i < p; ++i) pw = pw * a.a0() % p;
      EXPECT_EQ(witt_pr1(witt_frobenius(a)), pw);
    }
    for (std::int64_t x = 0; x < p; ++x) {
      for (std::int64_t y = 0; y < p; ++y)
        EXPECT_EQ(WittElem::from_kernel(p, x) + WittElem::from_kernel(p, y), WittElem::from_kernel(p, x + y));
      for (const auto& b : els) {
        std::int64_t bp = 1;
        for (std::int64_t i = 0; i < p; ++i) bp = bp * b.a0() % p;
        EXPECT_EQ(WittElem::from_kernel(p, x) * b, WittElem::from_kernel(p, x * bp));
      }
    }
    // Kernel of pr1 is exactly the image of x |-> (0, x).
    for (const auto& a : els)
      if (witt_pr1(a) == 0) { EXPECT_EQ(a, WittElem::from_kernel(p, a.a1())); }
  }
}
