#include "torvan/divisors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numeric>
#include <random>

using namespace torvan;

namespace {

TQDivisor q_divisor(const FanPtr& f, std::vector<std::string> coeffs) {
  std::vector<Rational> q;
  for (const auto& c : coeffs) q.push_back(parse_rational(c));
  return TQDivisor(f, std::move(q));
}

// Brute-force h^0: lattice points of P_{floor D} inside a generous box.
std::int64_t h0_by_box(const TQDivisor& d, std::int64_t radius) {
  const std::size_t n = d.fan().rank();
  const auto poly = polytope_PD(round_down(d));
  std::int64_t count = 0;
  LatticeVec u = LatticeVec::zero(n);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n) {
      count += poly.contains(u) ? 1 : 0;
      return;
    }
    for (std::int64_t x = -radius; x <= radius; ++x) {
      u[i] = x;
      rec(i + 1);
    }
  };
  rec(0);
  return count;
}

// Toric Kleiman criterion on a smooth complete surface: with rays in cyclic
// order, v_{i-1} + v_{i+1} = b_i v_i, D_i.D_{i+-1} = 1 and D_i^2 = -b_i.
bool ample_by_intersections(const Fan& f, const std::vector<std::int64_t>& a) {
  const std::size_t n = f.num_rays();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto i, auto j) {
    return std::atan2(double(f.ray(i)[1]), double(f.ray(i)[0])) < std::atan2(double(f.ray(j)[1]), double(f.ray(j)[0]));
  });
  for (std::size_t k = 0; k < n; ++k) {
    const auto prev = order[(k + n - 1) % n], cur = order[k], next = order[(k + 1) % n];
    const LatticeVec s = f.ray(prev) + f.ray(next);
    const std::int64_t b = f.ray(cur)[0] != 0 ? s[0] / f.ray(cur)[0] : s[1] / f.ray(cur)[1];
    EXPECT_EQ(s, b * f.ray(cur));
    if (a[prev] + a[next] - b * a[cur] <= 0) return false;
  }
  return true;
}

}  // namespace

TEST(Divisors, RoundingAndFractionalPart) {
  const auto p2 = share(projective_space(2));
  const auto d = q_divisor(p2, {"1/2", "-1/3", "2"});
  EXPECT_EQ(round_up(d), q_divisor(p2, {"1", "0", "2"}));
  EXPECT_EQ(round_down(d), q_divisor(p2, {"0", "-1", "2"}));
  EXPECT_EQ(frac(d), q_divisor(p2, {"1/2", "2/3", "0"}));
  EXPECT_EQ(round_down(d) + frac(d), d);
  EXPECT_THROW(TQDivisor(p2, {Rational(1)}), InputError);
}

TEST(Divisors, FrobeniusTwistRange) {
  std::mt19937_64 rng(11);
  const auto f = share(hirzebruch(2));
  for (std::int64_t p : {2, 3, 5, 7}) {
    for (int t = 0; t < 200; ++t) {
      std::vector<Rational> c;
      for (std::size_t i = 0; i < f->num_rays(); ++i) c.emplace_back(draw(rng, -20, 20), draw(rng, 1, 9));
      const TQDivisor h(f, c);
      const auto g = frobenius_twist(h, p);
      ASSERT_TRUE(g.integral());
      for (const auto& x : g.coeffs()) {
        ASSERT_GE(x, 0);
        ASSERT_LT(x, p);
      }
      if (h.integral()) {
        for (const auto& x : g.coeffs()) ASSERT_EQ(x, 0);
      }
    }
  }
}

TEST(Divisors, LinearShiftIsPrincipal) {
  const auto p2 = share(projective_space(2));
  const auto d = linear_shift(TQDivisor::zero(p2), LatticeVec{2, -1});
  EXPECT_EQ(d, TQDivisor::from_integers(p2, {2, -1, -1}));
  const auto cd = cartier_data(d);
  ASSERT_TRUE(cd.cartier());
  for (const auto& u : cd.data->u) EXPECT_EQ(u, (LatticeVec{-2, 1}));
}

TEST(Divisors, CartierOnWeightedProjectivePlane) {
  const auto w = share(weighted_projective({1, 1, 2}));
  ASSERT_EQ(w->ray(2), (LatticeVec{-1, -2}));
  const auto d3 = TQDivisor::from_integers(w, {0, 0, 1});
  const auto r = cartier_data(d3);
  ASSERT_FALSE(r.cartier());
  ASSERT_TRUE(r.obstruction->witness.has_value());
  const auto& u = *r.obstruction->witness;
  // On the singular cone {(1,0), (-1,-2)} the local equation is u = (0, 1/2).
  EXPECT_EQ(u, (std::vector<Rational>{Rational(0), Rational(1, 2)}));
  EXPECT_TRUE(cartier_data(TQDivisor::from_integers(w, {0, 0, 2})).cartier());
  EXPECT_TRUE(cartier_data(TQDivisor::from_integers(w, {1, 0, 0})).cartier() == false);
  EXPECT_TRUE(cartier_data(TQDivisor::from_integers(w, {2, 0, 0})).cartier());
  // Q-Cartier though not Cartier: ampleness still decided, with m = 2.
  const auto rep = ampleness(d3);
  EXPECT_TRUE(rep.ample);
  EXPECT_EQ(rep.clearing_multiple, 2);
  EXPECT_THROW(cartier_data(q_divisor(w, {"1/2", "0", "0"})), InputError);
}

TEST(Divisors, CartierDataAgreesOnSharedRays) {
  std::mt19937_64 rng(5);
  for (const auto& nf : standard_catalog()) {
    const auto f = share(nf.fan);
    for (int t = 0; t < 30; ++t) {
      std::vector<std::int64_t> c;
      for (std::size_t i = 0; i < f->num_rays(); ++i) c.push_back(draw(rng, -4, 4));
      const auto d = TQDivisor::from_integers(f, c);
      const auto r = cartier_data(d);
      if (is_smooth(*f)) { ASSERT_TRUE(r.cartier()) << nf.name; }
      if (!r.cartier()) continue;
      for (std::size_t k = 0; k < f->max_cones().size(); ++k)
        for (auto ray : f->max_cones()[k]) ASSERT_EQ(pairing(r.data->u[k], f->ray(ray)), -c[ray]);
    }
  }
}

TEST(Divisors, AmplenessExamples) {
  const auto p2 = share(projective_space(2));
  EXPECT_TRUE(is_ample(-canonical_divisor(p2)));
  EXPECT_FALSE(is_ample(TQDivisor::zero(p2)));
  EXPECT_TRUE(is_nef(TQDivisor::zero(p2)));
  EXPECT_FALSE(is_ample(canonical_divisor(p2)));
  EXPECT_TRUE(is_ample(q_divisor(p2, {"1/3", "0", "0"})));

  // The (-1)-curve on F1 is effective but not ample, not even nef.
  const auto f1 = share(hirzebruch(1));
  bool found = false;
  for (std::size_t i = 0; i < f1->num_rays(); ++i) {
    std::vector<std::int64_t> c(f1->num_rays(), 0);
    c[i] = 1;
    const auto d = TQDivisor::from_integers(f1, c);
    EXPECT_FALSE(is_ample(d));
    if (!is_nef(d)) found = true;
  }
  EXPECT_TRUE(found);
  EXPECT_TRUE(is_ample(-canonical_divisor(f1)));
  EXPECT_FALSE(is_ample(-canonical_divisor(share(hirzebruch(2)))));
  EXPECT_TRUE(is_nef(-canonical_divisor(share(hirzebruch(2)))));
}

TEST(Divisors, AmplenessMatchesKleimanOnSmoothSurfaces) {
  std::mt19937_64 rng(2024);
  for (const auto& nf : standard_catalog()) {
    if (nf.fan.rank() != 2 || !is_smooth(nf.fan)) continue;
    const auto f = share(nf.fan);
    int ample = 0;
    for (int t = 0; t < 300; ++t) {
      std::vector<std::int64_t> c;
      for (std::size_t i = 0; i < f->num_rays(); ++i) c.push_back(draw(rng, -3, 4));
      const bool expected = ample_by_intersections(*f, c);
      ASSERT_EQ(is_ample(TQDivisor::from_integers(f, c)), expected) << nf.name;
      ample += expected;
    }
    EXPECT_GT(ample, 0) << nf.name;
  }
}

TEST(Divisors, AmplenessInvariantUnderLinearShift) {
  std::mt19937_64 rng(8);
  for (const auto& nf : standard_catalog()) {
    const auto f = share(nf.fan);
    for (int t = 0; t < 20; ++t) {
      std::vector<std::int64_t> c;
      for (std::size_t i = 0; i < f->num_rays(); ++i) c.push_back(draw(rng, -2, 3));
      const auto d = TQDivisor::from_integers(f, c);
      LatticeVec u = LatticeVec::zero(f->rank());
      for (std::size_t i = 0; i < f->rank(); ++i) u[i] = draw(rng, -3, 3);
      if (!cartier_data(d).cartier()) {
        EXPECT_NO_THROW(ampleness(d));
        continue;
      }
      EXPECT_EQ(is_ample(d), is_ample(linear_shift(d, u))) << nf.name;
      EXPECT_EQ(h0_count(d), h0_count(linear_shift(d, u))) << nf.name;
    }
  }
}

TEST(Divisors, NotQCartierRejected) {
  // Non-simplicial cone over a square: a single ray divisor is not Q-Cartier.
  const auto sq = share(Fan(3, {{1, 0, 1}, {0, 1, 1}, {-1, 0, 1}, {0, -1, 1}, {0, 0, -1}},
                            {{0, 1, 2, 3}, {0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {0, 3, 4}}));
  EXPECT_THROW(is_ample(TQDivisor::from_integers(sq, {1, 0, 0, 0, 0})), InputError);
  const auto r = cartier_data(TQDivisor::from_integers(sq, {1, 0, 0, 0, 0}));
  ASSERT_FALSE(r.cartier());
  EXPECT_EQ(r.obstruction->cone, 0u);
  EXPECT_FALSE(r.obstruction->witness.has_value());
  EXPECT_TRUE(is_ample(TQDivisor::from_integers(sq, {1, 1, 1, 1, 1})));
}

TEST(Divisors, GlobalSectionCounts) {
  const auto p2 = share(projective_space(2));
  for (std::int64_t d = 0; d <= 10; ++d)
    EXPECT_EQ(h0_lattice(TQDivisor::from_integers(p2, {d, 0, 0})).count, (d + 1) * (d + 2) / 2);
  EXPECT_EQ(h0_count(TQDivisor::from_integers(p2, {-1, 0, 0})), 0);
  const auto p1p1 = share(product(projective_space(1), projective_space(1)));
  // Ray order is (1,0), (-1,0), (0,1), (0,-1).
  EXPECT_EQ(h0_count(TQDivisor::from_integers(p1p1, {2, 0, 3, 0})), 12);
  const auto p3 = share(projective_space(3));
  for (std::int64_t d = 0; d <= 5; ++d)
    EXPECT_EQ(h0_count(TQDivisor::from_integers(p3, {0, 0, 0, d})), (d + 1) * (d + 2) * (d + 3) / 6);
  EXPECT_EQ(h0_count(q_divisor(p2, {"5/2", "0", "0"})), 6);
}

TEST(Divisors, GlobalSectionsMatchBoxScan) {
  std::mt19937_64 rng(99);
  for (const auto& nf : standard_catalog()) {
    if (nf.fan.rank() > 3) continue;
    const auto f = share(nf.fan);
    for (int t = 0; t < 10; ++t) {
      std::vector<Rational> c;
      for (std::size_t i = 0; i < f->num_rays(); ++i) c.emplace_back(draw(rng, -4, 8), draw(rng, 1, 3));
      const TQDivisor d(f, c);
      ASSERT_EQ(h0_count(d), h0_by_box(d, 30)) << nf.name;
    }
  }
}

TEST(Divisors, AmpleSamplers) {
  std::mt19937_64 rng(42);
  for (const auto& nf : standard_catalog()) {
    const auto f = share(nf.fan);
    const auto a = sample_ample_integral(f, rng);
    EXPECT_TRUE(a.integral());
    EXPECT_TRUE(is_ample(a));
    bool saw_fractional = false;
    for (int t = 0; t < 10; ++t) {
      const auto h = sample_ample_q_divisor(f, rng);
      EXPECT_TRUE(is_ample(h)) << nf.name;
      saw_fractional |= !h.integral();
    }
    EXPECT_TRUE(saw_fractional) << nf.name;
  }
  std::mt19937_64 r1(3), r2(3);
  const auto f = share(hirzebruch(3));
  EXPECT_EQ(sample_ample_q_divisor(f, r1), sample_ample_q_divisor(f, r2));
}
