#include "torvan/fan.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace torvan;

namespace {

std::set<LatticeVec> ray_set(const Fan& f) { return {f.rays().begin(), f.rays().end()}; }

}  // namespace

TEST(FanValidate, ProjectivePlane) {
  const Fan p2(2, {{1, 0}, {0, 1}, {-1, -1}}, {{0, 1}, {1, 2}, {2, 0}});
  EXPECT_TRUE(validate(p2).valid());
  EXPECT_EQ(p2, projective_space(2));
}

TEST(FanValidate, OverlappingConesRejected) {
  const Fan bad(2, {{1, 0}, {0, 1}, {1, 1}, {-1, 2}}, {{0, 1}, {2, 3}});
  const auto rep = validate(bad);
  ASSERT_FALSE(rep.valid());
  EXPECT_NE(rep.violations[0].find("intersection not a face"), std::string::npos) << rep.violations[0];
}

TEST(FanValidate, SharedRayButNotAFace) {
  // Two 2-cones sharing the ray (1,0) with overlapping interiors.
  const Fan bad(2, {{1, 0}, {0, 1}, {1, 1}}, {{0, 1}, {0, 2}});
  EXPECT_FALSE(validate(bad).valid());
}

TEST(FanValidate, DuplicatesAndDanglingRays) {
  EXPECT_FALSE(validate(Fan(2, {{1, 0}, {1, 0}, {0, 1}}, {{0, 2}, {1, 2}})).valid());
  EXPECT_FALSE(validate(Fan(2, {{1, 0}, {0, 1}, {-1, 0}}, {{0, 1}})).valid());
  EXPECT_FALSE(validate(Fan(2, {{2, 0}, {0, 1}}, {{0, 1}})).valid());
  EXPECT_FALSE(validate(Fan(2, {{1, 0}, {0, 1}}, {{0, 5}})).valid());
  EXPECT_THROW(require_valid(Fan(2, {{1, 0}, {1, 0}}, {{0}, {1}})), InputError);
}

TEST(FanValidate, ThreeDimensionalFaces) {
  // Cones on opposite sides of the plane spanned by e1, e2.
  const Fan good(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, -1}}, {{0, 1, 2}, {0, 1, 3}});
  EXPECT_TRUE(validate(good).valid());
  const Fan overlap(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}}, {{0, 1, 2}, {0, 1, 3}});
  EXPECT_FALSE(validate(overlap).valid());
}

TEST(FanCompleteness, Examples) {
  EXPECT_TRUE(is_complete(projective_space(1)));
  EXPECT_FALSE(is_complete(Fan(2, {{1, 0}, {0, 1}}, {{0, 1}})));
  EXPECT_TRUE(is_complete(product(projective_space(1), projective_space(1))));
  EXPECT_THROW(is_complete(one_skeleton(projective_space(2))), InputError);
}

TEST(FanSmoothness, Examples) {
  EXPECT_TRUE(is_smooth(projective_space(2)));
  const Fan p112(2, {{1, 0}, {0, 1}, {-1, -2}}, {{0, 1}, {1, 2}, {2, 0}});
  EXPECT_TRUE(validate(p112).valid());
  EXPECT_TRUE(is_simplicial(p112));
  EXPECT_FALSE(is_smooth(p112));
  EXPECT_EQ(p112, weighted_projective({1, 1, 2}));

  // Cone over a square completed by the four side cones and the bottom cone.
  const Fan square(3, {{1, 0, 1}, {0, 1, 1}, {-1, 0, 1}, {0, -1, 1}, {0, 0, -1}},
                   {{0, 1, 2, 3}, {0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {0, 3, 4}});
  EXPECT_TRUE(validate(square).valid());
  EXPECT_TRUE(is_complete(square));
  EXPECT_FALSE(square.cone(0).is_simplicial());
  EXPECT_FALSE(is_simplicial(square));
}

TEST(FanCatalog, AllCompleteAndValid) {
  for (const auto& nf : standard_catalog()) {
    SCOPED_TRACE(nf.name);
    EXPECT_TRUE(validate(nf.fan).valid());
    EXPECT_TRUE(is_complete(nf.fan));
    EXPECT_TRUE(is_simplicial(nf.fan));
    if (is_smooth(nf.fan)) { EXPECT_TRUE(is_simplicial(nf.fan)); }
  }
  for (std::size_t n = 1; n <= 4; ++n) {
    EXPECT_TRUE(validate(projective_space(n)).valid());
    EXPECT_TRUE(is_complete(projective_space(n)));
    EXPECT_TRUE(is_smooth(projective_space(n)));
  }
  for (std::int64_t a = 0; a <= 5; ++a) {
    EXPECT_TRUE(validate(hirzebruch(a)).valid());
    EXPECT_TRUE(is_complete(hirzebruch(a)));
    EXPECT_TRUE(is_smooth(hirzebruch(a)));
  }
  EXPECT_EQ(hirzebruch(1).num_rays(), 4u);
}

TEST(FanCatalog, WeightedProjective) {
  const Fan p112 = weighted_projective({1, 1, 2});
  EXPECT_TRUE(is_complete(p112));
  EXPECT_TRUE(is_simplicial(p112));
  EXPECT_FALSE(is_smooth(p112));
  EXPECT_EQ(weighted_projective({1, 1, 1}), projective_space(2));
  for (auto weights : std::vector<std::vector<std::int64_t>>{{1, 1, 3}, {1, 2, 3}, {2, 3, 5}, {1, 1, 1, 2}, {2, 3, 5, 7}}) {
    const Fan f = weighted_projective(weights);
    EXPECT_TRUE(validate(f).valid());
    EXPECT_TRUE(is_complete(f));
    EXPECT_TRUE(is_simplicial(f));
    // Some ordering of the weights annihilates the rays.
    std::vector<std::int64_t> w = weights;
    std::sort(w.begin(), w.end());
    bool relation = false;
    do {
      LatticeVec s = LatticeVec::zero(f.rank());
      for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * f.ray(i);
      relation = s.is_zero();
    } while (!relation && std::next_permutation(w.begin(), w.end()));
    EXPECT_TRUE(relation);
  }
  EXPECT_THROW(weighted_projective({2, 4, 6}), InputError);
  EXPECT_THROW(weighted_projective({1, 0, 1}), InputError);
}

namespace {

// Some A in GL(2,Z) with small entries maps one fan's rays and cones onto
// the other's.
bool isomorphic_surfaces(const Fan& f, const Fan& g) {
  if (f.num_rays() != g.num_rays() || f.max_cones().size() != g.max_cones().size()) return false;
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      for (int c = -2; c <= 2; ++c)
        for (int d = -2; d <= 2; ++d) {
          if (std::abs(a * d - b * c) != 1) continue;
          std::vector<std::size_t> image(f.num_rays());
          bool ok = true;
          for (std::size_t i = 0; i < f.num_rays() && ok; ++i) {
            const LatticeVec v{a * f.ray(i)[0] + b * f.ray(i)[1], c * f.ray(i)[0] + d * f.ray(i)[1]};
            auto it = std::find(g.rays().begin(), g.rays().end(), v);
            if (it == g.rays().end()) ok = false;
            else image[i] = static_cast<std::size_t>(it - g.rays().begin());
          }
          if (!ok) continue;
          std::set<RayIndexSet> mapped;
          for (const auto& cone : f.max_cones()) {
            RayIndexSet m;
            for (auto i : cone) m.push_back(image[i]);
            std::sort(m.begin(), m.end());
            mapped.insert(m);
          }
          if (mapped == std::set<RayIndexSet>(g.max_cones().begin(), g.max_cones().end())) return true;
        }
  return false;
}

}  // namespace

TEST(StellarSubdivision, P2BecomesF1) {
  const Fan bl = stellar_subdivision(projective_space(2), 0);
  EXPECT_TRUE(validate(bl).valid());
  EXPECT_TRUE(is_complete(bl));
  EXPECT_TRUE(is_smooth(bl));
  EXPECT_EQ(ray_set(bl), (std::set<LatticeVec>{{1, 0}, {0, 1}, {-1, -1}, {1, 1}}));
  EXPECT_TRUE(isomorphic_surfaces(bl, hirzebruch(1)));
  EXPECT_FALSE(isomorphic_surfaces(bl, hirzebruch(0)));
  EXPECT_FALSE(isomorphic_surfaces(bl, hirzebruch(2)));
}

TEST(StellarSubdivision, IteratesAndPreconditions) {
  Fan f = hirzebruch(1);
  for (int depth = 1; depth <= 3; ++depth) {
    const std::size_t rays_before = f.num_rays();
    f = stellar_subdivision(f, 0);
    EXPECT_TRUE(validate(f).valid());
    EXPECT_TRUE(is_complete(f));
    EXPECT_TRUE(is_smooth(f));
    EXPECT_EQ(f.num_rays(), rays_before + 1);
  }
  const Fan p3bl = stellar_subdivision(projective_space(3), 2);
  EXPECT_TRUE(validate(p3bl).valid());
  EXPECT_TRUE(is_complete(p3bl));
  EXPECT_TRUE(is_smooth(p3bl));

  const Fan p112 = weighted_projective({1, 1, 2});
  bool threw = false;
  for (std::size_t c = 0; c < p112.max_cones().size(); ++c)
    if (!p112.cone(c).is_smooth()) {
      EXPECT_THROW(stellar_subdivision(p112, c), InputError);
      threw = true;
    }
  EXPECT_TRUE(threw);
}

TEST(OneSkeleton, Examples) {
  const Fan s = one_skeleton(projective_space(2));
  EXPECT_EQ(s.max_cones().size(), 3u);
  EXPECT_TRUE(validate(s).valid());
  const Fan w = one_skeleton(weighted_projective({1, 1, 2}));
  EXPECT_EQ(w.max_cones().size(), 3u);
  EXPECT_TRUE(is_smooth(w));
  const Fan p1 = projective_space(1);
  EXPECT_EQ(one_skeleton(p1), p1);
  for (const auto& nf : standard_catalog()) {
    const Fan sk = one_skeleton(nf.fan);
    EXPECT_TRUE(is_smooth(sk));
    EXPECT_EQ(sk.rays(), nf.fan.rays());
    for (std::size_t c = 0; c < sk.max_cones().size(); ++c) EXPECT_LE(sk.cone(c).dim(), 1u);
  }
}
