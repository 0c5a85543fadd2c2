// Fans: primitive rays plus maximal cones given as ray-index sets.
//
// Validation is exact and combinatorial; the catalog covers projective
// spaces, Hirzebruch surfaces, weighted projective spaces, products, and
// star subdivisions at smooth maximal cones (toric blow-ups at fixed points).
#pragma once

#include "torvan/arith.hpp"
#include "torvan/lattice_geom.hpp"
#include "torvan/linalg.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace torvan {

using RayIndexSet = std::vector<std::size_t>;

struct FanReport {
  std::vector<std::string> violations;
  bool valid() const { return violations.empty(); }
};

class Fan {
 public:
  Fan() = default;
  Fan(std::size_t rank, std::vector<LatticeVec> rays, std::vector<RayIndexSet> max_cones)
      : rank_(rank), rays_(std::move(rays)), max_cones_(std::move(max_cones)) {
    for (auto& c : max_cones_) std::sort(c.begin(), c.end());
  }

  std::size_t rank() const { return rank_; }
  const std::vector<LatticeVec>& rays() const { return rays_; }
  const LatticeVec& ray(std::size_t i) const { return rays_.at(i); }
  std::size_t num_rays() const { return rays_.size(); }
  const std::vector<RayIndexSet>& max_cones() const { return max_cones_; }

  Cone cone(std::size_t index) const {
    std::vector<LatticeVec> rs;
    for (auto i : max_cones_.at(index)) rs.push_back(rays_.at(i));
    return Cone::trusted(std::move(rs), rank_);
  }

  /// Same rank, same ray order, same set of maximal cones.
  friend bool operator==(const Fan& a, const Fan& b) {
    if (a.rank_ != b.rank_ || a.rays_ != b.rays_) return false;
    auto ca = a.max_cones_, cb = b.max_cones_;
    std::sort(ca.begin(), ca.end());
    std::sort(cb.begin(), cb.end());
    return ca == cb;
  }

 private:
  std::size_t rank_ = 0;
  std::vector<LatticeVec> rays_;
  std::vector<RayIndexSet> max_cones_;
};

namespace detail {

inline std::string index_set_string(const RayIndexSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

inline std::vector<LatticeVec> rays_of(const Fan& f, const RayIndexSet& idx) {
  std::vector<LatticeVec> out;
  for (auto i : idx) out.push_back(f.ray(i));
  return out;
}

/// Rays (by fan index) of the smallest face of cone `cone_idx` containing
/// the rays `subset`.
inline RayIndexSet smallest_face(const Fan& f, const RayIndexSet& cone_idx, const RayIndexSet& subset) {
  const auto normals = Cone::trusted(rays_of(f, cone_idx), f.rank()).inequalities();
  std::vector<LatticeVec> vanishing;
  for (const auto& g : normals)
    if (std::all_of(subset.begin(), subset.end(), [&](auto r) { return pairing(g, f.ray(r)) == 0; }))
      vanishing.push_back(g);
  RayIndexSet face;
  for (auto r : cone_idx)
    if (std::all_of(vanishing.begin(), vanishing.end(), [&](const auto& g) { return pairing(g, f.ray(r)) == 0; }))
      face.push_back(r);
  return face;
}

}  // namespace detail

/// Checks every fan invariant; reports all violations with witnesses.
inline FanReport validate(const Fan& f) {
  FanReport rep;
  auto bad = [&](std::string s) { rep.violations.push_back(std::move(s)); };
  if (f.rank() == 0) bad("rank must be >= 1");
  if (f.rank() > kMaxAmbientRank) bad("rank " + std::to_string(f.rank()) + " exceeds supported maximum 4");
  if (!rep.valid()) return rep;

  std::set<LatticeVec> seen;
  for (std::size_t i = 0; i < f.num_rays(); ++i) {
    const auto& r = f.ray(i);
    if (r.rank() != f.rank()) {
      bad("ray " + std::to_string(i) + " has rank " + std::to_string(r.rank()));
      continue;
    }
    if (r.is_zero() || !is_primitive(r)) bad("ray " + std::to_string(i) + " " + to_string(r) + " is not primitive");
    if (!seen.insert(r).second) bad("duplicate ray " + to_string(r));
  }
  std::vector<bool> used(f.num_rays(), false);
  std::set<RayIndexSet> cone_set;
  for (std::size_t c = 0; c < f.max_cones().size(); ++c) {
    const auto& idx = f.max_cones()[c];
    for (auto i : idx) {
      if (i >= f.num_rays()) bad("cone " + std::to_string(c) + " references missing ray " + std::to_string(i));
      else used[i] = true;
    }
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) bad("cone " + std::to_string(c) + " repeats a ray");
    if (!cone_set.insert(idx).second) bad("cone " + detail::index_set_string(idx) + " listed twice");
  }
  for (std::size_t i = 0; i < used.size(); ++i)
    if (!used[i]) bad("ray " + std::to_string(i) + " is in no maximal cone");
  if (!rep.valid()) return rep;

  for (std::size_t c = 0; c < f.max_cones().size(); ++c)
    if (auto why = Cone::trusted(detail::rays_of(f, f.max_cones()[c]), f.rank()).violation())
      bad("cone " + std::to_string(c) + " " + detail::index_set_string(f.max_cones()[c]) + ": " + *why);
  if (!rep.valid()) return rep;

  for (std::size_t a = 0; a < f.max_cones().size(); ++a) {
    const auto& ca = f.max_cones()[a];
    const auto ineq_a = f.cone(a).inequalities();
    for (std::size_t b = a + 1; b < f.max_cones().size(); ++b) {
      const auto& cb = f.max_cones()[b];
      RayIndexSet common;
      std::set_intersection(ca.begin(), ca.end(), cb.begin(), cb.end(), std::back_inserter(common));
      const std::string tag = "cones " + detail::index_set_string(ca) + " and " + detail::index_set_string(cb);
      if (detail::smallest_face(f, ca, common) != common || detail::smallest_face(f, cb, common) != common) {
        bad(tag + ": common rays do not span a common face");
        continue;
      }
      // The intersection must be exactly cone(common).
      std::vector<LatticeVec> rows = ineq_a;
      for (const auto& g : f.cone(b).inequalities()) rows.push_back(g);
      const auto inter = cone_from_inequalities(rows, f.rank());
      const auto common_ineq = Cone::trusted(detail::rays_of(f, common), f.rank()).inequalities();
      bool is_face = inter.lineality.empty();
      for (const auto& g : inter.rays)
        for (const auto& u : common_ineq)
          if (pairing(u, g) < 0) is_face = false;
      if (!is_face) bad(tag + ": intersection not a face");
    }
  }
  return rep;
}

/// Throws InputError listing the violations unless the fan is valid.
inline const Fan& require_valid(const Fan& f) {
  const auto rep = validate(f);
  if (!rep.valid()) {
    std::string msg = "invalid fan:";
    for (const auto& v : rep.violations) msg += " [" + v + "]";
    throw InputError(msg);
  }
  return f;
}

inline bool is_simplicial(const Fan& f) {
  for (std::size_t c = 0; c < f.max_cones().size(); ++c)
    if (!f.cone(c).is_simplicial()) return false;
  return true;
}

inline bool is_smooth(const Fan& f) {
  for (std::size_t c = 0; c < f.max_cones().size(); ++c)
    if (!f.cone(c).is_smooth()) return false;
  return true;
}

/// Pseudomanifold test: every facet of every maximal cone lies in exactly
/// two maximal cones. Requires full-dimensional maximal cones.
inline bool is_complete(const Fan& f) {
  std::map<RayIndexSet, int> facet_count;
  for (std::size_t c = 0; c < f.max_cones().size(); ++c) {
    const Cone cone = f.cone(c);
    if (!cone.full_dimensional())
      throw InputError("completeness not testable: maximal cone " + std::to_string(c) + " is not full-dimensional");
    for (const auto& g : cone.inequalities()) {
      RayIndexSet facet;
      for (auto r : f.max_cones()[c])
        if (pairing(g, f.ray(r)) == 0) facet.push_back(r);
      ++facet_count[facet];
    }
  }
  if (facet_count.empty()) return false;
  return std::all_of(facet_count.begin(), facet_count.end(), [](const auto& kv) { return kv.second == 2; });
}

namespace detail {

inline std::vector<RayIndexSet> all_but_one(std::size_t n_rays) {
  std::vector<RayIndexSet> cones;
  for (std::size_t skip = n_rays; skip-- > 0;) {
    RayIndexSet c;
    for (std::size_t i = 0; i < n_rays; ++i)
      if (i != skip) c.push_back(i);
    cones.push_back(c);
  }
  return cones;
}

}  // namespace detail

/// P^n: rays e_1..e_n and -(e_1 + ... + e_n).
inline Fan projective_space(std::size_t n) {
  if (n < 1 || n > kMaxAmbientRank) throw InputError("projective_space needs 1 <= n <= 4");
  std::vector<LatticeVec> rays;
  LatticeVec last = LatticeVec::zero(n);
  for (std::size_t i = 0; i < n; ++i) {
    rays.push_back(LatticeVec::unit(n, i));
    last -= rays.back();
  }
  rays.push_back(last);
  return Fan(n, std::move(rays), detail::all_but_one(n + 1));
}

/// F_a: rays (1,0), (0,1), (-1,a), (0,-1).
inline Fan hirzebruch(std::int64_t a) {
  if (a < 0) throw InputError("hirzebruch needs a >= 0");
  return Fan(2, {{1, 0}, {0, 1}, {-1, a}, {0, -1}}, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
}

/// Weighted projective space P(w_0, ..., w_n), n <= 3, gcd(w) = 1.
///
/// When some weight is 1, the last such weight is moved to the end of the
/// ray list; the other rays are e_1..e_n in order and the final ray is
/// -sum w_i e_i (so P(1,1,2) gets rays (1,0), (0,1), (-1,-2)). Otherwise the
/// rays are the images of the standard basis in Z^(n+1) / Z w, computed from a
/// unimodular U with U w = e_1.
inline Fan weighted_projective(std::span<const std::int64_t> weights) {
  if (weights.size() < 2 || weights.size() > 4) throw InputError("weighted_projective needs 2..4 weights");
  std::int64_t g = 0;
  for (auto w : weights) {
    if (w <= 0) throw InputError("weights must be positive");
    g = std::gcd(g, w);
  }
  if (g != 1) throw InputError("weights have a common factor " + std::to_string(g));
  const std::size_t n = weights.size() - 1;
  std::vector<LatticeVec> rays;

  auto pivot = std::find(weights.rbegin(), weights.rend(), 1);
  if (pivot != weights.rend()) {
    const std::size_t j = static_cast<std::size_t>(weights.rend() - pivot - 1);
    LatticeVec last = LatticeVec::zero(n);
    std::size_t k = 0;
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == j) continue;
      rays.push_back(LatticeVec::unit(n, k++));
      last -= weights[i] * rays.back();
    }
    rays.push_back(last);
  } else {
    IntMatrix column;
    for (auto w : weights) column.push_back({w});
    const auto snf = smith_normal_form(column);
    for (std::size_t i = 0; i <= n; ++i) {
      std::vector<std::int64_t> v;
      for (std::size_t r = 1; r <= n; ++r) v.push_back(snf.left[r][i]);
      rays.push_back(primitive(LatticeVec(v)));
    }
  }
  return Fan(n, std::move(rays), detail::all_but_one(n + 1));
}

inline Fan weighted_projective(std::initializer_list<std::int64_t> weights) {
  return weighted_projective(std::span<const std::int64_t>(weights.begin(), weights.size()));
}

/// Fan of X x Y in N_X + N_Y.
inline Fan product(const Fan& a, const Fan& b) {
  const std::size_t n = a.rank() + b.rank();
  if (n > kMaxAmbientRank) throw InputError("product rank exceeds 4");
  std::vector<LatticeVec> rays;
  for (const auto& r : a.rays()) {
    auto c = r.coords();
    c.resize(n, 0);
    rays.emplace_back(c);
  }
  for (const auto& r : b.rays()) {
    std::vector<std::int64_t> c(a.rank(), 0);
    c.insert(c.end(), r.coords().begin(), r.coords().end());
    rays.emplace_back(c);
  }
  std::vector<RayIndexSet> cones;
  for (const auto& ca : a.max_cones())
    for (const auto& cb : b.max_cones()) {
      RayIndexSet c = ca;
      for (auto i : cb) c.push_back(i + a.num_rays());
      cones.push_back(c);
    }
  return Fan(n, std::move(rays), std::move(cones));
}

/// Star subdivision at the smooth maximal cone `cone_index`: adds the sum of
/// its rays as a new last ray and replaces the cone by the star of that ray.
inline Fan stellar_subdivision(const Fan& f, std::size_t cone_index) {
  if (cone_index >= f.max_cones().size()) throw InputError("cone index out of range");
  const Cone target = f.cone(cone_index);
  if (!target.is_smooth())
    throw InputError("stellar_subdivision needs a smooth cone; cone " + std::to_string(cone_index) + " is not");
  LatticeVec center = LatticeVec::zero(f.rank());
  for (const auto& r : target.rays()) center += r;
  std::vector<LatticeVec> rays = f.rays();
  rays.push_back(center);
  const std::size_t new_ray = rays.size() - 1;

  std::vector<RayIndexSet> cones;
  for (std::size_t c = 0; c < f.max_cones().size(); ++c)
    if (c != cone_index) cones.push_back(f.max_cones()[c]);
  const auto& old = f.max_cones()[cone_index];
  for (std::size_t drop = 0; drop < old.size(); ++drop) {
    RayIndexSet c;
    for (std::size_t i = 0; i < old.size(); ++i)
      if (i != drop) c.push_back(old[i]);
    c.push_back(new_ray);
    cones.push_back(c);
  }
  return Fan(f.rank(), std::move(rays), std::move(cones));
}

/// The fan of all one-dimensional cones.
inline Fan one_skeleton(const Fan& f) {
  std::vector<RayIndexSet> cones;
  for (std::size_t i = 0; i < f.num_rays(); ++i) cones.push_back({i});
  return Fan(f.rank(), f.rays(), std::move(cones));
}

/// catalog("projective_space", {n}), ("hirzebruch", {a}),
/// ("weighted_projective", {w0..wn}).
inline Fan catalog(std::string_view name, std::span<const std::int64_t> params) {
  if (name == "projective_space") {
    if (params.size() != 1 || params[0] < 1) throw InputError("projective_space takes one parameter n >= 1");
    return projective_space(static_cast<std::size_t>(params[0]));
  }
  if (name == "hirzebruch") {
    if (params.size() != 1) throw InputError("hirzebruch takes one parameter a");
    return hirzebruch(params[0]);
  }
  if (name == "weighted_projective") return weighted_projective(params);
  throw InputError("unknown catalog family '" + std::string(name) + "'");
}

struct NamedFan {
  std::string name;
  Fan fan;
};

/// The standard test corpus: complete fans of dimension <= 3.
inline std::vector<NamedFan> standard_catalog() {
  const Fan p1 = projective_space(1), p2 = projective_space(2);
  const Fan bl_p2 = stellar_subdivision(p2, 0);
  const Fan bl2_p2 = stellar_subdivision(bl_p2, 0);
  return {
      {"P1", p1},
      {"P2", p2},
      {"P3", projective_space(3)},
      {"P1xP1", product(p1, p1)},
      {"F1", hirzebruch(1)},
      {"F2", hirzebruch(2)},
      {"F3", hirzebruch(3)},
      {"P112", weighted_projective({1, 1, 2})},
      {"P113", weighted_projective({1, 1, 3})},
      {"BlP2", bl_p2},
      {"Bl2P2", bl2_p2},
      {"BlP3", stellar_subdivision(projective_space(3), 0)},
      {"P1xP2", product(p1, p2)},
  };
}

/// Looks a fan up in standard_catalog() by name.
inline Fan catalog_fan(std::string_view name) {
  for (auto& nf : standard_catalog())
    if (nf.name == name) return nf.fan;
  throw InputError("no catalog fan named '" + std::string(name) + "'");
}

}  // namespace torvan
