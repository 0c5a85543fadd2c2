// M-graded cohomology of O(D) for torus-invariant Weil divisors on complete
// fans: H^i(X, O(D))_m = reduced H^{i-1} of the complex V_{D,m} on the rays
// rho with <m, v_rho> < -a_rho, faces being those ray sets that lie in a
// common cone. Coefficients are in F_p.
#pragma once

#include "torvan/arith.hpp"
#include "torvan/divisors.hpp"
#include "torvan/fan.hpp"
#include "torvan/lattice_geom.hpp"
#include "torvan/linalg.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

namespace torvan {

struct DegreeComplex {
  LatticeVec degree;
  std::vector<std::size_t> vertices;           // negative rays, increasing
  std::vector<std::vector<std::size_t>> faces;  // nonempty faces, by size then lexicographic

  friend bool operator==(const DegreeComplex&, const DegreeComplex&) = default;
};

namespace detail {

using RayMask = std::uint64_t;

inline RayMask negative_mask(const Fan& f, const std::vector<std::int64_t>& a, const LatticeVec& m) {
  RayMask mask = 0;
  for (std::size_t r = 0; r < f.num_rays(); ++r)
    if (pairing(m, f.ray(r)) < -a[r]) mask |= RayMask{1} << r;
  return mask;
}

inline std::vector<std::vector<std::size_t>> faces_of_mask(const Fan& f, RayMask mask) {
  std::set<std::vector<std::size_t>> faces;
  for (const auto& cone : f.max_cones()) {
    std::vector<std::size_t> neg;
    for (auto r : cone)
      if (mask >> r & 1) neg.push_back(r);
    const std::size_t k = neg.size();
    for (std::uint64_t s = 1; s < (std::uint64_t{1} << k); ++s) {
      std::vector<std::size_t> face;
      for (std::size_t j = 0; j < k; ++j)
        if (s >> j & 1) face.push_back(neg[j]);
      faces.insert(std::move(face));
    }
  }
  std::vector<std::vector<std::size_t>> out(faces.begin(), faces.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.size() < y.size(); });
  return out;
}

inline void require_complex_input(const TQDivisor& d) {
  if (!d.integral()) throw InputError("graded cohomology needs an integral divisor");
  if (d.fan().num_rays() > 63) throw Unsupported("more than 63 rays");
}

}  // namespace detail

inline DegreeComplex degree_complex(const TQDivisor& d, const LatticeVec& m) {
  detail::require_complex_input(d);
  if (m.rank() != d.fan().rank()) throw InputError("degree has wrong rank");
  const auto mask = detail::negative_mask(d.fan(), d.integer_coeffs(), m);
  DegreeComplex c{m, {}, detail::faces_of_mask(d.fan(), mask)};
  for (std::size_t r = 0; r < d.fan().num_rays(); ++r)
    if (mask >> r & 1) c.vertices.push_back(r);
  return c;
}

/// dims[k + 1] is the dimension of reduced H^k, k = -1, 0, 1, ...
struct ReducedCohomology {
  std::vector<std::int64_t> dims;
  std::int64_t at(int k) const {
    const auto i = static_cast<std::size_t>(k + 1);
    return k >= -1 && i < dims.size() ? dims[i] : 0;
  }
  std::int64_t total() const {
    std::int64_t s = 0;
    for (auto x : dims) s += x;
    return s;
  }
};

/// Reduced simplicial cohomology over F_p of a face list closed under
/// subsets (the empty face is implicit).
inline ReducedCohomology reduced_cohomology(const std::vector<std::vector<std::size_t>>& faces, std::int64_t p) {
  if (!is_prime(p)) throw InputError("coefficient field needs a prime, got " + std::to_string(p));
  std::size_t top = 0;
  for (const auto& f : faces) top = std::max(top, f.size());
  // by_size[s] lists faces with s vertices; s = 0 is the empty face.
  std::vector<std::vector<std::vector<std::size_t>>> by_size(top + 1);
  by_size[0].push_back({});
  for (const auto& f : faces) by_size[f.size()].push_back(f);
  std::vector<std::map<std::vector<std::size_t>, std::size_t>> index(top + 1);
  for (std::size_t s = 0; s <= top; ++s)
    for (std::size_t i = 0; i < by_size[s].size(); ++i) index[s][by_size[s][i]] = i;

  // rank of the coboundary C(size s) -> C(size s + 1)
  std::vector<std::size_t> rk(top + 2, 0);
  for (std::size_t s = 0; s < top; ++s) {
    IntMatrix delta(by_size[s + 1].size(), std::vector<std::int64_t>(by_size[s].size(), 0));
    for (std::size_t row = 0; row < by_size[s + 1].size(); ++row) {
      const auto& face = by_size[s + 1][row];
      for (std::size_t j = 0; j < face.size(); ++j) {
        auto sub = face;
        sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(j));
        const auto it = index[s].find(sub);
        if (it == index[s].end()) throw InputError("face list is not closed under subsets");
        delta[row][it->second] = (j % 2 == 0) ? 1 : -1;
      }
    }
    rk[s] = linalg::rank_mod_p(delta, p);
  }
  ReducedCohomology out;
  for (std::size_t s = 0; s <= top; ++s) {
    const auto in = s == 0 ? 0 : rk[s - 1];
    out.dims.push_back(static_cast<std::int64_t>(by_size[s].size() - rk[s] - in));
  }
  return out;
}

inline ReducedCohomology reduced_cohomology(const DegreeComplex& c, std::int64_t p) {
  return reduced_cohomology(c.faces, p);
}

/// Integer box [lo, hi] containing every vertex of the arrangement
/// <m, v_rho> = -a_rho, widened by `margin`.
struct DegreeBox {
  LatticeVec lo, hi;
  std::int64_t size() const {
    std::int64_t s = 1;
    for (std::size_t i = 0; i < lo.rank(); ++i) s = checked_mul(s, hi[i] - lo[i] + 1);
    return s;
  }
  bool contains(const LatticeVec& m) const {
    for (std::size_t i = 0; i < lo.rank(); ++i)
      if (m[i] < lo[i] || m[i] > hi[i]) return false;
    return true;
  }
};

inline DegreeBox degree_bounds(const TQDivisor& d, std::int64_t margin = 1) {
  detail::require_complex_input(d);
  const Fan& f = d.fan();
  const std::size_t n = f.rank();
  const auto a = d.integer_coeffs();
  std::optional<std::vector<Rational>> lo, hi;
  detail::for_each_subset(f.num_rays(), n, [&](std::span<const std::size_t> s) {
    RatMatrix rows;
    std::vector<Rational> rhs;
    for (auto r : s) {
      rows.push_back(linalg::to_rational(IntMatrix{f.ray(r).coords()})[0]);
      rhs.emplace_back(-a[r]);
    }
    if (linalg::rank(rows) < n) return;
    const auto x = linalg::solve(rows, rhs, n);
    if (!lo) {
      lo = *x;
      hi = *x;
    }
    for (std::size_t i = 0; i < n; ++i) {
      (*lo)[i] = std::min((*lo)[i], (*x)[i]);
      (*hi)[i] = std::max((*hi)[i], (*x)[i]);
    }
  });
  if (!lo) throw InputError("degenerate fan: no full-rank ray subsystem");
  DegreeBox box{LatticeVec::zero(n), LatticeVec::zero(n)};
  for (std::size_t i = 0; i < n; ++i) {
    box.lo[i] = checked_add(to_int64(floor((*lo)[i])), -margin);
    box.hi[i] = checked_add(to_int64(ceil((*hi)[i])), margin);
  }
  return box;
}

struct GradedCohomologyTable {
  std::vector<std::int64_t> dims;  // h^0 .. h^n
  // support[i]: degrees m with nonzero H^i(X, O(D))_m and their dimensions
  std::vector<std::vector<std::pair<LatticeVec, std::int64_t>>> support;

  std::int64_t h(std::size_t i) const { return i < dims.size() ? dims[i] : 0; }
  std::int64_t euler_characteristic() const {
    std::int64_t chi = 0;
    for (std::size_t i = 0; i < dims.size(); ++i) chi += (i % 2 == 0 ? 1 : -1) * dims[i];
    return chi;
  }
};

enum class CohomologyEngine {
  chambers,  // one region per negative-ray mask, lattice points counted per region
  points,    // every degree of the box, complexes memoized by mask
};

struct CohomologyOptions {
  CohomologyEngine engine = CohomologyEngine::chambers;
  unsigned threads = 1;
  bool keep_support = true;
  bool check_h0 = true;
  /// Compute h^i only for i <= max_degree (all degrees when unset).
  std::optional<std::size_t> max_degree;
};

namespace detail {

using Support = std::vector<std::vector<std::pair<LatticeVec, std::int64_t>>>;

struct PartialTable {
  std::vector<std::int64_t> dims;
  Support support;
};

inline PartialTable empty_partial(std::size_t n) { return {std::vector<std::int64_t>(n + 1, 0), Support(n + 1)}; }

// Degrees of the box whose first coordinate lies in [first_lo, first_hi].
inline PartialTable scan_slab(const Fan& f, const std::vector<std::int64_t>& a, std::int64_t p, const DegreeBox& box,
                              std::int64_t first_lo, std::int64_t first_hi, std::size_t top, bool keep_support) {
  const std::size_t n = f.rank();
  PartialTable out = empty_partial(n);
  if (first_lo > first_hi) return out;
  std::unordered_map<RayMask, ReducedCohomology> memo;
  LatticeVec m = box.lo;
  m[0] = first_lo;
  for (;;) {
    const auto mask = negative_mask(f, a, m);
    auto it = memo.find(mask);
    if (it == memo.end()) it = memo.emplace(mask, reduced_cohomology(faces_of_mask(f, mask), p)).first;
    for (std::size_t i = 0; i <= top; ++i) {
      const auto h = it->second.at(static_cast<int>(i) - 1);
      if (h == 0) continue;
      out.dims[i] += h;
      if (keep_support) out.support[i].emplace_back(m, h);
    }
    // odometer, last coordinate fastest
    std::size_t k = n;
    while (k > 0) {
      --k;
      const std::int64_t hi = k == 0 ? first_hi : box.hi[k];
      if (m[k] < hi) {
        ++m[k];
        break;
      }
      m[k] = box.lo[k];
      if (k == 0) return out;
    }
  }
}

/// Integer degrees in the box whose negative-ray set is exactly `mask`.
inline RationalPolyhedron mask_region(const Fan& f, const std::vector<std::int64_t>& a, RayMask mask, const DegreeBox& box) {
  const std::size_t n = f.rank();
  std::vector<RationalPolyhedron::Inequality> ineqs;
  for (std::size_t r = 0; r < f.num_rays(); ++r) {
    if (mask >> r & 1)
      ineqs.push_back({-f.ray(r), Rational(a[r] + 1)});  // <m, v> <= -a - 1
    else
      ineqs.push_back({f.ray(r), Rational(-a[r])});
  }
  for (std::size_t i = 0; i < n; ++i) {
    ineqs.push_back({LatticeVec::unit(n, i), Rational(box.lo[i])});
    ineqs.push_back({-LatticeVec::unit(n, i), Rational(-box.hi[i])});
  }
  return RationalPolyhedron(n, std::move(ineqs));
}

inline PartialTable scan_masks(const Fan& f, const std::vector<std::int64_t>& a, std::int64_t p, const DegreeBox& box,
                               RayMask first, RayMask last, std::size_t top, bool keep_support) {
  const std::size_t n = f.rank();
  PartialTable out = empty_partial(n);
  for (RayMask mask = first; mask < last; ++mask) {
    const auto rc = reduced_cohomology(faces_of_mask(f, mask), p);
    bool relevant = false;
    for (std::size_t i = 0; i <= top; ++i) relevant = relevant || rc.at(static_cast<int>(i) - 1) != 0;
    if (!relevant) continue;
    const auto region = mask_region(f, a, mask, box);
    if (keep_support) {
      for (const auto& m : lattice_points(region))
        for (std::size_t i = 0; i <= top; ++i)
          if (const auto h = rc.at(static_cast<int>(i) - 1); h != 0) {
            out.dims[i] += h;
            out.support[i].emplace_back(m, h);
          }
    } else {
      const auto count = count_lattice_points(region);
      for (std::size_t i = 0; i <= top; ++i) out.dims[i] += count * rc.at(static_cast<int>(i) - 1);
    }
  }
  return out;
}

constexpr std::size_t kMaxChamberRays = 20;

}  // namespace detail

inline GradedCohomologyTable cohomology_table(const TQDivisor& d, std::int64_t p, const CohomologyOptions& opt = {}) {
  detail::require_complex_input(d);
  if (!is_prime(p)) throw InputError("coefficient field needs a prime, got " + std::to_string(p));
  const Fan& f = d.fan();
  const std::size_t n = f.rank();
  const std::size_t top = std::min(n, opt.max_degree.value_or(n));
  const auto a = d.integer_coeffs();
  const DegreeBox box = degree_bounds(d);
  const bool chambers = opt.engine == CohomologyEngine::chambers && f.num_rays() <= detail::kMaxChamberRays;

  // Work is split into contiguous ranges (of masks or of first coordinates)
  // and merged in range order.
  const std::int64_t width =
      chambers ? std::int64_t{1} << f.num_rays() : box.hi[0] - box.lo[0] + 1;
  const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(std::min<std::int64_t>(width, 256))));
  std::vector<detail::PartialTable> parts(threads);
  auto run = [&](unsigned t) {
    const std::int64_t lo = width * t / threads, hi = width * (t + 1) / threads;
    parts[t] = chambers ? detail::scan_masks(f, a, p, box, static_cast<detail::RayMask>(lo), static_cast<detail::RayMask>(hi),
                                             top, opt.keep_support)
                        : detail::scan_slab(f, a, p, box, box.lo[0] + lo, box.lo[0] + hi - 1, top, opt.keep_support);
  };
  if (threads == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(run, t);
    for (auto& th : pool) th.join();
  }

  GradedCohomologyTable table{std::vector<std::int64_t>(n + 1, 0), detail::Support(n + 1)};
  for (auto& part : parts)
    for (std::size_t i = 0; i <= n; ++i) {
      table.dims[i] += part.dims[i];
      for (auto& s : part.support[i]) table.support[i].push_back(std::move(s));
    }
  for (auto& s : table.support) std::sort(s.begin(), s.end());

  if (opt.check_h0) {
    const auto lattice = h0_count(d);
    if (lattice != table.dims[0]) {
      std::ostringstream msg;
      msg << "graded h0 = " << table.dims[0] << " but P_D has " << lattice << " lattice points; box " << to_string(box.lo)
          << " .. " << to_string(box.hi);
      throw InternalError(msg.str());
    }
  }
  return table;
}

/// Sign vector of <m, v_rho> + a_rho; equal sign vectors give equal complexes.
inline std::vector<int> chamber_signs(const TQDivisor& d, const LatticeVec& m) {
  const auto a = d.integer_coeffs();
  std::vector<int> out;
  for (std::size_t r = 0; r < d.fan().num_rays(); ++r) {
    const auto v = pairing(m, d.fan().ray(r)) + a[r];
    out.push_back(v < 0 ? -1 : (v == 0 ? 0 : 1));
  }
  return out;
}

struct DualityResult {
  bool holds = false;
  std::vector<std::int64_t> lhs;  // h^i(D)
  std::vector<std::int64_t> rhs;  // h^{n-i}(K - D)
};

inline DualityResult serre_duality(const TQDivisor& d, std::int64_t p, const CohomologyOptions& opt = {}) {
  const std::size_t n = d.fan().rank();
  CohomologyOptions o = opt;
  o.keep_support = false;
  const auto t1 = cohomology_table(d, p, o);
  const auto t2 = cohomology_table(canonical_divisor(d.fan_ptr()) - d, p, o);
  DualityResult r{true, t1.dims, {}};
  for (std::size_t i = 0; i <= n; ++i) r.rhs.push_back(t2.dims[n - i]);
  r.holds = r.lhs == r.rhs;
  return r;
}

inline bool serre_duality_check(const TQDivisor& d, std::int64_t p) { return serre_duality(d, p).holds; }

struct FieldComparison {
  bool agree = true;
  std::map<std::int64_t, std::vector<std::int64_t>> dims;  // per prime
};

/// Tables over several primes; a disagreement is reported, not thrown.
inline FieldComparison compare_fields(const TQDivisor& d, const std::vector<std::int64_t>& primes) {
  FieldComparison out;
  CohomologyOptions o;
  o.keep_support = false;
  for (auto p : primes) out.dims[p] = cohomology_table(d, p, o).dims;
  for (const auto& [p, dims] : out.dims)
    if (dims != out.dims.begin()->second) out.agree = false;
  return out;
}

}  // namespace torvan
