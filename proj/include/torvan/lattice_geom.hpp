// Lattice vectors, rational polyhedral cones and their duals, Hilbert bases of
// cone semigroups, and lattice-point enumeration in bounded rational polyhedra.
//
// Everything is exact. Ambient ranks are small (at most 4, Hilbert bases at
// most 3); the algorithms are the elementary enumerative ones and make no
// attempt to scale beyond that.
#pragma once

#include "torvan/arith.hpp"
#include "torvan/linalg.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace torvan {

inline constexpr std::size_t kMaxAmbientRank = 4;
inline constexpr std::size_t kMaxHilbertRank = 3;

class LatticeVec {
 public:
  LatticeVec() = default;
  explicit LatticeVec(std::vector<std::int64_t> coords) : coords_(std::move(coords)) {}
  LatticeVec(std::initializer_list<std::int64_t> coords) : coords_(coords) {}

  static LatticeVec zero(std::size_t rank) { return LatticeVec(std::vector<std::int64_t>(rank, 0)); }
  static LatticeVec unit(std::size_t rank, std::size_t i) {
    LatticeVec v = zero(rank);
    v.coords_[i] = 1;
    return v;
  }

  std::size_t rank() const { return coords_.size(); }
  std::int64_t operator[](std::size_t i) const { return coords_[i]; }
  std::int64_t& operator[](std::size_t i) { return coords_[i]; }
  const std::vector<std::int64_t>& coords() const { return coords_; }
  bool is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](auto x) { return x == 0; });
  }

  LatticeVec& operator+=(const LatticeVec& o) {
    require_rank(o);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] = checked_add(coords_[i], o.coords_[i]);
    return *this;
  }
  LatticeVec& operator-=(const LatticeVec& o) {
    require_rank(o);
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] = checked_add(coords_[i], -o.coords_[i]);
    return *this;
  }
  friend LatticeVec operator+(LatticeVec a, const LatticeVec& b) { return a += b; }
  friend LatticeVec operator-(LatticeVec a, const LatticeVec& b) { return a -= b; }
  friend LatticeVec operator-(LatticeVec a) {
    for (auto& x : a.coords_) x = -x;
    return a;
  }
  friend LatticeVec operator*(std::int64_t k, LatticeVec a) {
    for (auto& x : a.coords_) x = checked_mul(k, x);
    return a;
  }

  friend bool operator==(const LatticeVec&, const LatticeVec&) = default;
  friend auto operator<=>(const LatticeVec&, const LatticeVec&) = default;

 private:
  void require_rank(const LatticeVec& o) const {
    if (o.rank() != rank()) throw InputError("lattice vectors of different rank");
  }
  std::vector<std::int64_t> coords_;
};

/// The pairing <u, v> between M and N.
inline std::int64_t pairing(const LatticeVec& u, const LatticeVec& v) {
  if (u.rank() != v.rank()) throw InputError("pairing of vectors with different rank");
  std::int64_t s = 0;
  for (std::size_t i = 0; i < u.rank(); ++i) s = checked_add(s, checked_mul(u[i], v[i]));
  return s;
}

inline Rational pairing(const std::vector<Rational>& u, const LatticeVec& v) {
  Rational s = 0;
  for (std::size_t i = 0; i < v.rank(); ++i) s += u[i] * v[i];
  return s;
}

inline std::ostream& operator<<(std::ostream& os, const LatticeVec& v) {
  os << "(";
  for (std::size_t i = 0; i < v.rank(); ++i) os << (i ? "," : "") << v[i];
  return os << ")";
}

inline std::string to_string(const LatticeVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.rank(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

using RationalVec = std::vector<Rational>;

/// v divided by the gcd of its entries.
inline LatticeVec primitive(const LatticeVec& v) {
  std::int64_t g = 0;
  for (auto x : v.coords()) g = std::gcd(g, x);
  if (g == 0) throw InputError("primitive() of the zero vector");
  std::vector<std::int64_t> out;
  for (auto x : v.coords()) out.push_back(x / g);
  return LatticeVec(std::move(out));
}

inline bool is_primitive(const LatticeVec& v) {
  std::int64_t g = 0;
  for (auto x : v.coords()) g = std::gcd(g, x);
  return g == 1;
}

inline IntMatrix as_rows(std::span<const LatticeVec> vs) {
  IntMatrix m;
  for (const auto& v : vs) m.push_back(v.coords());
  return m;
}

/// Generators of the polyhedral cone {x : <a, x> >= 0 for every row a}:
/// extremal rays of its pointed part plus a basis of its lineality space.
struct ConeGenerators {
  std::vector<LatticeVec> rays;
  std::vector<LatticeVec> lineality;

  bool pointed() const { return lineality.empty(); }

  /// rays together with +/- each lineality vector.
  std::vector<LatticeVec> all() const {
    std::vector<LatticeVec> out = rays;
    for (const auto& l : lineality) {
      out.push_back(l);
      out.push_back(-l);
    }
    return out;
  }
};

namespace detail {

inline void for_each_subset(std::size_t n, std::size_t k, auto&& fn) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  for (;;) {
    fn(std::span<const std::size_t>(idx));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace detail

inline ConeGenerators cone_from_inequalities(std::span<const LatticeVec> rows, std::size_t rank) {
  const IntMatrix a = as_rows(rows);
  const RatMatrix ar = linalg::to_rational(a);
  ConeGenerators out;
  for (const auto& k : linalg::kernel(ar, rank)) out.lineality.push_back(LatticeVec(linalg::primitive_integer(k)));
  const std::size_t r = linalg::rank(ar);
  if (r == 0) return out;

  std::set<LatticeVec> found;
  detail::for_each_subset(rows.size(), r - 1, [&](std::span<const std::size_t> subset) {
    RatMatrix sys;
    for (auto i : subset) sys.push_back(ar[i]);
    if (linalg::rank(sys) != r - 1) return;
    for (const auto& l : out.lineality) sys.push_back(linalg::to_rational(IntMatrix{l.coords()})[0]);
    const auto ker = linalg::kernel(sys, rank);
    if (ker.size() != 1) return;
    LatticeVec dir(linalg::primitive_integer(ker[0]));
    for (int sign : {1, -1}) {
      LatticeVec cand = sign * dir;
      bool ok = true;
      for (const auto& row : rows)
        if (pairing(row, cand) < 0) {
          ok = false;
          break;
        }
      if (ok) found.insert(cand);
    }
  });
  out.rays.assign(found.begin(), found.end());
  return out;
}

/// A rational polyhedral cone given by primitive ray generators.
class Cone {
 public:
  Cone() = default;

  /// Validates primitivity, strong convexity, and extremality.
  explicit Cone(std::vector<LatticeVec> rays, std::size_t ambient_rank) : rays_(std::move(rays)), rank_(ambient_rank) {
    if (auto why = violation()) throw InputError("invalid cone: " + *why);
  }

  /// Skips validation; used where the caller has established the invariants.
  static Cone trusted(std::vector<LatticeVec> rays, std::size_t ambient_rank) {
    Cone c;
    c.rays_ = std::move(rays);
    c.rank_ = ambient_rank;
    return c;
  }

  const std::vector<LatticeVec>& rays() const { return rays_; }
  std::size_t ambient_rank() const { return rank_; }
  std::size_t dim() const { return rays_.empty() ? 0 : linalg::rank(as_rows(rays_)); }
  bool full_dimensional() const { return dim() == rank_; }
  bool is_simplicial() const { return rays_.size() == dim(); }

  /// Simplicial with all elementary divisors of the ray matrix equal to 1.
  bool is_smooth() const {
    if (!is_simplicial()) return false;
    if (rays_.empty()) return true;
    const auto snf = smith_normal_form(as_rows(rays_));
    return std::all_of(snf.divisors.begin(), snf.divisors.end(), [](auto d) { return d == 1; });
  }

  /// Inequality normals u with <u, x> >= 0 on the cone (dual generators).
  std::vector<LatticeVec> inequalities() const { return cone_from_inequalities(rays_, rank_).all(); }

  bool contains(const LatticeVec& x) const {
    for (const auto& u : inequalities())
      if (pairing(u, x) < 0) return false;
    return true;
  }

  /// First violated invariant, if any.
  std::optional<std::string> violation() const {
    for (const auto& r : rays_) {
      if (r.rank() != rank_) return "ray " + to_string(r) + " has wrong rank";
      if (!is_primitive(r)) return "ray " + to_string(r) + " is not primitive";
    }
    // Strongly convex iff some u is positive on every ray; the sum of the
    // dual generators is such a u whenever one exists.
    const auto dual = cone_from_inequalities(rays_, rank_);
    LatticeVec u = LatticeVec::zero(rank_);
    for (const auto& g : dual.rays) u += g;
    for (const auto& r : rays_)
      if (pairing(u, r) <= 0) return "cone is not strongly convex (contains a line)";
    for (std::size_t i = 0; i < rays_.size(); ++i) {
      std::vector<LatticeVec> others;
      for (std::size_t j = 0; j < rays_.size(); ++j)
        if (j != i) others.push_back(rays_[j]);
      if (others.empty()) continue;
      const auto ineq = cone_from_inequalities(others, rank_).all();
      bool inside = true;
      for (const auto& g : ineq)
        if (pairing(g, rays_[i]) < 0) {
          inside = false;
          break;
        }
      if (inside) return "ray " + to_string(rays_[i]) + " is not extremal";
    }
    return std::nullopt;
  }

 private:
  std::vector<LatticeVec> rays_;
  std::size_t rank_ = 0;
};

/// The dual cone {u : <u, v> >= 0 for all v in c}.
struct DualCone {
  ConeGenerators generators;
  std::size_t ambient_rank = 0;

  bool strongly_convex() const { return generators.pointed(); }

  /// The dual as a Cone; only defined when it is strongly convex.
  Cone as_cone() const {
    if (!strongly_convex()) throw InputError("dual cone contains a line; no ray-only representation");
    return Cone::trusted(generators.rays, ambient_rank);
  }
};

inline DualCone dual_cone(const Cone& c) {
  if (c.ambient_rank() > kMaxAmbientRank)
    throw Unsupported("dual_cone supports ambient rank <= 4, got " + std::to_string(c.ambient_rank()));
  return DualCone{cone_from_inequalities(c.rays(), c.ambient_rank()), c.ambient_rank()};
}

/// Minimal generating set of the semigroup c ∩ Z^n for a strongly convex c.
inline std::vector<LatticeVec> hilbert_basis(const Cone& c) {
  const std::size_t n = c.ambient_rank();
  if (n > kMaxHilbertRank) throw Unsupported("hilbert_basis supports rank <= 3, got " + std::to_string(n));
  if (auto why = c.violation()) throw InputError("hilbert_basis: " + *why);
  if (c.rays().empty()) return {};

  const auto ineq = c.inequalities();
  LatticeVec grading = LatticeVec::zero(n);
  for (const auto& g : cone_from_inequalities(c.rays(), n).rays) grading += g;

  auto in_cone = [&](const LatticeVec& x) {
    for (const auto& u : ineq)
      if (pairing(u, x) < 0) return false;
    return true;
  };

  // Every irreducible lies in a closed fundamental parallelepiped of some
  // simplicial subcone, hence in the zonotope sum_i [0,1] r_i.
  std::vector<std::int64_t> lo(n, 0), hi(n, 0);
  for (const auto& r : c.rays())
    for (std::size_t k = 0; k < n; ++k) (r[k] < 0 ? lo[k] : hi[k]) += r[k];

  std::vector<LatticeVec> candidates;
  LatticeVec x = LatticeVec(lo);
  for (;;) {
    if (!x.is_zero() && in_cone(x)) candidates.push_back(x);
    std::size_t k = 0;
    while (k < n && x[k] == hi[k]) {
      x[k] = lo[k];
      ++k;
    }
    if (k == n) break;
    ++x[k];
  }
  std::stable_sort(candidates.begin(), candidates.end(), [&](const auto& a, const auto& b) {
    return pairing(grading, a) < pairing(grading, b);
  });

  std::vector<LatticeVec> basis;
  for (const auto& cand : candidates) {
    bool reducible = false;
    for (const auto& h : basis) {
      const LatticeVec rest = cand - h;
      if (!rest.is_zero() && in_cone(rest)) {
        reducible = true;
        break;
      }
    }
    if (!reducible) basis.push_back(cand);
  }
  std::sort(basis.begin(), basis.end());
  return basis;
}

/// {u : <u, normal_i> >= bound_i for all i}.
class RationalPolyhedron {
 public:
  struct Inequality {
    LatticeVec normal;
    Rational bound;
  };

  RationalPolyhedron(std::size_t rank, std::vector<Inequality> inequalities)
      : rank_(rank), inequalities_(std::move(inequalities)) {
    for (const auto& ineq : inequalities_) {
      if (ineq.normal.rank() != rank_) throw InputError("inequality normal has wrong rank");
      if (ineq.normal.is_zero()) throw InputError("inequality normal is zero");
    }
  }

  std::size_t rank() const { return rank_; }
  const std::vector<Inequality>& inequalities() const { return inequalities_; }

  bool contains(const LatticeVec& u) const {
    for (const auto& ineq : inequalities_)
      if (Rational(pairing(u, ineq.normal)) < ineq.bound) return false;
    return true;
  }

  bool contains(const RationalVec& u) const {
    for (const auto& ineq : inequalities_)
      if (pairing(u, ineq.normal) < ineq.bound) return false;
    return true;
  }

  /// True iff the recession cone {x : <x, normal_i> >= 0} is {0}.
  bool bounded() const {
    std::vector<LatticeVec> normals;
    for (const auto& ineq : inequalities_) normals.push_back(ineq.normal);
    const auto rec = cone_from_inequalities(normals, rank_);
    return rec.rays.empty() && rec.lineality.empty();
  }

  /// Vertices of a bounded polyhedron, sorted; empty iff the polyhedron is.
  std::vector<RationalVec> vertices() const {
    std::set<RationalVec> out;
    detail::for_each_subset(inequalities_.size(), rank_, [&](std::span<const std::size_t> subset) {
      RatMatrix a;
      std::vector<Rational> b;
      for (auto i : subset) {
        a.push_back(linalg::to_rational(IntMatrix{inequalities_[i].normal.coords()})[0]);
        b.push_back(inequalities_[i].bound);
      }
      if (linalg::rank(a) != rank_) return;
      auto sol = linalg::solve(a, b, rank_);
      if (sol && contains(*sol)) out.insert(*sol);
    });
    return {out.begin(), out.end()};
  }

 private:
  std::size_t rank_;
  std::vector<Inequality> inequalities_;
};

/// Integer points u with lo <= u <= hi (coordinatewise) satisfying integer
/// inequalities a.u >= b, in lexicographic order. The last coordinate is
/// solved as an interval per row instead of scanned.
struct IntegerInequality {
  std::vector<std::int64_t> normal;
  std::int64_t bound;
};

namespace detail {

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

/// Scaled copy of a rational inequality with integral bound.
inline IntegerInequality integralize(const RationalPolyhedron::Inequality& ineq) {
  const Integer den = boost::multiprecision::denominator(ineq.bound);
  IntegerInequality out;
  for (auto x : ineq.normal.coords()) out.normal.push_back(checked_mul(x, to_int64(den)));
  out.bound = to_int64(boost::multiprecision::numerator(ineq.bound));
  return out;
}

/// Calls fn(prefix, lo_last, hi_last) for each row of the box over the first
/// n-1 coordinates with a nonempty last-coordinate interval.
inline void scan_rows(const std::vector<IntegerInequality>& ineqs, const std::vector<std::int64_t>& lo,
                      const std::vector<std::int64_t>& hi, auto&& fn) {
  const std::size_t n = lo.size();
  std::vector<std::int64_t> x(lo.begin(), lo.end());
  for (std::size_t k = 0; k < n; ++k)
    if (lo[k] > hi[k]) return;
  for (;;) {
    std::int64_t a = lo[n - 1], b = hi[n - 1];
    for (const auto& ineq : ineqs) {
      std::int64_t rest = ineq.bound;
      for (std::size_t k = 0; k + 1 < n; ++k) rest = checked_add(rest, -checked_mul(ineq.normal[k], x[k]));
      const std::int64_t c = ineq.normal[n - 1];
      if (c > 0)
        a = std::max(a, ceil_div(rest, c));
      else if (c < 0)
        b = std::min(b, floor_div(rest, c));
      else if (rest > 0)
        b = a - 1;
      if (a > b) break;
    }
    if (a <= b) fn(std::span<const std::int64_t>(x.data(), n - 1), a, b);
    // advance the prefix, last prefix coordinate fastest
    std::size_t k = n - 1;
    for (;;) {
      if (k == 0) return;
      --k;
      if (x[k] < hi[k]) {
        ++x[k];
        break;
      }
      x[k] = lo[k];
    }
  }
}

}  // namespace detail

/// Integer points of a bounded rational polyhedron, lexicographically sorted.
inline std::vector<LatticeVec> lattice_points(const RationalPolyhedron& poly) {
  if (!poly.bounded()) throw InputError("unbounded polyhedron");
  const auto verts = poly.vertices();
  if (verts.empty()) return {};
  const std::size_t n = poly.rank();
  std::vector<std::int64_t> lo(n), hi(n);
  for (std::size_t k = 0; k < n; ++k) {
    Rational mn = verts[0][k], mx = verts[0][k];
    for (const auto& v : verts) {
      mn = std::min(mn, v[k]);
      mx = std::max(mx, v[k]);
    }
    lo[k] = to_int64(ceil(mn));
    hi[k] = to_int64(floor(mx));
  }
  std::vector<IntegerInequality> ineqs;
  for (const auto& ineq : poly.inequalities()) ineqs.push_back(detail::integralize(ineq));

  std::vector<LatticeVec> out;
  detail::scan_rows(ineqs, lo, hi, [&](std::span<const std::int64_t> prefix, std::int64_t a, std::int64_t b) {
    for (std::int64_t t = a; t <= b; ++t) {
      std::vector<std::int64_t> c(prefix.begin(), prefix.end());
      c.push_back(t);
      out.emplace_back(std::move(c));
    }
  });
  return out;
}

/// Number of integer points without materializing them.
inline std::int64_t count_lattice_points(const RationalPolyhedron& poly) {
  if (!poly.bounded()) throw InputError("unbounded polyhedron");
  const auto verts = poly.vertices();
  if (verts.empty()) return 0;
  const std::size_t n = poly.rank();
  std::vector<std::int64_t> lo(n), hi(n);
  for (std::size_t k = 0; k < n; ++k) {
    Rational mn = verts[0][k], mx = verts[0][k];
    for (const auto& v : verts) {
      mn = std::min(mn, v[k]);
      mx = std::max(mx, v[k]);
    }
    lo[k] = to_int64(ceil(mn));
    hi[k] = to_int64(floor(mx));
  }
  std::vector<IntegerInequality> ineqs;
  for (const auto& ineq : poly.inequalities()) ineqs.push_back(detail::integralize(ineq));
  std::int64_t count = 0;
  detail::scan_rows(ineqs, lo, hi,
                    [&](std::span<const std::int64_t>, std::int64_t a, std::int64_t b) { count += b - a + 1; });
  return count;
}

}  // namespace torvan
