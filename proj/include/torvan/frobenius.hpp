// Chart-level Frobenius machinery over W_2(F_p).
//
// A chart is an affine toric piece U_sigma = Spec W_2[sigma^v cap M]. The
// monomial lifting sends chi^u to chi^{pu} and acts by the Witt Frobenius on
// coefficients. Graded pieces of F_* Omega^.(log boundary) on the torus are
// the Koszul complexes (Lambda^. F_p^n, u-bar wedge), one per degree u in M.
#pragma once

#include "torvan/arith.hpp"
#include "torvan/divisors.hpp"
#include "torvan/lattice_geom.hpp"
#include "torvan/linalg.hpp"
#include "torvan/witt.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace torvan {

/// sigma together with the lattice points of its dual cone.
class Chart {
 public:
  explicit Chart(Cone sigma) : sigma_(std::move(sigma)) {
    if (sigma_.ambient_rank() <= kMaxHilbertRank) generators_ = hilbert_basis(dual_cone(sigma_).as_cone());
  }

  const Cone& cone() const { return sigma_; }
  std::size_t rank() const { return sigma_.ambient_rank(); }
  /// Hilbert basis of sigma^v cap M (empty above the supported rank).
  const std::vector<LatticeVec>& generators() const { return generators_; }

  bool contains(const LatticeVec& u) const {
    if (u.rank() != rank()) return false;
    for (const auto& v : sigma_.rays())
      if (pairing(u, v) < 0) return false;
    return true;
  }

  /// u - v in sigma^v, i.e. chi^v divides chi^u.
  bool divides(const LatticeVec& v, const LatticeVec& u) const { return contains(u - v); }

  friend bool operator==(const Chart& a, const Chart& b) { return a.sigma_.rays() == b.sigma_.rays(); }

 private:
  Cone sigma_;
  std::vector<LatticeVec> generators_;
};

using ChartPtr = std::shared_ptr<const Chart>;

inline ChartPtr make_chart(Cone sigma) { return std::make_shared<const Chart>(std::move(sigma)); }

/// Element of W_2(F_p)[sigma^v cap M].
class SemigroupElem {
 public:
  SemigroupElem(ChartPtr chart, std::int64_t p) : chart_(std::move(chart)), p_(p) {
    if (!chart_) throw InputError("semigroup element without a chart");
    if (!is_prime(p_)) throw InputError("W_2 needs a prime, got " + std::to_string(p_));
  }

  static SemigroupElem monomial(ChartPtr chart, const LatticeVec& u, const WittElem& c) {
    SemigroupElem e(std::move(chart), c.prime());
    e.add_term(u, c);
    return e;
  }

  static SemigroupElem constant(ChartPtr chart, const WittElem& c) {
    const auto n = chart->rank();
    return monomial(std::move(chart), LatticeVec::zero(n), c);
  }

  const ChartPtr& chart() const { return chart_; }
  std::int64_t prime() const { return p_; }
  const std::map<LatticeVec, WittElem>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_monomial() const { return terms_.size() == 1; }

  void add_term(const LatticeVec& u, const WittElem& c) {
    if (c.prime() != p_) throw InputError("coefficient over the wrong prime");
    if (!chart_->contains(u)) throw InputError("exponent " + to_string(u) + " is outside the chart semigroup");
    auto [it, fresh] = terms_.try_emplace(u, c);
    if (!fresh) it->second = it->second + c;
    if (it->second == WittElem(p_)) terms_.erase(it);
  }

  friend bool operator==(const SemigroupElem& a, const SemigroupElem& b) {
    return *a.chart_ == *b.chart_ && a.p_ == b.p_ && a.terms_ == b.terms_;
  }

 private:
  ChartPtr chart_;
  std::int64_t p_;
  std::map<LatticeVec, WittElem> terms_;
};

namespace detail {

inline void require_same_chart(const SemigroupElem& a, const SemigroupElem& b) {
  if (a.prime() != b.prime()) throw InputError("elements over different primes");
  if (a.chart() != b.chart() && !(*a.chart() == *b.chart())) throw InputError("elements on different charts");
}

}  // namespace detail

inline SemigroupElem chart_add(const SemigroupElem& a, const SemigroupElem& b) {
  detail::require_same_chart(a, b);
  SemigroupElem out = a;
  for (const auto& [u, c] : b.terms()) out.add_term(u, c);
  return out;
}

inline SemigroupElem chart_mul(const SemigroupElem& a, const SemigroupElem& b) {
  detail::require_same_chart(a, b);
  SemigroupElem out(a.chart(), a.prime());
  for (const auto& [u, x] : a.terms())
    for (const auto& [v, y] : b.terms()) out.add_term(u + v, x * y);
  return out;
}

inline SemigroupElem operator+(const SemigroupElem& a, const SemigroupElem& b) { return chart_add(a, b); }
inline SemigroupElem operator*(const SemigroupElem& a, const SemigroupElem& b) { return chart_mul(a, b); }

/// chi^u -> chi^{pu}, coefficients through the Witt Frobenius.
inline SemigroupElem lift_frobenius(const SemigroupElem& a) {
  SemigroupElem out(a.chart(), a.prime());
  for (const auto& [u, c] : a.terms()) out.add_term(a.prime() * u, witt_frobenius(c));
  return out;
}

/// Element of F_p[sigma^v cap M]; coefficients in [1, p).
using FpPoly = std::map<LatticeVec, std::int64_t>;

inline FpPoly reduce_mod_p(const SemigroupElem& a) {
  FpPoly out;
  for (const auto& [u, c] : a.terms())
    if (witt_pr1(c) != 0) out[u] = witt_pr1(c);
  return out;
}

inline FpPoly fp_mul(const FpPoly& a, const FpPoly& b, std::int64_t p) {
  FpPoly out;
  for (const auto& [u, x] : a)
    for (const auto& [v, y] : b) {
      auto& c = out[u + v];
      c = (c + x * y) % p;
    }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

inline FpPoly fp_power(const FpPoly& a, std::int64_t e, std::int64_t p, std::size_t rank) {
  FpPoly out{{LatticeVec::zero(rank), 1}};
  for (std::int64_t i = 0; i < e; ++i) out = fp_mul(out, a, p);
  return out;
}

using MonomialLifting = std::function<SemigroupElem(const SemigroupElem&)>;

/// Monomial ideals (gens) and (target) in M, compared by mutual divisibility
/// in sigma^v. Both may be fractional (exponents outside sigma^v).
inline bool same_monomial_ideal(const Chart& chart, const std::vector<LatticeVec>& a, const std::vector<LatticeVec>& b) {
  auto covered = [&](const std::vector<LatticeVec>& xs, const std::vector<LatticeVec>& ys) {
    for (const auto& x : xs) {
      bool ok = false;
      for (const auto& y : ys) ok = ok || chart.divides(y, x);
      if (!ok) return false;
    }
    return true;
  };
  return covered(a, b) && covered(b, a);
}

/// Whether the ideal generated by lift(generators) equals (target).
inline bool compatibility_check(const Chart& chart, const std::vector<SemigroupElem>& generators,
                                const std::vector<LatticeVec>& target, const MonomialLifting& lift = lift_frobenius) {
  std::vector<LatticeVec> image;
  for (const auto& g : generators) {
    if (!g.is_monomial()) throw Unsupported("compatibility check needs monomial generators");
    const auto lifted = lift(g);
    if (!lifted.is_monomial()) return false;
    image.push_back(lifted.terms().begin()->first);
  }
  return same_monomial_ideal(chart, image, target);
}

struct ChartCompatibility {
  bool compatible = false;
  LatticeVec generator;        // exponent generating O(-D) on the chart
  LatticeVec target;           // exponent generating O(-pD) on the chart
};

/// For an effective Cartier D and a maximal cone sigma: O(-D) on U_sigma is
/// (chi^{-u_D(sigma)}); checks that the lifting carries it to O(-pD).
inline ChartCompatibility divisor_compatibility(const TQDivisor& d, std::size_t cone, std::int64_t p,
                                                const MonomialLifting& lift = lift_frobenius) {
  const auto cd = cartier_data(d);
  if (!cd.cartier()) throw InputError("compatibility needs a Cartier divisor: " + cd.obstruction->reason);
  const auto cdp = cartier_data(frobenius_multiple(d, p));
  const auto chart = make_chart(d.fan().cone(cone));
  ChartCompatibility out{false, -cd.data->u.at(cone), -cdp.data->u.at(cone)};
  if (!chart->contains(out.generator)) throw InputError("divisor is not effective on cone " + std::to_string(cone));
  const auto gen = SemigroupElem::monomial(chart, out.generator, WittElem::one(p));
  out.compatible = compatibility_check(*chart, {gen}, {out.target}, lift);
  return out;
}

// ---------------------------------------------------------------------------
// Graded log de Rham complexes on the torus chart.

using IndexSet = std::vector<std::size_t>;

/// Homogeneous element sum_I c_I chi^u dlog x_I.
struct LogFormElem {
  LatticeVec degree;
  std::map<IndexSet, std::int64_t> parts;

  friend bool operator==(const LogFormElem&, const LogFormElem&) = default;
};

namespace detail {

inline std::vector<IndexSet> subsets_of_size(std::size_t n, std::size_t k) {
  std::vector<IndexSet> out;
  for_each_subset(n, k, [&](std::span<const std::size_t> s) { out.emplace_back(s.begin(), s.end()); });
  return out;
}

/// Matrix of w -> u-bar wedge w from Lambda^i to Lambda^{i+1}, rows indexed by
/// (i+1)-subsets and columns by i-subsets.
inline IntMatrix wedge_matrix(const LatticeVec& u, std::size_t i, std::int64_t p) {
  const std::size_t n = u.rank();
  const auto src = subsets_of_size(n, i), dst = subsets_of_size(n, i + 1);
  std::map<IndexSet, std::size_t> row_of;
  for (std::size_t r = 0; r < dst.size(); ++r) row_of[dst[r]] = r;
  IntMatrix m(dst.size(), std::vector<std::int64_t>(src.size(), 0));
  for (std::size_t c = 0; c < src.size(); ++c)
    for (std::size_t j = 0; j < n; ++j) {
      if (std::find(src[c].begin(), src[c].end(), j) != src[c].end()) continue;
      IndexSet t = src[c];
      const auto pos = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), j) - t.begin());
      t.insert(t.begin() + static_cast<std::ptrdiff_t>(pos), j);
      const std::int64_t sign = pos % 2 == 0 ? 1 : -1;
      m[row_of.at(t)][c] = mod_floor(sign * u[j], p);
    }
  return m;
}

inline bool is_zero_mod_p(const IntMatrix& m, std::int64_t p) {
  for (const auto& row : m)
    for (auto x : row)
      if (mod_floor(x, p) != 0) return false;
  return true;
}

}  // namespace detail

struct LogComplexCohomology {
  std::vector<std::int64_t> dims;  // h^0 .. h^n
  bool d_squared_zero = true;
};

/// Cohomology of (Lambda^. F_p^n, u-bar wedge) by explicit ranks.
inline LogComplexCohomology graded_log_complex(const LatticeVec& u, std::int64_t p) {
  const std::size_t n = u.rank();
  if (n > 4) throw Unsupported("log complexes implemented for rank <= 4");
  if (!is_prime(p)) throw InputError("log complex needs a prime, got " + std::to_string(p));
  std::vector<IntMatrix> d;
  std::vector<std::size_t> rk;
  for (std::size_t i = 0; i < n; ++i) {
    d.push_back(detail::wedge_matrix(u, i, p));
    rk.push_back(linalg::rank_mod_p(d.back(), p));
  }
  LogComplexCohomology out;
  for (std::size_t i = 0; i + 1 < d.size(); ++i)
    if (!detail::is_zero_mod_p(linalg::multiply(d[i + 1], d[i]), p)) out.d_squared_zero = false;
  for (std::size_t i = 0; i <= n; ++i) {
    const auto dim = binomial(static_cast<int>(n), static_cast<int>(i));
    const auto out_rank = i < n ? rk[i] : 0;
    const auto in_rank = i > 0 ? rk[i - 1] : 0;
    out.dims.push_back(dim - static_cast<std::int64_t>(out_rank + in_rank));
  }
  return out;
}

/// d(chi^u dlog x_I) = chi^u (u-bar wedge dlog x_I).
inline LogFormElem log_differential(const LogFormElem& w, std::int64_t p) {
  LogFormElem out{w.degree, {}};
  const std::size_t n = w.degree.rank();
  for (const auto& [I, c] : w.parts)
    for (std::size_t j = 0; j < n; ++j) {
      if (std::find(I.begin(), I.end(), j) != I.end()) continue;
      IndexSet t = I;
      const auto pos = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), j) - t.begin());
      t.insert(t.begin() + static_cast<std::ptrdiff_t>(pos), j);
      const std::int64_t sign = pos % 2 == 0 ? 1 : -1;
      auto& slot = out.parts[t];
      slot = mod_floor(slot + sign * c * w.degree[j], p);
    }
  std::erase_if(out.parts, [](const auto& kv) { return kv.second == 0; });
  return out;
}

/// Monomial Deligne-Illusie map: chi^v dlog x_I -> chi^{pv} dlog x_I.
inline LogFormElem phi(const LogFormElem& w, std::int64_t p) { return {p * w.degree, w.parts}; }

/// Cartier operator on a cocycle: zero off pM, and on degree pv the
/// differential vanishes so the class is read off coordinatewise.
inline LogFormElem cartier_operator(const LogFormElem& w, std::int64_t p) {
  if (!log_differential(w, p).parts.empty()) throw InputError("Cartier operator applied to a non-cocycle");
  LatticeVec v = LatticeVec::zero(w.degree.rank());
  for (std::size_t j = 0; j < v.rank(); ++j) {
    if (mod_floor(w.degree[j], p) != 0) return {v, {}};
    v[j] = (w.degree[j] - mod_floor(w.degree[j], p)) / p;
  }
  // In degree pv there are no coboundaries, so the class is the form itself.
  std::map<IndexSet, std::int64_t> parts;
  for (const auto& [I, c] : w.parts)
    if (mod_floor(c, p) != 0) parts[I] = mod_floor(c, p);
  return {v, parts};
}

struct QuasiIsoReport {
  bool pass = true;
  std::int64_t nonzero_degrees = 0;
  std::int64_t pm_points = 0;
  std::int64_t forms_checked = 0;
  std::vector<std::string> failures;
};

namespace detail {

inline void for_each_in_cube(std::size_t n, std::int64_t lo, std::int64_t hi, const std::function<void(const LatticeVec&)>& fn) {
  if (lo > hi) return;
  LatticeVec u = LatticeVec::zero(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = lo;
  for (;;) {
    fn(u);
    std::size_t k = n;
    while (k > 0 && u[k - 1] == hi) u[k - 1] = lo, --k;
    if (k == 0) return;
    ++u[k - 1];
  }
}

inline bool in_pm(const LatticeVec& u, std::int64_t p) {
  for (std::size_t i = 0; i < u.rank(); ++i)
    if (mod_floor(u[i], p) != 0) return false;
  return true;
}

inline std::vector<std::int64_t> binomial_row(std::size_t n) {
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i <= n; ++i)
    out.push_back(binomial(static_cast<int>(n), static_cast<int>(i)));
  return out;
}

}  // namespace detail

/// Over the degree box [-half, half]^n: nonzero graded cohomology exactly on
/// pM with dims C(n, i), and C(phi(w)) = w for every monomial log form w with
/// p deg(w) in the box.
inline QuasiIsoReport cartier_quasi_iso_check(std::size_t n, std::int64_t p, std::int64_t half) {
  if (n == 0 || n > 4) throw InputError("chart rank must be in 1..4");
  if (!is_prime(p)) throw InputError("not a prime: " + std::to_string(p));
  if (2 * half + 1 < 2 * p + 1) throw InputError("degree box must have side at least 2p+1");
  QuasiIsoReport rep;
  const auto expected = detail::binomial_row(n);
  detail::for_each_in_cube(n, -half, half, [&](const LatticeVec& u) {
    const auto c = graded_log_complex(u, p);
    const bool pm = detail::in_pm(u, p);
    bool nonzero = false;
    for (auto h : c.dims) nonzero = nonzero || h != 0;
    rep.nonzero_degrees += nonzero;
    rep.pm_points += pm;
    if (!c.d_squared_zero) rep.failures.push_back("d^2 != 0 in degree " + to_string(u));
    if (pm ? c.dims != expected : nonzero) rep.failures.push_back("unexpected cohomology in degree " + to_string(u));
  });
  const std::int64_t vhalf = half / p;
  detail::for_each_in_cube(n, -vhalf, vhalf, [&](const LatticeVec& v) {
    for (std::size_t i = 0; i <= n; ++i)
      for (const auto& I : detail::subsets_of_size(n, i)) {
        const LogFormElem w{v, {{I, 1}}};
        const auto image = phi(w, p);
        ++rep.forms_checked;
        if (!log_differential(image, p).parts.empty())
          rep.failures.push_back("phi image is not closed in degree " + to_string(image.degree));
        else if (cartier_operator(image, p) != w)
          rep.failures.push_back("C(phi(w)) != w in degree " + to_string(v));
      }
  });
  if (rep.nonzero_degrees != rep.pm_points) rep.failures.push_back("nonzero degree count differs from |pM cap box|");
  rep.pass = rep.failures.empty();
  return rep;
}

// ---------------------------------------------------------------------------
// Twisted complexes.

struct HaraDims {
  std::int64_t h0 = 0, h1 = 0;
  friend bool operator==(const HaraDims&, const HaraDims&) = default;
};

/// One X'-degree block of the r-twisted complex on A^1: the exponents
/// pk + i - r, i in [0, p), with d(t^e) = e t^e dt/t.
inline HaraDims hara_block(std::int64_t p, std::int64_t r, std::int64_t k) {
  IntMatrix d(p, std::vector<std::int64_t>(p, 0));
  for (std::int64_t i = 0; i < p; ++i) d[i][i] = mod_floor(p * k + i - r, p);
  const auto rk = static_cast<std::int64_t>(linalg::rank_mod_p(d, p));
  return {p - rk, p - rk};
}

/// (h^0, h^1) of the r-twisted complex; the same in every block.
inline HaraDims hara_complex(std::int64_t p, std::int64_t r) {
  if (!is_prime(p)) throw InputError("not a prime: " + std::to_string(p));
  if (r < 0 || r >= p) throw InputError("twist r must lie in [0, p), got " + std::to_string(r));
  const HaraDims first = hara_block(p, r, 0);
  for (std::int64_t k = -2; k <= 2; ++k)
    if (hara_block(p, r, k) != first) throw InternalError("twisted complex depends on the block");
  return first;
}

struct TwistedReport {
  bool pass = true;
  std::vector<std::int64_t> g;       // p ceil(H) - ceil(pH)
  std::vector<std::int64_t> dims;    // per-block cohomology
  std::vector<std::int64_t> kunneth; // product of one-dimensional factors
  std::vector<std::string> failures;
};

/// G-twisted graded log complex on A^n (n <= 2) with H = sum h_j {x_j = 0}.
/// Block k collects degrees w with w + g in pk + [0, p)^n.
inline TwistedReport twisted_quasi_iso_check(std::int64_t p, const std::vector<Rational>& h) {
  const std::size_t n = h.size();
  if (n == 0 || n > 2) throw InputError("twisted check supports n = 1 or 2");
  if (!is_prime(p)) throw InputError("not a prime: " + std::to_string(p));
  TwistedReport rep;
  for (const auto& x : h) {
    const Integer g = Integer(p) * ceil(x) - ceil(Rational(p) * x);
    if (g < 0 || g >= p) throw InternalError("G coefficient outside [0, p)");
    rep.g.push_back(to_int64(g));
  }

  // Kunneth prediction from the one-dimensional factors.
  std::vector<std::int64_t> pred{1};
  for (auto g : rep.g) {
    const auto f = hara_complex(p, g);
    std::vector<std::int64_t> next(pred.size() + 1, 0);
    for (std::size_t i = 0; i < pred.size(); ++i) {
      next[i] += pred[i] * f.h0;
      next[i + 1] += pred[i] * f.h1;
    }
    pred = next;
  }
  rep.kunneth = pred;

  detail::for_each_in_cube(n, -1, 1, [&](const LatticeVec& k) {
    std::vector<std::int64_t> dims(n + 1, 0);
    detail::for_each_in_cube(n, 0, p - 1, [&](const LatticeVec& i) {
      LatticeVec w = p * k + i;
      for (std::size_t j = 0; j < n; ++j) w[j] -= rep.g[j];
      const auto c = graded_log_complex(w, p);
      if (!c.d_squared_zero) rep.failures.push_back("d^2 != 0 in degree " + to_string(w));
      for (std::size_t t = 0; t <= n; ++t) dims[t] += c.dims[t];
    });
    if (rep.dims.empty()) rep.dims = dims;
    if (dims != rep.kunneth) rep.failures.push_back("block " + to_string(k) + " disagrees with the Kunneth prediction");

    // p k lies in this block exactly when 0 <= g < p.
    bool inside = true;
    for (auto g : rep.g) inside = inside && g >= 0 && g < p;
    if (!inside) {
      rep.failures.push_back("phi_G target outside block " + to_string(k));
      return;
    }
    for (std::size_t t = 0; t <= n; ++t)
      for (const auto& I : detail::subsets_of_size(n, t)) {
        const LogFormElem w{k, {{I, 1}}};
        const auto image = phi(w, p);
        if (!log_differential(image, p).parts.empty()) rep.failures.push_back("phi_G image not closed");
        else if (cartier_operator(image, p) != w) rep.failures.push_back("C_G(phi_G(w)) != w");
      }
  });
  rep.pass = rep.failures.empty();
  return rep;
}

}  // namespace torvan
