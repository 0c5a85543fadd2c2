// Torus-invariant Q-divisors D = sum a_rho D_rho on a fan.
//
// Rounding is coefficientwise. Cartier data are per-maximal-cone vectors
// u(sigma) in M with <u(sigma), v_rho> = -a_rho for rho in sigma; ampleness
// is strict convexity of the resulting support function across every wall,
// tested as <u(sigma), v_rho> > -a_rho for rho outside sigma. Global sections
// of O(D) are the characters of the lattice points of
// P_D = {u : <u, v_rho> >= -a_rho}.
#pragma once

#include "torvan/arith.hpp"
#include "torvan/fan.hpp"
#include "torvan/lattice_geom.hpp"
#include "torvan/linalg.hpp"

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace torvan {

using FanPtr = std::shared_ptr<const Fan>;

inline FanPtr share(Fan f) { return std::make_shared<const Fan>(std::move(f)); }

class TQDivisor {
 public:
  TQDivisor(FanPtr fan, std::vector<Rational> coeffs) : fan_(std::move(fan)), coeffs_(std::move(coeffs)) {
    if (!fan_) throw InputError("divisor without a fan");
    if (coeffs_.size() != fan_->num_rays())
      throw InputError("divisor has " + std::to_string(coeffs_.size()) + " coefficients for " +
                       std::to_string(fan_->num_rays()) + " rays");
  }

  static TQDivisor zero(FanPtr fan) {
    const std::size_t n = fan->num_rays();
    return TQDivisor(std::move(fan), std::vector<Rational>(n, Rational(0)));
  }

  static TQDivisor from_integers(FanPtr fan, const std::vector<std::int64_t>& coeffs) {
    std::vector<Rational> q;
    for (auto c : coeffs) q.emplace_back(c);
    return TQDivisor(std::move(fan), std::move(q));
  }

  const Fan& fan() const { return *fan_; }
  const FanPtr& fan_ptr() const { return fan_; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  const Rational& coeff(std::size_t i) const { return coeffs_.at(i); }
  std::size_t size() const { return coeffs_.size(); }

  bool integral() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const auto& c) { return is_integral(c); });
  }

  /// Coefficients as machine integers; requires integral().
  std::vector<std::int64_t> integer_coeffs() const {
    if (!integral()) throw InputError("divisor is not integral");
    std::vector<std::int64_t> out;
    for (const auto& c : coeffs_) out.push_back(to_int64(boost::multiprecision::numerator(c)));
    return out;
  }

  /// Indices of rays with nonzero coefficient.
  std::vector<std::size_t> support() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      if (coeffs_[i] != 0) out.push_back(i);
    return out;
  }

  friend bool operator==(const TQDivisor& a, const TQDivisor& b) {
    return (a.fan_ == b.fan_ || *a.fan_ == *b.fan_) && a.coeffs_ == b.coeffs_;
  }

 private:
  FanPtr fan_;
  std::vector<Rational> coeffs_;
};

namespace detail {

inline void require_same_fan(const TQDivisor& a, const TQDivisor& b) {
  if (a.fan_ptr() != b.fan_ptr() && a.fan() != b.fan()) throw InputError("divisors live on different fans");
}

template <class F>
TQDivisor map_coeffs(const TQDivisor& d, F&& f) {
  std::vector<Rational> out;
  for (const auto& c : d.coeffs()) out.push_back(f(c));
  return TQDivisor(d.fan_ptr(), std::move(out));
}

}  // namespace detail

inline TQDivisor operator+(const TQDivisor& a, const TQDivisor& b) {
  detail::require_same_fan(a, b);
  std::vector<Rational> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a.coeff(i) + b.coeff(i));
  return TQDivisor(a.fan_ptr(), std::move(out));
}

inline TQDivisor operator*(const Rational& k, const TQDivisor& d) {
  return detail::map_coeffs(d, [&](const Rational& c) { return k * c; });
}

inline TQDivisor operator-(const TQDivisor& d) { return Rational(-1) * d; }
inline TQDivisor operator-(const TQDivisor& a, const TQDivisor& b) { return a + (-b); }

inline TQDivisor round_up(const TQDivisor& d) {
  return detail::map_coeffs(d, [](const Rational& c) { return Rational(ceil(c)); });
}
inline TQDivisor round_down(const TQDivisor& d) {
  return detail::map_coeffs(d, [](const Rational& c) { return Rational(floor(c)); });
}
inline TQDivisor frac(const TQDivisor& d) {
  return detail::map_coeffs(d, [](const Rational& c) { return torvan::frac(c); });
}

/// D + div(chi^u), where div(chi^u) = sum <u, v_rho> D_rho.
inline TQDivisor linear_shift(const TQDivisor& d, const LatticeVec& u) {
  std::vector<Rational> out;
  for (std::size_t i = 0; i < d.size(); ++i) out.push_back(d.coeff(i) + pairing(u, d.fan().ray(i)));
  return TQDivisor(d.fan_ptr(), std::move(out));
}

inline TQDivisor frobenius_multiple(const TQDivisor& d, std::int64_t p) { return Rational(p) * d; }

/// K_X = -sum_rho D_rho.
inline TQDivisor canonical_divisor(FanPtr fan) {
  const std::size_t n = fan->num_rays();
  return TQDivisor(std::move(fan), std::vector<Rational>(n, Rational(-1)));
}

/// p * ceil(H) - ceil(p H); each coefficient lies in [0, p).
inline TQDivisor frobenius_twist(const TQDivisor& h, std::int64_t p) {
  return frobenius_multiple(round_up(h), p) - round_up(frobenius_multiple(h, p));
}

struct CartierData {
  std::vector<LatticeVec> u;  // one per maximal cone, in fan order
};

struct NotCartier {
  std::size_t cone;                              // offending maximal cone
  std::optional<std::vector<Rational>> witness;  // rational solution, if one exists
  std::string reason;
};

struct CartierResult {
  std::optional<CartierData> data;
  std::optional<NotCartier> obstruction;
  bool cartier() const { return data.has_value(); }
};

namespace detail {

/// Integral solution of A x = b via Smith normal form, if one exists.
inline std::optional<std::vector<std::int64_t>> solve_integral(const IntMatrix& a, const std::vector<std::int64_t>& b,
                                                               std::size_t cols) {
  if (a.empty()) return std::vector<std::int64_t>(cols, 0);
  const auto snf = smith_normal_form(a);
  std::vector<std::int64_t> ub(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < a.size(); ++k) ub[i] = checked_add(ub[i], checked_mul(snf.left[i][k], b[k]));
  std::vector<std::int64_t> y(cols, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::int64_t d = i < snf.divisors.size() ? snf.divisors[i] : 0;
    if (d == 0) {
      if (ub[i] != 0) return std::nullopt;
    } else {
      if (ub[i] % d != 0) return std::nullopt;
      y[i] = ub[i] / d;
    }
  }
  std::vector<std::int64_t> x(cols, 0);
  for (std::size_t i = 0; i < cols; ++i)
    for (std::size_t k = 0; k < cols; ++k) x[i] = checked_add(x[i], checked_mul(snf.right[i][k], y[k]));
  return x;
}

/// Per-cone rational solutions of <u, v_rho> = -a_rho; nullopt entries mark
/// inconsistent cones.
inline std::vector<std::optional<std::vector<Rational>>> rational_cartier(const TQDivisor& d) {
  const Fan& f = d.fan();
  std::vector<std::optional<std::vector<Rational>>> out;
  for (const auto& cone : f.max_cones()) {
    RatMatrix a;
    std::vector<Rational> b;
    for (auto r : cone) {
      a.push_back(linalg::to_rational(IntMatrix{f.ray(r).coords()})[0]);
      b.push_back(-d.coeff(r));
    }
    out.push_back(linalg::solve(a, b, f.rank()));
  }
  return out;
}

}  // namespace detail

inline CartierResult cartier_data(const TQDivisor& d) {
  if (!d.integral()) throw InputError("cartier_data needs an integral divisor");
  const Fan& f = d.fan();
  const auto coeffs = d.integer_coeffs();
  const auto rational = detail::rational_cartier(d);
  CartierData data;
  for (std::size_t c = 0; c < f.max_cones().size(); ++c) {
    IntMatrix a;
    std::vector<std::int64_t> b;
    for (auto r : f.max_cones()[c]) {
      a.push_back(f.ray(r).coords());
      b.push_back(-coeffs[r]);
    }
    auto sol = detail::solve_integral(a, b, f.rank());
    if (!sol) {
      NotCartier nc{c, rational[c],
                    rational[c] ? "local equation is not integral on cone " + std::to_string(c)
                                : "inconsistent local equations on cone " + std::to_string(c)};
      return {std::nullopt, std::move(nc)};
    }
    data.u.emplace_back(std::move(*sol));
  }
  return {std::move(data), std::nullopt};
}

struct AmplenessReport {
  bool ample = false;
  bool nef = false;
  std::int64_t clearing_multiple = 1;  // m with mD Cartier
  std::optional<std::pair<std::size_t, std::size_t>> failing_wall;  // (cone, ray) of first non-strict wall
};

/// Wall inequalities for a Q-Cartier divisor on a complete fan.
inline AmplenessReport ampleness(const TQDivisor& d) {
  const Fan& f = d.fan();
  const auto rational = detail::rational_cartier(d);
  Integer m = 1;
  for (std::size_t c = 0; c < rational.size(); ++c) {
    if (!rational[c]) throw InputError("not Q-Cartier: inconsistent local equations on cone " + std::to_string(c));
    for (const auto& x : *rational[c]) m = lcm(m, boost::multiprecision::denominator(x));
  }
  for (const auto& a : d.coeffs()) m = lcm(m, boost::multiprecision::denominator(a));
  const TQDivisor md = Rational(m) * d;
  const auto cd = cartier_data(md);
  if (!cd.cartier()) throw InputError("not Q-Cartier: " + cd.obstruction->reason);
  const auto coeffs = md.integer_coeffs();

  AmplenessReport rep;
  rep.clearing_multiple = to_int64(m);
  rep.ample = true;
  rep.nef = true;
  for (std::size_t c = 0; c < f.max_cones().size(); ++c) {
    const auto& cone = f.max_cones()[c];
    for (std::size_t r = 0; r < f.num_rays(); ++r) {
      if (std::find(cone.begin(), cone.end(), r) != cone.end()) continue;
      const std::int64_t lhs = pairing(cd.data->u[c], f.ray(r));
      if (lhs <= -coeffs[r]) {
        rep.ample = false;
        if (!rep.failing_wall) rep.failing_wall = std::pair{c, r};
      }
      if (lhs < -coeffs[r]) rep.nef = false;
    }
  }
  return rep;
}

inline bool is_ample(const TQDivisor& d) { return ampleness(d).ample; }
inline bool is_nef(const TQDivisor& d) { return ampleness(d).nef; }

/// P_D = {u : <u, v_rho> >= -a_rho}.
inline RationalPolyhedron polytope_PD(const TQDivisor& d) {
  std::vector<RationalPolyhedron::Inequality> ineqs;
  for (std::size_t i = 0; i < d.size(); ++i) ineqs.push_back({d.fan().ray(i), -d.coeff(i)});
  return RationalPolyhedron(d.fan().rank(), std::move(ineqs));
}

struct GlobalSections {
  std::int64_t count = 0;
  std::vector<LatticeVec> monomials;  // exponents u of chi^u, lexicographic
};

/// Lattice points of P_{floor D}: a basis of H^0(X, O(floor D)).
inline GlobalSections h0_lattice(const TQDivisor& d) {
  auto pts = lattice_points(polytope_PD(round_down(d)));
  GlobalSections out;
  out.count = static_cast<std::int64_t>(pts.size());
  out.monomials = std::move(pts);
  return out;
}

inline std::int64_t h0_count(const TQDivisor& d) { return count_lattice_points(polytope_PD(round_down(d))); }

/// Uniform integer in [lo, hi] from a raw 64-bit engine; unlike the standard
/// distributions this is identical across standard library implementations.
inline std::int64_t draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(rng() % span);
}

/// Random integral ample divisor on a complete fan, certified by the wall
/// inequalities. Throws if none is found in `attempts` draws.
inline TQDivisor sample_ample_integral(const FanPtr& fan, std::mt19937_64& rng, std::int64_t max_coeff = 3,
                                       int attempts = 2000) {
  for (int t = 0; t < attempts; ++t) {
    std::vector<std::int64_t> c;
    for (std::size_t i = 0; i < fan->num_rays(); ++i) c.push_back(draw(rng, -1, max_coeff));
    auto d = TQDivisor::from_integers(fan, c);
    if (is_ample(d)) return d;
  }
  throw InputError("no ample divisor found; fan may not be projective");
}

/// Random ample Cartier divisor: an ample integral divisor times the
/// smallest multiple that makes it Cartier.
inline TQDivisor sample_ample_cartier(const FanPtr& fan, std::mt19937_64& rng) {
  const TQDivisor a = sample_ample_integral(fan, rng);
  for (std::int64_t k = 1; k <= 64; ++k) {
    const TQDivisor ka = Rational(k) * a;
    if (cartier_data(ka).cartier()) return ka;
  }
  throw InputError("no Cartier multiple found");
}

/// Ample Q-divisor H = (k A + delta) / q with A integral ample, q <= max_den,
/// delta a small integral perturbation; re-certified ample.
inline TQDivisor sample_ample_q_divisor(const FanPtr& fan, std::mt19937_64& rng, std::int64_t max_den = 6,
                                        int attempts = 2000) {
  for (int t = 0; t < attempts; ++t) {
    const TQDivisor a = sample_ample_integral(fan, rng);
    const std::int64_t q = draw(rng, 1, max_den);
    const std::int64_t k = draw(rng, 1, 2);
    std::vector<Rational> coeffs;
    for (std::size_t i = 0; i < fan->num_rays(); ++i)
      coeffs.push_back((Rational(k) * a.coeff(i) + draw(rng, -1, 1)) / q);
    TQDivisor h(fan, std::move(coeffs));
    if (is_ample(h)) return h;
  }
  throw InputError("no ample Q-divisor found");
}

}  // namespace torvan
