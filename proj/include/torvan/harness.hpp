// Theorem-level verification suites.
//
// Each check_* function gates on the hypotheses of the statement it verifies
// and refuses (status "refused") when they are unmet. A failing check means
// the implementation disagrees with a proved statement, and the witness
// carries enough data to re-run that instance on its own.
#pragma once

#include "torvan/cohomology.hpp"
#include "torvan/divisors.hpp"
#include "torvan/fan.hpp"
#include "torvan/frobenius.hpp"
#include "torvan/io.hpp"
#include "torvan/witt.hpp"

#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace torvan {

struct Check {
  std::string id;
  bool pass = true;
  Json witness = Json::object();
};

struct VerificationReport {
  std::string suite;
  std::string fan_fingerprint;
  Json params = Json::object();
  std::vector<Check> checks;
  std::optional<std::string> refusal;
  double seconds = 0;
  std::map<std::string, double> suite_seconds;  // run_suite only

  bool passed() const {
    if (refusal) return false;
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  std::string status() const { return refusal ? "refused" : (passed() ? "pass" : "fail"); }
  /// 0 pass, 1 violation, 2 hypothesis unmet.
  int exit_code() const { return refusal ? 2 : (passed() ? 0 : 1); }
};

inline Json report_to_json(const VerificationReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back(Json{{"id", c.id}, {"status", c.pass ? "pass" : "fail"}, {"witness", c.witness}});
  Json j{{"suite", r.suite}, {"fan_fingerprint", r.fan_fingerprint}, {"params", r.params}, {"checks", checks},
         {"status", r.status()}};
  if (r.refusal) j["refusal"] = *r.refusal;
  j["timing"] = Json{{"seconds", r.seconds}};
  if (!r.suite_seconds.empty()) j["timing"]["per_suite"] = r.suite_seconds;
  return j;
}

inline std::string report_to_text(const VerificationReport& r) {
  std::ostringstream out;
  out << r.suite << "  fan " << r.fan_fingerprint << "  " << r.status() << "\n";
  if (r.refusal) out << "  refused: " << *r.refusal << "\n";
  std::size_t width = 0;
  for (const auto& c : r.checks) width = std::max(width, c.id.size());
  for (const auto& c : r.checks) {
    out << "  " << (c.pass ? "PASS " : "FAIL ") << c.id << std::string(width - c.id.size() + 2, ' ');
    std::string w = c.witness.dump();
    if (w.size() > 160) w = w.substr(0, 157) + "...";
    out << w << "\n";
  }
  return out.str();
}

namespace detail {

inline Json coeffs_json(const TQDivisor& d) { return divisor_to_json(d)["coeffs"]; }

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline VerificationReport start_report(const std::string& suite, const Fan& f, std::int64_t p) {
  VerificationReport r;
  r.suite = suite;
  r.fan_fingerprint = fan_fingerprint(f);
  r.params["prime"] = p;
  return r;
}

inline VerificationReport refuse(VerificationReport r, const std::string& why, const Stopwatch& clock) {
  r.refusal = "hypothesis unmet: " + why;
  r.seconds = clock.seconds();
  return r;
}

/// Completeness gate; fans with lower-dimensional maximal cones are not complete.
inline std::optional<std::string> complete_fan_gate(const Fan& f) {
  try {
    if (!is_complete(f)) return "fan is not complete";
  } catch (const InputError&) {
    return "fan is not complete (lower-dimensional maximal cones)";
  }
  return std::nullopt;
}

inline CohomologyOptions quiet_options(std::optional<std::size_t> max_degree = std::nullopt) {
  CohomologyOptions o;
  o.keep_support = false;
  o.check_h0 = false;
  o.max_degree = max_degree;
  return o;
}

/// Degrees carrying h^j, for witnesses of a failed vanishing.
inline Json offending_degrees(const TQDivisor& d, std::int64_t p, std::size_t j) {
  CohomologyOptions o;
  o.check_h0 = false;
  const auto t = cohomology_table(d, p, o);
  Json out = Json::array();
  for (const auto& [m, h] : t.support.at(j)) {
    out.push_back(Json{{"degree", m.coords()}, {"dim", h}});
    if (out.size() >= 8) break;
  }
  return out;
}

inline Check h0_dual_engine_check(const std::string& id, const TQDivisor& d, std::int64_t table_h0) {
  const auto lattice = h0_count(d);
  return {id, lattice == table_h0, Json{{"graded_h0", table_h0}, {"lattice_points", lattice}}};
}

inline std::vector<std::int64_t> binomials(std::size_t n) {
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i <= n; ++i) out.push_back(binomial(static_cast<int>(n), static_cast<int>(i)));
  return out;
}

}  // namespace detail

/// Bott vanishing along the full boundary D: Omega^i(log D) is free of rank
/// C(n, i), so h^j(Omega^i(log D) (x) L) = C(n, i) h^j(L) must vanish for j > 0.
inline VerificationReport check_bott(const TQDivisor& l, std::int64_t p) {
  const detail::Stopwatch clock;
  const Fan& f = l.fan();
  auto rep = detail::start_report("check-bott", f, p);
  rep.params["divisor"] = detail::coeffs_json(l);
  if (auto why = detail::complete_fan_gate(f)) return detail::refuse(rep, *why, clock);
  if (!l.integral()) return detail::refuse(rep, "L must be an integral divisor", clock);
  if (!cartier_data(l).cartier()) return detail::refuse(rep, "L is not Cartier, so O(L) is not invertible", clock);
  if (!is_ample(l)) return detail::refuse(rep, "L is not ample", clock);

  const std::size_t n = f.rank();
  const auto t = cohomology_table(l, p, detail::quiet_options());
  rep.checks.push_back(detail::h0_dual_engine_check("bott.h0_dual_engine", l, t.dims[0]));
  const auto ranks = detail::binomials(n);
  for (std::size_t i = 0; i <= n; ++i) {
    Check c{"bott.log_forms.i" + std::to_string(i), true, Json::object()};
    std::vector<std::int64_t> dims;
    for (std::size_t j = 0; j <= n; ++j) dims.push_back(ranks[i] * t.dims[j]);
    for (std::size_t j = 1; j <= n; ++j)
      if (dims[j] != 0) {
        c.pass = false;
        c.witness["message"] = "implementation violates Bott vanishing: h^" + std::to_string(j) + " = " +
                               std::to_string(dims[j]);
        c.witness["degrees"] = detail::offending_degrees(l, p, j);
        break;
      }
    c.witness["rank"] = ranks[i];
    c.witness["dims"] = dims;
    rep.checks.push_back(std::move(c));
  }
  rep.seconds = clock.seconds();
  return rep;
}

/// Kawamata-Viehweg: h^i(K + ceil(H)) = 0 for i > 0 and H an ample Q-divisor;
/// the dual route h^j(-ceil(H)) = 0 for j < n is recorded alongside.
inline VerificationReport check_kv(const TQDivisor& h, std::int64_t p) {
  const detail::Stopwatch clock;
  const Fan& f = h.fan();
  auto rep = detail::start_report("check-kv", f, p);
  rep.params["divisor"] = detail::coeffs_json(h);
  if (auto why = detail::complete_fan_gate(f)) return detail::refuse(rep, *why, clock);
  if (!is_simplicial(f)) return detail::refuse(rep, "fan is not simplicial, so H need not be Q-Cartier", clock);
  try {
    if (!is_ample(h)) return detail::refuse(rep, "H is not ample", clock);
  } catch (const InputError& e) {
    return detail::refuse(rep, std::string("H is ") + e.what(), clock);
  }

  const std::size_t n = f.rank();
  const auto d = canonical_divisor(h.fan_ptr()) + round_up(h);
  const auto neg = -round_up(h);
  const auto t = cohomology_table(d, p, detail::quiet_options());
  const auto u = cohomology_table(neg, p, detail::quiet_options());
  rep.params["k_plus_ceil_h"] = detail::coeffs_json(d);
  rep.checks.push_back(detail::h0_dual_engine_check("kv.h0_dual_engine", d, t.dims[0]));

  Check van{"kv.vanishing", true, Json{{"dims", t.dims}}};
  for (std::size_t i = 1; i <= n && van.pass; ++i)
    if (t.dims[i] != 0) {
      van.pass = false;
      van.witness["message"] = "implementation violates Kawamata-Viehweg vanishing: h^" + std::to_string(i) + " = " +
                               std::to_string(t.dims[i]);
      van.witness["degrees"] = detail::offending_degrees(d, p, i);
    }
  rep.checks.push_back(std::move(van));

  Check dual{"kv.dual_vanishing", true, Json{{"dims", u.dims}}};
  for (std::size_t j = 0; j < n; ++j)
    if (u.dims[j] != 0) {
      dual.pass = false;
      dual.witness["message"] = "implementation violates vanishing of h^" + std::to_string(j) + "(-ceil(H))";
    }
  rep.checks.push_back(std::move(dual));

  Check serre{"kv.serre_duality", true, Json::object()};
  for (std::size_t i = 0; i <= n; ++i)
    if (t.dims[i] != u.dims[n - i]) serre.pass = false;
  serre.witness["lhs"] = t.dims;
  serre.witness["rhs_reversed"] = std::vector<std::int64_t>(u.dims.rbegin(), u.dims.rend());
  if (!serre.pass) serre.witness["message"] = "implementation violates Serre duality";
  rep.checks.push_back(std::move(serre));
  rep.seconds = clock.seconds();
  return rep;
}

/// Injections H^j(-ceil(H)) -> H^j(-ceil(p^r H)) for j < n, checked as the
/// dimension chain being nondecreasing in r.
inline VerificationReport check_injection(const TQDivisor& h, std::int64_t p, int r_max = 3) {
  const detail::Stopwatch clock;
  const Fan& f = h.fan();
  auto rep = detail::start_report("check-injection", f, p);
  rep.params["divisor"] = detail::coeffs_json(h);
  rep.params["r_max"] = r_max;
  if (r_max < 1 || r_max > 6) throw InputError("r_max must be in 1..6");
  if (auto why = detail::complete_fan_gate(f)) return detail::refuse(rep, *why, clock);
  try {
    if (!is_ample(h)) return detail::refuse(rep, "H is not ample", clock);
  } catch (const InputError& e) {
    return detail::refuse(rep, std::string("H is ") + e.what(), clock);
  }

  const std::size_t n = f.rank();
  std::vector<std::vector<std::int64_t>> chain;
  Integer pr = 1;
  for (int r = 0; r <= r_max; ++r) {
    const auto d = -round_up(Rational(pr) * h);
    auto dims = cohomology_table(d, p, detail::quiet_options(n - 1)).dims;
    dims.resize(n);
    chain.push_back(dims);
    pr *= p;
  }
  for (int r = 1; r <= r_max; ++r) {
    Check c{"injection.r" + std::to_string(r), true, Json{{"before", chain[r - 1]}, {"after", chain[r]}}};
    for (std::size_t j = 0; j < n; ++j)
      if (chain[r - 1][j] > chain[r][j]) {
        c.pass = false;
        c.witness["message"] = "implementation violates the injection h^" + std::to_string(j) + "(-ceil(p^" +
                               std::to_string(r - 1) + " H)) -> h^" + std::to_string(j) + "(-ceil(p^" +
                               std::to_string(r) + " H))";
      }
    rep.checks.push_back(std::move(c));
  }
  rep.seconds = clock.seconds();
  return rep;
}

/// Hodge to de Rham degeneration along the full boundary: E1^{i,j} =
/// C(n, i) h^j(O) concentrated in row j = 0, and d1 on Lambda^i M vanishes.
inline VerificationReport check_hodge(const FanPtr& fan, std::int64_t p) {
  const detail::Stopwatch clock;
  const Fan& f = *fan;
  auto rep = detail::start_report("check-hodge", f, p);
  if (auto why = detail::complete_fan_gate(f)) return detail::refuse(rep, *why, clock);
  const std::size_t n = f.rank();
  const auto o = TQDivisor::zero(fan);
  const auto t = cohomology_table(o, p, detail::quiet_options());
  const auto ranks = detail::binomials(n);

  std::vector<std::vector<std::int64_t>> e1(n + 1, std::vector<std::int64_t>(n + 1, 0));
  for (std::size_t i = 0; i <= n; ++i)
    for (std::size_t j = 0; j <= n; ++j) e1[i][j] = ranks[i] * t.dims[j];

  Check rows{"hodge.row_concentration", t.dims[0] == 1, Json{{"h_O", t.dims}, {"e1_dims", e1}}};
  for (std::size_t j = 1; j <= n; ++j) rows.pass = rows.pass && t.dims[j] == 0;
  if (!rows.pass) rows.witness["message"] = "implementation violates h^j(O) = 0 for j > 0";
  rep.checks.push_back(std::move(rows));

  // d1 on row 0 is d on global log forms, the degree-0 graded piece.
  const LatticeVec zero = LatticeVec::zero(n);
  Check d1{"hodge.d1_zero", true, Json::object()};
  std::vector<std::size_t> d1_ranks;
  for (std::size_t i = 0; i < n; ++i) {
    const auto m = detail::wedge_matrix(zero, i, p);
    d1_ranks.push_back(linalg::rank_mod_p(m, p));
    if (!detail::is_zero_mod_p(m, p)) d1.pass = false;
  }
  const auto row = graded_log_complex(zero, p);
  d1.pass = d1.pass && row.dims == ranks;
  d1.witness["d1_ranks"] = d1_ranks;
  d1.witness["row_cohomology"] = row.dims;
  if (!d1.pass) d1.witness["message"] = "implementation violates d(dlog x_I) = 0";
  rep.checks.push_back(std::move(d1));

  // E_inf from E1 via the d1 ranks; higher differentials leave row 0 for negative rows.
  std::vector<std::vector<std::int64_t>> einf = e1;
  for (std::size_t i = 0; i <= n; ++i) {
    const auto out = i < n ? static_cast<std::int64_t>(d1_ranks[i]) : 0;
    const auto in = i > 0 ? static_cast<std::int64_t>(d1_ranks[i - 1]) : 0;
    einf[i][0] -= out + in;
  }
  std::int64_t tot1 = 0, totinf = 0;
  for (std::size_t i = 0; i <= n; ++i)
    for (std::size_t j = 0; j <= n; ++j) tot1 += e1[i][j], totinf += einf[i][j];
  Check deg{"hodge.e1_degeneration", tot1 == totinf && e1 == einf,
            Json{{"e1_dims", e1}, {"einf_dims", einf}, {"e1_total", tot1}, {"einf_total", totinf}}};
  if (!deg.pass) deg.witness["message"] = "implementation violates E1 degeneration";
  rep.checks.push_back(std::move(deg));
  rep.seconds = clock.seconds();
  return rep;
}

/// Global sections of O(D) over W_2 and over F_p are free on the same lattice
/// points, so reduction is surjective; spot-checked with random sections.
inline VerificationReport check_strong_lift(const TQDivisor& d, std::int64_t p, std::uint64_t seed, int samples = 10) {
  const detail::Stopwatch clock;
  const Fan& f = d.fan();
  auto rep = detail::start_report("check-lift", f, p);
  rep.params["divisor"] = detail::coeffs_json(d);
  rep.params["seed"] = seed;
  rep.params["samples"] = samples;
  if (!is_prime(p)) throw InputError("not a prime: " + std::to_string(p));
  if (auto why = detail::complete_fan_gate(f)) return detail::refuse(rep, *why, clock);
  if (!d.integral()) return detail::refuse(rep, "D must be an integral divisor", clock);

  // Over F_p: lattice points of P_D. Over W_2: degrees with an empty complex,
  // i.e. characters regular on every chart, from the graded engine.
  const auto fp_basis = h0_lattice(d).monomials;
  CohomologyOptions o;
  o.engine = CohomologyEngine::points;
  o.check_h0 = false;
  o.max_degree = 0;
  const auto graded = cohomology_table(d, p, o);
  std::vector<LatticeVec> w2_basis;
  for (const auto& [m, h] : graded.support[0]) w2_basis.push_back(m);

  Check basis{"lift.basis_equal", fp_basis == w2_basis,
              Json{{"fp_basis_size", fp_basis.size()}, {"w2_basis_size", w2_basis.size()}}};
  if (fp_basis.empty()) basis.witness["vacuous"] = true;
  if (!basis.pass) basis.witness["message"] = "implementation violates equality of the section bases";
  rep.checks.push_back(std::move(basis));

  std::mt19937_64 rng(seed);
  const std::set<LatticeVec> fp_set(fp_basis.begin(), fp_basis.end());
  int ok = 0;
  for (int s = 0; s < samples && !fp_basis.empty(); ++s) {
    // A random F_p section, a W_2 lift of it, and the reduction back.
    std::map<LatticeVec, std::int64_t> section;
    std::map<LatticeVec, WittElem> lifted;
    for (const auto& u : fp_basis) {
      const auto c = draw(rng, 0, p - 1);
      if (c != 0) section[u] = c;
      const WittElem w(p, c, draw(rng, 0, p - 1));
      if (w != WittElem(p)) lifted.emplace(u, w);
    }
    std::map<LatticeVec, std::int64_t> reduced;
    bool inside = true;
    for (const auto& [u, w] : lifted) {
      inside = inside && fp_set.contains(u);
      if (witt_pr1(w) != 0) reduced[u] = witt_pr1(w);
    }
    ok += inside && reduced == section;
  }
  const int expected = fp_basis.empty() ? 0 : samples;
  Check surj{"lift.reduction_surjective", ok == expected, Json{{"spot_checks", expected}, {"passed", ok}}};
  if (!surj.pass) surj.witness["message"] = "implementation violates surjectivity of reduction on sections";
  rep.checks.push_back(std::move(surj));

  // Compatibility of the monomial lifting with D on every chart, when D is
  // effective and Cartier.
  const bool effective =
      std::all_of(d.coeffs().begin(), d.coeffs().end(), [](const Rational& c) { return c >= 0; });
  if (effective && cartier_data(d).cartier()) {
    Check comp{"lift.frobenius_compatible", true, Json::object()};
    for (std::size_t k = 0; k < f.max_cones().size(); ++k)
      if (!divisor_compatibility(d, k, p).compatible) {
        comp.pass = false;
        comp.witness["cone"] = k;
        comp.witness["message"] = "implementation violates compatibility of the monomial lifting with D";
        break;
      }
    comp.witness["charts"] = f.max_cones().size();
    rep.checks.push_back(std::move(comp));
  }
  rep.seconds = clock.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// Suites over the catalog.

struct SuiteConfig {
  std::vector<std::string> catalog;  // names from standard_catalog(); empty = all
  std::vector<std::int64_t> primes{2, 3, 5};
  std::uint64_t seed = 42;
  int samples = 100;
  unsigned threads = 1;
  std::vector<std::string> suites{"bott", "kv", "injection", "hodge", "lift"};
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for one sampled instance; independent of the prime so that the same
/// divisors are tested in every characteristic.
inline std::uint64_t instance_seed(std::uint64_t seed, const std::string& key) {
  return splitmix64(seed ^ std::stoull(fnv1a_hex(key), nullptr, 16));
}

struct Instance {
  std::string suite, fan;
  std::int64_t p;
  int index;
  std::function<VerificationReport()> run;
};

inline bool wants(const SuiteConfig& c, const std::string& s) {
  return std::find(c.suites.begin(), c.suites.end(), s) != c.suites.end();
}

inline Json failure_summary(const VerificationReport& r) {
  Json j{{"params", r.params}, {"status", r.status()}};
  if (r.refusal) j["refusal"] = *r.refusal;
  for (const auto& c : r.checks)
    if (!c.pass) {
      j["check"] = c.id;
      j["witness"] = c.witness;
      break;
    }
  return j;
}

}  // namespace detail

/// Runs the selected suites over catalog x primes x sampled divisors. The
/// aggregate has one check per (suite, fan, prime) plus prime-independence
/// checks; ordering and content depend only on the config.
inline VerificationReport run_suite(const SuiteConfig& config) {
  const detail::Stopwatch clock;
  for (auto p : config.primes)
    if (!is_prime(p)) throw InputError("not a prime: " + std::to_string(p));
  if (config.samples < 1) throw InputError("samples must be positive");

  std::vector<NamedFan> fans;
  const auto all = standard_catalog();
  if (config.catalog.empty()) {
    fans = all;
  } else {
    for (const auto& name : config.catalog) fans.push_back({name, catalog_fan(name)});
  }

  std::vector<detail::Instance> instances;
  std::string fingerprints;
  for (const auto& nf : fans) {
    const auto fan = share(nf.fan);
    fingerprints += fan_fingerprint(nf.fan);
    const bool kv_ok = nf.fan.rank() <= 3 && is_simplicial(nf.fan);
    const int lift_samples = std::max(1, config.samples / 10);
    for (auto p : config.primes) {
      if (detail::wants(config, "hodge"))
        instances.push_back({"hodge", nf.name, p, 0, [fan, p] { return check_hodge(fan, p); }});
      for (int i = 0; i < config.samples && detail::wants(config, "bott"); ++i) {
        const auto s = detail::instance_seed(config.seed, nf.name + "/bott/" + std::to_string(i));
        instances.push_back({"bott", nf.name, p, i, [fan, p, s] {
                               std::mt19937_64 rng(s);
                               return check_bott(sample_ample_cartier(fan, rng), p);
                             }});
      }
      for (int i = 0; i < config.samples && kv_ok; ++i) {
        const auto s = detail::instance_seed(config.seed, nf.name + "/kv/" + std::to_string(i));
        if (detail::wants(config, "kv"))
          instances.push_back({"kv", nf.name, p, i, [fan, p, s] {
                                 std::mt19937_64 rng(s);
                                 return check_kv(sample_ample_q_divisor(fan, rng), p);
                               }});
        if (detail::wants(config, "injection"))
          instances.push_back({"injection", nf.name, p, i, [fan, p, s] {
                                 std::mt19937_64 rng(s);
                                 return check_injection(sample_ample_q_divisor(fan, rng), p);
                               }});
      }
      for (int i = 0; i < lift_samples && detail::wants(config, "lift"); ++i) {
        const auto s = detail::instance_seed(config.seed, nf.name + "/lift/" + std::to_string(i));
        instances.push_back({"lift", nf.name, p, i, [fan, p, s] {
                               std::mt19937_64 rng(s);
                               std::vector<std::int64_t> c;
                               for (std::size_t r = 0; r < fan->num_rays(); ++r) c.push_back(draw(rng, 0, 3));
                               return check_strong_lift(TQDivisor::from_integers(fan, c), p, rng(), 10);
                             }});
      }
    }
  }

  // Worker pool over instances; results land in instance order.
  std::vector<VerificationReport> results(instances.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < instances.size();) {
      try {
        results[k] = instances[k].run();
      } catch (const std::exception& e) {
        results[k].suite = instances[k].suite;
        results[k].checks.push_back({"exception", false, Json{{"message", e.what()}}});
      }
    }
  };
  const unsigned threads = std::max(1u, config.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  VerificationReport rep;
  rep.suite = "suite";
  rep.fan_fingerprint = fnv1a_hex(fingerprints);
  Json names = Json::array();
  for (const auto& nf : fans) names.push_back(nf.name);
  rep.params = Json{{"catalog", names},   {"primes", config.primes}, {"seed", config.seed},
                    {"samples", config.samples}, {"suites", config.suites}};

  // (suite, fan, prime) -> aggregate check, in first-seen order.
  std::vector<std::string> order;
  std::map<std::string, Check> agg;
  std::map<std::string, int> counts;
  // (suite, fan, index) -> dims per prime, for prime independence.
  std::map<std::string, std::map<std::int64_t, Json>> by_prime;
  std::vector<std::string> by_prime_order;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    const auto& in = instances[k];
    const auto& r = results[k];
    rep.suite_seconds[in.suite] += r.seconds;
    const std::string id = in.suite + "/" + in.fan + "/p=" + std::to_string(in.p);
    if (!agg.contains(id)) {
      order.push_back(id);
      agg[id] = Check{id, true, Json{{"instances", 0}, {"failed", 0}}};
    }
    auto& c = agg[id];
    c.witness["instances"] = c.witness["instances"].get<int>() + 1;
    if (!r.passed()) {
      c.witness["failed"] = c.witness["failed"].get<int>() + 1;
      if (c.pass) c.witness["first_failure"] = detail::failure_summary(r);
      c.pass = false;
    }
    if (in.suite == "kv" || in.suite == "bott") {
      Json dims = Json::array();
      for (const auto& ch : r.checks)
        if (ch.witness.contains("dims")) dims.push_back(ch.witness["dims"]);
      const std::string key = in.suite + "/" + in.fan;
      if (!by_prime.contains(key)) by_prime_order.push_back(key);
      by_prime[key][in.p].push_back(dims);
    }
  }
  for (const auto& id : order) rep.checks.push_back(agg[id]);
  for (const auto& key : by_prime_order) {
    const auto& per_prime = by_prime[key];
    bool same = true;
    for (const auto& [p, dims] : per_prime) same = same && dims == per_prime.begin()->second;
    Check c{key + "/prime_independence", same, Json{{"primes", per_prime.size()}}};
    if (!same) c.witness["message"] = "dimensions differ between primes";
    rep.checks.push_back(std::move(c));
  }
  rep.seconds = clock.seconds();
  return rep;
}

}  // namespace torvan
