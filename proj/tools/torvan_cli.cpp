// torvan: command-line front end for the verification suites.
//
//   torvan check-kv --fan p112.json --divisor h.json --prime 5
//   torvan suite --catalog all --primes 2,3,5 --seed 42 --samples 100 --report out.json
//
// Exit status: 0 all checks pass, 1 a check failed, 2 invalid input or unmet hypothesis.
#include "torvan/harness.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using namespace torvan;

struct Options {
  std::string fan_path, divisor_path, report_path, format = "text";
  std::int64_t prime = 2;
  std::uint64_t seed = 42;
  int samples = 10;
  int r_max = 3;
  std::string catalog = "all";
  std::vector<std::int64_t> primes{2, 3, 5};
  std::vector<std::string> suites;
  unsigned threads = 1;
};

std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

FanPtr load_fan(const Options& o) {
  if (o.fan_path.empty()) throw InputError("--fan is required");
  return share(fan_from_json(read_json_file(o.fan_path)));
}

TQDivisor load_divisor(const Options& o, const FanPtr& fan) {
  if (o.divisor_path.empty()) throw InputError("--divisor is required");
  return divisor_from_json(read_json_file(o.divisor_path), fan);
}

void require_prime(std::int64_t p) {
  if (!is_prime(p)) throw InputError("--prime must be prime, got " + std::to_string(p));
}

int emit(const VerificationReport& r, const Options& o) {
  const std::string json = report_to_json(r).dump(2) + "\n";
  if (!o.report_path.empty()) write_text_file(o.report_path, json);
  std::cout << (o.format == "json" ? json : report_to_text(r));
  return r.exit_code();
}

VerificationReport run(const std::string& command, const Options& o) {
  if (command == "suite") {
    SuiteConfig c;
    if (o.catalog != "all") c.catalog = split_names(o.catalog);
    c.primes = o.primes;
    c.seed = o.seed;
    c.samples = o.samples;
    c.threads = o.threads;
    if (!o.suites.empty()) c.suites = o.suites;
    return run_suite(c);
  }
  require_prime(o.prime);
  const auto fan = load_fan(o);
  if (command == "check-hodge") return check_hodge(fan, o.prime);
  const auto d = load_divisor(o, fan);
  if (command == "check-bott") return check_bott(d, o.prime);
  if (command == "check-kv") return check_kv(d, o.prime);
  if (command == "check-injection") return check_injection(d, o.prime, o.r_max);
  return check_strong_lift(d, o.prime, o.seed, o.samples);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vanishing theorems on toric varieties in characteristic p, checked by exact computation"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--report", o.report_path, "write the JSON report here");
    sub->add_option("--format", o.format, "stdout format")->check(CLI::IsMember({"json", "text"}));
  };
  auto single = [&](CLI::App* sub, bool divisor) {
    sub->add_option("--fan", o.fan_path, "fan JSON")->required();
    if (divisor) sub->add_option("--divisor", o.divisor_path, "divisor JSON")->required();
    sub->add_option("--prime", o.prime, "characteristic");
    common(sub);
  };

  single(app.add_subcommand("check-bott", "Bott vanishing for an ample line bundle"), true);
  single(app.add_subcommand("check-kv", "Kawamata-Viehweg vanishing for an ample Q-divisor"), true);
  auto* inj = app.add_subcommand("check-injection", "injections along -ceil(p^r H)");
  single(inj, true);
  inj->add_option("--rmax", o.r_max, "largest r")->check(CLI::Range(1, 6));
  single(app.add_subcommand("check-hodge", "Hodge to de Rham degeneration along the boundary"), false);
  auto* lift = app.add_subcommand("check-lift", "sections over W2 versus over F_p");
  single(lift, true);
  lift->add_option("--seed", o.seed, "RNG seed");
  lift->add_option("--samples", o.samples, "random sections to reduce")->check(CLI::PositiveNumber);

  auto* suite = app.add_subcommand("suite", "all suites over the fan catalog");
  suite->add_option("--catalog", o.catalog, "'all' or comma-separated catalog names");
  suite->add_option("--primes", o.primes, "comma-separated primes")->delimiter(',');
  suite->add_option("--prime", o.primes, "alias of --primes")->delimiter(',');
  suite->add_option("--seed", o.seed, "RNG seed");
  suite->add_option("--samples", o.samples, "sampled divisors per fan and prime")->check(CLI::PositiveNumber);
  suite->add_option("--suites", o.suites, "subset of bott,kv,injection,hodge,lift")
      ->delimiter(',')
      ->check(CLI::IsMember({"bott", "kv", "injection", "hodge", "lift"}));
  suite->add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1u, 256u));
  common(suite);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return emit(run(command, o), o);
  } catch (const InputError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const Unsupported& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
