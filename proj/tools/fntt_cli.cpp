// fntt: exact convolution, big-integer multiplication and number-theory
// checks over Rader primes.
//
// Exit codes: 0 success, 1 failed verification, 2 malformed input,
// 3 recovery bound exceeded, 4 transform length not permitted.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fntt/fntt.hpp"

namespace {

using namespace fntt;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitParse = 2;
constexpr int kExitBound = 3;
constexpr int kExitLength = 4;

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::parse_error:
    case Errc::bad_input:
    case Errc::input_out_of_range:
    case Errc::length_mismatch:
    case Errc::modulus_too_small:
    case Errc::index_too_large:
      return kExitParse;
    case Errc::bound_exceeded:
      return kExitBound;
    case Errc::invalid_length:
      return kExitLength;
    default:
      return kExitFailed;
  }
}

struct Options {
  std::string registry_path;
  bool json = false;
};

RaderRegistry load_registry(const Options& opt) {
  if (!opt.registry_path.empty()) return RaderRegistry::load_file(opt.registry_path);
  if (const char* env = std::getenv("NTT_REGISTRY"); env && *env) return RaderRegistry::load_file(env);
  return RaderRegistry::builtin();
}

IntegerSequence read_sequence_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse_error, "cannot open " + path);
  return read_sequence(in);
}

void emit_sequence(const IntegerSequence& seq, const std::string& out_path, bool json) {
  const auto format = json ? SequenceFormat::json : SequenceFormat::text;
  if (out_path.empty()) {
    write_sequence(std::cout, seq, format);
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw Error(Errc::parse_error, "cannot write " + out_path);
  write_sequence(out, seq, format);
}

RaderModulus resolve_modulus(const RaderRegistry& reg, u64 prime) {
  if (auto m = reg.find(prime)) return *m;
  return make_modulus(prime);
}

std::string join_primes(std::span<const RaderModulus> ms) {
  std::string s;
  for (const auto& m : ms) s += (s.empty() ? "" : ",") + std::to_string(m.prime);
  return s;
}

// ---------------------------------------------------------------------------

struct ConvolveArgs {
  std::string f_path, g_path, out_path;
  std::vector<u64> moduli;
  bool auto_select = false;
  bool crt = false;
  bool self_test = false;
  std::string kernel = "mul";
};

int self_test(const RaderRegistry& reg) {
  bool ok = true;
  for (const auto& m : reg.entries()) {
    const u64 n = std::min<u64>(m.n_max, 64);
    std::vector<i64> delta(n, 0), ramp(n);
    delta[0] = 1;
    for (u64 i = 0; i < n; ++i) ramp[i] = static_cast<i64>(i % 7) - 3;
    const IntegerSequence g(ramp);
    const bool pass = convolve_ntt(IntegerSequence(delta), g, m) == g;
    std::cerr << (pass ? "pass" : "FAIL") << "\tdelta identity m=" << m.prime << " N=" << n << '\n';
    ok = ok && pass;
  }
  return ok ? kExitOk : kExitFailed;
}

int cmd_convolve(const ConvolveArgs& a, const Options& opt) {
  const auto reg = load_registry(opt);
  if (a.self_test) return self_test(reg);
  if (a.f_path.empty() || a.g_path.empty())
    throw Error(Errc::parse_error, "convolve needs two sequence files (or --self-test)");
  const auto f = read_sequence_file(a.f_path);
  const auto g = read_sequence_file(a.g_path);
  if (f.size() != g.size())
    throw Error(Errc::parse_error, "sequence lengths differ: " + std::to_string(f.size()) + " vs " +
                                       std::to_string(g.size()));
  const Kernel kernel = a.kernel == "shift" ? Kernel::shift : Kernel::multiply;
  const bool is_signed = f.has_negative() || g.has_negative();
  const u128 bound = coefficient_bound(f.size(), f.bound(), g.bound());
  std::cerr << "length " << f.size() << ", B_f " << f.bound() << ", B_g " << g.bound() << ", "
            << (is_signed ? "signed" : "unsigned") << " coefficient bound " << to_decimal(bound) << '\n';

  std::vector<RaderModulus> moduli;
  if (!a.moduli.empty() && !a.auto_select) {
    for (u64 p : a.moduli) moduli.push_back(resolve_modulus(reg, p));
    for (const auto& m : moduli)
      if (m.n_max % f.size() != 0)
        throw Error(Errc::invalid_length, "length " + std::to_string(f.size()) + " does not divide n_max " +
                                              std::to_string(m.n_max) + " of " + std::to_string(m.prime));
  } else {
    moduli = choose_moduli(reg, f.size(), bound, is_signed);
    if (moduli.size() > 1 && !a.crt)
      throw Error(Errc::bound_exceeded, "no single registry modulus recovers bound " + to_decimal(bound) +
                                            "; rerun with --crt (would use " + join_primes(moduli) + ")");
  }

  IntegerSequence h;
  if (moduli.size() == 1 && !a.crt) {
    h = convolve_ntt(f, g, moduli.front(), kernel);
  } else {
    if (moduli.size() > 1 && !a.crt)
      throw Error(Errc::bad_input, "several moduli given; add --crt");
    h = convolve_crt(f, g, moduli);
  }
  std::cerr << "moduli " << join_primes(moduli) << " (" << (moduli.size() > 1 ? "crt" : "single") << ")\n";
  emit_sequence(h, a.out_path, opt.json);
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_mul(const std::string& a, const std::string& b, u64 base, const Options& opt) {
  std::cout << multiply_decimal(a, b, load_registry(opt), base) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::optional<unsigned> fermat_identity;
  std::optional<u64> fermat_factor;
  std::optional<unsigned> claimed_index;
  std::optional<u64> claimed_n_max;
  bool published = false;
  bool poulet = false;
};

int cmd_verify(const VerifyArgs& a, const Options& opt) {
  const auto reg = load_registry(opt);
  std::vector<CheckResult> results;
  if (a.fermat_identity) results.push_back(check_fermat_identity(*a.fermat_identity));
  if (a.fermat_factor) {
    RaderModulus m = resolve_modulus(reg, *a.fermat_factor);
    if (a.claimed_index) m.fermat_index = *a.claimed_index;
    if (a.claimed_n_max) m.n_max = *a.claimed_n_max;
    results.push_back(check_fermat_factor_modulus(m));
  }
  if (a.published)
    for (auto& r : check_published_primes(reg)) results.push_back(std::move(r));
  if (a.poulet)
    for (auto& r : check_poulet_341()) results.push_back(std::move(r));
  if (results.empty()) throw Error(Errc::parse_error, "nothing to verify; see --help");

  std::size_t passed = 0;
  if (opt.json) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& r : results) doc.push_back({{"check", r.name}, {"pass", r.passed}, {"detail", r.detail}});
    std::cout << doc.dump() << '\n';
  }
  for (const auto& r : results) {
    passed += r.passed;
    if (!opt.json) std::cout << (r.passed ? "pass" : "FAIL") << '\t' << r.name << '\t' << r.detail << '\n';
  }
  std::cerr << passed << '/' << results.size() << " pass\n";
  return passed == results.size() ? kExitOk : kExitFailed;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  u64 length = 1024;
  u64 modulus = 2424833;
  std::string kernel = "both";
  unsigned repeats = 5;
  std::string out_path;
  bool check = false;
};

int cmd_bench(const BenchArgs& a, const Options& opt) {
  const auto reg = load_registry(opt);
  const auto m = resolve_modulus(reg, a.modulus);
  if (a.length == 0 || m.n_max % a.length != 0)
    throw Error(Errc::invalid_length, "length " + std::to_string(a.length) + " not permitted for " +
                                          std::to_string(m.prime) + " (n_max " + std::to_string(m.n_max) + ")");
  std::vector<Kernel> kernels;
  if (a.kernel != "shift") kernels.push_back(Kernel::multiply);
  if (a.kernel != "mul") kernels.push_back(Kernel::shift);
  const auto rows = run_bench(a.length, m, kernels, a.repeats);

  if (a.out_path.empty()) {
    write_bench_csv(std::cout, rows);
  } else {
    std::ofstream out(a.out_path);
    write_bench_csv(out, rows);
  }

  bool all_match = true;
  bool ratio_ok = true;
  for (const auto& r : rows) all_match = all_match && r.outputs_match;
  for (Kernel k : kernels) {
    double direct = 0, fast = 0;
    for (const auto& r : rows)
      if (r.kernel == k) (r.fast ? fast : direct) = r.median_ns;
    if (direct == 0 || fast == 0) {
      std::cerr << kernel_name(k) << ": direct path skipped (estimated cost too high)\n";
      continue;
    }
    const double ratio = direct / fast;
    std::cerr << kernel_name(k) << ": direct/fast median ratio " << ratio << '\n';
    if (a.length >= 1024 && ratio <= 1) ratio_ok = false;
  }
  std::cerr << "outputs_match " << (all_match ? "true" : "false") << '\n';
  if (!all_match) return kExitFailed;
  return a.check && !ratio_ok ? kExitFailed : kExitOk;
}

// ---------------------------------------------------------------------------

struct DyadicArgs {
  u64 length = 2;
  unsigned alpha = 16;
  unsigned beta = 4;
  u64 root = 65535;
  std::string f_path, g_path, out_path;
};

int cmd_dyadic_plan(const DyadicArgs& a) {
  const auto plan = build_dyadic_plan(a.length, a.alpha, a.beta, a.root);
  std::cout << (plan.validated() ? "validated" : "rejected") << "\tN=" << plan.length() << " alpha=" << plan.alpha()
            << " beta=" << plan.beta() << " root=" << plan.root();
  if (!plan.validated()) std::cout << "\t" << plan.reason();
  std::cout << '\n';
  return plan.validated() ? kExitOk : kExitFailed;
}

std::vector<u64> to_unsigned(const IntegerSequence& s) {
  std::vector<u64> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0) throw Error(Errc::input_out_of_range, "dyadic inputs must be nonnegative", i);
    out.push_back(static_cast<u64>(s[i]));
  }
  return out;
}

int cmd_dyadic_convolve(const DyadicArgs& a, const Options& opt) {
  const auto f = read_sequence_file(a.f_path);
  const auto g = read_sequence_file(a.g_path);
  if (f.size() != g.size()) throw Error(Errc::parse_error, "sequence lengths differ");
  const auto plan = build_dyadic_plan(f.size(), a.alpha, a.beta, a.root);
  if (!plan.validated()) {
    std::cerr << "rejected: " << plan.reason() << '\n';
    return kExitFailed;
  }
  const auto h = dyadic_convolve(to_unsigned(f), to_unsigned(g), plan);
  std::vector<i64> out;
  for (u64 v : h) out.push_back(static_cast<i64>(v));
  emit_sequence(IntegerSequence(std::move(out)), a.out_path, opt.json);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact number-theoretic transforms over prime factors of Fermat numbers"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--registry", opt.registry_path, "Registry file (overrides NTT_REGISTRY)");
  app.add_flag("--json", opt.json, "JSON output");

  ConvolveArgs conv;
  auto* c = app.add_subcommand("convolve", "Exact cyclic convolution of two sequence files");
  c->add_option("f", conv.f_path, "First sequence file");
  c->add_option("g", conv.g_path, "Second sequence file");
  c->add_option("--modulus", conv.moduli, "Modulus (repeat with --crt for several)");
  c->add_flag("--auto", conv.auto_select, "Pick the smallest adequate registry modulus");
  c->add_flag("--crt", conv.crt, "Allow several moduli combined by CRT");
  c->add_option("--kernel", conv.kernel, "Twiddle kernel")->check(CLI::IsMember({"mul", "shift"}));
  c->add_option("--out", conv.out_path, "Output file (default stdout)");
  c->add_flag("--self-test", conv.self_test, "Delta-identity check on every registry modulus");

  std::string mul_a, mul_b;
  u64 mul_base = BigDigits::kDefaultBase;
  auto* mu = app.add_subcommand("mul", "Exact product of two decimal integers");
  mu->add_option("a", mul_a)->required();
  mu->add_option("b", mul_b)->required();
  mu->add_option("--base", mul_base, "Digit base for the convolution")->check(CLI::Range(u64{2}, u64{1} << 32));

  VerifyArgs ver;
  auto* v = app.add_subcommand("verify", "Number-theoretic checks with pass/fail report");
  v->add_option("--fermat-identity", ver.fermat_identity, "F_0...F_{n-1} = F_n - 2 for n in [1, 6]");
  v->add_option("--theorem2", ver.fermat_factor, "Check a Fermat factor modulus m");
  v->add_option("--fermat-index", ver.claimed_index, "Claimed j with m | F_j (with --theorem2)");
  v->add_option("--n-max", ver.claimed_n_max, "Claimed order of 2 (with --theorem2)");
  v->add_flag("--table1", ver.published, "Verify the published 16/32-bit primes");
  v->add_flag("--poulet", ver.poulet, "Verify the 341 pseudoprime example");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Time direct vs fast transforms, CSV output");
  b->add_option("--length", bench.length, "Transform length");
  b->add_option("--modulus", bench.modulus, "Modulus");
  b->add_option("--kernel", bench.kernel)->check(CLI::IsMember({"mul", "shift", "both"}));
  b->add_option("--repeats", bench.repeats);
  b->add_option("--out", bench.out_path, "CSV file (default stdout)");
  b->add_flag("--check", bench.check, "Exit 1 unless fast beats direct at N >= 1024");

  u64 order_a = 0, order_m = 0, lambda_m = 0;
  auto* o = app.add_subcommand("order", "Multiplicative order of a modulo m");
  o->add_option("a", order_a)->required();
  o->add_option("m", order_m)->required();
  auto* l = app.add_subcommand("lambda", "Carmichael lambda and Euler phi of m");
  l->add_option("m", lambda_m)->required();

  auto* reg_cmd = app.add_subcommand("registry", "List registry moduli");

  DyadicArgs dy;
  auto* d = app.add_subcommand("dyadic", "Modulus-free transform modulo 2^alpha");
  d->require_subcommand(1);
  auto* dp = d->add_subcommand("plan", "Validate a dyadic plan");
  dp->add_option("--length", dy.length);
  auto* dc = d->add_subcommand("convolve", "Cyclic convolution modulo 2^alpha");
  dc->add_option("f", dy.f_path)->required();
  dc->add_option("g", dy.g_path)->required();
  dc->add_option("--out", dy.out_path);
  for (auto* sub : {dp, dc}) {
    sub->add_option("--alpha", dy.alpha)->check(CLI::Range(3u, 64u));
    sub->add_option("--beta", dy.beta);
    sub->add_option("--root", dy.root);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitParse;
  }

  try {
    if (*c) return cmd_convolve(conv, opt);
    if (*mu) return cmd_mul(mul_a, mul_b, mul_base, opt);
    if (*v) return cmd_verify(ver, opt);
    if (*b) return cmd_bench(bench, opt);
    if (*o) {
      std::cout << multiplicative_order(order_a, order_m) << '\n';
      return kExitOk;
    }
    if (*l) {
      std::cout << "lambda " << carmichael_lambda(lambda_m) << "\nphi " << totient(lambda_m) << '\n';
      return kExitOk;
    }
    if (*reg_cmd) {
      std::cout << "# m fermat_index n_max word_bits\n";
      const auto reg = load_registry(opt);
      for (const auto& m : reg.entries())
        std::cout << m.prime << ' ' << *m.fermat_index << ' ' << m.n_max << ' ' << m.word_size_bits() << '\n';
      return kExitOk;
    }
    if (*dp) return cmd_dyadic_plan(dy);
    if (*dc) return cmd_dyadic_convolve(dy, opt);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
  return kExitParse;
}
