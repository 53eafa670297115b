#pragma once

// Direct vs fast timing for one (length, modulus) pair. Correctness fields
// are deterministic; timings are not.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "fntt/transform.hpp"

namespace fntt {

struct BenchRow {
  u64 n;
  u64 modulus;
  Kernel kernel;
  bool fast;
  double median_ns;
  bool outputs_match;
};

inline std::string_view kernel_name(Kernel k) { return k == Kernel::shift ? "shift" : "mul"; }

/// Rough count of doubling steps (shift kernel) or products (multiply
/// kernel) for one forward transform.
inline double estimated_cost(u64 n, const RaderModulus& m, Kernel kernel, bool fast) {
  const double twiddles = fast ? 0.5 * static_cast<double>(n) * std::max<double>(1, std::bit_width(n) - 1.0)
                               : static_cast<double>(n) * static_cast<double>(n);
  return kernel == Kernel::shift ? twiddles * static_cast<double>(m.n_max) / 4.0 : twiddles;
}

template <class Fn>
double median_ns(Fn&& fn, unsigned repeats) {
  std::vector<double> samples;
  for (unsigned r = 0; r < std::max(1u, repeats); ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    samples.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count());
  }
  std::ranges::sort(samples);
  const std::size_t k = samples.size();
  return k % 2 ? samples[k / 2] : 0.5 * (samples[k / 2 - 1] + samples[k / 2]);
}

/// Times the forward transform on every requested (kernel, path). Rows whose
/// estimated cost exceeds `budget` are skipped. `outputs_match` compares
/// against the direct multiply-kernel result.
inline std::vector<BenchRow> run_bench(u64 n, const RaderModulus& m, std::span<const Kernel> kernels,
                                       unsigned repeats, double budget = 4e9, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  std::vector<u64> values(n);
  for (auto& v : values) v = rng() % m.prime;
  const ResidueSequence x(std::move(values), m.prime);
  const auto reference = forward_direct(x, TransformPlan(n, m));

  std::vector<BenchRow> rows;
  for (Kernel k : kernels) {
    const TransformPlan plan(n, m, k);
    for (bool fast : {false, true}) {
      if (estimated_cost(n, m, k, fast) > budget) continue;
      ResidueSequence out = x;
      const double t = median_ns(
          [&] { out = fast ? forward_fast(x, plan) : forward_direct(x, plan); }, repeats);
      rows.push_back({n, m.prime, k, fast, t, out == reference});
    }
  }
  return rows;
}

inline void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows) {
  out << "n,modulus,kernel,path,median_ns,outputs_match\n";
  for (const auto& r : rows)
    out << r.n << ',' << r.modulus << ',' << kernel_name(r.kernel) << ',' << (r.fast ? "fast" : "direct") << ','
        << static_cast<std::uint64_t>(r.median_ns) << ',' << (r.outputs_match ? "true" : "false") << '\n';
}

}  // namespace fntt
