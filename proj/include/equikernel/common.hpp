// Shared scalar types, tolerances, deterministic RNG streams, and a small
// parallel-for used by Monte Carlo loops.  Results are independent of the
// worker count: every work item derives its own RNG stream from (seed, index).
#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cassert>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace equikernel {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;
inline constexpr cplx iu{0.0, 1.0};

// Default numerical tolerances; overridable where an operation takes one.
namespace tol {
inline constexpr double unitarity = 1e-12;
inline constexpr double orthogonality = 1e-10;
inline constexpr double locus_t = 1e-9;
inline constexpr double degenerate_eig = 1e-10;
}  // namespace tol

inline double sqr(double x) { return x * x; }

// The two ambient models: the unit sphere in C^4 (circle bundle over complex
// projective 3-space, group acting diagonally on two copies of the defining
// representation) and the unit sphere in C^5 (projective 4-space; the extra
// coordinate transforms by the determinant character).
enum class Example { P3, P4 };

// Complex dimension d of the projective base; the CR manifold has real
// dimension 2d + 1.
inline int base_dim(Example ex) { return ex == Example::P3 ? 3 : 4; }

// Number of ambient complex coordinates (d + 1).
inline int num_vars(Example ex) { return base_dim(ex) + 1; }

inline const char* example_name(Example ex) { return ex == Example::P3 ? "P3" : "P4"; }

// Binomial coefficient as a double (exact for the sizes used here).
inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double out = 1.0;
  for (int j = 1; j <= k; ++j) out *= static_cast<double>(n - k + j) / static_cast<double>(j);
  return out;
}

// Worker cap: EQUIKERNEL_THREADS if set, else hardware concurrency.
inline unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("EQUIKERNEL_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && v <= 4096) hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
  }
  return hw;
}

// Runs fn(i) for i in [0, n).  Work items are claimed via an atomic counter;
// fn must write only to per-index slots so the result is schedule-independent.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  unsigned workers = std::min<std::size_t>(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
}

// SplitMix64 scrambler: turns (seed, index) into an independent 64-bit state,
// so Monte Carlo item i draws the same numbers regardless of thread schedule.
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::mt19937_64 item_rng(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(index)));
}

// Mean and standard error of a sample; the building block of every Monte
// Carlo estimate reported by the library.
struct MeanStdErr {
  double mean = 0.0;
  double std_error = 0.0;
};

inline MeanStdErr mean_std_err(const std::vector<double>& xs) {
  if (xs.empty()) return {};
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(xs.size());
  double v = 0.0;
  for (double x : xs) v += sqr(x - m);
  if (xs.size() > 1) v /= static_cast<double>(xs.size() - 1);
  return {m, std::sqrt(v / static_cast<double>(xs.size()))};
}

}  // namespace equikernel
