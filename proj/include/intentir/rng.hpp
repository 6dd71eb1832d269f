/*
 * Copyright 2026 The Intentir Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef INTENTIR_RNG_HPP_
#define INTENTIR_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "intentir/error.hpp"

namespace intentir {

// Deterministic random source. std::mt19937_64 output is pinned down by the
// standard, but the standard library distributions are not, so every sampler
// here is implemented by hand. Given the same seed, the sequence of draws is
// byte-identical across compilers and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return std::ldexp(static_cast<double>(engine_() >> 11), -53); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi], both inclusive. Rejection keeps the draw
  // unbiased without relying on platform-specific modulo behavior.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    ensure(lo <= hi, "uniform_int: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1u;
    if (span == 0) return static_cast<std::int64_t>(engine_());  // full 64-bit range
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % span;
    std::uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return lo + static_cast<std::int64_t>(draw % span);
  }

  // Standard normal via Box-Muller. The second variate of the pair is
  // discarded so each call consumes exactly two uniforms.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  double lognormal(double mu_log, double sigma_log) { return std::exp(normal(mu_log, sigma_log)); }

  // Knuth's product method; fine for the small rates used here.
  int poisson(double lambda) {
    ensure(lambda >= 0.0, "poisson: negative rate");
    if (lambda == 0.0) return 0;
    const double threshold = std::exp(-lambda);
    int k = 0;
    double product = 1.0;
    do {
      ++k;
      product *= uniform();
    } while (product > threshold);
    return k - 1;
  }

  int binomial(int n, double p) {
    int hits = 0;
    for (int i = 0; i < n; ++i) hits += uniform() < p ? 1 : 0;
    return hits;
  }

  // Geometric on {1, 2, ...} truncated to {1, .., max_value}, sampled by
  // inverting the truncated CDF so one uniform decides the outcome.
  int truncated_geometric(double p, int max_value) {
    ensure(p > 0.0 && p <= 1.0 && max_value >= 1, "truncated_geometric: bad parameters");
    if (p >= 1.0) return 1;
    const double q = 1.0 - p;
    const double total = 1.0 - std::pow(q, max_value);
    const double u = uniform() * total;
    // CDF(k) = 1 - q^k; smallest k with CDF(k) > u.
    const int k = 1 + static_cast<int>(std::floor(std::log1p(-u) / std::log(q)));
    return std::min(std::max(k, 1), max_value);
  }

  // Index draw from unnormalized non-negative weights.
  std::size_t categorical(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    ensure(total > 0.0, "categorical: zero total weight");
    double u = uniform() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      u -= weights[i];
      if (u < 0.0) return i;
    }
    return weights.size() - 1;
  }

  // In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j =
          static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(items[i - 1], items[j]);
    }
  }

  // SplitMix64-style combiner for deriving independent substream seeds.
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1u);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace intentir

#endif  // INTENTIR_RNG_HPP_
