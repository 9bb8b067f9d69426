#pragma once

#include <cmath>
#include <cstdint>

namespace ousp {

// Deterministic per-replica random stream: xoshiro256++ seeded from
// (seed, stream) through splitmix64.  All samplers are hand-rolled so the
// consumed sequence is identical across platforms and worker counts.
class RngStream {
 public:
  RngStream(uint64_t seed, uint64_t stream) {
    uint64_t x = seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
    for (int i = 0; i < 4; ++i) s_[i] = splitmix64(x);
    // avoid the all-zero state
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  uint64_t next_u64() {
    uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform on (0,1), never returns an endpoint
  double uniform() { return ((next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  double exponential() { return -std::log(uniform()); }
  double exponential(double rate) { return exponential() / rate; }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
  }

  bool bernoulli(double p) { return uniform() < p; }

  long long poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean > 30.0) {
      // Poisson additivity keeps the product method in safe range
      double h = mean * 0.5;
      return poisson(h) + poisson(mean - h);
    }
    double limit = std::exp(-mean), prod = uniform();
    long long k = 0;
    while (prod > limit) {
      prod *= uniform();
      ++k;
    }
    return k;
  }

  // number of failures before the first success, P(success) = p
  long long geometric_failures(double p) {
    if (p >= 1.0) return 0;
    return (long long)std::floor(std::log(uniform()) / std::log1p(-p));
  }

  // draw from {1,2,...} with P(k) = (1-b) b^{k-1}
  long long geometric_count(double b) {
    if (b <= 0.0) return 1;
    return 1 + (long long)std::floor(std::log(uniform()) / std::log(b));
  }

  // exact Binomial(n, p) by skip-sampling successes; O(np + 1)
  long long binomial(long long n, double p) {
    if (n <= 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    long long hits = 0;
    long long pos = geometric_failures(p);
    while (pos < n) {
      ++hits;
      pos += 1 + geometric_failures(p);
    }
    return hits;
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  static uint64_t splitmix64(uint64_t& x) {
    uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  uint64_t s_[4];
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace ousp
