#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "faasim/sim_time.hpp"

namespace faasim {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Deterministic per-component random stream. Each component derives its seed
// from (run seed, component name) so adding a component never perturbs the
// draws of another. Samplers are hand-rolled on top of raw 64-bit output;
// std::<distribution> implementations are not bit-stable across standard
// libraries, which would break trace reproducibility.
class Rng {
 public:
  Rng(std::uint64_t seed, std::string_view component)
      : state_(splitmix64(seed ^ fnv1a64(component))) {
    if (state_ == 0) state_ = 0x9e3779b97f4a7c15ULL;
  }

  std::uint64_t next_u64() {
    // xorshift64* over a splitmix-initialized state.
    std::uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 0x2545f4914f6cdd1dULL;
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1], safe as a log() argument.
  double next_open_double() { return 1.0 - next_double(); }

  // Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  double normal() {
    // Box-Muller; the spare draw is discarded to keep the stream position
    // independent of call parity.
    double u1 = next_open_double();
    double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double exponential(double mean) { return -mean * std::log(next_open_double()); }

  double lognormal(double mu, double sigma) { return std::exp(mu + sigma * normal()); }

 private:
  std::uint64_t state_;
};

// Parameterized scalar distribution used for delays, durations, IATs and
// memory footprints. Parameters are in the unit of the sampled quantity.
struct DistSpec {
  enum class Kind { kConstant, kUniform, kExponential, kLognormal, kChoice };

  Kind kind = Kind::kConstant;
  double value = 0.0;         // constant
  double lo = 0.0, hi = 0.0;  // uniform
  double mean = 0.0;          // exponential
  double median = 0.0, sigma = 0.0;  // lognormal (median = exp(mu))
  double clamp_lo = 0.0, clamp_hi = 0.0;  // optional clamp; active when hi > lo
  std::vector<double> choice_values;
  std::vector<double> choice_weights;

  static DistSpec constant(double v) {
    DistSpec d;
    d.kind = Kind::kConstant;
    d.value = v;
    return d;
  }
  static DistSpec uniform(double lo, double hi) {
    DistSpec d;
    d.kind = Kind::kUniform;
    d.lo = lo;
    d.hi = hi;
    return d;
  }
  static DistSpec exponential(double mean) {
    DistSpec d;
    d.kind = Kind::kExponential;
    d.mean = mean;
    return d;
  }
  static DistSpec lognormal(double median, double sigma) {
    DistSpec d;
    d.kind = Kind::kLognormal;
    d.median = median;
    d.sigma = sigma;
    return d;
  }

  double sample(Rng& rng) const {
    double v = 0.0;
    switch (kind) {
      case Kind::kConstant:
        v = value;
        break;
      case Kind::kUniform:
        v = lo + (hi - lo) * rng.next_double();
        break;
      case Kind::kExponential:
        v = rng.exponential(mean);
        break;
      case Kind::kLognormal:
        v = rng.lognormal(std::log(median), sigma);
        break;
      case Kind::kChoice: {
        double total = 0.0;
        for (double w : choice_weights) total += w;
        double r = rng.next_double() * total;
        for (std::size_t i = 0; i < choice_values.size(); ++i) {
          r -= choice_weights[i];
          if (r < 0.0) return choice_values[i];
        }
        return choice_values.back();
      }
    }
    if (clamp_hi > clamp_lo) {
      if (v < clamp_lo) v = clamp_lo;
      if (v > clamp_hi) v = clamp_hi;
    }
    return v;
  }

  double analytic_mean() const {
    switch (kind) {
      case Kind::kConstant:
        return value;
      case Kind::kUniform:
        return 0.5 * (lo + hi);
      case Kind::kExponential:
        return mean;
      case Kind::kLognormal:
        return median * std::exp(0.5 * sigma * sigma);
      case Kind::kChoice: {
        double total = 0.0, acc = 0.0;
        for (std::size_t i = 0; i < choice_values.size(); ++i) {
          acc += choice_values[i] * choice_weights[i];
          total += choice_weights[i];
        }
        return acc / total;
      }
    }
    return 0.0;
  }

  SimTime sample_us(Rng& rng) const {
    double v = sample(rng);
    if (v < 0.0) v = 0.0;
    return static_cast<SimTime>(std::llround(v));
  }
};

}  // namespace faasim
