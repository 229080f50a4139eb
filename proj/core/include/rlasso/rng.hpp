#pragma once

#include <cstdint>
#include <random>

namespace rlasso {

// Seeded generator built on mt19937_64. The engine output is fully
// specified by the standard, and every variate below is derived from it
// with our own transforms, so draws are reproducible across platforms and
// standard libraries (std:: distributions are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  // Independent generator for a sub-task, derived deterministically from
  // this generator's (seed, stream) identity; does not consume draws.
  Rng split(std::uint64_t stream) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on the open interval (0, 1).
  double uniform();
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  double normal();
  double exponential(double rate);
  // Gamma with the given shape and rate (Marsaglia-Tsang).
  double gamma(double shape, double rate);
  // +1 or -1 with equal probability.
  double sign();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// SplitMix64 finalizer; used for seed derivation.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace rlasso
