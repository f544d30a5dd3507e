#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace asim {

// Advances `state` and returns the next splitmix64 output.
std::uint64_t splitmix64(std::uint64_t& state);

// Derives a decorrelated child seed from a base seed and a tag or index.
// Used to give every cell of an experiment grid its own reproducible stream.
std::uint64_t derive_seed(std::uint64_t base, std::string_view tag);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

// Deterministic generator: mt19937_64 core, explicit conversions so that
// sampled values are identical across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; second value of each pair is cached.
  double normal();

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  std::mt19937_64 gen_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace asim
