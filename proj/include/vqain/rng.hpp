#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace vqain {

// All randomness in the pipeline flows through DetRng so that output is
// byte-identical across platforms. std::mt19937_64 has a standardized
// bit-exact sequence; the distribution helpers below are hand-rolled because
// std::uniform_int_distribution is implementation-defined.

uint64_t splitmix64(uint64_t& state);

// FNV-1a, used to fold string tags into seeds.
uint64_t fnv1a64(std::string_view s);

class DetRng {
 public:
  explicit DetRng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform integer in [0, n) via rejection sampling. n must be > 0.
  uint64_t next_below(uint64_t n);

  // Uniform double in [0, 1) with 53 bits of precision.
  double next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

// Seed for the per-record generator: a pure function of (seed, dataset tag,
// record index) so parallel and serial conversion agree.
uint64_t record_seed(uint64_t seed, std::string_view dataset, uint64_t source_index);

DetRng record_rng(uint64_t seed, std::string_view dataset, uint64_t source_index);

// Fisher-Yates with DetRng draws (std::shuffle is implementation-defined).
template <typename T>
void det_shuffle(std::vector<T>& v, DetRng& rng) {
  for (size_t i = v.size(); i > 1; --i) {
    size_t j = static_cast<size_t>(rng.next_below(i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace vqain
