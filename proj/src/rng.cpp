#include "vqain/rng.hpp"

namespace vqain {

uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

uint64_t DetRng::next_below(uint64_t n) {
  // Rejection sampling over the top of the range keeps the draw unbiased.
  uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

uint64_t record_seed(uint64_t seed, std::string_view dataset, uint64_t source_index) {
  uint64_t state = seed;
  uint64_t a = splitmix64(state);
  state = a ^ fnv1a64(dataset);
  uint64_t b = splitmix64(state);
  state = b ^ source_index;
  return splitmix64(state);
}

DetRng record_rng(uint64_t seed, std::string_view dataset, uint64_t source_index) {
  return DetRng(record_seed(seed, dataset, source_index));
}

}  // namespace vqain
