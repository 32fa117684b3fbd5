#include "spcv/rng.hpp"

#include <cmath>
#include <numbers>

namespace spcv {

uint64_t hash_label(const std::string& label) {
  // FNV-1a 64-bit
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : label) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

uint64_t mix64(uint64_t x) {
  // SplitMix64 finalizer
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

uint64_t substream_seed(uint64_t master, uint64_t stream) {
  return mix64(mix64(master) ^ mix64(stream));
}

Rng::Rng(uint64_t seed) : eng_(mix64(seed)) {}

uint64_t Rng::next_u64() { return eng_(); }

double Rng::uniform() {
  // 53-bit mantissa, offset by half an ulp so 0 and 1 are excluded
  return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

size_t Rng::uniform_int(size_t bound) {
  if (bound <= 1) return 0;
  uint64_t b = bound;
  uint64_t limit = UINT64_MAX - UINT64_MAX % b;
  uint64_t x;
  do {
    x = eng_();
  } while (x >= limit);
  return static_cast<size_t>(x % b);
}

}  // namespace spcv
