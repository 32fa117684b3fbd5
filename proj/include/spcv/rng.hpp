#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace spcv {

uint64_t hash_label(const std::string& label);
uint64_t mix64(uint64_t x);

// Derives an independent seed from a master seed and a stream identifier.
// Adding new streams never perturbs existing ones.
uint64_t substream_seed(uint64_t master, uint64_t stream);

class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t next_u64();
  double uniform();                  // strictly inside (0, 1)
  double normal();                   // standard normal
  size_t uniform_int(size_t bound);  // unbiased draw from [0, bound)

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = uniform_int(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace spcv
