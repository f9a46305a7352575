#pragma once

#include <cstdint>
#include <vector>

namespace djsp {

// Deterministic 64-bit generator (splitmix64). The standard <random>
// distributions are implementation-defined, so every sampled artifact goes
// through this generator to keep outputs byte-identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform draw from {lo, ..., hi}, inclusive.
  int uniform(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const auto scaled = static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * span) >> 64);
    return lo + static_cast<int>(scaled);
  }

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform(0, static_cast<int>(i) - 1));
      std::swap(values[i - 1], values[j]);
    }
  }

  static std::uint64_t mix(std::uint64_t value) {
    Rng r(value);
    return r.next();
  }

 private:
  std::uint64_t state_;
};

}  // namespace djsp
