#pragma once

#include <cstdint>
#include <random>

namespace qot {

/// Seeded uniform stream. mt19937_64 output is fixed by the standard, and the
/// conversion to doubles is done here rather than through
/// std::uniform_real_distribution, so a seed reproduces bit-identical draws on
/// every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0,1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Fair sign in {-1,+1}.
  double sign() { return (engine_() >> 63) ? 1.0 : -1.0; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Child seed for worker/restart/cell `index` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace qot
