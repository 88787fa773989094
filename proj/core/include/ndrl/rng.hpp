#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace ndrl {

/// Seeded 64-bit generator with portable derived draws.
///
/// Draws are computed from raw engine output rather than <random>
/// distributions, so sequences are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);

  /// Independent named stream derived from a run seed ("parent", "child", ...).
  static Rng stream(std::uint64_t seed, std::string_view name);

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform();
  /// Uniform in (0, 1).
  double uniform_open();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n);
  /// Standard normal (Box-Muller, one value per call).
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace ndrl
