#pragma once

#include <cstdint>

namespace curvlab {

/// PCG32 with an explicit stream selector. Suites derive one generator per
/// sample index so that results do not depend on worker scheduling.
class Pcg32 {
 public:
  explicit Pcg32(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double();

  /// Standard normal via Box-Muller.
  double gaussian();

 private:
  std::uint64_t state_;
  std::uint64_t inc_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace curvlab
