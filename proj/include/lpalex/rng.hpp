#pragma once

#include <cstdint>

#include "lpalex/vec.hpp"

namespace lpalex {

/// Counter-based generator: the i-th draw of a stream is a pure function of
/// (seed, stream, i), so parallel consumers that own disjoint streams
/// reproduce the same numbers regardless of scheduling.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  /// Independent child stream; does not advance this generator.
  CounterRng split(std::uint64_t stream) const;

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform point on S^{n-1}, n in {2, 3}.
  Vec3 sphere(int n);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace lpalex
