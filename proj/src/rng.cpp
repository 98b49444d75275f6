#include "lpalex/rng.hpp"

#include <cmath>

namespace lpalex {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix(mix(seed + kGolden) ^ (stream * 0xd1b54a32d192ed03ULL + 1))) {}

CounterRng CounterRng::split(std::uint64_t stream) const {
  CounterRng child(0);
  child.key_ = mix(key_ ^ mix(stream + 0x632be59bd9b4e019ULL));
  return child;
}

std::uint64_t CounterRng::next_u64() {
  return mix(key_ + kGolden * ++counter_);
}

double CounterRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

Vec3 CounterRng::sphere(int n) {
  constexpr double kTwoPi = 2.0 * kPi;
  if (n == 2) {
    const double th = kTwoPi * uniform();
    return {std::cos(th), std::sin(th), 0.0};
  }
  const double z = 2.0 * uniform() - 1.0;
  const double th = kTwoPi * uniform();
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(th), r * std::sin(th), z};
}

}  // namespace lpalex
