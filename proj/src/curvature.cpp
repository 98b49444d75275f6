#include "lpalex/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "lpalex/entropy.hpp"
#include "lpalex/errors.hpp"
#include "lpalex/rng.hpp"

namespace lpalex {

std::vector<double> integral_curvature(const SymmetricPolytope& poly) {
  const auto fan = normal_fan(poly);
  std::vector<double> J(fan.size());
  for (std::size_t i = 0; i < fan.size(); ++i) J[i] = fan[i].area;
  return J;
}

CurvatureResult lp_curvature(const SymmetricPolytope& poly, double p) {
  if (!std::isfinite(p) || p == 0.0) throw InvalidP("p must be finite and nonzero");
  CurvatureResult r;
  r.p = p;
  r.p_in_range = p > -1.0 && p < 0.0;
  r.J = integral_curvature(poly);
  r.Jp.resize(r.J.size());
  for (std::size_t i = 0; i < r.J.size(); ++i) {
    r.Jp[i] = std::pow(poly.radius(i), p) * r.J[i];
    r.total_J += 2.0 * r.J[i];
    r.total_Jp += 2.0 * r.Jp[i];
  }
  return r;
}

MonteCarloCurvature mc_curvature_oracle(const SymmetricPolytope& poly, std::size_t samples,
                                        std::uint64_t seed, unsigned threads) {
  if (samples < 10000) throw InvalidArgument("Monte Carlo oracle needs at least 10^4 samples");
  constexpr std::size_t kChunk = 1 << 14;
  const std::size_t chunks = (samples + kChunk - 1) / kChunk;
  const std::size_t m = poly.size();
  const int n = poly.dim();
  std::vector<std::vector<std::size_t>> counts(chunks, std::vector<std::size_t>(m, 0));
  const CounterRng root(seed);

  auto run_chunk = [&](std::size_t c) {
    CounterRng rng = root.split(c);
    const std::size_t count = std::min(kChunk, samples - c * kChunk);
    for (std::size_t s = 0; s < count; ++s) {
      const Vec3 v = rng.sphere(n);
      std::size_t best = m;
      double hbest = -1.0;
      for (std::size_t i = 0; i < m; ++i) {
        if (!poly.is_vertex(i)) continue;
        const double h = poly.radius(i) * std::abs(poly.directions()[i].dot(v));
        if (h > hbest) hbest = h, best = i;
      }
      if (best < m) ++counts[c][best];
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(chunks)));
  if (workers == 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t c = w; c < chunks; c += workers) run_chunk(c);
      });
    }
    for (auto& t : pool) t.join();
  }

  const double half_sphere = 0.5 * ball_constants(n).surface;
  MonteCarloCurvature out;
  out.samples = samples;
  out.J.assign(m, 0.0);
  out.std_error.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t total = 0;
    for (std::size_t c = 0; c < chunks; ++c) total += counts[c][i];
    // Each sample lands in the cone of +x_i or -x_i with equal probability.
    const double phat = static_cast<double>(total) / static_cast<double>(samples);
    out.J[i] = half_sphere * phat;
    out.std_error[i] = half_sphere * std::sqrt(phat * (1.0 - phat) / static_cast<double>(samples));
  }
  return out;
}

bool spanning_check(const DiscreteEvenMeasure& measure) {
  const auto dirs = measure.directions();
  return direction_rank(dirs) == measure.dim();
}

}  // namespace lpalex
