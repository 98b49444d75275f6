#include <doctest.h>

#include <cmath>
#include <random>

#include "lpalex/errors.hpp"
#include "lpalex/solver.hpp"
#include "support.hpp"

using namespace lpalex;

namespace {

Objective make_objective(DiscreteEvenMeasure mu, double p) {
  Objective o;
  o.measure = std::move(mu);
  o.p = p;
  return o;
}

}  // namespace

TEST_CASE("Phi of the diamond and the cube") {
  const double e_diamond = 2 * kPi * std::log(2.0) - 4 * testing::kCatalan;
  const double phi_diamond = e_diamond / (2 * kPi) + 2 * std::log(2 * kPi);
  const auto diamond = make_objective(testing::cross_measure(), -0.5);
  CHECK(phi(diamond, RadialConfig{{1.0, 1.0}}) == doctest::Approx(phi_diamond).epsilon(1e-12));
  CHECK(phi(diamond, RadialConfig{{1.0, 1.0}}) == doctest::Approx(3.785779505317).epsilon(1e-12));

  const double e_cube = testing::octant_entropy_oracle([](const Vec3& v) { return v.cwiseAbs().sum(); });
  const double r = std::sqrt(3.0);
  const double phi_cube = e_cube / (4 * kPi) + 2 * std::log(8 * std::pow(r, 0.5) * kPi / 2);
  const auto cube = make_objective(testing::cube_measure(), -0.5);
  CHECK(phi(cube, RadialConfig{{r, r, r, r}}) == doctest::Approx(phi_cube).epsilon(1e-9));
  CHECK(phi_cube == doctest::Approx(5.21134985592545).epsilon(1e-12));
}

TEST_CASE("Phi is invariant under dilation") {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 2;
    const auto o = make_objective(testing::random_measure(rng, n, 6), -0.2 - 0.06 * trial);
    const auto cfg = testing::random_radii(rng, o.measure.size());
    CHECK(phi(o, cfg.scaled(3.7)) == doctest::Approx(phi(o, cfg)).epsilon(1e-10));
  }
}

TEST_CASE("Phi gradient matches finite differences") {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 10;) {
    const int n = 2 + trial % 2;
    auto o = make_objective(testing::random_measure(rng, n, 5), -0.7 + 0.1 * (trial % 6));
    o.quad = QuadratureSpec{16, 30, 1e-12};
    const auto cfg = testing::random_radii(rng, o.measure.size(), 0.9, 1.1);
    if (build_polytope(o.measure, cfg).vertex_count() != o.measure.size()) continue;
    ++trial;
    const auto g = phi_gradient(o, cfg);
    double sum = 0.0;
    for (std::size_t i = 0; i < cfg.size(); ++i) {
      sum += g[i];
      const double h = 1e-5;
      auto up = cfg, down = cfg;
      up.radii[i] *= std::exp(h);
      down.radii[i] *= std::exp(-h);
      CHECK(std::abs((phi(o, up) - phi(o, down)) / (2 * h) - g[i]) < 1e-6);
    }
    // Dilation invariance: the gradient is orthogonal to (1, ..., 1).
    CHECK(std::abs(sum) < 1e-12);
  }
}

TEST_CASE("symmetric fixed points") {
  const auto diamond = make_objective(testing::cross_measure(), -0.5);
  for (double gi : phi_gradient(diamond, RadialConfig{{1.0, 1.0}})) CHECK(std::abs(gi) < 1e-14);
  const double r = std::sqrt(3.0);
  const auto cube = make_objective(testing::cube_measure(), -0.5);
  for (double gi : phi_gradient(cube, RadialConfig{{r, r, r, r}})) CHECK(std::abs(gi) < 1e-13);

  SolveOptions opts;
  opts.multistarts = 3;
  const auto rep = maximize_phi(diamond, opts);
  CHECK(rep.status == SolveStatus::converged);
  CHECK(rep.radii.radii[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(rep.radii.radii[1] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(rep.scale == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(rep.max_residual < 1e-7);

  const auto rc = maximize_phi(cube, opts);
  CHECK(rc.status == SolveStatus::converged);
  for (double ri : rc.radii.radii) CHECK(ri == doctest::Approx(1.0).epsilon(1e-8));
  // mu_i = c^p rho^p J_i with rho = 1 and J_i = pi / 2.
  CHECK(rc.scale == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("random problems converge to solutions with a monotone trace") {
  std::mt19937_64 rng(89);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 2 + trial % 2;
    const double p = -0.9 + 0.1 * trial;
    const auto o = make_objective(testing::random_measure(rng, n, 6 + trial), p);
    SolveOptions opts;
    opts.multistarts = 4;
    opts.seed = 100 + trial;
    const auto rep = maximize_phi(o, opts);
    CHECK(rep.status == SolveStatus::converged);
    CHECK(rep.grad_norm <= opts.grad_tol);
    CHECK(rep.max_residual < 1e-6);
    CHECK(rep.runs.size() == 4);
    CHECK_FALSE(rep.optima.empty());
    CHECK(rep.optima.front().phi == doctest::Approx(rep.phi).epsilon(1e-12));
    double top = 0.0;
    for (double ri : rep.radii.radii) top = std::max(top, ri);
    CHECK(top == doctest::Approx(1.0).epsilon(1e-15));
    REQUIRE_FALSE(rep.phi_trace.empty());
    for (std::size_t k = 1; k < rep.phi_trace.size(); ++k)
      CHECK(rep.phi_trace[k] >= rep.phi_trace[k - 1] - 1e-12 * (1 + std::abs(rep.phi_trace[k - 1])));

    // The solution is the body the measure asks for.
    const auto poly = build_polytope(o.measure, rep.radii);
    CHECK(poly.vertex_count() == o.measure.size());
    const auto check = verify(poly, rep.scale, o.measure, p, 1e-6);
    CHECK(check.pass);

    // No random configuration beats the maximizer.
    for (int k = 0; k < 20; ++k)
      CHECK(phi(o, testing::random_radii(rng, o.measure.size(), 0.2, 1.0)) <= rep.phi + 1e-9);
  }
}

TEST_CASE("solver output is deterministic across thread counts") {
  std::mt19937_64 rng(97);
  const auto o = make_objective(testing::random_measure(rng, 3, 10), -0.4);
  SolveOptions opts;
  opts.multistarts = 6;
  opts.seed = 5;
  opts.threads = 1;
  const auto a = maximize_phi(o, opts);
  opts.threads = 4;
  const auto b = maximize_phi(o, opts);
  CHECK(a.radii.radii == b.radii.radii);
  CHECK(a.phi == b.phi);
  CHECK(a.best_start == b.best_start);
  CHECK(a.phi_trace == b.phi_trace);
}

TEST_CASE("scaling the measure scales only the recovered dilation") {
  std::mt19937_64 rng(101);
  for (int n : {2, 3}) {
    const double p = -0.6;
    const auto mu = testing::random_measure(rng, n, 7);
    SolveOptions opts;
    opts.multistarts = 2;
    const auto a = maximize_phi(make_objective(mu, p), opts);
    const double lambda = 9.0;
    const auto b = maximize_phi(make_objective(mu.scaled(lambda), p), opts);
    for (std::size_t i = 0; i < mu.size(); ++i)
      CHECK(b.radii.radii[i] == doctest::Approx(a.radii.radii[i]).epsilon(1e-7));
    CHECK(b.scale == doctest::Approx(a.scale * std::pow(lambda, 1 / p)).epsilon(1e-7));
    CHECK(b.phi == doctest::Approx(a.phi - std::log(lambda) / p).epsilon(1e-10));
  }
}

TEST_CASE("recover_scale and verify") {
  const auto mu = testing::cross_measure();
  const auto unit = build_polytope(mu, RadialConfig{{1.0, 1.0}});
  CHECK(recover_scale(unit, mu, -0.5) == doctest::Approx(1.0).epsilon(1e-14));
  const auto big = build_polytope(mu, RadialConfig{{4.0, 4.0}});
  CHECK(recover_scale(big, mu, -0.5) == doctest::Approx(0.25).epsilon(1e-14));
  const auto ok = verify(unit, 1.0, mu, -0.5, 1e-9);
  CHECK(ok.pass);
  CHECK(ok.total_curvature == doctest::Approx(2 * kPi));
  CHECK(ok.sphere_measure == doctest::Approx(2 * kPi));

  SolveOptions opts;
  opts.multistarts = 2;
  std::mt19937_64 rng(103);
  const auto rmu = testing::random_measure(rng, 3, 8);
  const auto rep = maximize_phi(make_objective(rmu, -0.5), opts);
  auto edited = rep.radii;
  edited.radii[0] *= 1.1;
  const auto bad = verify(build_polytope(rmu, edited), rep.scale, rmu, -0.5, 1e-3);
  CHECK_FALSE(bad.pass);
  CHECK(bad.max_residual > 1e-3);

  CHECK_THROWS_AS(verify(unit, 0.0, mu, -0.5, 1e-3), InvalidArgument);
  CHECK_THROWS_AS(verify(unit, 1.0, rmu, -0.5, 1e-3), InvalidArgument);
}

TEST_CASE("invalid problems are rejected") {
  const auto flat = DiscreteEvenMeasure::create(
      3, {{Vec3::UnitX(), 1.0}, {Vec3::UnitY(), 1.0}, {Vec3(1, 1, 0).normalized(), 1.0}});
  CHECK_THROWS_AS(maximize_phi(make_objective(flat, -0.5), SolveOptions{}), DegenerateInput);
  CHECK_THROWS_AS(maximize_phi(make_objective(testing::cross_measure(), 0.0), SolveOptions{}), InvalidP);
  CHECK_THROWS_AS(maximize_phi(make_objective(testing::cross_measure(), 0.5), SolveOptions{}), InvalidP);
  CHECK_THROWS_AS(maximize_phi(make_objective(testing::cross_measure(), -1.0), SolveOptions{}), InvalidP);
  SolveOptions bad;
  bad.escape_t = 0.7;
  CHECK_THROWS_AS(maximize_phi(make_objective(testing::cross_measure(), -0.5), bad), InvalidArgument);
  bad = SolveOptions{};
  bad.multistarts = 0;
  CHECK_THROWS_AS(maximize_phi(make_objective(testing::cross_measure(), -0.5), bad), InvalidArgument);

  SolveOptions any;
  any.allow_any_p = true;
  any.multistarts = 1;
  CHECK_NOTHROW(maximize_phi(make_objective(testing::cross_measure(), -1.5), any));
}
