// Acceptance harness: one PASS/FAIL line per criterion, with wall time.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "lpalex/curvature.hpp"
#include "lpalex/entropy.hpp"
#include "lpalex/errors.hpp"
#include "lpalex/io.hpp"
#include "lpalex/solver.hpp"
#include "lpalex/theory.hpp"
#include "support.hpp"

using namespace lpalex;
using testing::random_direction;
using testing::random_measure;
using testing::random_radii;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cli(const std::string& args, std::string* out = nullptr) {
  const std::string cmd = std::string(LPALEX_CLI) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return -1;
  std::string text;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) text.append(buf, got);
  const int status = pclose(pipe);
  if (out) *out = text;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Random polytope whose every atom is a vertex.
std::pair<DiscreteEvenMeasure, RadialConfig> strict_vertex_config(std::mt19937_64& rng, int n, int atoms,
                                                                 double lo, double hi) {
  for (;;) {
    auto mu = random_measure(rng, n, atoms);
    auto cfg = random_radii(rng, mu.size(), lo, hi);
    if (build_polytope(mu, cfg).vertex_count() == mu.size()) return {std::move(mu), std::move(cfg)};
  }
}

Outcome total_curvature() {
  std::mt19937_64 rng(101);
  double worst[4] = {0, 0, 0, 0};
  for (int n : {2, 3}) {
    for (int rep = 0; rep < 20; ++rep) {
      const int atoms = std::uniform_int_distribution<int>(n, 12)(rng);
      const auto mu = random_measure(rng, n, atoms);
      const auto poly = build_polytope(mu, random_radii(rng, mu.size()));
      const auto J = integral_curvature(poly);
      double total = 0.0;
      for (double j : J) total += 2.0 * j;
      worst[n] = std::max(worst[n], std::abs(total - ball_constants(n).surface));
    }
  }
  return {worst[2] <= 1e-8 && worst[3] <= 1e-7,
          fmt::format("max |2 sum J - n omega_n|: n=2 {:.2e}, n=3 {:.2e}", worst[2], worst[3])};
}

Outcome curvature_oracle() {
  std::mt19937_64 rng(202);
  double worst_z = 0.0;
  int compared = 0;
  for (int rep = 0; rep < 10; ++rep) {
    const int n = rep % 2 == 0 ? 2 : 3;
    const int atoms = std::uniform_int_distribution<int>(n, 10)(rng);
    const auto mu = random_measure(rng, n, atoms);
    const auto poly = build_polytope(mu, random_radii(rng, mu.size()));
    const auto J = integral_curvature(poly);
    const auto mc = mc_curvature_oracle(poly, 1000000, 300 + rep, workers());
    for (std::size_t i = 0; i < J.size(); ++i) {
      ++compared;
      const double diff = std::abs(J[i] - mc.J[i]);
      if (mc.std_error[i] == 0.0) {
        if (diff > 0.0) worst_z = std::max(worst_z, HUGE_VAL);
        continue;
      }
      worst_z = std::max(worst_z, diff / mc.std_error[i]);
    }
  }
  return {worst_z <= 4.0, fmt::format("{} atoms, worst deviation {:.2f} standard errors", compared, worst_z)};
}

Outcome entropy_closed_forms() {
  const double catalan = testing::kCatalan;
  const double r = std::sqrt(2.0);
  const auto square = build_polytope(
      DiscreteEvenMeasure::create(2, {{Vec3(1, 1, 0), 1.0}, {Vec3(1, -1, 0), 1.0}}), RadialConfig{{r, r}});
  const auto cross = build_polytope(testing::cross_measure(), RadialConfig{{1.0, 1.0}});
  const double es = entropy(square), ec = entropy(cross);
  const double es_err = std::abs(es - (kPi * std::log(2.0) - 4 * catalan));
  const double ec_err = std::abs(ec - (2 * kPi * std::log(2.0) - 4 * catalan));

  std::mt19937_64 rng(303);
  double scale_err = 0.0;
  for (int n : {2, 3}) {
    const auto mu = random_measure(rng, n, 7);
    const auto cfg = random_radii(rng, mu.size());
    const double e0 = entropy(build_polytope(mu, cfg));
    for (double lambda : {0.1, 3.0}) {
      const double e1 = entropy(build_polytope(mu, cfg.scaled(lambda)));
      scale_err = std::max(scale_err, std::abs(e1 - (e0 - ball_constants(n).surface * std::log(lambda))));
    }
  }
  return {es_err <= 1e-6 && ec_err <= 1e-6 && scale_err <= 1e-8,
          fmt::format("square {:.10f} (err {:.1e}), cross {:.10f} (err {:.1e}), scaling err {:.1e}", es, es_err, ec,
                      ec_err, scale_err)};
}

Outcome gradient_identity() {
  std::mt19937_64 rng(404);
  const double h = 1e-4;
  double worst_e = 0.0, worst_phi = 0.0;
  for (int n : {2, 3}) {
    for (int rep = 0; rep < 10; ++rep) {
      auto [mu, cfg] = strict_vertex_config(rng, n, n == 2 ? 5 : 8, 0.9, 1.1);
      const auto J = integral_curvature(build_polytope(mu, cfg));
      const Objective o{mu, -0.5, {}};
      const auto g = phi_gradient(o, cfg);
      for (std::size_t i = 0; i < mu.size(); ++i) {
        auto up = cfg, dn = cfg;
        up.radii[i] *= std::exp(h);
        dn.radii[i] *= std::exp(-h);
        const double de = (entropy(build_polytope(mu, up)) - entropy(build_polytope(mu, dn))) / (2 * h);
        worst_e = std::max(worst_e, std::abs(de + 2 * J[i]));
        const double dphi = (phi(o, up) - phi(o, dn)) / (2 * h);
        worst_phi = std::max(worst_phi, std::abs(dphi - g[i]));
      }
    }
  }
  return {worst_e <= 1e-4 && worst_phi <= 1e-4,
          fmt::format("max |dE + 2J| {:.1e}, max |dPhi - grad| {:.1e}", worst_e, worst_phi)};
}

Outcome symmetric_fixed_points() {
  SolveOptions opts;
  opts.threads = workers();
  std::string detail;
  bool ok = true;
  for (const auto& [name, mu] : {std::pair{"cross", testing::cross_measure()}, std::pair{"cube", testing::cube_measure()}}) {
    const auto rep = maximize_phi(Objective{mu, -0.5, {}}, opts);
    const bool good = rep.status == SolveStatus::converged && rep.max_residual <= 1e-6 &&
                      std::abs(rep.scale - 1.0) <= 1e-6;
    ok = ok && good;
    detail += fmt::format("{}{}: c-1 {:.1e}, residual {:.1e}", detail.empty() ? "" : "; ", name, rep.scale - 1.0,
                          rep.max_residual);
  }
  return {ok, detail};
}

Outcome solve_verify_loop() {
  std::mt19937_64 rng(606);
  SolveOptions opts;
  opts.threads = workers();
  int passed = 0, total = 0;
  double worst_res = 0.0, slowest = 0.0;
  std::string first_failure;
  for (int n : {2, 3}) {
    for (double p : {-0.9, -0.5, -0.1}) {
      for (int rep = 0; rep < 10; ++rep) {
        const int atoms = std::uniform_int_distribution<int>(n + 1, 20)(rng);
        const auto mu = random_measure(rng, n, atoms);
        const auto t0 = std::chrono::steady_clock::now();
        const auto sol = maximize_phi(Objective{mu, p, {}}, opts);
        const auto check = verify(build_polytope(mu, sol.radii), sol.scale, mu, p, 1e-3);
        const double dt = seconds_since(t0);
        ++total;
        slowest = std::max(slowest, dt);
        worst_res = std::max(worst_res, check.max_residual);
        if (sol.status == SolveStatus::converged && check.pass && dt <= 60.0) {
          ++passed;
        } else if (first_failure.empty()) {
          first_failure = fmt::format("; first failure n={} p={} N={} status {} residual {:.1e}", n, p, atoms,
                                      to_string(sol.status), check.max_residual);
        }
      }
    }
  }
  return {passed == total, fmt::format("{}/{} instances, worst residual {:.1e}, slowest {:.2f} s{}", passed, total,
                                       worst_res, slowest, first_failure)};
}

Outcome scale_invariance() {
  std::mt19937_64 rng(707);
  double worst = 0.0;
  for (int n : {2, 3}) {
    for (int rep = 0; rep < 10; ++rep) {
      const auto mu = random_measure(rng, n, 6);
      const auto cfg = random_radii(rng, mu.size());
      const Objective o{mu, std::uniform_real_distribution<double>(-0.95, -0.05)(rng), {}};
      const double base = phi(o, cfg);
      for (double lambda : {0.1, 3.0}) worst = std::max(worst, std::abs(phi(o, cfg.scaled(lambda)) - base));
    }
  }
  return {worst <= 1e-9, fmt::format("max |Phi(lambda Q) - Phi(Q)| {:.1e}", worst)};
}

SubspaceScenario random_scenario(std::mt19937_64& rng, int n, int k, double p) {
  std::uniform_real_distribution<double> w(0.3, 2.0);
  std::vector<Atom> atoms;
  const Vec3 a = random_direction(rng, n);
  Vec3 b = random_direction(rng, n);
  b = (b - b.dot(a) * a).normalized();
  const std::size_t split = k == 1 ? 1 : 3;
  if (k == 1) {
    atoms.push_back({a, w(rng)});
  } else {
    for (int i = 0; i < 3; ++i) {
      const double ang = 2.0 * i + std::uniform_real_distribution<double>(0, 0.5)(rng);
      atoms.push_back({(std::cos(ang) * a + std::sin(ang) * b).normalized(), w(rng)});
    }
  }
  for (int j = 0; j < 2; ++j) atoms.push_back({random_direction(rng, n), w(rng)});
  std::vector<double> radii;
  for (std::size_t i = 0; i < split; ++i) radii.push_back(std::uniform_real_distribution<double>(1.0, 2.0)(rng));
  return normalized_scenario(DiscreteEvenMeasure::create(n, atoms), split, radii, p);
}

Outcome theory_harness() {
  std::mt19937_64 rng(808);
  const double ps[] = {-0.8, -0.5, -0.2};
  int scenarios = 0, good = 0;
  std::size_t violations = 0;
  std::string first_failure;
  for (int n : {2, 3}) {
    for (int rep = 0; rep < 5; ++rep) {
      const int k = n == 2 ? 1 : 1 + rep % 2;
      const double p = ps[rep % 3];
      const auto sc = random_scenario(rng, n, k, p);
      TheoryCheckOptions opts;
      opts.seed = 900 + static_cast<std::uint64_t>(10 * n + rep);
      const auto rep_ = degeneracy_gain_check(sc, default_t_grid(), opts);
      for (const auto& pt : rep_.points)
        if (pt.admissible) violations += pt.partition.violations;
      ++scenarios;
      const bool ok = rep_.partition_ok && rep_.lhs_bound_ok && rep_.G_positive_somewhere &&
                      rep_.G_increasing_near_zero;
      if (ok) {
        ++good;
      } else if (first_failure.empty()) {
        first_failure = fmt::format("; first failure n={} k={} p={} partition {} lhs {} G>0 {} G rising {}", n, k, p,
                                    rep_.partition_ok, rep_.lhs_bound_ok, rep_.G_positive_somewhere,
                                    rep_.G_increasing_near_zero);
      }
    }
  }
  return {good == scenarios && violations == 0,
          fmt::format("{}/{} scenarios, {} partition violations{}", good, scenarios, violations, first_failure)};
}

Outcome rejection() {
  const auto dir = std::filesystem::temp_directory_path() / "lpalex_acceptance";
  std::filesystem::create_directories(dir);
  const auto put = [&](const std::string& name, const std::string& text) {
    std::ofstream((dir / name).string()) << text;
    return (dir / name).string();
  };
  const int flat2 = cli("--quiet solve " + put("flat2.json", R"({"n":2,"p":-0.5,"atoms":[{"u":[1,0],"w":1}]})"));
  const int flat3 = cli("--quiet solve " + put("flat3.json", R"({"n":3,"p":-0.5,"atoms":[{"u":[1,0,0],"w":1},)"
                                                             R"({"u":[0,1,0],"w":1},{"u":[0.6,0.8,0],"w":1}]})"));
  const auto report = (dir / "merged.report.json").string();
  std::string out;
  const int merged = cli("--stable solve " +
                             put("merged.json", R"({"n":3,"p":-0.5,"atoms":[)"
                                                R"({"u":[0.5773502691896258,0.5773502691896258,0.5773502691896258],"w":1.0},)"
                                                R"({"u":[-0.5773502691896258,-0.5773502691896258,-0.5773502691896258],"w":0.5707963267948966},)"
                                                R"({"u":[0.5773502691896258,-0.5773502691896258,0.5773502691896258],"w":1.5707963267948966},)"
                                                R"({"u":[-0.5773502691896258,0.5773502691896258,0.5773502691896258],"w":1.5707963267948966},)"
                                                R"({"u":[-0.5773502691896258,-0.5773502691896258,0.5773502691896258],"w":1.5707963267948966}]})") +
                             " --out " + report,
                         &out);
  const bool warned = out.find("warning") != std::string::npos;
  double scale = 0.0, residual = 1.0;
  std::size_t atoms = 0;
  if (merged == 0) {
    const auto doc = nlohmann::json::parse(io::read_text(report));
    scale = doc["scale"].get<double>();
    residual = doc["max_residual"].get<double>();
    atoms = doc["atoms"].size();
  }
  const bool ok = flat2 == 2 && flat3 == 2 && merged == 0 && warned && atoms == 4 &&
                  std::abs(scale - 1.0) <= 1e-6 && residual <= 1e-6;
  return {ok, fmt::format("non-spanning exits {} and {}; merged cube exit {}, warning {}, atoms {}, c-1 {:.1e}", flat2,
                          flat3, merged, warned ? "yes" : "no", atoms, scale - 1.0)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double budget;
  };
  const std::vector<Criterion> criteria = {
      {"total curvature identity", total_curvature, 5},
      {"curvature matches Monte Carlo", curvature_oracle, 30},
      {"entropy closed forms and scaling", entropy_closed_forms, 5},
      {"gradient identities", gradient_identity, 20},
      {"symmetric fixed points", symmetric_fixed_points, 10},
      {"solve-verify loop", solve_verify_loop, 60.0 * 60},
      {"Phi scale invariance", scale_invariance, 5},
      {"collapse-escape harness", theory_harness, 60},
      {"rejection and merging", rejection, 30},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = seconds_since(t0);
    const bool in_time = dt <= criteria[i].budget;
    const bool pass = o.pass && in_time;
    failed += !pass;
    fmt::print("{} [{}] {:<34} {:8.2f} s  {}{}\n", pass ? "PASS" : "FAIL", i + 1, criteria[i].name, dt, o.detail,
               in_time ? "" : fmt::format(" (over the {:.0f} s budget)", criteria[i].budget));
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
