#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "lpalex/curvature.hpp"
#include "lpalex/entropy.hpp"
#include "lpalex/errors.hpp"
#include "lpalex/export.hpp"
#include "lpalex/io.hpp"
#include "lpalex/solver.hpp"
#include "lpalex/theory.hpp"

namespace fs = std::filesystem;
using namespace lpalex;

namespace {

enum Exit { kOk = 0, kFail = 1, kValidation = 2, kNoConvergence = 3, kIo = 4 };

struct Globals {
  bool quiet = false;
  bool stable = false;
  unsigned threads = 1;
};

void warn_all(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) fmt::print(stderr, "warning: {}\n", w);
}

double resolve_p(const std::optional<double>& flag, const std::optional<double>& file) {
  if (flag) return *flag;
  if (file) return *file;
  throw ValidationError("no exponent p: set it in the measure file or pass --p");
}

void emit(const Globals& g, const std::string& out, const std::string& text) {
  if (!out.empty()) {
    io::write_text_atomic(out, text);
  } else if (!g.quiet) {
    fmt::print("{}", text);
  }
}

RadialConfig pick_radii(const io::MeasureDocument& doc, const std::string& report) {
  if (!report.empty()) {
    RadialConfig r = io::parse_report(report).radii;
    if (r.size() != doc.measure.size()) throw ValidationError("report radii do not match the measure");
    return r;
  }
  if (doc.radii) return *doc.radii;
  return RadialConfig{std::vector<double>(doc.measure.size(), 1.0)};
}

struct SolveArgs {
  std::string measure, out;
  std::optional<double> p;
  std::uint64_t seed = 0;
  int multistarts = 8, max_iters = 5000, quad_degree = 16;
  double grad_tol = 1e-8, escape_t = 0.1;
  std::vector<std::string> exports;
  bool allow_any_p = false;
};

int cmd_solve(const Globals& g, const SolveArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  io::MeasureDocument doc = io::parse_measure(a.measure);
  warn_all(doc.warnings);
  const double p = resolve_p(a.p, doc.p);
  if (!std::isfinite(p) || p == 0.0) throw ValidationError("p must be finite and nonzero");
  if (!(p > -1.0 && p < 0.0)) {
    if (!a.allow_any_p) throw ValidationError(fmt::format("p = {} lies outside (-1, 0)", p));
    fmt::print(stderr, "warning: p = {} lies outside (-1, 0); no existence guarantee\n", p);
  }
  if (!doc.measure.spanning()) throw ValidationError("measure is concentrated on a great subsphere");

  Objective obj{doc.measure, p, QuadratureSpec{a.quad_degree, 12, 1e-9}};
  SolveOptions opts;
  opts.seed = a.seed;
  opts.multistarts = a.multistarts;
  opts.max_iters = a.max_iters;
  opts.grad_tol = a.grad_tol;
  opts.escape_t = a.escape_t;
  opts.threads = g.threads;
  opts.allow_any_p = a.allow_any_p;
  const SolveReport rep = maximize_phi(obj, opts);
  const SymmetricPolytope poly = build_polytope(doc.measure, rep.radii);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  io::ReportMeta meta{a.seed, g.stable, seconds};
  emit(g, a.out, io::solve_report_text(doc.measure, p, rep, poly, meta));

  if (!a.exports.empty()) {
    fs::path base = a.out.empty() ? fs::path(a.measure).filename() : fs::path(a.out);
    const VerifyReport check = verify(poly, rep.scale, doc.measure, p, 1e-3);
    for (const std::string& kind : a.exports) {
      fs::path target = base;
      target.replace_extension(kind);
      if (kind == "svg") {
        std::vector<double> signs(doc.measure.size());
        const double cp = std::pow(rep.scale, p);
        for (std::size_t i = 0; i < signs.size(); ++i) signs[i] = cp * check.Jp[i] - doc.measure[i].weight;
        io::write_text_atomic(target, exporter::svg(poly, signs));
      } else if (kind == "obj") {
        io::write_text_atomic(target, exporter::obj(poly));
      } else {
        io::write_text_atomic(target, exporter::csv(doc.measure, rep, check));
      }
    }
  }

  if (!g.quiet && !a.out.empty()) {
    fmt::print("status {}  phi {:.12g}  scale {:.12g}  max residual {:.3e}  iterations {}  optima {}\n",
               to_string(rep.status), rep.phi, rep.scale, rep.max_residual, rep.iterations, rep.optima.size());
  }
  if (rep.status != SolveStatus::converged) return kNoConvergence;
  return rep.max_residual <= 1e-3 ? kOk : kFail;
}

struct VerifyArgs {
  std::string report, measure, out;
  std::optional<double> p;
  double tol = 1e-3;
};

int cmd_verify(const Globals& g, const VerifyArgs& a) {
  const io::ReportRadii rr = io::parse_report(a.report);
  io::MeasureDocument doc = io::parse_measure(a.measure);
  warn_all(doc.warnings);
  if (rr.radii.size() != doc.measure.size()) throw ValidationError("report radii do not match the measure");
  const double p = resolve_p(a.p, rr.p ? rr.p : doc.p);
  if (!(a.tol > 0.0)) throw ValidationError("--tol must be positive");
  const SymmetricPolytope poly = build_polytope(doc.measure, rr.radii);
  const VerifyReport vr = verify(poly, rr.scale, doc.measure, p, a.tol);
  if (!a.out.empty()) io::write_text_atomic(a.out, io::verify_report_text(vr, a.tol, {0, g.stable, 0.0}));
  fmt::print("total curvature 2*sum J_i = {:.15g}  vs  n*omega_n = {:.15g}\n", vr.total_curvature,
             vr.sphere_measure);
  if (!g.quiet) {
    for (std::size_t i = 0; i < vr.residuals.size(); ++i)
      fmt::print("atom {:3d}  J {:.12g}  Jp {:.12g}  residual {:.3e}\n", i, vr.J[i], vr.Jp[i], vr.residuals[i]);
    fmt::print("{}  max residual {:.3e}  tol {:.1e}\n", vr.pass ? "PASS" : "FAIL", vr.max_residual, a.tol);
  }
  return vr.pass ? kOk : kFail;
}

struct EntropyArgs {
  std::string measure, report;
  std::optional<double> p;
  int quad_degree = 16;
  double rel_tol = 1e-9;
};

int cmd_entropy(const Globals& g, const EntropyArgs& a) {
  io::MeasureDocument doc = io::parse_measure(a.measure);
  warn_all(doc.warnings);
  const RadialConfig radii = pick_radii(doc, a.report);
  const QuadratureSpec quad{a.quad_degree, 12, a.rel_tol};
  quad.validate();
  const SymmetricPolytope poly = build_polytope(doc.measure, radii);
  const double e = entropy(poly, quad);
  fmt::print("entropy {:.15g}\n", e);
  const std::optional<double> p = a.p ? a.p : doc.p;
  if (p) {
    const double value = phi(Objective{doc.measure, *p, quad}, radii);
    fmt::print("phi {:.15g}\n", value);
  }
  if (!g.quiet) {
    for (std::size_t i = 0; i < poly.size(); ++i)
      fmt::print("atom {:3d}  rho {:.12g}  {}\n", i, poly.radius(i), poly.is_vertex(i) ? "vertex" : "absorbed");
  }
  return kOk;
}

struct CurvatureArgs {
  std::string measure, report;
  std::optional<double> p;
  std::size_t mc = 0;
  std::uint64_t seed = 0;
};

int cmd_curvature(const Globals& g, const CurvatureArgs& a) {
  io::MeasureDocument doc = io::parse_measure(a.measure);
  warn_all(doc.warnings);
  const RadialConfig radii = pick_radii(doc, a.report);
  const SymmetricPolytope poly = build_polytope(doc.measure, radii);
  const double p = a.p ? *a.p : doc.p.value_or(-0.5);
  if (!std::isfinite(p) || p == 0.0) throw ValidationError("p must be finite and nonzero");
  const CurvatureResult cr = lp_curvature(poly, p);
  if (!cr.p_in_range) fmt::print(stderr, "warning: p = {} lies outside (-1, 0)\n", p);
  std::optional<MonteCarloCurvature> mc;
  if (a.mc > 0) mc = mc_curvature_oracle(poly, a.mc, a.seed, g.threads);
  if (!g.quiet) {
    for (std::size_t i = 0; i < poly.size(); ++i) {
      fmt::print("atom {:3d}  {:8s}  J {:.12g}  Jp {:.12g}", i, poly.is_vertex(i) ? "vertex" : "absorbed", cr.J[i],
                 cr.Jp[i]);
      if (mc) fmt::print("  mc {:.6f} +- {:.6f}", mc->J[i], mc->std_error[i]);
      fmt::print("\n");
    }
  }
  fmt::print("total J {:.15g}  n*omega_n {:.15g}  total Jp {:.15g}\n", cr.total_J,
             ball_constants(poly.dim()).surface, cr.total_Jp);
  fmt::print("spanning {}\n", spanning_check(doc.measure) ? "yes" : "no");
  return kOk;
}

struct TheoryArgs {
  std::string scenario, out;
  std::vector<double> t_grid;
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
  int grid = 720;
};

int cmd_theory(const Globals& g, const TheoryArgs& a) {
  io::ScenarioDocument doc = io::parse_scenario(a.scenario);
  warn_all(doc.warnings);
  TheoryCheckOptions opts;
  opts.samples = a.samples;
  opts.seed = a.seed;
  opts.grid = a.grid;
  const auto grid = a.t_grid.empty() ? default_t_grid() : a.t_grid;
  const auto t0 = std::chrono::steady_clock::now();
  const TheoryCheckReport rep = degeneracy_gain_check(doc.scenario, grid, opts);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  emit(g, a.out, io::theory_report_text(doc.scenario, rep, {a.seed, g.stable, seconds}));
  if (!g.quiet && !a.out.empty()) {
    fmt::print("c_f {:.6g}  delta0 {:.6g}  phi_limit {:.12g}\n", rep.constants.c_f, rep.constants.delta0,
               rep.phi_limit);
    for (const auto& pt : rep.points) {
      if (!pt.admissible || !pt.note.empty()) {
        fmt::print("t {:.1e}  {}\n", pt.t, pt.note);
        continue;
      }
      fmt::print("t {:.1e}  G {:+.6e}  lhs {:+.6e}  lhs>=G {}  g1 {}  partition {}\n", pt.t, pt.gains.G, pt.lhs,
                 pt.lhs_ok, pt.g1_ok, pt.partition.ok);
    }
    fmt::print("partition {}  lhs_bound {}  g1_consistent {}  G_positive {}  G_increasing {}\n", rep.partition_ok,
               rep.lhs_bound_ok, rep.g1_consistent, rep.G_positive_somewhere, rep.G_increasing_near_zero);
  }
  for (const auto& n : rep.notes) fmt::print(stderr, "note: {}\n", n);
  return rep.all_ok() ? kOk : kFail;
}

int run(int argc, char** argv) {
  CLI::App app{"lpalex: even discrete L_p Aleksandrov problem solver"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_flag("--quiet", g.quiet, "Suppress non-essential output");
  app.add_flag("--stable", g.stable, "Omit timestamps and timings from reports");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1u, 256u));

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Maximize Phi and recover K and c");
  solve->add_option("measure", sa.measure, "Measure file")->required();
  solve->add_option("--p", sa.p, "Exponent (overrides the file)");
  solve->add_option("--seed", sa.seed, "Random seed");
  solve->add_option("--multistarts", sa.multistarts, "Number of starts")->check(CLI::PositiveNumber);
  solve->add_option("--max-iters", sa.max_iters, "Iteration limit per start")->check(CLI::PositiveNumber);
  solve->add_option("--grad-tol", sa.grad_tol, "Gradient infinity-norm tolerance");
  solve->add_option("--escape-t", sa.escape_t, "First lift height for collapsed radii");
  solve->add_option("--quad-degree", sa.quad_degree, "Gauss-Legendre points per panel");
  solve->add_option("--out", sa.out, "Report file");
  solve->add_option("--export", sa.exports, "svg, obj or csv")->check(CLI::IsMember({"svg", "obj", "csv"}));
  solve->add_flag("--allow-any-p", sa.allow_any_p, "Accept p outside (-1, 0) with a warning");

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "Recompute curvature for a solve report");
  ver->add_option("report", va.report, "Report file")->required();
  ver->add_option("measure", va.measure, "Measure file")->required();
  ver->add_option("--p", va.p, "Exponent");
  ver->add_option("--tol", va.tol, "Residual tolerance");
  ver->add_option("--out", va.out, "Verification report file");

  EntropyArgs ea;
  auto* ent = app.add_subcommand("entropy", "Entropy of conv{±rho_i u_i}");
  ent->add_option("measure", ea.measure, "Measure file")->required();
  ent->add_option("--radii-from", ea.report, "Take radii from a solve report");
  ent->add_option("--p", ea.p, "Exponent for Phi");
  ent->add_option("--quad-degree", ea.quad_degree, "Gauss-Legendre points per panel");
  ent->add_option("--rel-tol", ea.rel_tol, "Relative quadrature tolerance");

  CurvatureArgs ca;
  auto* cur = app.add_subcommand("curvature", "Per-atom integral curvature");
  cur->add_option("measure", ca.measure, "Measure file")->required();
  cur->add_option("--radii-from", ca.report, "Take radii from a solve report");
  cur->add_option("--p", ca.p, "Exponent for Jp");
  cur->add_option("--mc", ca.mc, "Monte Carlo samples for the oracle (>= 10000)");
  cur->add_option("--seed", ca.seed, "Random seed");

  TheoryArgs ta;
  auto* th = app.add_subcommand("theory-check", "Check the collapse-escape inequalities");
  th->add_option("scenario", ta.scenario, "Scenario file")->required();
  th->add_option("--t-grid", ta.t_grid, "Comma-separated t values")->delimiter(',');
  th->add_option("--samples", ta.samples, "Partition samples per t");
  th->add_option("--seed", ta.seed, "Random seed");
  th->add_option("--grid", ta.grid, "Angular grid for c_f and delta0");
  th->add_option("--out", ta.out, "Report file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }

  if (*solve) return cmd_solve(g, sa);
  if (*ver) return cmd_verify(g, va);
  if (*ent) return cmd_entropy(g, ea);
  if (*cur) return cmd_curvature(g, ca);
  return cmd_theory(g, ta);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const IoError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kIo;
  } catch (const QuadratureNotConverged& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kNoConvergence;
  } catch (const ValidationError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kValidation;
  } catch (const ParseError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kValidation;
  } catch (const InvalidP& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kValidation;
  } catch (const DegenerateInput& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kValidation;
  } catch (const DimensionUnsupported& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kValidation;
  } catch (const InvalidArgument& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kValidation;
  } catch (const SpanningViolated& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kValidation;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kFail;
  }
}
