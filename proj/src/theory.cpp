#include "lpalex/theory.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "lpalex/errors.hpp"
#include "lpalex/quadrature.hpp"
#include "lpalex/rng.hpp"
#include "lpalex/solver.hpp"

namespace lpalex {

namespace {

constexpr double kOutsideTolerance = 1e-10;
constexpr double kPartitionSlack = 1e-12;

Eigen::VectorXd head(const Vec3& v, int n) { return v.head(n); }

// K^0 expressed in coordinates of S (k = 2 only).
SymmetricPolytope planar_limit_body(const SubspaceScenario& sc) {
  std::vector<Vec3> dirs;
  for (std::size_t i = 0; i < sc.split; ++i) {
    const Eigen::VectorXd c = sc.basis.transpose() * head(sc.measure[i].u, sc.dim());
    dirs.push_back(Vec3(c[0], c[1], 0.0).normalized());
  }
  RadialConfig cfg{sc.radii};
  return build_polytope(2, dirs, cfg);
}

void fill_subspace(SubspaceScenario& sc) {
  const int n = sc.dim();
  Eigen::MatrixXd m(sc.split, n);
  for (std::size_t i = 0; i < sc.split; ++i) m.row(i) = head(sc.measure[i].u, n).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  int k = 0;
  for (int j = 0; j < svd.singularValues().size(); ++j)
    if (svd.singularValues()(j) > kRankTolerance) ++k;
  sc.k = k;
  sc.basis = svd.matrixV().leftCols(k);
  sc.complement = svd.matrixV().rightCols(n - k);
}

double f_outside(const SubspaceScenario& sc, const Eigen::VectorXd& v) {
  double f = 0.0;
  for (std::size_t j = sc.split; j < sc.measure.size(); ++j) {
    f = std::max(f, std::abs(head(sc.measure[j].u, sc.dim()).dot(v)));
  }
  return f;
}

// Adaptive integral with relative tolerance only.
double integral(const std::function<double(double)>& f, double a, double b, const QuadratureSpec& q) {
  const quad::GaussRule rule(q.degree);
  const quad::Estimate est = quad::adaptive(f, a, b, rule, q.rel_tol, 0.0, q.max_subdivision);
  if (!est.converged) throw QuadratureNotConverged("gain-function integral did not converge");
  return est.value;
}

// x^{k-1} (1 - x^2)^{(n-k-2)/2}: the polar weight after x = cos(phi).
double polar_weight(int n, int k, double x) {
  return std::pow(x, k - 1) * std::pow(1.0 - x * x, 0.5 * (n - k - 2));
}

}  // namespace

SubspaceScenario make_scenario(DiscreteEvenMeasure measure, std::size_t split, std::vector<double> radii,
                               double R, double p) {
  SubspaceScenario sc;
  sc.measure = std::move(measure);
  sc.split = split;
  sc.radii = std::move(radii);
  sc.R = R;
  sc.p = p;
  const int n = sc.dim();
  if (n != 2 && n != 3) throw DimensionUnsupported(n);
  if (split == 0 || split >= sc.measure.size())
    throw ValidationError("split must leave atoms on both sides");
  if (sc.radii.size() != split) throw ValidationError("one radius per subspace atom is required");
  if (!std::isfinite(p) || p == 0.0) throw ValidationError("p must be finite and nonzero");
  if (!std::isfinite(R) || R < 1.0) throw ValidationError("R must be at least 1");
  fill_subspace(sc);
  if (sc.k == 0 || sc.k >= n) throw ValidationError("subspace atoms must span a proper subspace");
  for (std::size_t j = split; j < sc.measure.size(); ++j) {
    const double off = (sc.complement.transpose() * head(sc.measure[j].u, n)).norm();
    if (off <= kOutsideTolerance) throw ValidationError("atom " + std::to_string(j) + " lies in the subspace");
  }
  for (double r : sc.radii) {
    if (!(r >= 1.0) || !(r <= R)) throw ValidationError("subspace radii must lie in [1, R]");
  }
  if (sc.k == 2) sc.radii = planar_limit_body(sc).config().radii;
  const double r_in = inradius_in_subspace(sc);
  if (r_in < 1.0 - 1e-12) {
    throw ValidationError("the unit ball of the subspace is not inside K^0 (inradius " +
                          std::to_string(r_in) + ")");
  }
  return sc;
}

SubspaceScenario normalized_scenario(DiscreteEvenMeasure measure, std::size_t split, std::vector<double> radii,
                                     double p) {
  SubspaceScenario probe;
  probe.measure = measure;
  probe.split = split;
  probe.radii = radii;
  if (measure.dim() != 2 && measure.dim() != 3) throw DimensionUnsupported(measure.dim());
  if (split == 0 || split >= measure.size() || radii.size() != split)
    throw ValidationError("split and radii do not match the measure");
  for (double r : radii)
    if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError("radii must be positive");
  fill_subspace(probe);
  if (probe.k == 0 || probe.k >= probe.dim()) throw ValidationError("subspace atoms must span a proper subspace");
  if (probe.k == 2) probe.radii = planar_limit_body(probe).config().radii;
  const double r_in = inradius_in_subspace(probe);
  for (double& r : probe.radii) r /= r_in;
  for (double& r : probe.radii) r = std::max(r, 1.0);
  const double R = *std::max_element(probe.radii.begin(), probe.radii.end());
  return make_scenario(std::move(measure), split, probe.radii, R, p);
}

double inradius_in_subspace(const SubspaceScenario& sc) {
  if (sc.k == 1) return *std::max_element(sc.radii.begin(), sc.radii.end());
  const SymmetricPolytope body = planar_limit_body(sc);
  double r = std::numeric_limits<double>::infinity();
  for (const Facet& f : body.facets()) r = std::min(r, f.offset);
  return r;
}

double polar_angle(const SubspaceScenario& sc, const Vec3& v) {
  const Eigen::VectorXd x = head(v, sc.dim());
  const double c = (sc.basis.transpose() * x).norm();
  const double s = (sc.complement.transpose() * x).norm();
  return std::atan2(s, c);
}

LowerBound lower_bound_constants(const SubspaceScenario& sc, int grid) {
  if (grid < 8) throw InvalidArgument("grid must be at least 8");
  const int n = sc.dim();
  const double half_pi = 0.5 * kPi;
  // f vanishes somewhere on S-perp iff the projected outside atoms fail to span it.
  Eigen::MatrixXd proj(n - sc.k, sc.measure.size() - sc.split);
  for (std::size_t j = sc.split; j < sc.measure.size(); ++j)
    proj.col(j - sc.split) = sc.complement.transpose() * head(sc.measure[j].u, n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(proj);
  if (proj.cols() < proj.rows() || svd.singularValues().minCoeff() <= kRankTolerance)
    throw SpanningViolated("outside atoms are orthogonal to part of S-perp");
  // Rows: polar angle phi from 0 (in S) to pi/2 (in S-perp); columns cover
  // the remaining circle of directions.
  std::vector<Eigen::VectorXd> in_s, in_perp;
  if (n == 2) {
    in_s = {sc.basis.col(0)};
    in_perp = {sc.complement.col(0), -sc.complement.col(0)};
  } else if (sc.k == 1) {
    in_s = {sc.basis.col(0)};
    for (int j = 0; j < 2 * grid; ++j) {
      const double psi = kPi * j / grid;
      in_perp.push_back(std::cos(psi) * sc.complement.col(0) + std::sin(psi) * sc.complement.col(1));
    }
  } else {
    in_perp = {sc.complement.col(0)};
    for (int j = 0; j < 2 * grid; ++j) {
      const double psi = kPi * j / grid;
      in_s.push_back(std::cos(psi) * sc.basis.col(0) + std::sin(psi) * sc.basis.col(1));
    }
  }
  std::vector<double> row_min(grid + 1, std::numeric_limits<double>::infinity());
  for (int r = 0; r <= grid; ++r) {
    const double phi = half_pi * r / grid;
    for (const auto& a : in_s)
      for (const auto& b : in_perp)
        row_min[r] = std::min(row_min[r], f_outside(sc, std::cos(phi) * a + std::sin(phi) * b));
  }
  LowerBound lb;
  lb.f_min_perp = row_min[grid];
  if (!(lb.f_min_perp > 0.0)) throw SpanningViolated("outside atoms are orthogonal to part of S-perp");
  lb.c_f = 0.5 * lb.f_min_perp;
  int first = grid;
  while (first > 0 && row_min[first - 1] >= lb.c_f) --first;
  lb.delta0 = half_pi * (grid - std::max(first, 1)) / grid;
  return lb;
}

bool admissible(const SubspaceScenario& sc, const LowerBound& lb, double t) {
  return t > 0.0 && t < 1.0 && lb.c_f * t / sc.R < std::sin(lb.delta0);
}

SymmetricPolytope build_perturbation(const SubspaceScenario& sc, const LowerBound& lb, double t) {
  if (!admissible(sc, lb, t)) throw InadmissibleT("t = " + std::to_string(t) + " is not admissible");
  RadialConfig cfg;
  cfg.radii = sc.radii;
  cfg.radii.resize(sc.measure.size(), t);
  return build_polytope(sc.measure, cfg);
}

double perturbed_support(const SubspaceScenario& sc, double t, const Vec3& v) {
  double h = 0.0;
  for (std::size_t i = 0; i < sc.measure.size(); ++i) {
    const double r = i < sc.split ? sc.radii[i] : t;
    h = std::max(h, r * std::abs(sc.measure[i].u.dot(v)));
  }
  return h;
}

PartitionVerdict partition_check(const SubspaceScenario& sc, const LowerBound& lb, double t, std::size_t samples,
                                 std::uint64_t seed, RegionBounds bounds) {
  double lo = std::acos(lb.c_f * t / sc.R);  // Omega_1 is phi > lo
  double hi = std::acos(t);                  // Omega_2 is phi < hi
  if (bounds == RegionBounds::swapped) std::swap(lo, hi);
  PartitionVerdict v;
  v.samples = samples;
  CounterRng rng(seed);
  auto record = [&v](double excess) {
    if (excess > kPartitionSlack) {
      ++v.violations;
      v.worst_excess = std::max(v.worst_excess, excess);
    }
  };
  for (std::size_t s = 0; s < samples; ++s) {
    const Vec3 x = rng.sphere(sc.dim());
    const double phi = polar_angle(sc, x);
    const double ht = perturbed_support(sc, t, x);
    const double h0 = perturbed_support(sc, 0.0, x);
    if (phi < hi) {
      ++v.region_counts[1];
      record(std::abs(ht - h0));
    } else if (phi > lo) {
      ++v.region_counts[0];
      record(ht - t);
      record(std::cos(phi) - h0);
    } else {
      ++v.region_counts[2];
      record(ht - sc.R);
      record(std::cos(phi) - h0);
    }
  }
  v.ok = v.violations == 0;
  return v;
}

Gains gain_functions(const SubspaceScenario& sc, const LowerBound& lb, double t) {
  if (!admissible(sc, lb, t)) throw InadmissibleT("t = " + std::to_string(t) + " is not admissible");
  const int n = sc.dim(), k = sc.k;
  const QuadratureSpec q{16, 40, 1e-12};
  const double x_a = lb.c_f * t / sc.R;
  auto w = [n, k](double x) { return polar_weight(n, k, x); };
  const double I_A = integral(w, 0.0, x_a, q);
  // x = t e^{-y} removes the logarithmic endpoint singularity.
  const double log_t = std::log(t);
  auto wc = [&](double y) {
    const double x = t * std::exp(-y);
    return (log_t - y) * polar_weight(n, k, x) * x;
  };
  const double I_C = integral(wc, 0.0, 60.0, q);
  const double band = std::asin(t) - std::asin(x_a);  // arccos(x_a) - arccos(t)

  Gains g;
  g.g1 = -log_t * I_A - std::log(sc.R) * band + I_C;
  for (std::size_t i = 0; i < sc.split; ++i) g.a += std::pow(sc.radii[i], -sc.p) * sc.measure[i].weight;
  for (std::size_t j = sc.split; j < sc.measure.size(); ++j) g.b += sc.measure[j].weight;
  g.g2 = -std::log1p(g.b / g.a * std::pow(t, -sc.p)) / sc.p;
  const double sphere = ball_constants(n).surface;
  g.kappa = k * unit_ball_volume(k) * (n - k) * unit_ball_volume(n - k) / sphere;
  g.G = g.kappa * g.g1 + g.g2;
  return g;
}

double limit_entropy(const SubspaceScenario& sc, const QuadratureSpec& quad) {
  const int n = sc.dim(), k = sc.k;
  const double area_s = k * unit_ball_volume(k);
  const double area_perp = (n - k) * unit_ball_volume(n - k);
  // Polar integrals of log(cos phi) and 1 against cos^{k-1} sin^{n-k-1}.
  double L, B;
  if (n == 2) {
    L = -0.5 * kPi * std::log(2.0);
    B = 0.5 * kPi;
  } else if (k == 1) {
    L = -1.0;
    B = 1.0;
  } else {
    L = std::log(2.0) - 1.0;
    B = 1.0;
  }
  double log_h_s;  // integral of log h_{K^0} over the unit sphere of S
  if (k == 1) {
    log_h_s = 2.0 * std::log(*std::max_element(sc.radii.begin(), sc.radii.end()));
  } else {
    log_h_s = -entropy(planar_limit_body(sc), quad);
  }
  return -(area_s * area_perp * L + area_perp * B * log_h_s);
}

double limit_phi(const SubspaceScenario& sc, const QuadratureSpec& quad) {
  double a = 0.0;
  for (std::size_t i = 0; i < sc.split; ++i) a += std::pow(sc.radii[i], -sc.p) * sc.measure[i].weight;
  return limit_entropy(sc, quad) / ball_constants(sc.dim()).surface - std::log(2.0 * a) / sc.p;
}

std::vector<double> default_t_grid() {
  std::vector<double> g;
  for (int e = -12; e <= -1; ++e) g.push_back(std::pow(10.0, e));
  return g;
}

TheoryCheckReport degeneracy_gain_check(const SubspaceScenario& sc, std::vector<double> t_grid,
                                        const TheoryCheckOptions& opts) {
  std::sort(t_grid.begin(), t_grid.end());
  TheoryCheckReport rep;
  rep.p = sc.p;
  rep.constants = lower_bound_constants(sc, opts.grid);
  rep.entropy_limit = limit_entropy(sc, opts.quad);
  rep.phi_limit = limit_phi(sc, opts.quad);
  if (!(sc.p > -1.0 && sc.p < 0.0)) rep.notes.push_back("p lies outside (-1, 0)");

  const double sphere = ball_constants(sc.dim()).surface;
  const double weight = sc.k * unit_ball_volume(sc.k) * (sc.dim() - sc.k) * unit_ball_volume(sc.dim() - sc.k);
  const Objective obj{sc.measure, sc.p, opts.quad};
  const CounterRng root(opts.seed);

  rep.partition_ok = true;
  rep.lhs_bound_ok = true;
  rep.g1_consistent = true;
  std::vector<const GridPoint*> usable;
  rep.points.reserve(t_grid.size());
  for (std::size_t idx = 0; idx < t_grid.size(); ++idx) {
    GridPoint gp;
    gp.t = t_grid[idx];
    gp.admissible = admissible(sc, rep.constants, gp.t);
    if (!gp.admissible) {
      gp.note = "inadmissible: skipped";
      rep.points.push_back(gp);
      continue;
    }
    try {
      const SymmetricPolytope kt = build_perturbation(sc, rep.constants, gp.t);
      const double e_t = entropy(kt, opts.quad);
      gp.phi_t = phi(obj, kt.config());
      gp.lhs = gp.phi_t - rep.phi_limit;
      gp.delta1 = (e_t - rep.entropy_limit) / sphere;
      gp.gains = gain_functions(sc, rep.constants, gp.t);
      gp.lhs_ok = gp.lhs >= gp.gains.G - 1e-9;
      gp.g1_ok = sphere * gp.delta1 >= weight * gp.gains.g1 - 1e-9;
      gp.partition = partition_check(sc, rep.constants, gp.t, opts.samples, root.split(idx).next_u64());
    } catch (const Error& e) {
      gp.note = std::string("evaluation failed: ") + e.what();
      gp.lhs_ok = gp.g1_ok = false;
      gp.partition.ok = false;
    }
    rep.partition_ok = rep.partition_ok && gp.partition.ok;
    rep.lhs_bound_ok = rep.lhs_bound_ok && gp.lhs_ok;
    rep.g1_consistent = rep.g1_consistent && gp.g1_ok;
    rep.points.push_back(gp);
  }
  for (const auto& gp : rep.points)
    if (gp.admissible && gp.note.empty()) usable.push_back(&gp);
  if (usable.empty()) {
    rep.partition_ok = rep.lhs_bound_ok = rep.g1_consistent = false;
    rep.notes.push_back("no admissible grid point");
    return rep;
  }
  for (const GridPoint* gp : usable) rep.G_positive_somewhere = rep.G_positive_somewhere || gp->gains.G > 0.0;
  if (usable.size() >= 4) {
    rep.G_increasing_near_zero = true;
    for (std::size_t j = 0; j < 3; ++j)
      rep.G_increasing_near_zero = rep.G_increasing_near_zero && usable[j + 1]->gains.G > usable[j]->gains.G;
  } else {
    rep.notes.push_back("fewer than four admissible grid points; monotonicity near 0 not assessed");
  }
  return rep;
}

}  // namespace lpalex
