#include "lpalex/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include <Eigen/Core>

#include "lpalex/errors.hpp"
#include "lpalex/rng.hpp"

namespace lpalex {

void Objective::validate() const {
  if (!std::isfinite(p) || p == 0.0) throw InvalidP("p must be finite and nonzero");
  if (!measure.spanning()) throw DegenerateInput("measure is concentrated on a great subsphere");
  quad.validate();
}

void SolveOptions::validate() const {
  if (max_iters <= 0) throw InvalidArgument("max_iters must be positive");
  if (!(grad_tol >= 1e-12) || !std::isfinite(grad_tol)) throw InvalidArgument("grad_tol must be >= 1e-12");
  if (multistarts <= 0) throw InvalidArgument("multistarts must be positive");
  if (!(escape_t > 0.0 && escape_t <= 0.5)) throw InvalidArgument("escape_t must lie in (0, 0.5]");
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iters: return "max_iters";
    case SolveStatus::degenerate_input: return "degenerate_input";
  }
  return "unknown";
}

namespace {

struct Eval {
  Eigen::VectorXd t;  // canonical log-radii
  double phi = 0.0;
  Eigen::VectorXd grad;
  double grad_norm = 0.0;
};

double weight_sum(const DiscreteEvenMeasure& mu, const RadialConfig& cfg, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) s += std::pow(cfg.radii[i], -p) * mu[i].weight;
  return s;
}

Eval evaluate(const Objective& obj, const Eigen::VectorXd& t) {
  RadialConfig cfg;
  cfg.radii.resize(t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i) cfg.radii[i] = std::exp(t[i]);
  const SymmetricPolytope poly = build_polytope(obj.measure, cfg);
  const RadialConfig& canon = poly.config();
  const double surface = ball_constants(obj.measure.dim()).surface;
  const double s = weight_sum(obj.measure, canon, obj.p);
  const auto J = integral_curvature(poly);

  Eval e;
  e.t.resize(t.size());
  e.grad.resize(t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    e.t[i] = std::log(canon.radii[i]);
    e.grad[i] = -2.0 * J[i] / surface + std::pow(canon.radii[i], -obj.p) * obj.measure[i].weight / s;
  }
  e.phi = entropy(poly, obj.quad) / surface - std::log(2.0 * s) / obj.p;
  e.grad_norm = e.grad.lpNorm<Eigen::Infinity>();
  return e;
}

void normalize_max(Eval& e) {
  const double shift = e.t.maxCoeff();
  e.t.array() -= shift;
}

}  // namespace

double phi(const Objective& objective, const RadialConfig& config) {
  if (!std::isfinite(objective.p) || objective.p == 0.0) throw InvalidP("p must be finite and nonzero");
  const SymmetricPolytope poly = build_polytope(objective.measure, config);
  const double surface = ball_constants(objective.measure.dim()).surface;
  const double s = weight_sum(objective.measure, poly.config(), objective.p);
  return entropy(poly, objective.quad) / surface - std::log(2.0 * s) / objective.p;
}

std::vector<double> phi_gradient(const Objective& objective, const RadialConfig& config) {
  const SymmetricPolytope poly = build_polytope(objective.measure, config);
  const double surface = ball_constants(objective.measure.dim()).surface;
  const double s = weight_sum(objective.measure, poly.config(), objective.p);
  const auto J = integral_curvature(poly);
  std::vector<double> g(J.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = -2.0 * J[i] / surface +
           std::pow(poly.radius(i), -objective.p) * objective.measure[i].weight / s;
  }
  return g;
}

StartResult ascend_from(const Objective& obj, const SolveOptions& opts, const RadialConfig& initial,
                        std::vector<double>* trace) {
  constexpr double kArmijo = 1e-4;
  constexpr double kShrink = 0.5;
  constexpr double kMaxStep = 2.0;
  constexpr double kMinAlpha = 1e-14;

  const Eigen::Index m = static_cast<Eigen::Index>(obj.measure.size());
  if (initial.size() != obj.measure.size()) throw InvalidArgument("initial radii do not match the measure");
  Eigen::VectorXd t0(m);
  for (Eigen::Index i = 0; i < m; ++i) t0[i] = std::log(initial.radii[i]);

  Eval cur = evaluate(obj, t0);
  normalize_max(cur);
  if (trace) trace->push_back(cur.phi);

  StartResult res;
  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(m, m);
  const double log_collapse = std::log(kCollapseRatio);
  int it = 0;
  for (; it < opts.max_iters; ++it) {
    if (cur.grad_norm <= opts.grad_tol) break;

    // Escape move for radii collapsed toward a proper subspace.
    if (cur.t.minCoeff() < log_collapse) {
      for (double lift = opts.escape_t; lift > kCollapseRatio; lift *= 0.25) {
        Eigen::VectorXd t = cur.t;
        for (Eigen::Index i = 0; i < m; ++i)
          if (t[i] < log_collapse) t[i] = std::log(lift);
        Eval cand = evaluate(obj, t);
        if (cand.phi > cur.phi) {
          normalize_max(cand);
          cur = std::move(cand);
          H.setIdentity();
          ++res.escapes;
          if (trace) trace->push_back(cur.phi);
          break;
        }
      }
      if (cur.grad_norm <= opts.grad_tol) break;
    }

    bool accepted = false;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      Eigen::VectorXd d = H * cur.grad;
      double slope = cur.grad.dot(d);
      if (attempt == 1 || !(slope > 0.0)) {
        H.setIdentity();
        d = cur.grad;
        slope = cur.grad.squaredNorm();
      }
      const double dmax = d.lpNorm<Eigen::Infinity>();
      if (dmax > kMaxStep) {
        d *= kMaxStep / dmax;
        slope *= kMaxStep / dmax;
      }
      const double noise = 1e-12 * (1.0 + std::abs(cur.phi));
      for (double alpha = 1.0; alpha > kMinAlpha; alpha *= kShrink) {
        Eval cand = evaluate(obj, cur.t + alpha * d);
        const bool armijo = cand.phi >= cur.phi + kArmijo * alpha * slope;
        // Below the evaluation noise floor, progress is measured by the gradient.
        const bool flat = std::abs(cand.phi - cur.phi) <= noise && cand.grad_norm < cur.grad_norm;
        if (!armijo && !flat) continue;
        const Eigen::VectorXd s = cand.t - cur.t;
        const Eigen::VectorXd y = cur.grad - cand.grad;  // gradient change of -Phi
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
          const double rho = 1.0 / sy;
          const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);
          H = (I - rho * s * y.transpose()) * H * (I - rho * y * s.transpose()) + rho * s * s.transpose();
        }
        normalize_max(cand);
        cur = std::move(cand);
        if (trace) trace->push_back(cur.phi);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }

  res.radii.radii.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) res.radii.radii[i] = std::exp(cur.t[i]);
  res.phi = cur.phi;
  res.grad_norm = cur.grad_norm;
  res.iterations = it;
  res.status = cur.grad_norm <= opts.grad_tol ? SolveStatus::converged : SolveStatus::max_iters;
  return res;
}

double recover_scale(const SymmetricPolytope& poly, const DiscreteEvenMeasure& measure, double p) {
  const CurvatureResult cr = lp_curvature(poly, p);
  if (!(cr.total_Jp > 0.0)) throw EmptyCurvature("L_p curvature vanishes on every atom");
  return std::pow(measure.total_mass() / cr.total_Jp, 1.0 / p);
}

VerifyReport verify(const SymmetricPolytope& poly, double c, const DiscreteEvenMeasure& measure, double p,
                    double tol) {
  if (poly.size() != measure.size()) throw InvalidArgument("polytope and measure differ in atom count");
  if (!(c > 0.0)) throw InvalidArgument("scale must be positive");
  const CurvatureResult cr = lp_curvature(poly, p);
  VerifyReport r;
  r.J = cr.J;
  r.Jp = cr.Jp;
  r.total_curvature = cr.total_J;
  r.sphere_measure = ball_constants(poly.dim()).surface;
  const double cp = std::pow(c, p);
  r.residuals.resize(cr.Jp.size());
  for (std::size_t i = 0; i < cr.Jp.size(); ++i) {
    r.residuals[i] = std::abs(cp * cr.Jp[i] - measure[i].weight) / measure[i].weight;
    r.max_residual = std::max(r.max_residual, r.residuals[i]);
  }
  r.pass = r.max_residual <= tol;
  return r;
}

SolveReport maximize_phi(const Objective& objective, const SolveOptions& opts) {
  objective.validate();
  opts.validate();
  if (!opts.allow_any_p && !(objective.p > -1.0 && objective.p < 0.0)) {
    throw InvalidP("solver requires -1 < p < 0");
  }
  const std::size_t m = objective.measure.size();
  const std::size_t starts = static_cast<std::size_t>(opts.multistarts);

  std::vector<RadialConfig> initial(starts);
  const CounterRng root(opts.seed);
  for (std::size_t k = 0; k < starts; ++k) {
    initial[k].radii.assign(m, 1.0);
    if (k == 0) continue;
    CounterRng rng = root.split(k);
    for (double& r : initial[k].radii) r = std::exp(rng.uniform(-2.0, 0.0));
  }

  std::vector<StartResult> runs(starts);
  std::vector<std::vector<double>> traces(starts);
  auto run = [&](std::size_t k) {
    runs[k] = ascend_from(objective, opts, initial[k], &traces[k]);
    runs[k].start = k;
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(starts)));
  if (workers == 1) {
    for (std::size_t k = 0; k < starts; ++k) run(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t k; (k = next.fetch_add(1)) < starts;) run(k);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  std::size_t best = 0;
  for (std::size_t k = 1; k < starts; ++k) {
    if (runs[k].phi > runs[best].phi) best = k;
  }

  SolveReport rep;
  rep.runs = runs;
  std::vector<std::size_t> order(starts);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return runs[a].phi > runs[b].phi; });
  for (std::size_t k : order) {
    bool distinct = true;
    for (const auto& o : rep.optima) distinct = distinct && std::abs(o.phi - runs[k].phi) > 1e-8;
    if (distinct) rep.optima.push_back(runs[k]);
  }

  const StartResult& b = runs[best];
  rep.best_start = best;
  rep.phi = b.phi;
  rep.phi_trace = traces[best];
  rep.grad_norm = b.grad_norm;
  rep.status = b.status;
  rep.iterations = b.iterations;
  rep.escapes = b.escapes;

  const SymmetricPolytope poly = build_polytope(objective.measure, b.radii);
  rep.radii = poly.config();
  rep.scale = recover_scale(poly, objective.measure, objective.p);
  const VerifyReport vr = verify(poly, rep.scale, objective.measure, objective.p, 1e-3);
  rep.residuals = vr.residuals;
  rep.max_residual = vr.max_residual;
  return rep;
}

}  // namespace lpalex
