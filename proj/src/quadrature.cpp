#include "lpalex/quadrature.hpp"

#include <cmath>

#include "lpalex/errors.hpp"

namespace lpalex::quad {

GaussRule::GaussRule(int degree) {
  if (degree < 1) throw InvalidArgument("Gauss rule degree must be positive");
  nodes.resize(degree);
  weights.resize(degree);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (degree + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (degree + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= degree; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = degree * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= degree; ++k) {
      const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = degree * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[degree - 1 - i] = x;
    weights[i] = w;
    weights[degree - 1 - i] = w;
  }
  if (degree % 2 == 1) nodes[degree / 2] = 0.0;
}

double GaussRule::apply(const std::function<double(double)>& f, double a, double b) const {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(mid + half * nodes[i]);
  return s * half;
}

namespace {

struct Panel {
  const std::function<double(double)>& f;
  const GaussRule& rule;
  double tol_abs_density;
  double rel_tol;
  int max_depth;
};

void refine(const Panel& ctx, double a, double b, double whole, int depth, Estimate& acc,
            double global_scale) {
  const double mid = 0.5 * (a + b);
  const double left = ctx.rule.apply(ctx.f, a, mid);
  const double right = ctx.rule.apply(ctx.f, mid, b);
  const double two = left + right;
  const double diff = std::abs(two - whole);
  const double tol = std::max(ctx.rel_tol * global_scale, ctx.tol_abs_density) * (b - a);
  if (diff <= tol || depth >= ctx.max_depth) {
    if (diff > tol) acc.converged = false;
    acc.value += two;
    acc.error += diff;
    return;
  }
  refine(ctx, a, mid, left, depth + 1, acc, global_scale);
  refine(ctx, mid, b, right, depth + 1, acc, global_scale);
}

}  // namespace

Estimate adaptive(const std::function<double(double)>& f, double a, double b, const GaussRule& rule,
                  double rel_tol, double abs_tol, int max_depth) {
  Estimate est;
  if (!(b > a)) return est;
  const double width = b - a;
  const double whole = rule.apply(f, a, b);
  // Tolerances are spread over the interval in proportion to panel width.
  const Panel ctx{f, rule, abs_tol / width, rel_tol, max_depth};
  refine(ctx, a, b, whole, 0, est, std::abs(whole) / width);
  return est;
}

}  // namespace lpalex::quad
