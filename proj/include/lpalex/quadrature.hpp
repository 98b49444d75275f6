#pragma once

#include <functional>
#include <vector>

namespace lpalex::quad {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussRule(int degree);
  int degree() const { return static_cast<int>(nodes.size()); }
  /// Single-panel estimate of the integral of f over [a, b].
  double apply(const std::function<double(double)>& f, double a, double b) const;
};

struct Estimate {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

/// Adaptive bisection: a panel is accepted when its one-panel and two-panel
/// estimates differ by at most max(rel_tol * |value|, abs_tol * width / (b - a)).
/// Panels at `max_depth` bisections are accepted and flag non-convergence.
Estimate adaptive(const std::function<double(double)>& f, double a, double b,
                  const GaussRule& rule, double rel_tol, double abs_tol, int max_depth);

}  // namespace lpalex::quad
