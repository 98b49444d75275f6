#pragma once

// Shared fixtures and independent oracles for the test suites.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "lpalex/geometry.hpp"
#include "lpalex/measure.hpp"

namespace testing {

using lpalex::Atom;
using lpalex::DiscreteEvenMeasure;
using lpalex::RadialConfig;
using lpalex::Vec3;

using lpalex::kPi;
inline constexpr double kCatalan = 0.91596559417721901505;

inline Vec3 random_direction(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Vec3 v(g(rng), g(rng), n == 3 ? g(rng) : 0.0);
  return v.normalized();
}

inline DiscreteEvenMeasure random_measure(std::mt19937_64& rng, int n, int atoms, double wlo = 0.2,
                                          double whi = 2.0) {
  std::uniform_real_distribution<double> w(wlo, whi);
  for (;;) {
    std::vector<Atom> a;
    for (int i = 0; i < atoms; ++i) a.push_back({random_direction(rng, n), w(rng)});
    auto m = DiscreteEvenMeasure::create(n, a);
    if (m.spanning() && static_cast<int>(m.size()) == atoms) return m;
  }
}

inline RadialConfig random_radii(std::mt19937_64& rng, std::size_t m, double lo = 0.5, double hi = 1.5) {
  std::uniform_real_distribution<double> r(lo, hi);
  RadialConfig c;
  for (std::size_t i = 0; i < m; ++i) c.radii.push_back(r(rng));
  return c;
}

inline DiscreteEvenMeasure cross_measure() {
  return DiscreteEvenMeasure::create(2, {{Vec3(1, 0, 0), kPi / 2}, {Vec3(0, 1, 0), kPi / 2}});
}

inline DiscreteEvenMeasure cube_measure(double w = kPi / 2) {
  const double s = 1.0 / std::sqrt(3.0);
  return DiscreteEvenMeasure::create(
      3, {{Vec3(s, s, s), w}, {Vec3(s, -s, s), w}, {Vec3(-s, s, s), w}, {Vec3(-s, -s, s), w}});
}

inline DiscreteEvenMeasure octahedron_measure(double w = 2 * kPi / 3) {
  return DiscreteEvenMeasure::create(3, {{Vec3::UnitX(), w}, {Vec3::UnitY(), w}, {Vec3::UnitZ(), w}});
}

/// rho_K(u) for K = conv{±x_i} as 1 / max{u . y : |x_i . y| <= 1}, by
/// enumerating the vertices of the polar polytope.
inline double radial_oracle(int n, const std::vector<Vec3>& pts, const Vec3& u) {
  const int m = static_cast<int>(pts.size());
  double best = 0.0;
  auto feasible = [&](const Eigen::VectorXd& y) {
    for (const Vec3& x : pts)
      if (std::abs(x.head(n).dot(y)) > 1.0 + 1e-9) return false;
    return true;
  };
  std::vector<int> idx(n);
  std::function<void(int, int)> rec = [&](int depth, int start) {
    if (depth == n) {
      for (int signs = 0; signs < (1 << n); ++signs) {
        Eigen::MatrixXd A(n, n);
        Eigen::VectorXd b(n);
        for (int r = 0; r < n; ++r) {
          A.row(r) = pts[idx[r]].head(n).transpose();
          b[r] = (signs >> r) & 1 ? -1.0 : 1.0;
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
        if (lu.rank() < n) continue;
        const Eigen::VectorXd y = lu.solve(b);
        if (feasible(y)) best = std::max(best, u.head(n).dot(y));
      }
      return;
    }
    for (int i = start; i < m; ++i) {
      idx[depth] = i;
      rec(depth + 1, i + 1);
    }
  };
  rec(0, 0);
  return 1.0 / best;
}

/// Points rho_i u_i of a configuration.
inline std::vector<Vec3> points(const DiscreteEvenMeasure& mu, const RadialConfig& cfg) {
  std::vector<Vec3> out;
  for (std::size_t i = 0; i < mu.size(); ++i) out.push_back(cfg.radii[i] * mu[i].u);
  return out;
}

/// -integral of log h over the circle by the composite midpoint rule.
inline double planar_entropy_oracle(const std::function<double(double)>& h, std::size_t panels = 1u << 20) {
  const double dt = 2 * kPi / static_cast<double>(panels);
  long double s = 0.0L;
  for (std::size_t j = 0; j < panels; ++j) s += std::log(h((static_cast<double>(j) + 0.5) * dt));
  return -static_cast<double>(s) * dt;
}

/// Gauss-Legendre nodes on [a, b] from Eigen's symmetric eigensolver
/// (Golub-Welsch), independent of the library's Newton construction.
inline void golub_welsch(int m, double a, double b, std::vector<double>& x, std::vector<double>& w) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
  for (int k = 1; k < m; ++k) J(k, k - 1) = J(k - 1, k) = k / std::sqrt(4.0 * k * k - 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  x.resize(m);
  w.resize(m);
  for (int k = 0; k < m; ++k) {
    x[k] = 0.5 * (a + b) + 0.5 * (b - a) * es.eigenvalues()[k];
    w[k] = (b - a) * es.eigenvectors()(0, k) * es.eigenvectors()(0, k);
  }
}

/// -integral of log h over S^2 with h smooth on the closed positive octant
/// and even in every coordinate: 8 times a product Gauss rule in polar
/// coordinates on the octant.
inline double octant_entropy_oracle(const std::function<double(const Vec3&)>& h, int m = 120) {
  std::vector<double> px, pw, tx, tw;
  golub_welsch(m, 0.0, kPi / 2, px, pw);
  golub_welsch(m, 0.0, kPi / 2, tx, tw);
  long double s = 0.0L;
  for (int i = 0; i < m; ++i) {
    const double sp = std::sin(px[i]), cp = std::cos(px[i]);
    for (int j = 0; j < m; ++j) {
      const Vec3 v(sp * std::cos(tx[j]), sp * std::sin(tx[j]), cp);
      s += pw[i] * tw[j] * sp * std::log(h(v));
    }
  }
  return -8.0 * static_cast<double>(s);
}

/// -integral of log h over S^2 by a (z, theta) midpoint grid; only
/// second-order accurate across the kinks of h.
inline double sphere_entropy_grid(const std::function<double(const Vec3&)>& h, int nz = 1500, int nt = 3000) {
  long double s = 0.0L;
  for (int i = 0; i < nz; ++i) {
    const double z = -1.0 + (i + 0.5) * 2.0 / nz;
    const double r = std::sqrt(1.0 - z * z);
    for (int j = 0; j < nt; ++j) {
      const double t = (j + 0.5) * 2 * kPi / nt;
      s += std::log(h(Vec3(r * std::cos(t), r * std::sin(t), z)));
    }
  }
  return -static_cast<double>(s) * (2.0 / nz) * (2 * kPi / nt);
}

}  // namespace testing
