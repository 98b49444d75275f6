#include "lpalex/measure.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SVD>

#include "lpalex/errors.hpp"

namespace lpalex {

int direction_rank(std::span<const Vec3> dirs) {
  if (dirs.empty()) return 0;
  Eigen::MatrixXd m(dirs.size(), 3);
  for (std::size_t i = 0; i < dirs.size(); ++i) m.row(i) = dirs[i].transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  int rank = 0;
  for (int j = 0; j < svd.singularValues().size(); ++j) {
    if (svd.singularValues()(j) > kRankTolerance) ++rank;
  }
  return rank;
}

DiscreteEvenMeasure DiscreteEvenMeasure::create(int n, std::vector<Atom> atoms,
                                                std::vector<std::string>* notes) {
  if (n != 2 && n != 3) throw DimensionUnsupported(n);
  DiscreteEvenMeasure m;
  m.n_ = n;
  for (std::size_t idx = 0; idx < atoms.size(); ++idx) {
    Atom a = atoms[idx];
    if (!std::isfinite(a.weight) || a.weight <= 0.0) {
      throw ValidationError("atom " + std::to_string(idx) + ": weight must be positive");
    }
    if (!a.u.allFinite()) throw ValidationError("atom " + std::to_string(idx) + ": non-finite direction");
    if (n == 2 && a.u.z() != 0.0) {
      throw ValidationError("atom " + std::to_string(idx) + ": planar direction has a z component");
    }
    const double norm = a.u.norm();
    if (norm == 0.0) throw ValidationError("atom " + std::to_string(idx) + ": zero direction");
    // Leave unit vectors bit-identical so that reloading is exact.
    if (std::abs(norm - 1.0) > 4.0 * std::numeric_limits<double>::epsilon()) a.u /= norm;

    bool merged = false;
    for (std::size_t j = 0; j < m.atoms_.size(); ++j) {
      const Vec3& v = m.atoms_[j].u;
      const bool same = (a.u - v).norm() <= kMergeTolerance;
      const bool opposite = (a.u + v).norm() <= kMergeTolerance;
      if (same || opposite) {
        m.atoms_[j].weight += a.weight;
        if (notes) {
          std::ostringstream os;
          os << "atom " << idx << " merged into atom " << j << (opposite ? " (antipodal)" : " (duplicate)")
             << ", weights summed";
          notes->push_back(os.str());
        }
        merged = true;
        break;
      }
    }
    if (!merged) m.atoms_.push_back(a);
  }
  const auto dirs = m.directions();
  m.spanning_ = direction_rank(dirs) == n;
  return m;
}

std::vector<Vec3> DiscreteEvenMeasure::directions() const {
  std::vector<Vec3> out;
  out.reserve(atoms_.size());
  for (const auto& a : atoms_) out.push_back(a.u);
  return out;
}

std::vector<double> DiscreteEvenMeasure::weights() const {
  std::vector<double> out;
  out.reserve(atoms_.size());
  for (const auto& a : atoms_) out.push_back(a.weight);
  return out;
}

double DiscreteEvenMeasure::total_mass() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.weight;
  return 2.0 * s;
}

DiscreteEvenMeasure DiscreteEvenMeasure::scaled(double factor) const {
  if (!(factor > 0.0)) throw InvalidArgument("measure scale factor must be positive");
  DiscreteEvenMeasure m = *this;
  for (auto& a : m.atoms_) a.weight *= factor;
  return m;
}

}  // namespace lpalex
