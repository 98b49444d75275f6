#pragma once

#include <string>
#include <vector>

#include "lpalex/geometry.hpp"
#include "lpalex/measure.hpp"
#include "lpalex/solver.hpp"

namespace lpalex::exporter {

/// Planar polygon with atom rays and each vertex's normal cone drawn as an
/// arc sector, coloured by the sign of c^p Jp_i - mu_i.
/// Throws InvalidArgument for n != 2.
std::string svg(const SymmetricPolytope& poly, const std::vector<double>& signed_residuals);

/// Facet mesh of a 3-polytope in Wavefront OBJ. Throws InvalidArgument for n != 3.
std::string obj(const SymmetricPolytope& poly);

/// Per-atom table followed by the Phi trace.
std::string csv(const DiscreteEvenMeasure& measure, const SolveReport& report, const VerifyReport& check);

}  // namespace lpalex::exporter
