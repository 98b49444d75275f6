#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lpalex/geometry.hpp"
#include "lpalex/measure.hpp"
#include "lpalex/solver.hpp"
#include "lpalex/theory.hpp"

namespace lpalex::io {

inline constexpr const char* kToolVersion = "0.3.0";

/// Directions whose norm is within this of 1 are normalized silently.
inline constexpr double kNormSilent = 1e-6;
/// Up to this deviation they are normalized with a warning; beyond it the
/// document is rejected.
inline constexpr double kNormWarn = 1e-3;

struct MeasureDocument {
  DiscreteEvenMeasure measure;
  std::optional<double> p;
  /// Optional "radii" array carried alongside the atoms.
  std::optional<RadialConfig> radii;
  std::vector<std::string> warnings;
};

/// Throws ParseError for malformed text and ValidationError for bad values.
MeasureDocument parse_measure_text(const std::string& text);
/// As above; IoError when the file cannot be read.
MeasureDocument parse_measure(const std::filesystem::path& path);
std::string measure_to_text(const DiscreteEvenMeasure& measure, std::optional<double> p = std::nullopt);

struct ScenarioDocument {
  SubspaceScenario scenario;
  std::vector<std::string> warnings;
};

/// Measure fields plus "split" and "radii"; with "R" the radii are used as
/// given, otherwise they are rescaled to unit inradius.
ScenarioDocument parse_scenario_text(const std::string& text);
ScenarioDocument parse_scenario(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
/// Writes through a sibling temporary file and a rename.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

struct ReportMeta {
  std::uint64_t seed = 0;
  bool stable = false;
  double seconds = 0.0;
};

std::string solve_report_text(const DiscreteEvenMeasure& measure, double p, const SolveReport& report,
                              const SymmetricPolytope& poly, const ReportMeta& meta);

struct ReportRadii {
  RadialConfig radii;
  double scale = 1.0;
  std::optional<double> p;
  std::vector<double> residuals;
};

/// Reads the radii, scale and residuals of a solve report.
ReportRadii parse_report_text(const std::string& text);
ReportRadii parse_report(const std::filesystem::path& path);

std::string verify_report_text(const VerifyReport& report, double tol, const ReportMeta& meta);
std::string theory_report_text(const SubspaceScenario& sc, const TheoryCheckReport& report,
                               const ReportMeta& meta);

}  // namespace lpalex::io
