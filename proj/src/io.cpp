#include "lpalex/io.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lpalex/errors.hpp"

namespace lpalex::io {

using json = nlohmann::ordered_json;

namespace {

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed document: ") + e.what());
  }
}

const json& field(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return doc.at(key);
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) throw ParseError(what + " must be a number");
  return v.get<double>();
}

std::vector<double> numbers(const json& v, const std::string& what) {
  if (!v.is_array()) throw ParseError(what + " must be an array");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(number(x, what + " entry"));
  return out;
}

struct RawMeasure {
  DiscreteEvenMeasure measure;
  std::optional<double> p;
  std::vector<std::string> warnings;
};

RawMeasure read_measure(const json& doc) {
  const json& nj = field(doc, "n");
  if (!nj.is_number_integer()) throw ParseError("n must be an integer");
  const int n = nj.get<int>();
  if (n != 2 && n != 3) throw ValidationError("n must be 2 or 3, got " + std::to_string(n));
  const json& aj = field(doc, "atoms");
  if (!aj.is_array()) throw ParseError("atoms must be an array");

  RawMeasure out;
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < aj.size(); ++i) {
    const std::string tag = "atom " + std::to_string(i);
    const auto u = numbers(field(aj[i], "u"), tag + " u");
    if (u.size() != static_cast<std::size_t>(n)) {
      throw ValidationError(tag + ": u must have " + std::to_string(n) + " components");
    }
    Atom a;
    a.u = Vec3(u[0], u[1], n == 3 ? u[2] : 0.0);
    a.weight = number(field(aj[i], "w"), tag + " w");
    if (!a.u.allFinite()) throw ValidationError(tag + ": non-finite direction");
    const double dev = std::abs(a.u.norm() - 1.0);
    if (dev > kNormWarn) {
      throw ValidationError(tag + ": |u| deviates from 1 by " + std::to_string(dev));
    }
    if (dev > kNormSilent) out.warnings.push_back(tag + ": direction normalized (|u| - 1 = " + std::to_string(dev) + ")");
    atoms.push_back(a);
  }
  if (doc.contains("p")) out.p = number(doc.at("p"), "p");
  out.measure = DiscreteEvenMeasure::create(n, std::move(atoms), &out.warnings);
  if (out.measure.empty()) throw ValidationError("measure has no atoms");
  return out;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json header(const ReportMeta& meta) {
  json h;
  h["tool"] = "lpalex";
  h["version"] = kToolVersion;
  if (!meta.stable) {
    h["timestamp"] = timestamp();
    h["seconds"] = meta.seconds;
  }
  return h;
}

json direction(const Vec3& u, int n) {
  json a = json::array({u.x(), u.y()});
  if (n == 3) a.push_back(u.z());
  return a;
}

}  // namespace

MeasureDocument parse_measure_text(const std::string& text) {
  const json doc = parse_json(text);
  RawMeasure raw = read_measure(doc);
  MeasureDocument out{std::move(raw.measure), raw.p, std::nullopt, std::move(raw.warnings)};
  if (doc.contains("radii")) {
    RadialConfig cfg{numbers(doc.at("radii"), "radii")};
    if (cfg.size() != out.measure.size()) throw ValidationError("radii length differs from the atom count");
    for (double r : cfg.radii)
      if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError("radii must be positive");
    out.radii = std::move(cfg);
  }
  return out;
}

MeasureDocument parse_measure(const std::filesystem::path& path) { return parse_measure_text(read_text(path)); }

std::string measure_to_text(const DiscreteEvenMeasure& measure, std::optional<double> p) {
  json doc;
  doc["n"] = measure.dim();
  if (p) doc["p"] = *p;
  json atoms = json::array();
  for (const Atom& a : measure.atoms()) atoms.push_back({{"u", direction(a.u, measure.dim())}, {"w", a.weight}});
  doc["atoms"] = std::move(atoms);
  return doc.dump(2) + "\n";
}

ScenarioDocument parse_scenario_text(const std::string& text) {
  const json doc = parse_json(text);
  RawMeasure raw = read_measure(doc);
  if (!raw.p) throw ParseError("scenario needs p");
  const json& sj = field(doc, "split");
  if (!sj.is_number_integer() || sj.get<long long>() <= 0) throw ParseError("split must be a positive integer");
  const auto split = static_cast<std::size_t>(sj.get<long long>());
  std::vector<double> radii = numbers(field(doc, "radii"), "radii");
  if (raw.measure.size() != field(doc, "atoms").size()) {
    throw ValidationError("scenario atoms must be distinct up to sign");
  }
  ScenarioDocument out;
  out.warnings = std::move(raw.warnings);
  if (doc.contains("R")) {
    out.scenario = make_scenario(std::move(raw.measure), split, std::move(radii), number(doc.at("R"), "R"), *raw.p);
  } else {
    out.scenario = normalized_scenario(std::move(raw.measure), split, std::move(radii), *raw.p);
  }
  return out;
}

ScenarioDocument parse_scenario(const std::filesystem::path& path) { return parse_scenario_text(read_text(path)); }

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return ss.str();
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw IoError("cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move report into place at " + path.string());
  }
}

std::string solve_report_text(const DiscreteEvenMeasure& measure, double p, const SolveReport& report,
                              const SymmetricPolytope& poly, const ReportMeta& meta) {
  const CurvatureResult cr = lp_curvature(poly, p);
  json doc;
  doc["header"] = header(meta);
  doc["command"] = "solve";
  doc["status"] = to_string(report.status);
  doc["seed"] = meta.seed;
  doc["n"] = measure.dim();
  doc["p"] = p;
  doc["scale"] = report.scale;
  doc["phi"] = report.phi;
  doc["grad_norm"] = report.grad_norm;
  doc["max_residual"] = report.max_residual;
  doc["iterations"] = report.iterations;
  doc["escapes"] = report.escapes;
  doc["best_start"] = report.best_start;
  doc["radii"] = report.radii.radii;
  json atoms = json::array();
  for (std::size_t i = 0; i < measure.size(); ++i) {
    atoms.push_back({{"u", direction(measure[i].u, measure.dim())},
                     {"mu", measure[i].weight},
                     {"vertex", poly.is_vertex(i)},
                     {"J", cr.J[i]},
                     {"Jp", cr.Jp[i]},
                     {"residual", report.residuals[i]}});
  }
  doc["atoms"] = std::move(atoms);
  doc["total_J"] = cr.total_J;
  doc["phi_trace"] = report.phi_trace;
  json optima = json::array();
  for (const StartResult& o : report.optima) {
    optima.push_back({{"start", o.start}, {"phi", o.phi}, {"grad_norm", o.grad_norm},
                      {"status", to_string(o.status)}, {"radii", o.radii.radii}});
  }
  doc["optima"] = std::move(optima);
  return doc.dump(2) + "\n";
}

ReportRadii parse_report_text(const std::string& text) {
  const json doc = parse_json(text);
  ReportRadii out;
  out.radii.radii = numbers(field(doc, "radii"), "radii");
  out.scale = number(field(doc, "scale"), "scale");
  if (!(out.scale > 0.0)) throw ValidationError("scale must be positive");
  for (double r : out.radii.radii)
    if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError("radii must be positive");
  if (doc.contains("p")) out.p = number(doc.at("p"), "p");
  if (doc.contains("atoms") && doc.at("atoms").is_array()) {
    for (const auto& a : doc.at("atoms"))
      if (a.contains("residual")) out.residuals.push_back(number(a.at("residual"), "residual"));
  }
  return out;
}

ReportRadii parse_report(const std::filesystem::path& path) { return parse_report_text(read_text(path)); }

std::string verify_report_text(const VerifyReport& report, double tol, const ReportMeta& meta) {
  json doc;
  doc["header"] = header(meta);
  doc["command"] = "verify";
  doc["pass"] = report.pass;
  doc["tol"] = tol;
  doc["max_residual"] = report.max_residual;
  doc["total_curvature"] = report.total_curvature;
  doc["sphere_measure"] = report.sphere_measure;
  doc["J"] = report.J;
  doc["Jp"] = report.Jp;
  doc["residuals"] = report.residuals;
  return doc.dump(2) + "\n";
}

std::string theory_report_text(const SubspaceScenario& sc, const TheoryCheckReport& rep, const ReportMeta& meta) {
  json doc;
  doc["header"] = header(meta);
  doc["command"] = "theory-check";
  doc["seed"] = meta.seed;
  doc["n"] = sc.dim();
  doc["k"] = sc.k;
  doc["p"] = rep.p;
  doc["R"] = sc.R;
  doc["radii"] = sc.radii;
  doc["c_f"] = rep.constants.c_f;
  doc["delta0"] = rep.constants.delta0;
  doc["phi_limit"] = rep.phi_limit;
  doc["entropy_limit"] = rep.entropy_limit;
  json pts = json::array();
  for (const GridPoint& g : rep.points) {
    json j;
    j["t"] = g.t;
    j["admissible"] = g.admissible;
    if (!g.note.empty()) j["note"] = g.note;
    if (g.admissible) {
      j["phi_t"] = g.phi_t;
      j["lhs"] = g.lhs;
      j["delta1"] = g.delta1;
      j["g1"] = g.gains.g1;
      j["g2"] = g.gains.g2;
      j["G"] = g.gains.G;
      j["lhs_ok"] = g.lhs_ok;
      j["g1_ok"] = g.g1_ok;
      j["partition"] = {{"ok", g.partition.ok},
                        {"samples", g.partition.samples},
                        {"regions", g.partition.region_counts},
                        {"violations", g.partition.violations},
                        {"worst_excess", g.partition.worst_excess}};
    }
    pts.push_back(std::move(j));
  }
  doc["points"] = std::move(pts);
  doc["verdicts"] = {{"partition", rep.partition_ok},
                     {"lhs_bound", rep.lhs_bound_ok},
                     {"g1_consistent", rep.g1_consistent},
                     {"G_positive_somewhere", rep.G_positive_somewhere},
                     {"G_increasing_near_zero", rep.G_increasing_near_zero}};
  doc["all_ok"] = rep.all_ok();
  doc["notes"] = rep.notes;
  return doc.dump(2) + "\n";
}

}  // namespace lpalex::io
