#include "bem_annulus/scenario.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "bem_annulus/error.hpp"

namespace bem {

using nlohmann::json;

PlatePose plate_pose(PoseKind which) {
  switch (which) {
    case PoseKind::Initial: return {0.0, 0.0, 0.0};
    case PoseKind::Disturbed: return {-0.002, 0.002, 10.0};
  }
  return {};
}

std::vector<Point2> ScenarioConfig::default_sample_offsets() {
  std::vector<Point2> offsets;
  for (double y : {0.002, -0.002}) {
    for (double x : {-0.015, -0.005, 0.005, 0.015}) offsets.push_back({x, y});
  }
  return offsets;
}

AnnulusMesh ScenarioConfig::mesh() const { return AnnulusMesh(outer, inner); }

void ScenarioConfig::validate() const {
  if (!(inner.radius > 0.0) || !(outer.radius > 0.0)) throw ConfigError("radii must be positive");
  if (!(inner.radius < outer.radius)) throw ConfigError("inner radius must be smaller than outer radius");
  if (inner.elements < 3 || outer.elements < 3) throw ConfigError("each circle needs at least 3 elements");
  if (!(coil.frequency > 0.0)) throw ConfigError("coil frequency must be positive");
  if (!std::isfinite(pose.dx) || !std::isfinite(pose.dy) || !std::isfinite(pose.angle_deg)) {
    throw ConfigError("plate pose must be finite");
  }
  if (!(position_tol > 0.0)) throw ConfigError("position tolerance must be positive");
}

namespace {

Point2 read_point(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(std::string(what) + " must be a [x, y] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

void read_circle(const json& j, CircleSpec& c) {
  if (j.contains("center")) c.center = read_point(j["center"], "center");
  c.radius = j.value("radius", c.radius);
  c.elements = j.value("elements", c.elements);
  c.start_angle = j.value("start_angle", c.start_angle);
}

}  // namespace

ScenarioConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir) {
  ScenarioConfig cfg;
  try {
    const json root = json::parse(json_text);
    if (root.contains("geometry")) {
      const json& g = root["geometry"];
      if (g.contains("outer")) read_circle(g["outer"], cfg.outer);
      if (g.contains("inner")) read_circle(g["inner"], cfg.inner);
    }
    if (root.contains("coil")) {
      const json& c = root["coil"];
      cfg.coil.amplitude = c.value("amplitude", cfg.coil.amplitude);
      cfg.coil.frequency = c.value("frequency", cfg.coil.frequency);
      cfg.coil.turns = c.value("turns", cfg.coil.turns);
      cfg.coil.wire_diameter = c.value("wire_diameter", cfg.coil.wire_diameter);
    }
    if (root.contains("plate")) {
      const json& p = root["plate"];
      cfg.conductivity = p.value("conductivity", cfg.conductivity);
      cfg.initial_height = p.value("initial_height", cfg.initial_height);
      if (p.contains("centroid")) cfg.plate_centroid = read_point(p["centroid"], "plate.centroid");
      if (p.contains("pose")) {
        const json& pose = p["pose"];
        if (pose.is_string()) {
          const auto name = pose.get<std::string>();
          if (name == "initial") cfg.pose = plate_pose(PoseKind::Initial);
          else if (name == "disturbed") cfg.pose = plate_pose(PoseKind::Disturbed);
          else throw ConfigError("plate.pose must be 'initial', 'disturbed' or an object");
        } else {
          cfg.pose = {pose.value("dx", 0.0), pose.value("dy", 0.0), pose.value("angle_deg", 0.0)};
        }
      }
      if (p.contains("sample_offsets")) {
        cfg.sample_offsets.clear();
        for (const json& o : p["sample_offsets"]) cfg.sample_offsets.push_back(read_point(o, "sample offset"));
      }
    }
    if (root.contains("reference")) {
      const json& r = root["reference"];
      if (r.contains("fixture")) {
        std::filesystem::path fixture = r["fixture"].get<std::string>();
        cfg.reference_fixture = fixture.is_absolute() ? fixture : base_dir / fixture;
      }
      const auto source = r.value("calculated_source", std::string("bem"));
      if (source == "bem") cfg.calculated_source = CalculatedSource::Bem;
      else if (source == "fixture") cfg.calculated_source = CalculatedSource::Fixture;
      else throw ConfigError("reference.calculated_source must be 'bem' or 'fixture'");
    }
    if (root.contains("fem")) cfg.position_tol = root["fem"].value("position_tol", cfg.position_tol);
    if (root.contains("convergence")) {
      const json& c = root["convergence"];
      if (c.contains("reference")) {
        const json& ref = c["reference"];
        const Point2 center = ref.contains("center") ? read_point(ref["center"], "reference center")
                                                     : Point2{0.0, 0.0};
        cfg.convergence_reference =
            oracle::parse_reference(ref.value("type", std::string("log_r")), center, ref.value("value", 1.0));
      }
      if (c.contains("n")) cfg.convergence_n = c["n"].get<std::vector<std::size_t>>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

double coil_current(double t, const CoilParams& coil) {
  return coil.amplitude * std::sin(2.0 * std::numbers::pi * coil.frequency * t);
}

std::vector<Point2> plate_sample_points(const ScenarioConfig& cfg) {
  const double angle = cfg.pose.angle_deg * std::numbers::pi / 180.0;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const Point2 centroid = cfg.plate_centroid + Point2{cfg.pose.dx, cfg.pose.dy};
  std::vector<Point2> points;
  points.reserve(cfg.sample_offsets.size());
  for (const Point2 o : cfg.sample_offsets) {
    points.push_back(centroid + Point2{c * o.x - s * o.y, s * o.x + c * o.y});
  }
  return points;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, const FemBoundaryData& fem) {
  cfg.validate();
  const AnnulusMesh mesh = cfg.mesh();
  if (fem.entries.size() != mesh.size()) {
    throw DataError("FEM data has " + std::to_string(fem.entries.size()) + " entries, mesh has " +
                    std::to_string(mesh.size()));
  }
  for (std::size_t k = 0; k < mesh.size(); ++k) {
    const auto& e = fem.entries[k];
    const double off = distance({e.x, e.y}, mesh[k].midpoint());
    if (e.element != k + 1 || off > cfg.position_tol) {
      throw AlignmentError("FEM data is not aligned with the scenario mesh at element " +
                               std::to_string(k + 1),
                           k + 1, off);
    }
  }

  const std::vector<Point2> points = plate_sample_points(cfg);
  std::ostringstream bad;
  for (const Point2 p : points) {
    const auto cls = classify_point(mesh, p).classification;
    if (cls != PointClass::Interior) bad << " (" << p.x << ", " << p.y << ")=" << to_string(cls);
  }
  if (!bad.str().empty()) throw ScenarioError("plate sample points outside the annulus:" + bad.str());

  ScenarioResult result{solve_dirichlet_to_neumann(assemble(mesh), fem.dirichlet()), {}, {}, {}};
  for (const Point2 p : points) result.plate_samples.push_back(sample_point(result.solution, p));

  if (cfg.reference_fixture) {
    std::ifstream in(*cfg.reference_fixture);
    if (!in) throw ConfigError("cannot open reference fixture " + cfg.reference_fixture->string());
    ReferenceTable table = read_reference_table(in);
    if (cfg.calculated_source == CalculatedSource::Bem) {
      if (table.rows.size() != result.plate_samples.size()) {
        throw ConfigError("reference fixture has " + std::to_string(table.rows.size()) +
                          " rows but the plate has " + std::to_string(result.plate_samples.size()) +
                          " sample points");
      }
      for (std::size_t i = 0; i < table.rows.size(); ++i) {
        table.rows[i].calculated = *result.plate_samples[i].value;
      }
    }
    result.report = relative_error_report(table);
    result.table = std::move(table);
  }
  return result;
}

ConvergenceRecord convergence_study(const CircleSpec& outer, const CircleSpec& inner,
                                    const oracle::HarmonicReference& reference,
                                    std::span<const std::size_t> n_list) {
  if (n_list.empty()) throw PreconditionError("convergence study needs at least one element count");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 8 || n_list[i] % 2 != 0) {
      throw PreconditionError("element counts must be even and at least 8, got " + std::to_string(n_list[i]));
    }
    if (i > 0 && n_list[i] <= n_list[i - 1]) {
      throw PreconditionError("element counts must be strictly increasing");
    }
  }
  ConvergenceRecord record{reference.name(), {}};
  for (const std::size_t n : n_list) {
    CircleSpec o = outer;
    CircleSpec in = inner;
    o.elements = n / 2;
    in.elements = n / 2;
    const AnnulusMesh mesh(o, in);
    Eigen::VectorXd a_bar(static_cast<Eigen::Index>(mesh.size()));
    std::vector<double> exact(mesh.size());
    for (std::size_t k = 0; k < mesh.size(); ++k) {
      a_bar[static_cast<Eigen::Index>(k)] = reference.value(mesh[k].midpoint());
      exact[k] = reference.flux(mesh[k].midpoint(), mesh[k].normal());
    }
    const BoundarySolution sol = solve_dirichlet_to_neumann(assemble(mesh), a_bar);
    const auto stats = oracle::relative_errors({sol.p_bar.data(), mesh.size()}, exact);
    double net = 0.0;
    for (std::size_t k = 0; k < mesh.size(); ++k) net += sol.p_bar[static_cast<Eigen::Index>(k)] * mesh[k].length();
    record.entries.push_back({n, stats.max, stats.mean, net});
  }
  return record;
}

}  // namespace bem
