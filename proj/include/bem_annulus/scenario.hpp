#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bem_annulus/coupling_io.hpp"
#include "bem_annulus/field.hpp"
#include "bem_annulus/geometry.hpp"
#include "bem_annulus/oracle.hpp"
#include "bem_annulus/system.hpp"

namespace bem {

// Absolute plate placement relative to its rest position: translation plus
// counter-clockwise rotation about the plate centroid.
struct PlatePose {
  double dx = 0.0;
  double dy = 0.0;
  double angle_deg = 0.0;
};

enum class PoseKind { Initial, Disturbed };

PlatePose plate_pose(PoseKind which);

struct CoilParams {
  double amplitude = 200.0;  // A
  double frequency = 50.0;   // Hz
  // Carried for documentation; they only matter to the external FEM run.
  int turns = 960;
  double wire_diameter = 1.2e-3;  // m
};

// Where the "calculated" column of the error report comes from.
enum class CalculatedSource { Bem, Fixture };

struct ScenarioConfig {
  CircleSpec outer{{0.0, 0.0}, 0.100, 40, 0.0};
  CircleSpec inner{{0.0, 0.0}, 0.015, 40, 0.0};
  CoilParams coil;
  double conductivity = 3.7e7;  // S/m, metadata
  double initial_height = 0.018;
  Point2 plate_centroid{0.0, 0.018};
  PlatePose pose;
  // Sample points relative to the plate centroid at rest.
  std::vector<Point2> sample_offsets = default_sample_offsets();
  std::optional<std::filesystem::path> reference_fixture;
  CalculatedSource calculated_source = CalculatedSource::Bem;
  double position_tol = kDefaultPositionTol;
  oracle::HarmonicReference convergence_reference = oracle::HarmonicReference::log_r({0.0, 0.0});
  std::vector<std::size_t> convergence_n{20, 40, 80, 160};

  // Four points along the top and four along the bottom edge of a 40 mm x
  // 4 mm plate outline, left to right.
  static std::vector<Point2> default_sample_offsets();

  AnnulusMesh mesh() const;
  void validate() const;
};

// Reads the JSON config schema documented in docs/config.md. Relative paths
// are resolved against the config file's directory.
ScenarioConfig load_config(const std::filesystem::path& path);
ScenarioConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir = {});

double coil_current(double t, const CoilParams& coil);

std::vector<Point2> plate_sample_points(const ScenarioConfig& cfg);

struct ScenarioResult {
  BoundarySolution solution;
  std::vector<FieldSample> plate_samples;
  std::optional<ReferenceTable> table;
  std::optional<ErrorReport> report;
};

ScenarioResult run_scenario(const ScenarioConfig& cfg, const FemBoundaryData& fem);

struct ConvergenceEntry {
  std::size_t n_total = 0;
  double max_error = 0.0;
  double avg_error = 0.0;
  double net_flux = 0.0;  // sum of p_k * l_k
};

struct ConvergenceRecord {
  std::string reference;
  std::vector<ConvergenceEntry> entries;
};

// For each total element count n (even, >= 8, strictly increasing), splits n
// evenly between the circles, imposes the reference as Dirichlet data and
// records the error of the recovered Neumann data.
ConvergenceRecord convergence_study(const CircleSpec& outer, const CircleSpec& inner,
                                    const oracle::HarmonicReference& reference,
                                    std::span<const std::size_t> n_list);

}  // namespace bem
