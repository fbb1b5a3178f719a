#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "bem_annulus/geometry.hpp"
#include "bem_annulus/system.hpp"

namespace bem {

// Boundary potentials exported by the external FEM run, one per element.
struct FemEntry {
  std::size_t element;  // 1-based, as in the file
  double x = 0.0;
  double y = 0.0;
  double a_value = 0.0;
};

struct FemBoundaryData {
  std::vector<FemEntry> entries;  // sorted by element
  std::string source;

  // Dirichlet vector in mesh element order.
  Eigen::VectorXd dirichlet() const;
};

inline constexpr double kDefaultPositionTol = 1e-6;

// CSV with mandatory header `index,x,y,a`; LF or CRLF line ends.
FemBoundaryData parse_fem_csv(std::istream& in, const AnnulusMesh& mesh,
                              double position_tol = kDefaultPositionTol,
                              std::string source = "<stream>");
void write_fem_csv(std::ostream& out, const FemBoundaryData& data);

// Samples a function at the mesh collocation points.
template <class Fn>
FemBoundaryData sample_fem_data(const AnnulusMesh& mesh, Fn&& fn, std::string source) {
  FemBoundaryData data{{}, std::move(source)};
  for (std::size_t k = 0; k < mesh.size(); ++k) {
    const Point2 m = mesh[k].midpoint();
    data.entries.push_back({k + 1, m.x, m.y, fn(m)});
  }
  return data;
}

struct ReferenceRow {
  double measured = 0.0;
  double calculated = 0.0;
};

struct ReferenceTable {
  std::vector<ReferenceRow> rows;
  std::string label;
};

// CSV header `measured,calculated`; lines starting with `#` are comments and
// `# label: <text>` sets the table label.
ReferenceTable read_reference_table(std::istream& in);

struct ErrorReport {
  std::vector<double> row_errors;  // percent, unrounded
  double average = 0.0;            // percent, mean of unrounded row errors
};

ErrorReport relative_error_report(const ReferenceTable& table);
// Measured / Calculated / Error / Average error, errors shown to 2 decimals.
std::string format_error_report(const ReferenceTable& table, const ErrorReport& report);

inline constexpr std::string_view kSolutionMagic = "bem-annulus-solution";
inline constexpr int kSolutionMajorVersion = 1;

// Self-describing text file; doubles are written in shortest round-trip form.
void write_solution(std::ostream& out, const BoundarySolution& sol);
// Rebuilds the mesh from the stored parameters.
BoundarySolution read_solution(std::istream& in);

// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

}  // namespace bem
