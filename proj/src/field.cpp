#include "bem_annulus/field.hpp"

#include <cmath>
#include <sstream>

#include "bem_annulus/error.hpp"
#include "bem_annulus/kernel.hpp"

namespace bem {

namespace {

const AnnulusMesh& mesh_of(const BoundarySolution& sol) {
  if (!sol.mesh) throw PreconditionError("boundary solution carries no mesh");
  return *sol.mesh;
}

double potential_sum(const AnnulusMesh& mesh, const BoundarySolution& sol, Point2 p) {
  double value = 0.0;
  const auto elements = mesh.elements();
  for (std::size_t k = 0; k < elements.size(); ++k) {
    const KernelValue kv = evaluate(elements[k], p);
    const auto i = static_cast<Eigen::Index>(k);
    value += sol.a_bar[i] * kv.f2 - sol.p_bar[i] * kv.f1;
  }
  return value;
}

}  // namespace

double interior_potential(const BoundarySolution& sol, Point2 p) {
  const AnnulusMesh& mesh = mesh_of(sol);
  const EdgeFactor ef = classify_point(mesh, p);
  if (ef.classification != PointClass::Interior) {
    std::ostringstream msg;
    msg << "point (" << p.x << ", " << p.y << ") is " << to_string(ef.classification)
        << ", not interior";
    throw DomainError(msg.str());
  }
  return potential_sum(mesh, sol, p);
}

double boundary_potential(const BoundarySolution& sol, std::size_t element_index) {
  if (element_index >= static_cast<std::size_t>(sol.a_bar.size())) {
    throw PreconditionError("element index " + std::to_string(element_index) +
                            " out of range for " + std::to_string(sol.a_bar.size()) + " elements");
  }
  return sol.a_bar[static_cast<Eigen::Index>(element_index)];
}

FieldSample sample_point(const BoundarySolution& sol, Point2 p) {
  const AnnulusMesh& mesh = mesh_of(sol);
  FieldSample s{p, std::nullopt, classify_point(mesh, p), false};
  switch (s.edge_factor.classification) {
    case PointClass::Interior:
      s.value = potential_sum(mesh, sol, p);
      for (const auto& e : mesh.elements()) {
        if (e.distance_to(p) < e.length()) {
          s.near_boundary = true;
          break;
        }
      }
      break;
    case PointClass::OnBoundary: {
      // Value of the nearest element's collocation datum.
      std::size_t best = 0;
      double best_d = INFINITY;
      for (std::size_t k = 0; k < mesh.size(); ++k) {
        const double d = mesh[k].distance_to(p);
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
      s.value = sol.a_bar[static_cast<Eigen::Index>(best)];
      break;
    }
    case PointClass::Exterior:
      break;
  }
  return s;
}

FieldGrid field_map(const BoundarySolution& sol, const GridSpec& spec) {
  if (!(spec.x_min < spec.x_max) || !(spec.y_min < spec.y_max)) {
    throw ConfigError("degenerate grid: need x_min < x_max and y_min < y_max");
  }
  if (spec.nx < 2 || spec.ny < 2) throw ConfigError("grid needs at least 2 nodes per axis");
  mesh_of(sol);

  FieldGrid grid{spec, {}};
  grid.samples.reserve(spec.nx * spec.ny);
  const double hx = (spec.x_max - spec.x_min) / static_cast<double>(spec.nx - 1);
  const double hy = (spec.y_max - spec.y_min) / static_cast<double>(spec.ny - 1);
  for (std::size_t iy = 0; iy < spec.ny; ++iy) {
    for (std::size_t ix = 0; ix < spec.nx; ++ix) {
      const Point2 p{spec.x_min + hx * static_cast<double>(ix), spec.y_min + hy * static_cast<double>(iy)};
      FieldSample s = sample_point(sol, p);
      // Boundary nodes of a grid carry no value in a field map.
      if (s.edge_factor.classification != PointClass::Interior) s.value.reset();
      grid.samples.push_back(s);
    }
  }
  return grid;
}

}  // namespace bem
