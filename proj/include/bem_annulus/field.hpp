#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "bem_annulus/geometry.hpp"
#include "bem_annulus/system.hpp"

namespace bem {

struct FieldSample {
  Point2 point;
  std::optional<double> value;  // present for Interior and OnBoundary points
  EdgeFactor edge_factor;
  // Interior point closer to the boundary than one element length, where
  // constant elements lose accuracy.
  bool near_boundary = false;
};

struct GridSpec {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
  std::size_t nx = 0;
  std::size_t ny = 0;
};

struct FieldGrid {
  GridSpec spec;
  std::vector<FieldSample> samples;  // row-major, y outer, x inner

  const FieldSample& at(std::size_t ix, std::size_t iy) const { return samples[iy * spec.nx + ix]; }
};

// Sum over elements of a_k F2_k(p) - p_k F1_k(p), in element order.
// Throws DomainError unless p is Interior.
double interior_potential(const BoundarySolution& sol, Point2 p);

// Stored collocation value of element k (0-based).
double boundary_potential(const BoundarySolution& sol, std::size_t element_index);

// Classified evaluation of a single point; never throws for Exterior points.
FieldSample sample_point(const BoundarySolution& sol, Point2 p);

FieldGrid field_map(const BoundarySolution& sol, const GridSpec& spec);

}  // namespace bem
