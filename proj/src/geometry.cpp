#include "bem_annulus/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "bem_annulus/error.hpp"

namespace bem {

double norm(Point2 p) { return std::hypot(p.x, p.y); }
double distance(Point2 a, Point2 b) { return norm(a - b); }

BoundaryElement::BoundaryElement(Point2 start, Point2 end) : start_(start), end_(end) {
  if (!std::isfinite(start.x) || !std::isfinite(start.y) || !std::isfinite(end.x) ||
      !std::isfinite(end.y)) {
    throw InvalidMeshError("boundary element has non-finite endpoint");
  }
  const Point2 d = end - start;
  length_ = norm(d);
  if (!(length_ > 0.0)) throw InvalidMeshError("boundary element has zero length");
  midpoint_ = 0.5 * (start + end);
  normal_ = {d.y / length_, -d.x / length_};
}

double BoundaryElement::distance_to(Point2 p) const {
  const Point2 d = direction();
  const double t = std::clamp(dot(p - start_, d) / (length_ * length_), 0.0, 1.0);
  return distance(p, start_ + t * d);
}

std::vector<BoundaryElement> discretize_circle(Point2 center, double radius, std::size_t n,
                                               Orientation orientation, double start_angle) {
  if (n < 3) {
    throw InvalidMeshError("circle needs at least 3 elements, got " + std::to_string(n));
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InvalidMeshError("circle radius must be positive and finite");
  }
  const double sign = orientation == Orientation::CCW ? 1.0 : -1.0;
  std::vector<Point2> vertices(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double angle =
        start_angle + sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    vertices[k] = {center.x + radius * std::cos(angle), center.y + radius * std::sin(angle)};
  }
  std::vector<BoundaryElement> elements;
  elements.reserve(n);
  for (std::size_t k = 0; k < n; ++k) elements.emplace_back(vertices[k], vertices[(k + 1) % n]);
  return elements;
}

AnnulusMesh::AnnulusMesh(CircleSpec outer, CircleSpec inner)
    : outer_spec_(outer), inner_spec_(inner) {
  if (!(inner.radius > 0.0) || !(outer.radius > 0.0)) {
    throw GeometryError("annulus radii must be positive");
  }
  // Inner disc strictly inside the outer one.
  const double gap = outer.radius - (distance(outer.center, inner.center) + inner.radius);
  if (!(gap > 0.0)) {
    std::ostringstream msg;
    msg << "inner circle (r=" << inner.radius << ") is not strictly inside outer circle (r="
        << outer.radius << ")";
    throw GeometryError(msg.str());
  }
  elements_ = discretize_circle(outer.center, outer.radius, outer.elements, Orientation::CCW,
                                outer.start_angle);
  n_outer_ = elements_.size();
  auto inner_elements = discretize_circle(inner.center, inner.radius, inner.elements,
                                          Orientation::CW, inner.start_angle);
  elements_.insert(elements_.end(), inner_elements.begin(), inner_elements.end());
}

double AnnulusMesh::max_element_length() const {
  double m = 0.0;
  for (const auto& e : elements_) m = std::max(m, e.length());
  return m;
}

double AnnulusMesh::total_length() const {
  double s = 0.0;
  for (const auto& e : elements_) s += e.length();
  return s;
}

AnnulusMesh build_annulus(Point2 outer_center, double outer_radius, Point2 inner_center,
                          double inner_radius, std::size_t n_outer, std::size_t n_inner) {
  return AnnulusMesh({outer_center, outer_radius, n_outer, 0.0},
                     {inner_center, inner_radius, n_inner, 0.0});
}

std::string_view to_string(PointClass c) {
  switch (c) {
    case PointClass::Exterior: return "exterior";
    case PointClass::OnBoundary: return "boundary";
    case PointClass::Interior: return "interior";
  }
  return "unknown";
}

double EdgeFactor::value() const {
  switch (classification) {
    case PointClass::Exterior: return 0.0;
    case PointClass::OnBoundary: return 0.5;
    case PointClass::Interior: return 1.0;
  }
  return 0.0;
}

double default_boundary_tol(const AnnulusMesh& mesh) { return 1e-9 * mesh.outer_radius(); }

namespace {

// Even-odd crossing test against a closed chord loop.
bool inside_loop(std::span<const BoundaryElement> loop, Point2 p) {
  bool inside = false;
  for (const auto& e : loop) {
    const Point2 a = e.start();
    const Point2 b = e.end();
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

}  // namespace

double distance_to_boundary(const AnnulusMesh& mesh, Point2 p) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& e : mesh.elements()) d = std::min(d, e.distance_to(p));
  return d;
}

EdgeFactor classify_point(const AnnulusMesh& mesh, Point2 p, double boundary_tol) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) return {PointClass::Exterior};
  if (distance_to_boundary(mesh, p) <= boundary_tol) return {PointClass::OnBoundary};
  if (inside_loop(mesh.outer(), p) && !inside_loop(mesh.inner(), p)) return {PointClass::Interior};
  return {PointClass::Exterior};
}

EdgeFactor classify_point(const AnnulusMesh& mesh, Point2 p) {
  return classify_point(mesh, p, default_boundary_tol(mesh));
}

}  // namespace bem
