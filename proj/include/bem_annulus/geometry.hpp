#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace bem {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
  friend bool operator==(Point2 a, Point2 b) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
double norm(Point2 p);
double distance(Point2 a, Point2 b);

// Straight boundary segment. Geometry is derived once from the endpoints;
// the normal is (dy, -dx)/l, i.e. to the right of the traversal direction.
class BoundaryElement {
 public:
  // Throws InvalidMeshError for coincident or non-finite endpoints.
  BoundaryElement(Point2 start, Point2 end);

  Point2 start() const { return start_; }
  Point2 end() const { return end_; }
  Point2 midpoint() const { return midpoint_; }
  Point2 direction() const { return end_ - start_; }
  double length() const { return length_; }
  Point2 normal() const { return normal_; }

  // Shortest distance from p to the closed segment.
  double distance_to(Point2 p) const;

 private:
  Point2 start_;
  Point2 end_;
  Point2 midpoint_;
  double length_;
  Point2 normal_;
};

enum class Orientation { CCW, CW };

// n chords of the circle, vertex k at start_angle + 2*pi*k/n walked in the
// requested direction.
std::vector<BoundaryElement> discretize_circle(Point2 center, double radius, std::size_t n,
                                               Orientation orientation,
                                               double start_angle = 0.0);

struct CircleSpec {
  Point2 center;
  double radius = 0.0;
  std::size_t elements = 0;
  double start_angle = 0.0;
};

// Polygonal annulus: outer loop counter-clockwise, inner loop clockwise, so
// every normal points away from the region between the two loops.
class AnnulusMesh {
 public:
  AnnulusMesh(CircleSpec outer, CircleSpec inner);

  const CircleSpec& outer_spec() const { return outer_spec_; }
  const CircleSpec& inner_spec() const { return inner_spec_; }
  Point2 outer_center() const { return outer_spec_.center; }
  Point2 inner_center() const { return inner_spec_.center; }
  double outer_radius() const { return outer_spec_.radius; }
  double inner_radius() const { return inner_spec_.radius; }

  std::span<const BoundaryElement> outer() const { return {elements_.data(), n_outer_}; }
  std::span<const BoundaryElement> inner() const {
    return {elements_.data() + n_outer_, elements_.size() - n_outer_};
  }
  // Outer elements first, then inner.
  std::span<const BoundaryElement> elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  const BoundaryElement& operator[](std::size_t k) const { return elements_[k]; }

  bool is_outer(std::size_t k) const { return k < n_outer_; }
  double max_element_length() const;
  double total_length() const;

 private:
  CircleSpec outer_spec_;
  CircleSpec inner_spec_;
  std::size_t n_outer_ = 0;
  std::vector<BoundaryElement> elements_;
};

AnnulusMesh build_annulus(Point2 outer_center, double outer_radius, Point2 inner_center,
                          double inner_radius, std::size_t n_outer, std::size_t n_inner);

enum class PointClass { Exterior, OnBoundary, Interior };

std::string_view to_string(PointClass c);

// Edge factor of the boundary integral equation: 0 outside, 1/2 on the
// boundary, 1 inside.
struct EdgeFactor {
  PointClass classification = PointClass::Exterior;
  double value() const;
};

double default_boundary_tol(const AnnulusMesh& mesh);

// Classification is against the chord polygons, not the exact circles.
EdgeFactor classify_point(const AnnulusMesh& mesh, Point2 p, double boundary_tol);
EdgeFactor classify_point(const AnnulusMesh& mesh, Point2 p);

double distance_to_boundary(const AnnulusMesh& mesh, Point2 p);

}  // namespace bem
