#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include "bem_annulus/geometry.hpp"

namespace bem::oracle {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t panels = 0;
};

// Globally adaptive 15-point Gauss-Kronrod quadrature on [lo, hi]. Interior
// breakpoints (sorted, inside the interval) start out as panel edges so that
// integrable singularities sit at panel ends. Stops once the summed
// Kronrod-Gauss difference drops below rel_tol times the integral of |f|.
// Throws ConvergenceError when the panel budget runs out first.
QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           std::span<const double> breakpoints, double rel_tol);

inline constexpr std::size_t kPanelBudget = 4000;

// Independent evaluations of the element integrals straight from their
// integrands: (l/4pi) ln S(t) and (l/2pi) d / S(t) over t in [0, 1].
// rel_tol must lie in (0, 1e-2].
double f1_quadrature(const BoundaryElement& elem, Point2 field, double rel_tol);
double f2_quadrature(const BoundaryElement& elem, Point2 field, double rel_tol);

// Exact harmonic functions used as manufactured solutions.
class HarmonicReference {
 public:
  enum class Kind { Constant, LinearX, LinearY, LogR, HarmonicPoly2 };

  static HarmonicReference constant(double c);
  static HarmonicReference linear_x();
  static HarmonicReference linear_y();
  // ln |p - center|
  static HarmonicReference log_r(Point2 center);
  // x^2 - y^2
  static HarmonicReference harmonic_poly2();

  Kind kind() const { return kind_; }
  Point2 center() const { return center_; }
  std::string name() const;

  double value(Point2 p) const;
  Point2 gradient(Point2 p) const;
  double flux(Point2 p, Point2 normal) const { return dot(gradient(p), normal); }

 private:
  HarmonicReference(Kind kind, double c, Point2 center) : kind_(kind), c_(c), center_(center) {}
  Kind kind_;
  double c_ = 0.0;
  Point2 center_;
};

HarmonicReference parse_reference(const std::string& name, Point2 center = {}, double c = 1.0);

// Error of a computed vector against exact values: each entry is scaled by
// max(|exact_k|, 1e-3 * max|exact|); plain absolute error when exact is all zero.
struct ErrorStats {
  double max = 0.0;
  double mean = 0.0;
};
ErrorStats relative_errors(std::span<const double> computed, std::span<const double> exact);

struct ReferenceCheck {
  ErrorStats flux;      // Neumann data vs analytic normal derivative
  ErrorStats interior;  // interior potential vs analytic value
  std::size_t interior_points = 0;
  double residual_norm = 0.0;
};

// Imposes the reference as Dirichlet data on mesh, solves, and compares the
// recovered Neumann data and interior potential with the exact ones. Interior
// samples are grid points at least one element length away from the boundary.
ReferenceCheck reference_solve_check(const HarmonicReference& ref, const AnnulusMesh& mesh);

// Closed-form kernels under test; swapped out in fault-injection builds.
struct KernelFunctions {
  std::function<double(const BoundaryElement&, Point2)> f1;
  std::function<double(const BoundaryElement&, Point2)> f2;
};
KernelFunctions closed_form_kernels();

enum class SweepRegime { Separated, NearSingular };

struct SweepCase {
  std::size_t id = 0;
  SweepRegime regime = SweepRegime::Separated;
  char kernel = '1';  // '1' for F1, '2' for F2
  double closed_form = 0.0;
  double quadrature = 0.0;
  double tolerance = 0.0;  // allowed |closed_form - quadrature|

  double abs_diff() const;
  bool pass() const { return abs_diff() <= tolerance; }
};

// Separated cases keep the field at least 0.01 l from the element and must
// agree to 1e-10 * max(1, |value|); near-singular cases put it 1e-6 l off the
// element and must agree to 1e-6 * |value|.
inline constexpr double kSeparatedTol = 1e-10;
inline constexpr double kNearSingularTol = 1e-6;

// `separated` randomized configurations plus separated / 10 near-singular
// ones. Case i draws from its own generator seeded with (seed, i).
std::vector<SweepCase> kernel_sweep(std::uint64_t seed, std::size_t separated,
                                    const KernelFunctions& kernels = closed_form_kernels());

std::string_view to_string(SweepRegime r);

}  // namespace bem::oracle
