#include "bem_annulus/kernel.hpp"

#include <cmath>
#include <numbers>

#include "bem_annulus/error.hpp"

namespace bem {

namespace {

constexpr double kInvFourPi = 0.25 * std::numbers::inv_pi;

// Relative collinearity threshold on disc. The discriminant is computed
// without cancellation, so anything above round-off in d is a genuine offset.
constexpr double kSingularThreshold = 1e-20;

void require_finite(Point2 p) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw DomainError("kernel field point is not finite");
}

double x_log_abs_x(double x) { return x == 0.0 ? 0.0 : x * std::log(std::abs(x)); }

// atan((2a+b)/s) - atan(b/s) for s = sqrt(disc) > 0, folded into a single
// two-argument arctangent; the difference lies in (0, pi).
double atan_span(const QuadraticCoeffs& q, double s) {
  return std::atan2(2.0 * q.a * s, q.disc + q.b * (2.0 * q.a + q.b));
}

// Inputs: S(0) and S(1) computed directly from coordinates.
double f1_regular(const QuadraticCoeffs& q, double length, double s0, double s1) {
  const double beta = q.b / (2.0 * q.a);
  const double s = std::sqrt(q.disc);
  const double integral = 2.0 * (std::log(length) - 1.0) - beta * std::log(s0 / q.a) +
                          (1.0 + beta) * std::log(s1 / q.a) + (s / q.a) * atan_span(q, s);
  return length * kInvFourPi * integral;
}

// S(t) = a (t + beta)^2 with the field point on the element's line.
double f1_collinear(const QuadraticCoeffs& q, double length) {
  const double beta = q.b / (2.0 * q.a);
  return length * 0.5 * std::numbers::inv_pi *
         (std::log(length) + x_log_abs_x(1.0 + beta) - x_log_abs_x(beta) - 1.0);
}

double f2_regular(const QuadraticCoeffs& q, double length) {
  const double s = std::sqrt(q.disc);
  return length * q.d * std::numbers::inv_pi / s * atan_span(q, s);
}

}  // namespace

QuadraticCoeffs quadratic_coeffs(const BoundaryElement& elem, Point2 field) {
  const Point2 w = elem.start() - field;
  const Point2 dir = elem.direction();
  QuadraticCoeffs q;
  q.a = elem.length() * elem.length();
  q.b = 2.0 * dot(w, dir);
  q.e = dot(w, w);
  q.d = dot(elem.normal(), w);
  q.disc = 4.0 * q.a * q.d * q.d;
  return q;
}

bool is_collinear(const QuadraticCoeffs& q) {
  return q.disc <= kSingularThreshold * (4.0 * q.a * q.e + q.b * q.b);
}

KernelValue evaluate(const BoundaryElement& elem, Point2 field) {
  require_finite(field);
  const QuadraticCoeffs q = quadratic_coeffs(elem, field);
  const double length = elem.length();
  if (is_collinear(q)) return {f1_collinear(q, length), 0.0, KernelCase::SelfSingular};
  const Point2 to_end = elem.end() - field;
  return {f1_regular(q, length, q.e, dot(to_end, to_end)), f2_regular(q, length),
          KernelCase::Regular};
}

double f1(const BoundaryElement& elem, Point2 field) { return evaluate(elem, field).f1; }
double f2(const BoundaryElement& elem, Point2 field) { return evaluate(elem, field).f2; }

}  // namespace bem
