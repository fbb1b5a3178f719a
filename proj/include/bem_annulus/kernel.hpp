#pragma once

#include "bem_annulus/geometry.hpp"

namespace bem {

// Squared distance from the field point to p(t) = start + t*(end - start),
// written as S(t) = a t^2 + b t + e on t in [0, 1].
struct QuadraticCoeffs {
  double a = 0.0;
  double b = 0.0;
  double e = 0.0;
  // 4ae - b^2, evaluated as 4 a d^2 where d is the signed distance of the
  // field point from the element's supporting line. Same value, no
  // cancellation.
  double disc = 0.0;
  // n . (start - field); constant along the element.
  double d = 0.0;

  double operator()(double t) const { return (a * t + b) * t + e; }
};

QuadraticCoeffs quadratic_coeffs(const BoundaryElement& elem, Point2 field);

// Field point on the element's supporting line (self-collocation included).
bool is_collinear(const QuadraticCoeffs& q);

enum class KernelCase { Regular, SelfSingular };

struct KernelValue {
  double f1 = 0.0;
  double f2 = 0.0;
  KernelCase case_used = KernelCase::Regular;
};

// Integral over the element of ln(r^2)/(4 pi).
double f1(const BoundaryElement& elem, Point2 field);
// Integral over the element of the normal derivative of ln(r^2)/(4 pi).
double f2(const BoundaryElement& elem, Point2 field);
// Both integrals sharing one set of coefficients.
KernelValue evaluate(const BoundaryElement& elem, Point2 field);

}  // namespace bem
