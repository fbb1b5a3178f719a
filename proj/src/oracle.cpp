#include "bem_annulus/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <random>
#include <vector>

#include "bem_annulus/error.hpp"
#include "bem_annulus/field.hpp"
#include "bem_annulus/kernel.hpp"
#include "bem_annulus/system.hpp"

namespace bem::oracle {

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (positive half, centre last).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo, hi, value, error, abs_value;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gauss_kronrod(const std::function<double(double)>& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double abs_sum = std::abs(fc) * kWgk[7];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    abs_sum += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half), abs_sum * std::abs(half)};
}

void check_tolerance(double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol <= 1e-2)) {
    throw PreconditionError("quadrature tolerance must lie in (0, 1e-2]");
  }
}

struct LocalGeometry {
  double a, b, e, d, length, t_root;
};

// Coefficients rebuilt from raw coordinates, independent of the kernel module.
LocalGeometry local_geometry(const BoundaryElement& elem, Point2 field) {
  const double dx = elem.end().x - elem.start().x;
  const double dy = elem.end().y - elem.start().y;
  const double wx = elem.start().x - field.x;
  const double wy = elem.start().y - field.y;
  const double length = std::sqrt(dx * dx + dy * dy);
  LocalGeometry g{};
  g.a = dx * dx + dy * dy;
  g.b = 2.0 * (wx * dx + wy * dy);
  g.e = wx * wx + wy * wy;
  g.d = (dy * wx - dx * wy) / length;
  g.length = length;
  g.t_root = -g.b / (2.0 * g.a);
  return g;
}

std::vector<double> root_breakpoint(const LocalGeometry& g) {
  if (g.t_root > 0.0 && g.t_root < 1.0) return {g.t_root};
  return {};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           std::span<const double> breakpoints, double rel_tol) {
  std::vector<double> edges{lo};
  for (double bp : breakpoints) {
    if (bp > edges.back() && bp < hi) edges.push_back(bp);
  }
  edges.push_back(hi);

  std::priority_queue<Panel> queue;
  double value = 0.0;
  double error = 0.0;
  double abs_value = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    Panel p = gauss_kronrod(f, edges[i], edges[i + 1]);
    value += p.value;
    error += p.error;
    abs_value += p.abs_value;
    queue.push(p);
  }
  if (!std::isfinite(error)) throw ConvergenceError("integrand is not finite on the interval", error);
  std::size_t panels = queue.size();
  while (error > rel_tol * abs_value) {
    if (panels >= kPanelBudget) {
      throw ConvergenceError("adaptive quadrature exhausted its panel budget", error);
    }
    const Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      throw ConvergenceError("adaptive quadrature reached machine resolution", error);
    }
    const Panel left = gauss_kronrod(f, worst.lo, mid);
    const Panel right = gauss_kronrod(f, mid, worst.hi);
    if (!std::isfinite(left.error + right.error)) {
      throw ConvergenceError("adaptive quadrature produced a non-finite panel", error);
    }
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    abs_value += left.abs_value + right.abs_value - worst.abs_value;
    queue.push(left);
    queue.push(right);
    ++panels;
  }
  // Re-sum to shed the drift of the running updates.
  double total = 0.0;
  double total_error = 0.0;
  std::vector<Panel> all;
  all.reserve(queue.size());
  while (!queue.empty()) {
    all.push_back(queue.top());
    queue.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.lo < y.lo; });
  for (const Panel& p : all) {
    total += p.value;
    total_error += p.error;
  }
  return {total, total_error, panels};
}

double f1_quadrature(const BoundaryElement& elem, Point2 field, double rel_tol) {
  check_tolerance(rel_tol);
  const LocalGeometry g = local_geometry(elem, field);
  const auto integrand = [&](double t) {
    const double u = t - g.t_root;
    return std::log(g.a * u * u + g.d * g.d);
  };
  const auto bp = root_breakpoint(g);
  const QuadratureResult r = integrate(integrand, 0.0, 1.0, bp, rel_tol);
  return g.length * r.value / (4.0 * std::numbers::pi);
}

double f2_quadrature(const BoundaryElement& elem, Point2 field, double rel_tol) {
  check_tolerance(rel_tol);
  const LocalGeometry g = local_geometry(elem, field);
  if (g.d == 0.0) return 0.0;
  // S(t) = a (t - t_root)^2 + d^2, the cancellation-free form near the line.
  const auto integrand = [&](double t) {
    const double u = t - g.t_root;
    return 1.0 / (g.a * u * u + g.d * g.d);
  };
  const auto bp = root_breakpoint(g);
  const QuadratureResult r = integrate(integrand, 0.0, 1.0, bp, rel_tol);
  return g.length * g.d * r.value / (2.0 * std::numbers::pi);
}

HarmonicReference HarmonicReference::constant(double c) { return {Kind::Constant, c, {}}; }
HarmonicReference HarmonicReference::linear_x() { return {Kind::LinearX, 0.0, {}}; }
HarmonicReference HarmonicReference::linear_y() { return {Kind::LinearY, 0.0, {}}; }
HarmonicReference HarmonicReference::log_r(Point2 center) { return {Kind::LogR, 0.0, center}; }
HarmonicReference HarmonicReference::harmonic_poly2() { return {Kind::HarmonicPoly2, 0.0, {}}; }

std::string HarmonicReference::name() const {
  switch (kind_) {
    case Kind::Constant: return "constant";
    case Kind::LinearX: return "linear_x";
    case Kind::LinearY: return "linear_y";
    case Kind::LogR: return "log_r";
    case Kind::HarmonicPoly2: return "harmonic_poly2";
  }
  return "unknown";
}

double HarmonicReference::value(Point2 p) const {
  switch (kind_) {
    case Kind::Constant: return c_;
    case Kind::LinearX: return p.x;
    case Kind::LinearY: return p.y;
    case Kind::LogR: return std::log(distance(p, center_));
    case Kind::HarmonicPoly2: return p.x * p.x - p.y * p.y;
  }
  return 0.0;
}

Point2 HarmonicReference::gradient(Point2 p) const {
  switch (kind_) {
    case Kind::Constant: return {0.0, 0.0};
    case Kind::LinearX: return {1.0, 0.0};
    case Kind::LinearY: return {0.0, 1.0};
    case Kind::LogR: {
      const Point2 r = p - center_;
      const double r2 = dot(r, r);
      return {r.x / r2, r.y / r2};
    }
    case Kind::HarmonicPoly2: return {2.0 * p.x, -2.0 * p.y};
  }
  return {};
}

HarmonicReference parse_reference(const std::string& name, Point2 center, double c) {
  if (name == "constant") return HarmonicReference::constant(c);
  if (name == "linear_x") return HarmonicReference::linear_x();
  if (name == "linear_y") return HarmonicReference::linear_y();
  if (name == "log_r") return HarmonicReference::log_r(center);
  if (name == "harmonic_poly2") return HarmonicReference::harmonic_poly2();
  throw ConfigError("unknown harmonic reference '" + name + "'");
}

ErrorStats relative_errors(std::span<const double> computed, std::span<const double> exact) {
  if (computed.size() != exact.size() || exact.empty()) {
    throw PreconditionError("error comparison needs equal, nonempty vectors");
  }
  double scale = 0.0;
  for (double v : exact) scale = std::max(scale, std::abs(v));
  ErrorStats stats;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    double err = std::abs(computed[i] - exact[i]);
    if (scale > 0.0) err /= std::max(std::abs(exact[i]), 1e-3 * scale);
    stats.max = std::max(stats.max, err);
    stats.mean += err;
  }
  stats.mean /= static_cast<double>(exact.size());
  return stats;
}

ReferenceCheck reference_solve_check(const HarmonicReference& ref, const AnnulusMesh& mesh) {
  if (ref.kind() == HarmonicReference::Kind::LogR &&
      classify_point(mesh, ref.center()).classification != PointClass::Exterior) {
    throw PreconditionError("log_r reference is singular inside the annulus");
  }
  const auto n = static_cast<Eigen::Index>(mesh.size());
  Eigen::VectorXd a_bar(n);
  std::vector<double> exact_flux(mesh.size());
  for (std::size_t k = 0; k < mesh.size(); ++k) {
    a_bar[static_cast<Eigen::Index>(k)] = ref.value(mesh[k].midpoint());
    exact_flux[k] = ref.flux(mesh[k].midpoint(), mesh[k].normal());
  }
  const BoundarySolution sol = solve_dirichlet_to_neumann(assemble(mesh), a_bar);

  ReferenceCheck check;
  check.residual_norm = sol.residual_norm;
  check.flux = relative_errors({sol.p_bar.data(), mesh.size()}, exact_flux);

  const double margin = mesh.max_element_length();
  const Point2 c = mesh.outer_center();
  const double r = mesh.outer_radius();
  constexpr int kGrid = 21;
  std::vector<double> computed;
  std::vector<double> exact;
  for (int iy = 0; iy < kGrid; ++iy) {
    for (int ix = 0; ix < kGrid; ++ix) {
      const Point2 p{c.x - r + 2.0 * r * ix / (kGrid - 1), c.y - r + 2.0 * r * iy / (kGrid - 1)};
      if (classify_point(mesh, p).classification != PointClass::Interior) continue;
      if (distance_to_boundary(mesh, p) < margin) continue;
      computed.push_back(interior_potential(sol, p));
      exact.push_back(ref.value(p));
    }
  }
  check.interior_points = exact.size();
  if (!exact.empty()) check.interior = relative_errors(computed, exact);
  return check;
}

KernelFunctions closed_form_kernels() {
  return {[](const BoundaryElement& e, Point2 p) { return bem::f1(e, p); },
          [](const BoundaryElement& e, Point2 p) { return bem::f2(e, p); }};
}

double SweepCase::abs_diff() const { return std::abs(closed_form - quadrature); }

std::string_view to_string(SweepRegime r) {
  return r == SweepRegime::Separated ? "separated" : "near_singular";
}

namespace {

struct SweepGeometry {
  BoundaryElement elem;
  Point2 field;
};

SweepGeometry draw_case(std::uint64_t seed, std::size_t id, SweepRegime regime) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id), static_cast<std::uint32_t>(regime)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  const Point2 start{uniform(-5.0, 5.0), uniform(-5.0, 5.0)};
  const double length = std::exp(uniform(std::log(0.01), std::log(2.0)));
  const double angle = uniform(0.0, 2.0 * std::numbers::pi);
  const Point2 dir{std::cos(angle), std::sin(angle)};
  const BoundaryElement elem(start, start + length * dir);

  double t = 0.0;
  double offset = 0.0;
  if (regime == SweepRegime::Separated) {
    t = uniform(-1.5, 2.5);
    offset = length * std::exp(uniform(std::log(0.01), std::log(5.0)));
  } else {
    t = uniform(0.0, 1.0);
    offset = 1e-6 * length;
  }
  const double side = unit(rng) < 0.5 ? -1.0 : 1.0;
  const Point2 field = elem.start() + t * elem.direction() + (side * offset) * elem.normal();
  return {elem, field};
}

}  // namespace

std::vector<SweepCase> kernel_sweep(std::uint64_t seed, std::size_t separated,
                                    const KernelFunctions& kernels) {
  std::vector<SweepCase> cases;
  const std::size_t near = separated / 10;
  cases.reserve(2 * (separated + near));
  for (std::size_t i = 0; i < separated + near; ++i) {
    const SweepRegime regime = i < separated ? SweepRegime::Separated : SweepRegime::NearSingular;
    const SweepGeometry g = draw_case(seed, i, regime);
    const double quad_tol = regime == SweepRegime::Separated ? 1e-13 : 1e-11;
    const double q1 = f1_quadrature(g.elem, g.field, quad_tol);
    const double q2 = f2_quadrature(g.elem, g.field, quad_tol);
    const auto tol = [&](double v) {
      return regime == SweepRegime::Separated ? kSeparatedTol * std::max(1.0, std::abs(v))
                                              : kNearSingularTol * std::abs(v);
    };
    cases.push_back({i, regime, '1', kernels.f1(g.elem, g.field), q1, tol(q1)});
    cases.push_back({i, regime, '2', kernels.f2(g.elem, g.field), q2, tol(q2)});
  }
  return cases;
}

}  // namespace bem::oracle
