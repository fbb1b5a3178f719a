#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "bem_annulus/error.hpp"
#include "bem_annulus/system.hpp"

using namespace bem;
using doctest::Approx;

namespace {

AnnulusMesh unit_annulus(std::size_t per_circle) {
  return build_annulus({0, 0}, 2.0, {0, 0}, 1.0, per_circle, per_circle);
}

template <class Fn>
Eigen::VectorXd sample(const AnnulusMesh& mesh, Fn fn) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(mesh.size()));
  for (std::size_t k = 0; k < mesh.size(); ++k) v[static_cast<Eigen::Index>(k)] = fn(mesh[k].midpoint());
  return v;
}

double log_r(Point2 p) { return std::log(norm(p)); }

}  // namespace

TEST_CASE("assemble: dimensions, zero self double layer, half row sums") {
  const AnnulusMesh mesh = build_annulus({0, 0}, 0.100, {0, 0}, 0.015, 40, 40);
  const InfluenceMatrices mats = assemble(mesh);
  REQUIRE(mats.n() == 80);
  for (Eigen::Index k = 0; k < 80; ++k) CHECK(mats.f2(k, k) == 0.0);
  for (Eigen::Index m = 0; m < 80; ++m) CHECK(mats.f2.row(m).sum() == Approx(0.5).epsilon(1e-10));
}

TEST_CASE("assemble: unit-side square has the analytic self term on the diagonal") {
  const double r = std::sqrt(0.5);
  const AnnulusMesh mesh({{0, 0}, 10.0, 4, 0.0}, {{0, 0}, r, 4, 0.0});
  const InfluenceMatrices mats = assemble(mesh);
  for (Eigen::Index k = 4; k < 8; ++k) {
    CHECK(mats.f1(k, k) == Approx(-0.269472743168221132467).epsilon(1e-13));
  }
}

TEST_CASE("Dirichlet-to-Neumann: constant data gives zero flux") {
  const AnnulusMesh mesh = unit_annulus(40);
  const InfluenceMatrices mats = assemble(mesh);
  const double c = 2.75;
  const BoundarySolution sol = solve_dirichlet_to_neumann(mats, Eigen::VectorXd::Constant(80, c));
  CHECK(sol.p_bar.lpNorm<Eigen::Infinity>() <= 1e-9 * c);
  CHECK(sol.warnings.empty());
  CHECK(sol.condition_estimate > 1.0);
}

TEST_CASE("Dirichlet-to-Neumann: ln r on the annulus") {
  const AnnulusMesh mesh = unit_annulus(40);
  const BoundarySolution sol = solve_dirichlet_to_neumann(assemble(mesh), sample(mesh, log_r));
  double worst = 0.0;
  for (Eigen::Index k = 0; k < 80; ++k) {
    const double exact = k < 40 ? 0.5 : -1.0;
    worst = std::max(worst, std::abs(sol.p_bar[k] - exact) / std::abs(exact));
  }
  CHECK(worst <= 0.02);
}

TEST_CASE("Dirichlet-to-Neumann: u = x recovers n_x with first-order-or-better convergence") {
  double previous = INFINITY;
  for (std::size_t per : {40u, 80u}) {
    const AnnulusMesh mesh = unit_annulus(per);
    const BoundarySolution sol = solve_dirichlet_to_neumann(assemble(mesh), sample(mesh, [](Point2 p) { return p.x; }));
    double worst = 0.0;
    for (std::size_t k = 0; k < mesh.size(); ++k) {
      worst = std::max(worst, std::abs(sol.p_bar[static_cast<Eigen::Index>(k)] - mesh[k].normal().x));
    }
    if (per == 40) CHECK(worst <= 0.05);
    CHECK(worst <= previous / 2);
    previous = worst;
  }
}

TEST_CASE("mixed solve: all-Dirichlet agrees with the Dirichlet-to-Neumann solve") {
  const AnnulusMesh mesh = unit_annulus(20);
  const InfluenceMatrices mats = assemble(mesh);
  const Eigen::VectorXd a = sample(mesh, [](Point2 p) { return p.x * p.x - p.y * p.y + 0.3 * p.y; });
  const BoundarySolution d2n = solve_dirichlet_to_neumann(mats, a);
  const BoundarySolution mixed = solve_mixed(mats, BoundaryConditions::all_dirichlet(a));
  CHECK((d2n.p_bar - mixed.p_bar).lpNorm<Eigen::Infinity>() <= 1e-12 * d2n.p_bar.lpNorm<Eigen::Infinity>());
  CHECK(mixed.a_bar == a);
}

TEST_CASE("mixed solve: Dirichlet outside, Neumann inside for ln r") {
  const AnnulusMesh mesh = unit_annulus(40);
  std::vector<BoundaryConditions::Assignment> assignments;
  for (std::size_t k = 0; k < 40; ++k) assignments.push_back({k, {ConditionKind::Dirichlet, log_r(mesh[k].midpoint())}});
  for (std::size_t k = 40; k < 80; ++k) assignments.push_back({k, {ConditionKind::Neumann, -1.0}});
  const BoundarySolution sol = solve_mixed(assemble(mesh), BoundaryConditions(80, assignments));
  for (Eigen::Index k = 40; k < 80; ++k) CHECK(std::abs(sol.a_bar[k]) <= 2e-2);
  for (Eigen::Index k = 0; k < 40; ++k) CHECK(std::abs(sol.p_bar[k] - 0.5) <= 0.02 * 0.5);
  for (Eigen::Index k = 40; k < 80; ++k) CHECK(sol.p_bar[k] == -1.0);
}

TEST_CASE("boundary conditions reject double and missing assignments") {
  std::vector<BoundaryConditions::Assignment> twice = {{0, {ConditionKind::Dirichlet, 1.0}},
                                                       {1, {ConditionKind::Neumann, 0.0}},
                                                       {0, {ConditionKind::Neumann, 2.0}}};
  CHECK_THROWS_AS(BoundaryConditions(2, twice), PreconditionError);
  std::vector<BoundaryConditions::Assignment> gap = {{0, {ConditionKind::Dirichlet, 1.0}}};
  CHECK_THROWS_AS(BoundaryConditions(2, gap), PreconditionError);
  std::vector<BoundaryConditions::Assignment> outside = {{5, {ConditionKind::Dirichlet, 1.0}}};
  CHECK_THROWS_AS(BoundaryConditions(2, outside), PreconditionError);
  std::vector<BoundaryConditions::Assignment> nan = {{0, {ConditionKind::Dirichlet, NAN}},
                                                     {1, {ConditionKind::Dirichlet, 0.0}}};
  CHECK_THROWS_AS(BoundaryConditions(2, nan), PreconditionError);
}

TEST_CASE("pure Neumann data is singular and carries the nullspace warning") {
  const AnnulusMesh mesh = unit_annulus(12);
  std::vector<BoundaryConditions::Assignment> all;
  for (std::size_t k = 0; k < mesh.size(); ++k) all.push_back({k, {ConditionKind::Neumann, 1.0}});
  try {
    solve_mixed(assemble(mesh), BoundaryConditions(mesh.size(), all));
    FAIL("expected a solver error");
  } catch (const SolverError& e) {
    CHECK(std::string(e.what()).find("up to a constant") != std::string::npos);
    CHECK(std::string(e.what()).find("compatibility") != std::string::npos);
  }
}

TEST_CASE("singular single-layer matrix raises a solver error with the estimate") {
  InfluenceMatrices mats{Eigen::MatrixXd::Zero(3, 3), Eigen::MatrixXd::Zero(3, 3), nullptr};
  try {
    solve_dirichlet_to_neumann(mats, Eigen::VectorXd::Ones(3));
    FAIL("expected a solver error");
  } catch (const SolverError& e) {
    CHECK(std::isinf(e.condition_estimate));
  }
  CHECK_THROWS_AS(solve_dirichlet_to_neumann(mats, Eigen::VectorXd::Ones(4)), PreconditionError);
}

TEST_CASE("solve-then-verify residual on several meshes") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (std::size_t per : {8u, 20u, 40u, 80u}) {
    const AnnulusMesh mesh({{0.1, 0}, 2.5, per, 0.2}, {{-0.4, 0.3}, 0.9, per, 1.0});
    const InfluenceMatrices mats = assemble(mesh);
    Eigen::VectorXd a(static_cast<Eigen::Index>(mesh.size()));
    for (auto& v : a) v = g(rng);
    const BoundarySolution sol = solve_dirichlet_to_neumann(mats, a);
    CHECK(collocation_residual(mats, sol.a_bar, sol.p_bar).lpNorm<Eigen::Infinity>() <=
          1e-9 * a.lpNorm<Eigen::Infinity>());
    CHECK(sol.residual_norm <= 1e-9 * a.lpNorm<Eigen::Infinity>());
  }
}

TEST_CASE("linearity and permutation equivariance") {
  const AnnulusMesh mesh = unit_annulus(16);
  const InfluenceMatrices mats = assemble(mesh);
  const auto n = mats.n();
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd a1(n), a2(n);
    for (auto& v : a1) v = g(rng);
    for (auto& v : a2) v = g(rng);
    const double alpha = g(rng), beta = g(rng);
    const Eigen::VectorXd combined = solve_dirichlet_to_neumann(mats, alpha * a1 + beta * a2).p_bar;
    const Eigen::VectorXd separate =
        alpha * solve_dirichlet_to_neumann(mats, a1).p_bar + beta * solve_dirichlet_to_neumann(mats, a2).p_bar;
    CHECK((combined - separate).lpNorm<Eigen::Infinity>() <= 1e-10 * separate.lpNorm<Eigen::Infinity>());

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    Eigen::PermutationMatrix<Eigen::Dynamic> perm(Eigen::Map<Eigen::VectorXi>(order.data(), n));
    InfluenceMatrices permuted{perm * mats.f1 * perm.transpose(), perm * mats.f2 * perm.transpose(), nullptr};
    const Eigen::VectorXd p = solve_dirichlet_to_neumann(mats, a1).p_bar;
    const Eigen::VectorXd pp = solve_dirichlet_to_neumann(permuted, perm * a1).p_bar;
    CHECK((pp - perm * p).lpNorm<Eigen::Infinity>() <= 1e-10 * p.lpNorm<Eigen::Infinity>());
  }
}

TEST_CASE("net flux of harmonic data shrinks with refinement") {
  double previous = INFINITY;
  for (std::size_t per : {10u, 20u, 40u, 80u}) {
    const AnnulusMesh mesh = unit_annulus(per);
    const BoundarySolution sol = solve_dirichlet_to_neumann(assemble(mesh), sample(mesh, log_r));
    double net = 0.0;
    for (std::size_t k = 0; k < mesh.size(); ++k) net += sol.p_bar[static_cast<Eigen::Index>(k)] * mesh[k].length();
    CHECK(std::abs(net) <= previous / 2);
    previous = std::abs(net);
  }
}
