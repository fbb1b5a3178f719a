#include "bem_annulus/system.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "bem_annulus/error.hpp"
#include "bem_annulus/kernel.hpp"

namespace bem {

InfluenceMatrices assemble(const AnnulusMesh& mesh) {
  const auto n = static_cast<Eigen::Index>(mesh.size());
  InfluenceMatrices mats{Eigen::MatrixXd(n, n), Eigen::MatrixXd(n, n),
                         std::make_shared<const AnnulusMesh>(mesh)};
  const auto elements = mesh.elements();
  for (Eigen::Index m = 0; m < n; ++m) {
    const Point2 collocation = elements[static_cast<std::size_t>(m)].midpoint();
    for (Eigen::Index k = 0; k < n; ++k) {
      const KernelValue v = evaluate(elements[static_cast<std::size_t>(k)], collocation);
      mats.f1(m, k) = v.f1;
      mats.f2(m, k) = v.f2;
    }
  }
  return mats;
}

BoundaryConditions::BoundaryConditions(std::size_t n, std::span<const Assignment> assignments) {
  std::vector<bool> seen(n, false);
  conditions_.resize(n);
  for (const auto& [element, condition] : assignments) {
    if (element >= n) {
      throw PreconditionError("boundary condition for element " + std::to_string(element) +
                              " outside mesh of " + std::to_string(n));
    }
    if (seen[element]) {
      throw PreconditionError("element " + std::to_string(element) +
                              " has more than one boundary condition");
    }
    if (!std::isfinite(condition.value)) {
      throw PreconditionError("boundary value for element " + std::to_string(element) +
                              " is not finite");
    }
    seen[element] = true;
    conditions_[element] = condition;
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!seen[k]) throw PreconditionError("element " + std::to_string(k) + " has no boundary condition");
  }
}

BoundaryConditions BoundaryConditions::all_dirichlet(const Eigen::VectorXd& values) {
  BoundaryConditions bc;
  bc.conditions_.reserve(static_cast<std::size_t>(values.size()));
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k])) {
      throw PreconditionError("Dirichlet value for element " + std::to_string(k) + " is not finite");
    }
    bc.conditions_.push_back({ConditionKind::Dirichlet, values[k]});
  }
  return bc;
}

bool BoundaryConditions::all_neumann() const {
  for (const auto& c : conditions_) {
    if (c.kind != ConditionKind::Neumann) return false;
  }
  return !conditions_.empty();
}

Eigen::VectorXd collocation_residual(const InfluenceMatrices& mats, const Eigen::VectorXd& a_bar,
                                     const Eigen::VectorXd& p_bar) {
  return 0.5 * a_bar - (mats.f2 * a_bar - mats.f1 * p_bar);
}

namespace {

struct LinearSolve {
  Eigen::VectorXd x;
  double condition = 0.0;
};

LinearSolve dense_solve(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& rhs) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(matrix);
  const double rcond = lu.rcond();
  const double condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!(rcond > std::numeric_limits<double>::epsilon())) {
    std::ostringstream msg;
    msg << "boundary system is numerically singular (condition estimate " << condition << ")";
    throw SolverError(msg.str(), condition);
  }
  LinearSolve out{lu.solve(rhs), condition};
  if (!out.x.allFinite()) throw SolverError("boundary system produced non-finite values", condition);
  return out;
}

void check_sizes(const InfluenceMatrices& mats, Eigen::Index n) {
  if (mats.f1.rows() != mats.f1.cols() || mats.f2.rows() != mats.f2.cols() ||
      mats.f1.rows() != mats.f2.rows()) {
    throw PreconditionError("influence matrices must be square and of equal size");
  }
  if (n != mats.n()) {
    throw PreconditionError("boundary data has " + std::to_string(n) + " entries, system has " +
                            std::to_string(mats.n()));
  }
}

void finish(BoundarySolution& sol, const InfluenceMatrices& mats, double condition) {
  sol.mesh = mats.mesh;
  sol.condition_estimate = condition;
  sol.residual_norm = collocation_residual(mats, sol.a_bar, sol.p_bar).lpNorm<Eigen::Infinity>();
  if (condition > kConditionWarning) {
    std::ostringstream msg;
    msg << "ill-conditioned boundary system (condition estimate " << condition << ")";
    sol.warnings.push_back(msg.str());
  }
}

}  // namespace

BoundarySolution solve_dirichlet_to_neumann(const InfluenceMatrices& mats,
                                            const Eigen::VectorXd& a_bar) {
  check_sizes(mats, a_bar.size());
  if (!a_bar.allFinite()) throw PreconditionError("Dirichlet data contains non-finite values");
  const Eigen::VectorXd rhs = mats.f2 * a_bar - 0.5 * a_bar;
  const LinearSolve solved = dense_solve(mats.f1, rhs);
  BoundarySolution sol;
  sol.a_bar = a_bar;
  sol.p_bar = solved.x;
  finish(sol, mats, solved.condition);
  return sol;
}

// Collocation row m: sum_k [(F2 - I/2)[m,k] a_k - F1[m,k] p_k] = 0. Each
// column moves to the unknown side or the right-hand side depending on which
// datum element k prescribes.
BoundarySolution solve_mixed(const InfluenceMatrices& mats, const BoundaryConditions& bc) {
  const Eigen::Index n = static_cast<Eigen::Index>(bc.size());
  check_sizes(mats, n);

  Eigen::MatrixXd system(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const BoundaryCondition& c = bc[static_cast<std::size_t>(k)];
    Eigen::VectorXd double_layer = mats.f2.col(k);
    double_layer[k] -= 0.5;
    if (c.kind == ConditionKind::Dirichlet) {
      system.col(k) = -mats.f1.col(k);
      rhs -= c.value * double_layer;
    } else {
      system.col(k) = double_layer;
      rhs += c.value * mats.f1.col(k);
    }
  }

  std::vector<std::string> warnings;
  if (bc.all_neumann()) {
    double net = 0.0;
    double scale = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      const double len =
          mats.mesh ? (*mats.mesh)[static_cast<std::size_t>(k)].length() : 1.0;
      net += bc[static_cast<std::size_t>(k)].value * len;
      scale += std::abs(bc[static_cast<std::size_t>(k)].value) * len;
    }
    std::ostringstream msg;
    msg << "pure Neumann problem: potential is defined only up to a constant";
    if (std::abs(net) > 1e-8 * scale) msg << "; data violates compatibility (net flux " << net << ")";
    warnings.push_back(msg.str());
  }

  LinearSolve solved;
  try {
    solved = dense_solve(system, rhs);
  } catch (const SolverError& err) {
    if (warnings.empty()) throw;
    throw SolverError(std::string(err.what()) + "; " + warnings.front(), err.condition_estimate);
  }

  BoundarySolution sol;
  sol.a_bar.resize(n);
  sol.p_bar.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const BoundaryCondition& c = bc[static_cast<std::size_t>(k)];
    if (c.kind == ConditionKind::Dirichlet) {
      sol.a_bar[k] = c.value;
      sol.p_bar[k] = solved.x[k];
    } else {
      sol.a_bar[k] = solved.x[k];
      sol.p_bar[k] = c.value;
    }
  }
  sol.warnings = std::move(warnings);
  finish(sol, mats, solved.condition);
  return sol;
}

}  // namespace bem
