#pragma once

#include <Eigen/Dense>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "bem_annulus/geometry.hpp"

namespace bem {

// Dense collocation tables: entry (m, k) is the integral over element k
// evaluated at the midpoint of element m.
struct InfluenceMatrices {
  Eigen::MatrixXd f1;
  Eigen::MatrixXd f2;
  // Null when the matrices were supplied directly rather than assembled.
  std::shared_ptr<const AnnulusMesh> mesh;

  Eigen::Index n() const { return f1.rows(); }
};

InfluenceMatrices assemble(const AnnulusMesh& mesh);

enum class ConditionKind { Dirichlet, Neumann };

struct BoundaryCondition {
  ConditionKind kind = ConditionKind::Dirichlet;
  double value = 0.0;
};

// One condition per element, built from (index, condition) assignments so
// that gaps and double assignments are caught at construction.
class BoundaryConditions {
 public:
  struct Assignment {
    std::size_t element;  // 0-based
    BoundaryCondition condition;
  };

  BoundaryConditions(std::size_t n, std::span<const Assignment> assignments);
  static BoundaryConditions all_dirichlet(const Eigen::VectorXd& values);

  std::size_t size() const { return conditions_.size(); }
  const BoundaryCondition& operator[](std::size_t k) const { return conditions_[k]; }
  bool all_neumann() const;

 private:
  BoundaryConditions() = default;
  std::vector<BoundaryCondition> conditions_;
};

struct BoundarySolution {
  Eigen::VectorXd a_bar;  // potential per element
  Eigen::VectorXd p_bar;  // normal derivative per element
  std::shared_ptr<const AnnulusMesh> mesh;
  double residual_norm = 0.0;       // infinity norm of the collocation residual
  double condition_estimate = 0.0;  // 1-norm condition estimate of the solved matrix
  std::vector<std::string> warnings;
};

// Condition estimates above this are reported as a warning.
inline constexpr double kConditionWarning = 1e12;

// Solves F1 p = (F2 - I/2) a for p.
BoundarySolution solve_dirichlet_to_neumann(const InfluenceMatrices& mats,
                                            const Eigen::VectorXd& a_bar);

BoundarySolution solve_mixed(const InfluenceMatrices& mats, const BoundaryConditions& bc);

// max_m |1/2 a_m - sum_k (a_k F2[m,k] - p_k F1[m,k])|, one entry per row.
Eigen::VectorXd collocation_residual(const InfluenceMatrices& mats, const Eigen::VectorXd& a_bar,
                                     const Eigen::VectorXd& p_bar);

}  // namespace bem
