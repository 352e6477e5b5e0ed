#pragma once

// Elimination of the electric unknowns, the generalized symmetric
// eigenproblem A u = w^2 M u, static solves and potential recovery.

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "shellvib/assembly.hpp"

namespace shellvib {

/// Explicit A = K + C_upsi D1^-1 C_upsi^T + C_uphi D2^-1 C_uphi^T. The
/// Schur terms are dense, so this is meant for small systems.
SpMat schur_reduce(const AssembledSystem& sys);
Eigen::MatrixXd schur_reduce_dense(const AssembledSystem& sys);

/// A applied without forming it; the dielectric blocks are factorised once.
class ReducedOperator {
 public:
  /// Throws SingularDielectric when D1 or D2 cannot be factorised.
  explicit ReducedOperator(const AssembledSystem& sys);
  ~ReducedOperator();
  ReducedOperator(ReducedOperator&&) noexcept;

  int size() const noexcept;
  Eigen::VectorXd apply(const Eigen::VectorXd& u) const;
  /// psi = D1^-1 C_upsi^T u and phi = D2^-1 C_uphi^T u; empty when absent.
  std::pair<Eigen::VectorXd, Eigen::VectorXd> potentials(const Eigen::VectorXd& u) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Solves (A + shift M) u = b through the quasi-definite block system
///   [K + shift M   C ] [u]   [b]
///   [C^T          -D ] [y] = [0]
/// so A never has to be formed.
class ShiftedSolver {
 public:
  /// Throws SingularStiffness when the factorisation fails.
  ShiftedSolver(const AssembledSystem& sys, double shift);
  ~ShiftedSolver();
  ShiftedSolver(ShiftedSolver&&) noexcept;

  int size() const noexcept;
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::pair<Eigen::VectorXd, Eigen::VectorXd> recover_potentials(const AssembledSystem& sys, const Eigen::VectorXd& u);

struct ModalOptions {
  /// Flexible modes wanted; up to six rigid modes are returned in addition.
  int num_modes = 10;
  /// The factorised matrix is A + (2 pi shift_hz)^2 M.
  double shift_hz = 1.0;
  double tolerance = 1e-8;
  /// Systems with at most this many free dofs use a dense solver.
  int dense_threshold = 2000;
  int block_size = 8;
  int max_restarts = 300;
};

struct ModalResult {
  /// lambda = omega^2, ascending.
  Eigen::VectorXd eigenvalues;
  /// Hz; rigid modes with slightly negative lambda report 0.
  Eigen::VectorXd frequencies;
  /// Free-dof columns with u^T M u = 1.
  Eigen::MatrixXd modes;
  /// Potential coefficients per mode (one column each); empty when absent.
  Eigen::MatrixXd psi;
  Eigen::MatrixXd phi;
  /// |A u - lambda M u| / (max(|lambda|, shift) |M u|); rigid modes use the
  /// lowest flexible lambda in place of |lambda|.
  Eigen::VectorXd residuals;
  std::vector<bool> rigid;
  bool dense = false;
  int restarts = 0;

  int size() const noexcept { return static_cast<int>(eigenvalues.size()); }
  int num_rigid() const;
};

/// Throws EigenNoConvergence (message carries the achieved residuals).
ModalResult solve_modal(const AssembledSystem& sys, const ModalOptions& options = {});
/// Plain pencil (A, M) without electric blocks.
ModalResult solve_modal(const SpMat& a, const SpMat& m, const ModalOptions& options = {});

struct StaticResult {
  /// Free-dof displacements.
  Eigen::VectorXd u;
  Eigen::VectorXd psi;
  Eigen::VectorXd phi;
};

/// Solves A u = f + f_V on the free dofs. Throws SingularStiffness, with the
/// number of unconstrained rigid motions in the message, when A is singular.
StaticResult solve_static(const AssembledSystem& sys, const ControlMesh& mesh);

/// Limit-surface value of a nodal field with `components` values per real
/// vertex (ghost values follow the condensation).
Eigen::VectorXd evaluate_field(const PatchedMesh& mesh, const Eigen::VectorXd& nodal, int components,
                               const FacePoint& point);

}  // namespace shellvib
