#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "shellvib/error.hpp"
#include "shellvib/solver.hpp"

namespace shellvib {

namespace {

// Number of independent rigid-body motions the constraints leave free.
int free_rigid_motions(const AssembledSystem& sys, const ControlMesh& mesh, const ReducedOperator& op) {
  if (mesh.num_real_vertices() != sys.num_vertices) return 0;
  const auto fields = rigid_body_fields(mesh);
  const int n = static_cast<int>(sys.free_dofs.size());
  Eigen::MatrixXd r(n, 6);
  for (int k = 0; k < 6; ++k) {
    for (int i = 0; i < n; ++i) r(i, k) = fields[k][sys.free_dofs[i]];
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(r, Eigen::ComputeThinU);
  const double smax = svd.singularValues()[0];
  if (smax == 0.0) return 0;
  int rank = 0;
  while (rank < 6 && svd.singularValues()[rank] > 1e-8 * smax) ++rank;
  const Eigen::MatrixXd q = svd.matrixU().leftCols(rank);
  Eigen::MatrixXd aq(n, rank);
  for (int k = 0; k < rank; ++k) aq.col(k) = op.apply(q.col(k));
  const Eigen::MatrixXd g = q.transpose() * aq;
  double kmax = 0.0;
  for (Eigen::Index i = 0; i < sys.K.rows(); ++i) kmax = std::max(kmax, std::abs(sys.K.coeff(i, i)));
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(0.5 * (g + g.transpose())).eigenvalues();
  int nullity = 0;
  for (int k = 0; k < rank; ++k) nullity += ev[k] <= 1e-9 * kmax;
  return nullity;
}

}  // namespace

StaticResult solve_static(const AssembledSystem& sys, const ControlMesh& mesh) {
  const int n = static_cast<int>(sys.K.rows());
  StaticResult out;
  out.u = Eigen::VectorXd::Zero(n);
  if (n == 0) return out;
  const ReducedOperator op(sys);
  const int nullity = free_rigid_motions(sys, mesh, op);
  if (nullity > 0) {
    throw Error(ErrorCode::SingularStiffness,
                "stiffness is singular: " + std::to_string(nullity) + " rigid-body motion(s) are not restrained");
  }
  Eigen::VectorXd rhs = sys.f;
  if (sys.fV.size() > 0) rhs += sys.fV;
  out.u = ShiftedSolver(sys, 0.0).solve(rhs);
  if (!out.u.allFinite()) throw Error(ErrorCode::SingularStiffness, "static solution is not finite");
  std::tie(out.psi, out.phi) = op.potentials(out.u);
  return out;
}

Eigen::VectorXd evaluate_field(const PatchedMesh& mesh, const Eigen::VectorXd& nodal, int components,
                               const FacePoint& point) {
  if (point.face < 0 || point.face >= static_cast<int>(mesh.patches.size())) {
    throw Error(ErrorCode::IndexOutOfRange, "face " + std::to_string(point.face) + " does not exist");
  }
  if (nodal.size() != static_cast<Eigen::Index>(components) * mesh.mesh.num_real_vertices()) {
    throw Error(ErrorCode::AssemblyError, "nodal field does not match the mesh");
  }
  const Patch& patch = mesh.patches[point.face];
  const auto [s, t] = face_to_patch(patch.rotation, point.xi, point.eta);
  const BasisJet basis = patch_basis_jet(patch, s, t, JetOrder::Value);
  Eigen::VectorXd value = Eigen::VectorXd::Zero(components);
  for (std::size_t a = 0; a < patch.control_ids.size(); ++a) {
    for (const DofWeight& dw : mesh.condensation(patch.control_ids[a])) {
      value += basis.N[static_cast<Eigen::Index>(a)] * dw.weight * nodal.segment(components * dw.vertex, components);
    }
  }
  return value;
}

}  // namespace shellvib
