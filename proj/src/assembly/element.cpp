#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "shellvib/assembly.hpp"
#include "shellvib/error.hpp"
#include "shellvib/shell.hpp"

namespace shellvib {

namespace {

struct QuadratureTable {
  std::vector<QuadraturePoint> points;
  std::vector<BasisJet> jets;
};

// Basis jets at the quadrature points of one patch class, keyed by valence
// (4 for regular patches).
const QuadratureTable& quadrature_table(const Patch& patch) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<QuadratureTable>> cache;
  const int key = patch.kind == PatchKind::Regular ? 0 : patch.ev_valence;
  std::lock_guard lock(mutex);
  auto& slot = cache[key];
  if (!slot) {
    slot = std::make_unique<QuadratureTable>();
    slot->points = quadrature_rule(patch);
    for (const QuadraturePoint& q : slot->points) slot->jets.push_back(patch_basis_jet(patch, q.s, q.t));
  }
  return *slot;
}

struct PointMaterial {
  Eigen::Matrix3d D;
  Eigen::Vector3d e;
  Eigen::Matrix2d kappa;
  double kappa33 = 0.0;
};

PointMaterial point_material(const MaterialSpec& spec, const RefFrame& frame) {
  PointMaterial pm;
  if (const auto* iso = std::get_if<IsotropicMaterial>(&spec.model)) {
    const double nu = iso->poisson_ratio;
    pm.D = iso->youngs_modulus / (1.0 - nu * nu) * fold(isotropic_H(frame, nu));
    pm.e.setZero();
    pm.kappa.setZero();
    return pm;
  }
  const RelaxedModuli r = transform_and_relax(spec, frame);
  pm.D = fold(r.C);
  pm.e = fold(r.e3);
  pm.kappa = r.kappa;
  pm.kappa33 = r.kappa33;
  return pm;
}

}  // namespace

ElementMatrices element_matrices(const Patch& patch, const ShellModel& model) {
  const QuadratureTable& table = quadrature_table(patch);
  const int n = static_cast<int>(patch.control_ids.size());
  const int nd = 3 * n;
  const double h = model.thickness;
  const double h3 = h * h * h;
  const double h5 = h3 * h * h;
  const double rho_h = model.material.density * h;
  const Electric& el = model.electric;
  const Vec3 load = model.areal_load + h * model.body_force;
  const auto positions = model.mesh.extended.positions();

  ElementMatrices e;
  e.M = Eigen::MatrixXd::Zero(nd, nd);
  e.K = Eigen::MatrixXd::Zero(nd, nd);
  e.f = Eigen::VectorXd::Zero(nd);
  if (el.has_psi()) {
    e.Cpsi = Eigen::MatrixXd::Zero(nd, n);
    e.D1 = Eigen::MatrixXd::Zero(n, n);
  }
  if (el.has_phi()) {
    e.Cphi = Eigen::MatrixXd::Zero(nd, n);
    e.D2 = Eigen::MatrixXd::Zero(n, n);
  }
  if (el.condition == ElectricCondition::Electroded) e.fV = Eigen::VectorXd::Zero(nd);

  Eigen::MatrixXd nn(n, n);
  Eigen::MatrixXd grad(2, n);
  for (std::size_t q = 0; q < table.points.size(); ++q) {
    const BasisJet& basis = table.jets[q];
    RefFrame frame;
    PointMaterial mat;
    try {
      frame = reference_frame(surface_jet(basis, patch, positions));
      mat = point_material(model.material, frame);
    } catch (const Error& err) {
      throw Error(err.code(), "element " + std::to_string(patch.face) + ": " + err.what());
    }
    const double dA = frame.J * table.points[q].weight;
    const StrainOperators op = strain_operators(frame, basis);

    nn.noalias() = basis.N * basis.N.transpose();
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const double m = rho_h * nn(a, b) * dA;
        for (int i = 0; i < 3; ++i) e.M(3 * a + i, 3 * b + i) += m;
      }
      e.f.segment<3>(3 * a) += (basis.N[a] * dA) * load;
    }
    const Eigen::MatrixXd dbm = mat.D * op.membrane;
    const Eigen::MatrixXd dbb = mat.D * op.bending;
    e.K.noalias() += (h * dA) * op.membrane.transpose() * dbm;
    e.K.noalias() += (h3 / 12.0 * dA) * op.bending.transpose() * dbb;

    if (!el.has_phi()) continue;
    const Eigen::VectorXd me = op.membrane.transpose() * mat.e;
    const Eigen::VectorXd be = op.bending.transpose() * mat.e;
    grad.row(0) = basis.N1.transpose();
    grad.row(1) = basis.N2.transpose();
    const Eigen::MatrixXd gkg = grad.transpose() * mat.kappa * grad;
    e.Cphi.noalias() += (h3 / 6.0 * dA) * be * basis.N.transpose();
    e.D2 += (h5 / 30.0 * dA) * gkg + (h3 / 3.0 * mat.kappa33 * dA) * nn;
    if (el.has_psi()) {
      e.Cpsi.noalias() += (h * dA) * me * basis.N.transpose();
      e.D1 += (h3 / 12.0 * dA) * gkg + (h * mat.kappa33 * dA) * nn;
    }
    if (el.condition == ElectricCondition::Electroded) e.fV += (2.0 * el.voltage * dA) * me;
  }
  return e;
}

}  // namespace shellvib
