#pragma once

// Constitutive data: crystal-frame constants, transformation to the
// curvilinear surface basis and plane-stress relaxation.

#include <array>
#include <variant>

#include <Eigen/Core>

#include "shellvib/shell.hpp"

namespace shellvib {

using Voigt6 = Eigen::Matrix<double, 6, 6>;
using Voigt36 = Eigen::Matrix<double, 3, 6>;

struct IsotropicMaterial {
  double youngs_modulus;
  double poisson_ratio;
};

/// Voigt order 11, 22, 33, 23, 13, 12 for both C (6x6) and e (3x6).
struct PiezoMaterial {
  Voigt6 elastic;
  Voigt36 piezo;
  Eigen::Matrix3d permittivity;
};

struct MaterialSpec {
  std::variant<IsotropicMaterial, PiezoMaterial> model;
  double density = 0.0;

  static MaterialSpec isotropic(double youngs_modulus, double poisson_ratio, double density);
  /// Hexagonal 6mm constants; entries the thin-shell model never reads
  /// (C44, C55, e15, e24) are carried at nominal values.
  static MaterialSpec hexagonal_6mm(double c11, double c12, double c13, double c33, double c44, double c66,
                                    double e31, double e33, double e15, double k11, double k33, double density);
  static MaterialSpec batio3();

  bool is_piezo() const noexcept { return std::holds_alternative<PiezoMaterial>(model); }
  /// Throws BadGeometry when symmetry, definiteness or range checks fail.
  void validate() const;
};

using Tensor4 = std::array<std::array<std::array<std::array<double, 3>, 3>, 3>, 3>;

Tensor4 elastic_tensor(const MaterialSpec& spec);
/// e[k][i][j].
std::array<Eigen::Matrix3d, 3> piezo_tensor(const MaterialSpec& spec);
Eigen::Matrix3d permittivity_tensor(const MaterialSpec& spec);

/// In-plane relaxed moduli in contravariant surface components.
struct RelaxedModuli {
  /// C^{abcd}, a..d in {0, 1}.
  std::array<std::array<Eigen::Matrix2d, 2>, 2> C;
  /// e^{3bc}.
  Eigen::Matrix2d e3 = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d kappa = Eigen::Matrix2d::Zero();
  double kappa33 = 0.0;

  double c(int a, int b, int cc, int d) const { return C[a][b](cc, d); }
};

/// Tangent frame t1 = a1/|a1|, t2 = a3 x t1, t3 = a3.
std::array<Vec3, 3> tangent_frame(const RefFrame& frame);

RelaxedModuli transform_and_relax(const MaterialSpec& spec, const RefFrame& frame,
                                  const std::array<Vec3, 3>& tangent);
RelaxedModuli transform_and_relax(const MaterialSpec& spec, const RefFrame& frame);

/// H^{abcd} = nu a^{ab} a^{cd} + (1 - nu)/2 (a^{ac} a^{bd} + a^{ad} a^{bc}).
std::array<std::array<Eigen::Matrix2d, 2>, 2> isotropic_H(const RefFrame& frame, double nu);

/// Folds a four-index in-plane tensor into the 3x3 matrix acting on strain
/// vectors (11, 22, 12) with tensor shear, so that A:C:B = a^T D b.
Eigen::Matrix3d fold(const std::array<std::array<Eigen::Matrix2d, 2>, 2>& c);

/// (e^{311}, e^{322}, 2 e^{312}): e^{3bc} A_bc = v . a.
Eigen::Vector3d fold(const Eigen::Matrix2d& e3);

}  // namespace shellvib
