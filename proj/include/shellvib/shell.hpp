#pragma once

// Reference geometry of the mid-surface and the linearised Kirchhoff-Love
// strain-displacement operators.

#include <Eigen/Core>

#include "shellvib/mesh.hpp"
#include "shellvib/subd.hpp"

namespace shellvib {

struct RefFrame {
  Vec3 a1;
  Vec3 a2;
  /// Unit normal.
  Vec3 a3;
  /// |a1 x a2|.
  double J = 0.0;
  Vec3 a11;
  Vec3 a12;
  Vec3 a22;
  /// Covariant metric a_ij with a_33 = 1.
  Eigen::Matrix3d metric;
  /// Contravariant metric a^ij.
  Eigen::Matrix3d inverse_metric;
  /// Contravariant tangents a^1, a^2.
  Vec3 g1;
  Vec3 g2;

  const Vec3& second(int a, int b) const { return a == b ? (a == 0 ? a11 : a22) : a12; }
};

RefFrame reference_frame(const SurfaceJet& jet);

/// Rows are the strain components in the order (11, 22, 12) with tensor
/// shear; column 3*A + i belongs to displacement component i of control point A.
struct StrainOperators {
  Eigen::Matrix<double, 3, Eigen::Dynamic> membrane;
  Eigen::Matrix<double, 3, Eigen::Dynamic> bending;
};

StrainOperators strain_operators(const RefFrame& frame, const BasisJet& basis);

}  // namespace shellvib
