#include "shellvib/shell.hpp"

#include <array>
#include <string>

#include "shellvib/error.hpp"

namespace shellvib {

RefFrame reference_frame(const SurfaceJet& jet) {
  RefFrame f;
  f.a1 = jet.a1;
  f.a2 = jet.a2;
  const Vec3 n = jet.a1.cross(jet.a2);
  f.J = n.norm();
  if (!(f.J > 1e-14)) {
    throw Error(ErrorCode::DegenerateElement,
                "tangent vectors are parallel (|a1 x a2| = " + std::to_string(f.J) + ")");
  }
  f.a3 = n / f.J;
  f.a11 = jet.a11;
  f.a12 = jet.a12;
  f.a22 = jet.a22;

  Eigen::Matrix2d cov;
  cov << f.a1.dot(f.a1), f.a1.dot(f.a2), f.a2.dot(f.a1), f.a2.dot(f.a2);
  const Eigen::Matrix2d con = cov.inverse();
  f.metric.setZero();
  f.metric.topLeftCorner<2, 2>() = cov;
  f.metric(2, 2) = 1.0;
  f.inverse_metric.setZero();
  f.inverse_metric.topLeftCorner<2, 2>() = con;
  f.inverse_metric(2, 2) = 1.0;
  f.g1 = con(0, 0) * f.a1 + con(0, 1) * f.a2;
  f.g2 = con(1, 0) * f.a1 + con(1, 1) * f.a2;
  return f;
}

StrainOperators strain_operators(const RefFrame& f, const BasisJet& basis) {
  const int n = basis.size();
  StrainOperators op;
  op.membrane.resize(3, 3 * n);
  op.bending.resize(3, 3 * n);

  const double inv_j = 1.0 / f.J;
  const Vec3 a2xa3 = f.a2.cross(f.a3);
  const Vec3 a3xa1 = f.a3.cross(f.a1);
  // Coefficients of u_,1 and u_,2 in each bending component.
  std::array<Vec3, 3> c1;
  std::array<Vec3, 3> c2;
  const std::array<std::pair<int, int>, 3> comp{{{0, 0}, {1, 1}, {0, 1}}};
  for (int r = 0; r < 3; ++r) {
    const Vec3& aab = f.second(comp[r].first, comp[r].second);
    const double k = f.a3.dot(aab) * inv_j;
    c1[r] = inv_j * aab.cross(f.a2) + k * a2xa3;
    c2[r] = inv_j * f.a1.cross(aab) + k * a3xa1;
  }

  for (int a = 0; a < n; ++a) {
    const double n1 = basis.N1[a];
    const double n2 = basis.N2[a];
    const std::array<double, 3> nab{basis.N11[a], basis.N22[a], basis.N12[a]};
    op.membrane.block<1, 3>(0, 3 * a) = n1 * f.a1.transpose();
    op.membrane.block<1, 3>(1, 3 * a) = n2 * f.a2.transpose();
    op.membrane.block<1, 3>(2, 3 * a) = 0.5 * (n2 * f.a1 + n1 * f.a2).transpose();
    for (int r = 0; r < 3; ++r) {
      op.bending.block<1, 3>(r, 3 * a) = (-nab[r] * f.a3 + n1 * c1[r] + n2 * c2[r]).transpose();
    }
  }
  return op;
}

}  // namespace shellvib
