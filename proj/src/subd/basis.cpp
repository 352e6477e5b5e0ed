#include <algorithm>
#include <cmath>
#include <string>

#include "shellvib/error.hpp"
#include "shellvib/subd.hpp"

namespace shellvib {

Jet1d bspline_jet_1d(double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorCode::DomainError, "spline parameter " + std::to_string(t) + " outside [0,1]");
  }
  const double u = 1.0 - t;
  const double t2 = t * t;
  const double t3 = t2 * t;
  Jet1d j;
  j.value = {u * u * u / 6.0, (3.0 * t3 - 6.0 * t2 + 4.0) / 6.0,
             (-3.0 * t3 + 3.0 * t2 + 3.0 * t + 1.0) / 6.0, t3 / 6.0};
  j.d1 = {-0.5 * u * u, 1.5 * t2 - 2.0 * t, -1.5 * t2 + t + 0.5, 0.5 * t2};
  j.d2 = {u, 3.0 * t - 2.0, -3.0 * t + 1.0, t};
  return j;
}

BasisJet regular_basis_jet(double s, double t, JetOrder order) {
  const Jet1d bs = bspline_jet_1d(s);
  const Jet1d bt = bspline_jet_1d(t);
  BasisJet jet;
  jet.s = s;
  jet.t = t;
  jet.N.resize(16);
  if (order >= JetOrder::First) {
    jet.N1.resize(16);
    jet.N2.resize(16);
  }
  if (order >= JetOrder::Second) {
    jet.N11.resize(16);
    jet.N12.resize(16);
    jet.N22.resize(16);
  }
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) {
      const int a = i + 4 * j;
      jet.N[a] = bs.value[i] * bt.value[j];
      if (order >= JetOrder::First) {
        jet.N1[a] = bs.d1[i] * bt.value[j];
        jet.N2[a] = bs.value[i] * bt.d1[j];
      }
      if (order >= JetOrder::Second) {
        jet.N11[a] = bs.d2[i] * bt.value[j];
        jet.N12[a] = bs.d1[i] * bt.d1[j];
        jet.N22[a] = bs.value[i] * bt.d2[j];
      }
    }
  }
  return jet;
}

BasisJet irregular_basis_jet(int valence, double s, double t, JetOrder order) {
  const IrregularTables& tables = irregular_tables(valence);
  if (!(s >= 0.0 && s <= 1.0 && t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorCode::DomainError, "patch coordinates outside [0,1]^2");
  }
  if (s == 0.0 && t == 0.0) {
    if (order != JetOrder::Value) {
      throw Error(ErrorCode::EvCornerSingular, "derivatives requested at the extraordinary vertex");
    }
    BasisJet jet;
    jet.N = tables.limit_mask;
    return jet;
  }

  int k = 0;
  double u = s;
  double v = t;
  while (std::max(u, v) < 0.5) {
    if (k == 20) throw Error(ErrorCode::NoConvergence, "evaluation point too close to the extraordinary vertex");
    u *= 2.0;
    v *= 2.0;
    ++k;
  }
  int quadrant = 0;
  if (u >= 0.5 && v < 0.5) {
    quadrant = 0;
    u = 2.0 * u - 1.0;
    v = 2.0 * v;
  } else if (u >= 0.5) {
    quadrant = 1;
    u = 2.0 * u - 1.0;
    v = 2.0 * v - 1.0;
  } else {
    quadrant = 2;
    u = 2.0 * u;
    v = 2.0 * v - 1.0;
  }

  const BasisJet local = regular_basis_jet(u, v, order);
  const Eigen::MatrixXd& pick = tables.pick[quadrant];
  const auto pull_back = [&](const Eigen::VectorXd& w, double scale) {
    Eigen::VectorXd out = pick.transpose() * w;
    for (int step = 0; step < k; ++step) out = tables.corner.transpose() * out;
    return Eigen::VectorXd(out * scale);
  };

  const double d1 = std::ldexp(1.0, k + 1);
  BasisJet jet;
  jet.s = s;
  jet.t = t;
  jet.N = pull_back(local.N, 1.0);
  if (order >= JetOrder::First) {
    jet.N1 = pull_back(local.N1, d1);
    jet.N2 = pull_back(local.N2, d1);
  }
  if (order >= JetOrder::Second) {
    jet.N11 = pull_back(local.N11, d1 * d1);
    jet.N12 = pull_back(local.N12, d1 * d1);
    jet.N22 = pull_back(local.N22, d1 * d1);
  }
  return jet;
}

BasisJet patch_basis_jet(const Patch& patch, double s, double t, JetOrder order) {
  if (patch.kind == PatchKind::Regular) return regular_basis_jet(s, t, order);
  return irregular_basis_jet(patch.ev_valence, s, t, order);
}

SurfaceJet surface_jet(const BasisJet& basis, const Patch& patch, std::span<const Vec3> positions) {
  SurfaceJet jet;
  const bool first = basis.N1.size() > 0;
  const bool second = basis.N11.size() > 0;
  for (int a = 0; a < basis.size(); ++a) {
    const Vec3& p = positions[patch.control_ids[a]];
    jet.x += basis.N[a] * p;
    if (first) {
      jet.a1 += basis.N1[a] * p;
      jet.a2 += basis.N2[a] * p;
    }
    if (second) {
      jet.a11 += basis.N11[a] * p;
      jet.a12 += basis.N12[a] * p;
      jet.a22 += basis.N22[a] * p;
    }
  }
  return jet;
}

std::pair<BasisJet, SurfaceJet> eval_patch_jet(const Patch& patch, std::span<const Vec3> positions,
                                               double s, double t, JetOrder order) {
  BasisJet basis = patch_basis_jet(patch, s, t, order);
  SurfaceJet surface = surface_jet(basis, patch, positions);
  return {std::move(basis), surface};
}

}  // namespace shellvib
