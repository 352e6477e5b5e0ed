#pragma once

#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "shellvib/assembly.hpp"
#include "shellvib/error.hpp"
#include "shellvib/mesh.hpp"

namespace fixtures {

using namespace shellvib;

inline ControlMesh grid_mesh(int m, double spacing = 1.0) {
  std::vector<Vec3> v;
  for (int j = 0; j <= m; ++j) {
    for (int i = 0; i <= m; ++i) v.emplace_back(spacing * i, spacing * j, 0.0);
  }
  std::vector<Quad> f;
  const auto id = [m](int i, int j) { return i + (m + 1) * j; };
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) f.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
  }
  return ControlMesh(std::move(v), std::move(f));
}

/// Index of the patch whose face is the interior cell (i, j) of grid_mesh(m).
inline int grid_face(int m, int i, int j) { return i + m * j; }

inline RoofSpec piezo_roof(int n, double theta_deg = 40.0) {
  return RoofSpec{0.5, 0.25, theta_deg * std::numbers::pi / 180.0, n};
}

inline ShellModel make_model(const ControlMesh& mesh, double h, MaterialSpec material,
                             ElectricCondition condition = ElectricCondition::Elastic, double voltage = 0.0) {
  return ShellModel{.mesh = build_patches(mesh),
                    .thickness = h,
                    .material = std::move(material),
                    .electric = Electric{condition, voltage}};
}

inline ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::IoError;
}

inline double rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return scale == 0.0 ? 0.0 : (a - b).cwiseAbs().maxCoeff() / scale;
}

}  // namespace fixtures
