#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <type_traits>

#include "shellvib/error.hpp"
#include "shellvib/mesh.hpp"
#include "shellvib/subd.hpp"

namespace shellvib {

namespace {

constexpr int kMaxSphereFitIterations = 30;

ControlMesh sphere_mesh(const SphereSpec& spec) {
  if (!(spec.radius > 0.0) || spec.level < 2 || spec.level > 7) {
    throw Error(ErrorCode::BadGeometry, "sphere needs radius > 0 and 2 <= level <= 7");
  }
  ControlMesh cube = unit_cube_mesh();
  std::vector<Vec3> centred(cube.positions().begin(), cube.positions().end());
  for (Vec3& p : centred) p -= Vec3::Constant(0.5);
  ControlMesh mesh(cube.shared_topology(), std::move(centred));
  for (int l = 0; l < spec.level; ++l) mesh = subdivide_once(mesh);

  std::vector<Vec3> projected(mesh.positions().begin(), mesh.positions().end());
  for (Vec3& p : projected) p = spec.radius * p.normalized();
  mesh = mesh.with_real_positions(std::move(projected));

  // The radial projection of the current limit surface is the target; the
  // fixed point of this iteration is the least-squares sphere.
  const LimitSurfaceFitter fitter(mesh);
  const double r = spec.radius;
  const SurfaceSampler radial = [r](const SurfaceSample& q) -> Vec3 { return r * q.current.normalized(); };
  double previous = std::numeric_limits<double>::infinity();
  for (int it = 0; it < kMaxSphereFitIterations; ++it) {
    FitReport report;
    mesh = fitter.fit(mesh, radial, &report);
    double worst = 0.0;
    for (const Vec3& x : fitter.sample(mesh)) worst = std::max(worst, std::abs(x.norm() - r));
    if (worst > 0.999 * previous) break;
    previous = worst;
  }
  return mesh;
}

ControlMesh roof_mesh(const RoofSpec& spec) {
  if (!(spec.length > 0.0) || !(spec.radius > 0.0) || !(spec.theta > 0.0) ||
      !(spec.theta < std::numbers::pi) || spec.n < 8) {
    throw Error(ErrorCode::BadGeometry, "roof needs L, R > 0, 0 < theta < pi and n >= 8");
  }
  const int n = spec.n;
  const auto at = [&spec, n](double i, double j) -> Vec3 {
    const double phi = -spec.theta + 2.0 * spec.theta * i / n;
    return {spec.radius * std::sin(phi), spec.length * j / n, spec.radius * std::cos(phi)};
  };
  std::vector<Vec3> vertices;
  vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) vertices.push_back(at(i, j));
  }
  std::vector<Quad> faces;
  faces.reserve(static_cast<std::size_t>(n) * n);
  const auto id = [n](int i, int j) { return i * (n + 1) + j; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
  }
  ControlMesh mesh(std::move(vertices), std::move(faces));

  const SurfaceSampler cylinder = [&at, n](const SurfaceSample& q) -> Vec3 {
    return at(q.face / n + q.xi, q.face % n + q.eta);
  };
  return fit_limit_surface(mesh, cylinder);
}

}  // namespace

ControlMesh unit_cube_mesh() {
  std::vector<Vec3> v{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                      {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
  std::vector<Quad> f{{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4}, {3, 7, 6, 2}, {0, 4, 7, 3}, {1, 2, 6, 5}};
  return ControlMesh(std::move(v), std::move(f));
}

ControlMesh generate_benchmark_mesh(const BenchmarkSpec& spec) {
  return std::visit(
      [](const auto& s) -> ControlMesh {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, SphereSpec>) {
          return sphere_mesh(s);
        } else {
          return roof_mesh(s);
        }
      },
      spec);
}

FacePoint roof_free_edge_midpoint(const RoofSpec& spec) {
  const int j = spec.n / 2;
  const double eta = spec.n % 2 == 0 ? 0.0 : 0.5;
  return {(spec.n - 1) * spec.n + j, 1.0, eta};
}

Vec3 limit_point(const PatchedMesh& patched, const FacePoint& point) {
  if (point.face < 0 || point.face >= static_cast<int>(patched.patches.size())) {
    throw Error(ErrorCode::IndexOutOfRange, "face " + std::to_string(point.face) + " out of range");
  }
  const Patch& patch = patched.patches[point.face];
  const auto [s, t] = face_to_patch(patch.rotation, point.xi, point.eta);
  return eval_patch_jet(patch, patched.extended.positions(), s, t, JetOrder::Value).second.x;
}

}  // namespace shellvib
