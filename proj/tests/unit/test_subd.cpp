#include <doctest.h>

#include <random>

#include "shellvib/error.hpp"
#include "shellvib/mesh.hpp"
#include "shellvib/subd.hpp"
#include "subdivision_oracle.hpp"

using namespace shellvib;

namespace {

std::vector<Vec3> random_net(int size, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec3> p(size);
  for (Vec3& x : p) x = Vec3(u(rng), u(rng), u(rng));
  return p;
}

Patch local_patch(int valence) {
  Patch p;
  p.kind = valence == 4 ? PatchKind::Irregular : PatchKind::Irregular;
  p.ev_valence = valence;
  p.control_ids.resize(2 * valence + 8);
  for (int a = 0; a < 2 * valence + 8; ++a) p.control_ids[a] = a;
  return p;
}

// Position of every irregular-ordering index on the 4x4 grid when n = 4.
std::array<int, 16> valence4_grid_index() {
  const std::array<std::pair<int, int>, 16> at{{{1, 1}, {2, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}, {0, 0}, {1, 0},
                                                {2, 0}, {0, 3}, {1, 3}, {2, 3}, {3, 3}, {3, 2}, {3, 1}, {3, 0}}};
  std::array<int, 16> out{};
  for (int a = 0; a < 16; ++a) out[a] = at[a].first + 4 * at[a].second;
  return out;
}

}  // namespace

TEST_CASE("cubic B-spline segment") {
  const Jet1d a = bspline_jet_1d(0.0);
  CHECK(a.value[0] == doctest::Approx(1.0 / 6));
  CHECK(a.value[1] == doctest::Approx(2.0 / 3));
  CHECK(a.value[2] == doctest::Approx(1.0 / 6));
  CHECK(a.value[3] == 0.0);
  const Jet1d b = bspline_jet_1d(0.5);
  CHECK(b.value[0] == doctest::Approx(1.0 / 48));
  CHECK(b.value[1] == doctest::Approx(23.0 / 48));
  CHECK(b.value[2] == doctest::Approx(23.0 / 48));
  CHECK(b.value[3] == doctest::Approx(1.0 / 48));
  for (double t : {0.0, 0.13, 0.5, 0.77, 1.0}) {
    const Jet1d j = bspline_jet_1d(t);
    CHECK(std::abs(j.d1[0] + j.d1[1] + j.d1[2] + j.d1[3]) <= 1e-14);
    CHECK(std::abs(j.d2[0] + j.d2[1] + j.d2[2] + j.d2[3]) <= 1e-14);
  }
  CHECK_THROWS_AS(bspline_jet_1d(1.5), Error);
  CHECK_THROWS_AS(bspline_jet_1d(-1e-9), Error);
}

TEST_CASE("derivatives of the 1d basis match finite differences") {
  const double h = 1e-6;
  for (double t : {0.2, 0.5, 0.8}) {
    const Jet1d j = bspline_jet_1d(t);
    const Jet1d p = bspline_jet_1d(t + h);
    const Jet1d m = bspline_jet_1d(t - h);
    for (int i = 0; i < 4; ++i) {
      CHECK(j.d1[i] == doctest::Approx((p.value[i] - m.value[i]) / (2 * h)).epsilon(1e-8));
      CHECK(j.d2[i] == doctest::Approx((p.d1[i] - m.d1[i]) / (2 * h)).epsilon(1e-7));
    }
  }
}

TEST_CASE("regular patch on the integer lattice has linear precision") {
  Patch p;
  p.control_ids.resize(16);
  std::vector<Vec3> pos(16);
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) {
      pos[i + 4 * j] = Vec3(i, j, 0);
      p.control_ids[i + 4 * j] = i + 4 * j;
    }
  }
  for (double s : {0.0, 0.3, 1.0}) {
    for (double t : {0.0, 0.6, 1.0}) {
      const auto [basis, jet] = eval_patch_jet(p, pos, s, t);
      CHECK((jet.x - Vec3(1 + s, 1 + t, 0)).norm() <= 1e-14);
      CHECK((jet.a1 - Vec3(1, 0, 0)).norm() <= 1e-14);
      CHECK((jet.a2 - Vec3(0, 1, 0)).norm() <= 1e-14);
      CHECK(jet.a11.norm() + jet.a12.norm() + jet.a22.norm() <= 1e-13);
    }
  }
}

TEST_CASE("constant control points give a constant surface") {
  for (int n : {3, 4, 5, 6}) {
    const Patch p = local_patch(n);
    std::vector<Vec3> pos(2 * n + 8, Vec3(0.3, -2.0, 7.0));
    const auto [basis, jet] = eval_patch_jet(p, pos, 0.37, 0.05);
    CHECK((jet.x - pos[0]).norm() <= 1e-12);
    CHECK(jet.a1.norm() + jet.a2.norm() <= 1e-10);
    CHECK(jet.a11.norm() + jet.a12.norm() + jet.a22.norm() <= 1e-8);
  }
}

TEST_CASE("partition of unity at random points") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(1e-3, 1.0);
  for (int n : {3, 4, 5, 6, 8}) {
    for (int q = 0; q < 100; ++q) {
      const double s = u(rng);
      const double t = u(rng);
      const BasisJet b = n == 4 ? regular_basis_jet(s, t) : irregular_basis_jet(n, s, t);
      const double scale = b.N1.cwiseAbs().sum();
      const double scale2 = b.N11.cwiseAbs().sum() + b.N22.cwiseAbs().sum() + b.N12.cwiseAbs().sum();
      CHECK(std::abs(b.N.sum() - 1.0) <= 1e-10);
      CHECK(std::abs(b.N1.sum()) <= 1e-8 * scale);
      CHECK(std::abs(b.N2.sum()) <= 1e-8 * scale);
      CHECK(std::abs(b.N11.sum()) <= 1e-8 * scale2);
      CHECK(std::abs(b.N12.sum()) <= 1e-8 * scale2);
      CHECK(std::abs(b.N22.sum()) <= 1e-8 * scale2);
    }
  }
}

TEST_CASE("irregular evaluation with valence 4 reproduces the regular patch") {
  const auto grid = valence4_grid_index();
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(1e-4, 1.0);
  for (int q = 0; q < 50; ++q) {
    const double s = u(rng);
    const double t = u(rng) * (q % 5 == 0 ? 1e-3 : 1.0);
    const BasisJet irr = irregular_basis_jet(4, s, t);
    const BasisJet reg = regular_basis_jet(s, t);
    for (int a = 0; a < 16; ++a) {
      CHECK(std::abs(irr.N[a] - reg.N[grid[a]]) <= 1e-12);
      CHECK(std::abs(irr.N1[a] - reg.N1[grid[a]]) <= 1e-11);
      CHECK(std::abs(irr.N2[a] - reg.N2[grid[a]]) <= 1e-11);
      CHECK(std::abs(irr.N11[a] - reg.N11[grid[a]]) <= 1e-10);
      CHECK(std::abs(irr.N12[a] - reg.N12[grid[a]]) <= 1e-10);
      CHECK(std::abs(irr.N22[a] - reg.N22[grid[a]]) <= 1e-10);
    }
  }
  const BasisJet corner = irregular_basis_jet(4, 0.0, 0.0, JetOrder::Value);
  const BasisJet reg = regular_basis_jet(0.0, 0.0, JetOrder::Value);
  for (int a = 0; a < 16; ++a) CHECK(std::abs(corner.N[a] - reg.N[grid[a]]) <= 1e-14);
}

TEST_CASE("valence-3 patch matches explicit refinement at (0.3, 0.7)") {
  const int n = 3;
  const Patch p = local_patch(n);
  const auto net = random_net(2 * n + 8, 21);
  const SurfaceJet ladder = eval_patch_jet(p, net, 0.3, 0.7).second;
  for (int k = 1; k <= 6; ++k) {
    const SurfaceJet ref = oracle::refine_and_evaluate(n, net, 0.3, 0.7, k).surface;
    CHECK((ladder.x - ref.x).norm() <= 1e-9);
    CHECK((ladder.a1 - ref.a1).norm() <= 1e-8);
    CHECK((ladder.a22 - ref.a22).norm() <= 1e-7);
  }
}

TEST_CASE("extraordinary corner") {
  const Patch p = local_patch(5);
  const auto net = random_net(18, 4);
  CHECK_THROWS_AS(eval_patch_jet(p, net, 0.0, 0.0, JetOrder::First), Error);
  const auto value = eval_patch_jet(p, net, 0.0, 0.0, JetOrder::Value).second.x;
  const auto near = eval_patch_jet(p, net, 1e-5, 1e-5, JetOrder::Value).second.x;
  CHECK((value - near).norm() <= 1e-3);
  try {
    irregular_basis_jet(5, 0.0, 0.0, JetOrder::Second);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EvCornerSingular);
  }
  try {
    irregular_basis_jet(5, 1e-9, 0.0, JetOrder::Value);
    FAIL("expected NoConvergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoConvergence);
  }
}

TEST_CASE("scaling the control net scales the surface jet") {
  const Patch p = local_patch(5);
  auto net = random_net(18, 8);
  const SurfaceJet a = eval_patch_jet(p, net, 0.21, 0.4).second;
  for (Vec3& x : net) x *= 3.0;
  const SurfaceJet b = eval_patch_jet(p, net, 0.21, 0.4).second;
  CHECK((b.x - 3.0 * a.x).norm() <= 1e-12);
  CHECK((b.a1 - 3.0 * a.a1).norm() <= 1e-12);
  CHECK((b.a12 - 3.0 * a.a12).norm() <= 1e-11);
}

TEST_CASE("tangent planes agree across shared edges of the refined cube") {
  const PatchedMesh pm = build_patches(subdivide_once(subdivide_once(unit_cube_mesh())));
  const Topology& topo = pm.mesh.topology();
  const auto pos = pm.extended.positions();
  int checked = 0;
  for (int e = 0; e < topo.num_edges() && checked < 10; e += 7) {
    const int h = topo.edge_halfedge(e);
    const int g = topo.twin(h);
    for (double u : {0.25, 0.6}) {
      // Point at fraction u along h, seen from both faces.
      const auto on_face = [&](int he, double frac) {
        const int f = Topology::face_of(he);
        const int k = he % 4;
        const std::array<std::pair<double, double>, 4> c{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
        const double xi = c[k].first + frac * (c[(k + 1) % 4].first - c[k].first);
        const double eta = c[k].second + frac * (c[(k + 1) % 4].second - c[k].second);
        const Patch& p = pm.patches[f];
        const auto [s, t] = face_to_patch(p.rotation, xi, eta);
        return eval_patch_jet(p, pos, s, t, JetOrder::First).second;
      };
      const SurfaceJet a = on_face(h, u);
      const SurfaceJet b = on_face(g, 1.0 - u);
      CHECK((a.x - b.x).norm() <= 1e-8);
      const Vec3 na = a.a1.cross(a.a2).normalized();
      const Vec3 nb = b.a1.cross(b.a2).normalized();
      CHECK((na - nb).norm() <= 1e-8);
    }
    ++checked;
  }
  CHECK(checked == 10);
}
