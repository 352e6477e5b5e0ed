#include "shellvib/material.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "shellvib/error.hpp"

namespace shellvib {

namespace {

constexpr int kVoigt[3][3] = {{0, 5, 4}, {5, 1, 3}, {4, 3, 2}};

Voigt6 isotropic_voigt(double e, double nu) {
  const double lambda = e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
  const double mu = e / (2.0 * (1.0 + nu));
  Voigt6 c = Voigt6::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) c(i, j) = lambda;
    c(i, i) += 2.0 * mu;
    c(i + 3, i + 3) = mu;
  }
  return c;
}

// T[i][m] = g^i . t_m
Eigen::Matrix3d projection(const RefFrame& frame, const std::array<Vec3, 3>& t) {
  const std::array<const Vec3*, 3> g{&frame.g1, &frame.g2, &frame.a3};
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) m(i, k) = g[i]->dot(t[k]);
  }
  return m;
}

}  // namespace

MaterialSpec MaterialSpec::isotropic(double youngs_modulus, double poisson_ratio, double density) {
  MaterialSpec m;
  m.model = IsotropicMaterial{youngs_modulus, poisson_ratio};
  m.density = density;
  return m;
}

MaterialSpec MaterialSpec::hexagonal_6mm(double c11, double c12, double c13, double c33, double c44, double c66,
                                         double e31, double e33, double e15, double k11, double k33,
                                         double density) {
  PiezoMaterial p;
  p.elastic.setZero();
  p.elastic(0, 0) = p.elastic(1, 1) = c11;
  p.elastic(0, 1) = p.elastic(1, 0) = c12;
  p.elastic(0, 2) = p.elastic(2, 0) = p.elastic(1, 2) = p.elastic(2, 1) = c13;
  p.elastic(2, 2) = c33;
  p.elastic(3, 3) = p.elastic(4, 4) = c44;
  p.elastic(5, 5) = c66;
  p.piezo.setZero();
  p.piezo(2, 0) = p.piezo(2, 1) = e31;
  p.piezo(2, 2) = e33;
  p.piezo(0, 4) = p.piezo(1, 3) = e15;
  p.permittivity = Eigen::Vector3d(k11, k11, k33).asDiagonal();
  MaterialSpec m;
  m.model = p;
  m.density = density;
  return m;
}

MaterialSpec MaterialSpec::batio3() {
  return hexagonal_6mm(166e9, 77e9, 78e9, 162e9, 43e9, 45e9, -4.4, 18.6, 11.6, 11.2e-9, 12.6e-9, 5800.0);
}

void MaterialSpec::validate() const {
  if (!(density > 0.0)) throw Error(ErrorCode::BadGeometry, "density must be positive");
  if (const auto* iso = std::get_if<IsotropicMaterial>(&model)) {
    if (!(iso->youngs_modulus > 0.0)) throw Error(ErrorCode::BadGeometry, "Young's modulus must be positive");
    if (!(iso->poisson_ratio >= 0.0 && iso->poisson_ratio < 0.5)) {
      throw Error(ErrorCode::BadGeometry, "Poisson ratio must lie in [0, 0.5)");
    }
    return;
  }
  const auto& p = std::get<PiezoMaterial>(model);
  const double scale = p.elastic.cwiseAbs().maxCoeff();
  if ((p.elastic - p.elastic.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(ErrorCode::BadGeometry, "elastic constants are not symmetric");
  }
  if (Eigen::LLT<Voigt6>(p.elastic / scale).info() != Eigen::Success) {
    throw Error(ErrorCode::BadGeometry, "elastic constants are not positive definite");
  }
  const double kscale = p.permittivity.cwiseAbs().maxCoeff();
  if (!(kscale > 0.0) ||
      (p.permittivity - p.permittivity.transpose()).cwiseAbs().maxCoeff() > 1e-12 * kscale ||
      Eigen::LLT<Eigen::Matrix3d>(p.permittivity / kscale).info() != Eigen::Success) {
    throw Error(ErrorCode::BadGeometry, "permittivity must be symmetric positive definite");
  }
}

Tensor4 elastic_tensor(const MaterialSpec& spec) {
  Voigt6 v;
  if (const auto* iso = std::get_if<IsotropicMaterial>(&spec.model)) {
    v = isotropic_voigt(iso->youngs_modulus, iso->poisson_ratio);
  } else {
    v = std::get<PiezoMaterial>(spec.model).elastic;
  }
  Tensor4 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) c[i][j][k][l] = v(kVoigt[i][j], kVoigt[k][l]);
  return c;
}

std::array<Eigen::Matrix3d, 3> piezo_tensor(const MaterialSpec& spec) {
  std::array<Eigen::Matrix3d, 3> e;
  for (auto& m : e) m.setZero();
  if (const auto* p = std::get_if<PiezoMaterial>(&spec.model)) {
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) e[k](i, j) = p->piezo(k, kVoigt[i][j]);
  }
  return e;
}

Eigen::Matrix3d permittivity_tensor(const MaterialSpec& spec) {
  if (const auto* p = std::get_if<PiezoMaterial>(&spec.model)) return p->permittivity;
  return Eigen::Matrix3d::Zero();
}

std::array<Vec3, 3> tangent_frame(const RefFrame& frame) {
  const Vec3 t1 = frame.a1.normalized();
  return {t1, frame.a3.cross(t1), frame.a3};
}

RelaxedModuli transform_and_relax(const MaterialSpec& spec, const RefFrame& frame) {
  return transform_and_relax(spec, frame, tangent_frame(frame));
}

RelaxedModuli transform_and_relax(const MaterialSpec& spec, const RefFrame& frame,
                                  const std::array<Vec3, 3>& tangent) {
  const Eigen::Matrix3d t = projection(frame, tangent);
  const Tensor4 src = elastic_tensor(spec);

  // One index at a time keeps the transformation at 4 * 3^5 operations.
  Tensor4 a{};
  Tensor4 b{};
  for (int i = 0; i < 3; ++i)
    for (int n = 0; n < 3; ++n)
      for (int o = 0; o < 3; ++o)
        for (int p = 0; p < 3; ++p) {
          double s = 0.0;
          for (int m = 0; m < 3; ++m) s += t(i, m) * src[m][n][o][p];
          a[i][n][o][p] = s;
        }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int o = 0; o < 3; ++o)
        for (int p = 0; p < 3; ++p) {
          double s = 0.0;
          for (int n = 0; n < 3; ++n) s += t(j, n) * a[i][n][o][p];
          b[i][j][o][p] = s;
        }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int p = 0; p < 3; ++p) {
          double s = 0.0;
          for (int o = 0; o < 3; ++o) s += t(k, o) * b[i][j][o][p];
          a[i][j][k][p] = s;
        }
  Tensor4& c = b;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double s = 0.0;
          for (int p = 0; p < 3; ++p) s += t(l, p) * a[i][j][k][p];
          c[i][j][k][l] = s;
        }

  const double c3333 = c[2][2][2][2];
  if (!(c3333 > 0.0) || !std::isfinite(c3333)) {
    throw Error(ErrorCode::IllConditionedRelaxation, "C^3333 is not positive");
  }

  RelaxedModuli out;
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q)
      for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s) out.C[p][q](r, s) = c[p][q][r][s] - c[p][q][2][2] * c[2][2][r][s] / c3333;

  if (spec.is_piezo()) {
    const auto e_src = piezo_tensor(spec);
    std::array<Eigen::Matrix3d, 3> e;
    for (int k = 0; k < 3; ++k) {
      e[k].setZero();
      for (int l = 0; l < 3; ++l) e[k] += t(k, l) * (t * e_src[l] * t.transpose());
    }
    const Eigen::Matrix3d kappa = t * permittivity_tensor(spec) * t.transpose();
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q) out.e3(p, q) = e[2](p, q) - e[2](2, 2) * c[2][2][p][q] / c3333;
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q) out.kappa(p, q) = kappa(p, q) + e[p](2, 2) * e[q](2, 2) / c3333;
    out.kappa33 = kappa(2, 2) + e[2](2, 2) * e[2](2, 2) / c3333;
  }
  return out;
}

std::array<std::array<Eigen::Matrix2d, 2>, 2> isotropic_H(const RefFrame& frame, double nu) {
  const Eigen::Matrix2d g = frame.inverse_metric.topLeftCorner<2, 2>();
  std::array<std::array<Eigen::Matrix2d, 2>, 2> h;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d)
          h[a][b](c, d) = nu * g(a, b) * g(c, d) + 0.5 * (1.0 - nu) * (g(a, c) * g(b, d) + g(a, d) * g(b, c));
  return h;
}

Eigen::Matrix3d fold(const std::array<std::array<Eigen::Matrix2d, 2>, 2>& c) {
  // Strain vector (A11, A22, A12); A12 stands for both A12 and A21.
  const std::array<std::pair<int, int>, 3> idx{{{0, 0}, {1, 1}, {0, 1}}};
  Eigen::Matrix3d d;
  for (int r = 0; r < 3; ++r) {
    for (int s = 0; s < 3; ++s) {
      const auto [a, b] = idx[r];
      const auto [p, q] = idx[s];
      double v = c[a][b](p, q);
      if (r == 2) v += c[b][a](p, q);
      if (s == 2) v += c[a][b](q, p);
      if (r == 2 && s == 2) v += c[b][a](q, p);
      d(r, s) = v;
    }
  }
  return d;
}

Eigen::Vector3d fold(const Eigen::Matrix2d& e3) { return {e3(0, 0), e3(1, 1), e3(0, 1) + e3(1, 0)}; }

}  // namespace shellvib
