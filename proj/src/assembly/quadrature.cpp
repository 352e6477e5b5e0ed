#include <cmath>

#include "shellvib/assembly.hpp"

namespace shellvib {

namespace {

void gauss_cell(std::vector<QuadraturePoint>& out, double s0, double t0, double size) {
  static const double x[3] = {0.5 - 0.5 * std::sqrt(0.6), 0.5, 0.5 + 0.5 * std::sqrt(0.6)};
  static const double w[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) {
      out.push_back({s0 + size * x[i], t0 + size * x[j], size * size * w[i] * w[j]});
    }
  }
}

}  // namespace

std::vector<QuadraturePoint> quadrature_rule(PatchKind kind, int ring_depth) {
  std::vector<QuadraturePoint> q;
  if (kind == PatchKind::Regular) {
    gauss_cell(q, 0.0, 0.0, 1.0);
    return q;
  }
  // L-shaped rings of three cells each, shrinking toward the (0,0) corner.
  double size = 0.5;
  for (int r = 0; r < ring_depth; ++r) {
    gauss_cell(q, size, 0.0, size);
    gauss_cell(q, size, size, size);
    gauss_cell(q, 0.0, size, size);
    size *= 0.5;
  }
  gauss_cell(q, 0.0, 0.0, 2.0 * size);
  return q;
}

std::vector<QuadraturePoint> quadrature_rule(const Patch& patch) { return quadrature_rule(patch.kind); }

}  // namespace shellvib
