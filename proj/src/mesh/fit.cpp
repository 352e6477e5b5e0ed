#include <cmath>
#include <string>

#include <Eigen/CholmodSupport>
#include <Eigen/SparseCore>

#include "shellvib/error.hpp"
#include "shellvib/mesh.hpp"
#include "shellvib/subd.hpp"

namespace shellvib {

struct LimitSurfaceFitter::Impl {
  PatchedMesh patched;
  std::vector<SurfaceSample> samples;
  Eigen::SparseMatrix<double, Eigen::RowMajor> sampling;
  Eigen::SparseMatrix<double> normal;
  Eigen::CholmodSupernodalLLT<Eigen::SparseMatrix<double>> llt;

  explicit Impl(PatchedMesh p) : patched(std::move(p)) {}
};

namespace {

constexpr int kSamplesPerSide = 4;

Eigen::MatrixX3d as_matrix(std::span<const Vec3> points) {
  Eigen::MatrixX3d m(static_cast<Eigen::Index>(points.size()), 3);
  for (std::size_t i = 0; i < points.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = points[i].transpose();
  return m;
}

}  // namespace

LimitSurfaceFitter::LimitSurfaceFitter(const ControlMesh& mesh)
    : impl_(std::make_unique<Impl>(build_patches(mesh))) {
  const PatchedMesh& pm = impl_->patched;
  const int nreal = pm.mesh.num_vertices();
  const int nf = pm.mesh.num_faces();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(nf) * kSamplesPerSide * kSamplesPerSide * 20);
  impl_->samples.reserve(static_cast<std::size_t>(nf) * kSamplesPerSide * kSamplesPerSide);

  int row = 0;
  for (int f = 0; f < nf; ++f) {
    const Patch& patch = pm.patches[f];
    for (int j = 0; j < kSamplesPerSide; ++j) {
      for (int i = 0; i < kSamplesPerSide; ++i) {
        const double xi = (i + 0.5) / kSamplesPerSide;
        const double eta = (j + 0.5) / kSamplesPerSide;
        const auto [s, t] = face_to_patch(patch.rotation, xi, eta);
        const BasisJet basis = patch_basis_jet(patch, s, t, JetOrder::Value);
        for (int a = 0; a < basis.size(); ++a) {
          for (const DofWeight& dw : pm.condensation(patch.control_ids[a])) {
            triplets.emplace_back(row, dw.vertex, dw.weight * basis.N[a]);
          }
        }
        impl_->samples.push_back({f, xi, eta, Vec3::Zero()});
        ++row;
      }
    }
  }
  impl_->sampling.resize(row, nreal);
  impl_->sampling.setFromTriplets(triplets.begin(), triplets.end());

  Eigen::SparseMatrix<double> s = impl_->sampling;
  impl_->normal = Eigen::SparseMatrix<double>(s.transpose()) * s;

  int untouched = 0;
  for (int c = 0; c < impl_->normal.outerSize(); ++c) {
    double diag = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(impl_->normal, c); it; ++it) {
      if (it.row() == c) diag = it.value();
    }
    if (!(diag > 0.0)) ++untouched;
  }
  if (untouched > 0) {
    throw Error(ErrorCode::FitSingular,
                "null space of size at least " + std::to_string(untouched) + " (unsampled control points)");
  }
  impl_->llt.compute(impl_->normal);
  if (impl_->llt.info() != Eigen::Success) {
    throw Error(ErrorCode::FitSingular, "normal equations are not positive definite");
  }
}

LimitSurfaceFitter::~LimitSurfaceFitter() = default;

const PatchedMesh& LimitSurfaceFitter::patched() const noexcept { return impl_->patched; }

int LimitSurfaceFitter::num_samples() const noexcept { return static_cast<int>(impl_->samples.size()); }

std::vector<Vec3> LimitSurfaceFitter::sample(const ControlMesh& current) const {
  if (current.num_real_vertices() != impl_->sampling.cols()) {
    throw Error(ErrorCode::IndexOutOfRange, "mesh does not match the fitted topology");
  }
  const Eigen::MatrixX3d values = impl_->sampling * as_matrix(current.real_positions());
  std::vector<Vec3> out(values.rows());
  for (Eigen::Index r = 0; r < values.rows(); ++r) out[r] = values.row(r).transpose();
  return out;
}

ControlMesh LimitSurfaceFitter::fit(const ControlMesh& current, const SurfaceSampler& target,
                                    FitReport* report) const {
  const std::vector<Vec3> limit = sample(current);
  Eigen::MatrixX3d rhs(static_cast<Eigen::Index>(limit.size()), 3);
  for (std::size_t q = 0; q < limit.size(); ++q) {
    SurfaceSample sample = impl_->samples[q];
    sample.current = limit[q];
    rhs.row(static_cast<Eigen::Index>(q)) = target(sample).transpose();
  }
  const Eigen::MatrixX3d solution = impl_->llt.solve(Eigen::MatrixX3d(impl_->sampling.transpose() * rhs));
  if (impl_->llt.info() != Eigen::Success || !solution.allFinite()) {
    throw Error(ErrorCode::FitSingular, "least-squares solve failed");
  }

  std::vector<Vec3> real(solution.rows());
  for (Eigen::Index v = 0; v < solution.rows(); ++v) real[v] = solution.row(v).transpose();

  if (report != nullptr) {
    const Eigen::MatrixX3d residual = impl_->sampling * solution - rhs;
    const Eigen::VectorXd norms = residual.rowwise().norm();
    report->samples = static_cast<int>(norms.size());
    report->max_residual = norms.size() > 0 ? norms.maxCoeff() : 0.0;
    report->rms_residual = norms.size() > 0 ? std::sqrt(norms.squaredNorm() / norms.size()) : 0.0;
  }
  return impl_->patched.mesh.with_real_positions(std::move(real));
}

ControlMesh fit_limit_surface(const ControlMesh& mesh, const SurfaceSampler& target, FitReport* report) {
  LimitSurfaceFitter fitter(mesh);
  return fitter.fit(fitter.patched().mesh, target, report);
}

}  // namespace shellvib
