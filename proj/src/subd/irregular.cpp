#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "shellvib/error.hpp"
#include "shellvib/subd.hpp"

namespace shellvib {

std::vector<Quad> irregular_local_faces(int n) {
  std::vector<Quad> faces;
  faces.reserve(n + 5);
  for (int k = 0; k < n; ++k) {
    faces.push_back({0, 2 * k + 1, 2 * k + 2, k + 1 < n ? 2 * k + 3 : 1});
  }
  const int x1 = 2 * n + 1;
  faces.push_back({4, 3, x1 + 1, x1});
  faces.push_back({3, 2, x1 + 2, x1 + 1});
  faces.push_back({2, x1 + 4, x1 + 3, x1 + 2});
  faces.push_back({1, x1 + 5, x1 + 4, 2});
  faces.push_back({2 * n, x1 + 6, x1 + 5, 1});
  return faces;
}

namespace {

Eigen::MatrixXd rows_of(const SubdivisionStep& step, std::span<const int> ids) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ids.size()), step.stencil.cols());
  for (std::size_t r = 0; r < ids.size(); ++r) {
    if (step.boundary_rule[ids[r]]) {
      throw Error(ErrorCode::UnsupportedTopology, "local refinement reached the boundary of the control net");
    }
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(step.stencil, ids[r]); it; ++it) {
      m(static_cast<Eigen::Index>(r), it.col()) = it.value();
    }
  }
  return m;
}

std::unique_ptr<IrregularTables> build_tables(int n) {
  const int size = 2 * n + 8;
  const Topology local(size, irregular_local_faces(n));
  const SubdivisionStep step = subdivision_step(local);
  const Topology refined(step.num_vertices, step.faces);

  auto tables = std::make_unique<IrregularTables>();
  tables->valence = n;
  // Child c of the element sits at its corner c; the rotations align each
  // regular child with the parent's (s, t) directions.
  const std::vector<int> corner_ids = gather_irregular(refined, 0, 0);
  tables->corner = rows_of(step, corner_ids);
  const std::array<std::pair<int, int>, 3> children{{{1, 3}, {2, 2}, {3, 1}}};
  for (int q = 0; q < 3; ++q) {
    const auto ids = gather_regular(refined, children[q].first, children[q].second);
    tables->pick[q] = rows_of(step, ids);
  }

  const double denom = n * (n + 5.0);
  tables->limit_mask = Eigen::VectorXd::Zero(size);
  tables->limit_mask[0] = n / (n + 5.0);
  for (int k = 0; k < n; ++k) {
    tables->limit_mask[2 * k + 1] = 4.0 / denom;
    tables->limit_mask[2 * k + 2] = 1.0 / denom;
  }
  return tables;
}

}  // namespace

const IrregularTables& irregular_tables(int valence) {
  if (valence < 3 || valence > 64) {
    throw Error(ErrorCode::UnsupportedTopology, "unsupported valence " + std::to_string(valence));
  }
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<IrregularTables>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[valence];
  if (!slot) slot = build_tables(valence);
  return *slot;
}

}  // namespace shellvib
