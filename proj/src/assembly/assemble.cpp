#include <algorithm>
#include <exception>
#include <numeric>
#include <string>

#include "shellvib/assembly.hpp"
#include "shellvib/error.hpp"

namespace shellvib {

namespace {

constexpr int kChunk = 256;

// Sorted vertex coupling lists shared by every global block.
struct Pattern {
  std::vector<std::vector<int>> adjacency;

  int rank(int row_vertex, int col_vertex) const {
    const auto& list = adjacency[col_vertex];
    return static_cast<int>(std::lower_bound(list.begin(), list.end(), row_vertex) - list.begin());
  }

  SpMat matrix(int row_block, int col_block) const {
    const int nv = static_cast<int>(adjacency.size());
    SpMat m(row_block * nv, col_block * nv);
    std::size_t nnz = 0;
    for (const auto& list : adjacency) nnz += list.size();
    nnz *= static_cast<std::size_t>(row_block) * col_block;
    m.resizeNonZeros(static_cast<Eigen::Index>(nnz));
    auto* outer = m.outerIndexPtr();
    auto* inner = m.innerIndexPtr();
    std::fill_n(m.valuePtr(), nnz, 0.0);
    Eigen::Index pos = 0;
    for (int v = 0; v < nv; ++v) {
      for (int j = 0; j < col_block; ++j) {
        outer[col_block * v + j] = static_cast<int>(pos);
        for (int u : adjacency[v]) {
          for (int i = 0; i < row_block; ++i) inner[pos++] = row_block * u + i;
        }
      }
    }
    outer[col_block * nv] = static_cast<int>(pos);
    return m;
  }

  double& at(SpMat& m, int row_block, int col_block, int u, int i, int v, int j) const {
    const Eigen::Index start = m.outerIndexPtr()[col_block * v + j];
    return m.valuePtr()[start + row_block * rank(u, v) + i];
  }
};

using LocalMap = std::vector<std::vector<DofWeight>>;

LocalMap local_map(const PatchedMesh& pm, const Patch& patch) {
  LocalMap map;
  map.reserve(patch.control_ids.size());
  for (int id : patch.control_ids) map.push_back(pm.condensation(id));
  return map;
}

Pattern build_pattern(const PatchedMesh& pm) {
  Pattern p;
  p.adjacency.resize(pm.mesh.num_vertices());
  std::vector<int> verts;
  for (const Patch& patch : pm.patches) {
    verts.clear();
    for (const auto& list : local_map(pm, patch)) {
      for (const DofWeight& dw : list) verts.push_back(dw.vertex);
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    for (int v : verts) p.adjacency[v].insert(p.adjacency[v].end(), verts.begin(), verts.end());
  }
  for (auto& list : p.adjacency) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return p;
}

struct Scatter {
  const Pattern& pattern;
  AssembledSystem& sys;

  void add(const LocalMap& map, const ElementMatrices& e) const {
    const int n = static_cast<int>(map.size());
    for (int b = 0; b < n; ++b) {
      for (const DofWeight& wb : map[b]) {
        for (int a = 0; a < n; ++a) {
          for (const DofWeight& wa : map[a]) {
            const double w = wa.weight * wb.weight;
            for (int j = 0; j < 3; ++j) {
              for (int i = 0; i < 3; ++i) {
                pattern.at(sys.K, 3, 3, wa.vertex, i, wb.vertex, j) += w * e.K(3 * a + i, 3 * b + j);
                pattern.at(sys.M, 3, 3, wa.vertex, i, wb.vertex, j) += w * e.M(3 * a + i, 3 * b + j);
              }
            }
            if (e.Cphi.size() > 0) {
              for (int i = 0; i < 3; ++i) pattern.at(sys.Cphi, 3, 1, wa.vertex, i, wb.vertex, 0) += w * e.Cphi(3 * a + i, b);
              pattern.at(sys.D2, 1, 1, wa.vertex, 0, wb.vertex, 0) += w * e.D2(a, b);
            }
            if (e.Cpsi.size() > 0) {
              for (int i = 0; i < 3; ++i) pattern.at(sys.Cpsi, 3, 1, wa.vertex, i, wb.vertex, 0) += w * e.Cpsi(3 * a + i, b);
              pattern.at(sys.D1, 1, 1, wa.vertex, 0, wb.vertex, 0) += w * e.D1(a, b);
            }
          }
        }
        for (int j = 0; j < 3; ++j) {
          sys.f[3 * wb.vertex + j] += wb.weight * e.f[3 * b + j];
          if (e.fV.size() > 0) sys.fV[3 * wb.vertex + j] += wb.weight * e.fV[3 * b + j];
        }
      }
    }
  }
};

AssembledSystem assemble(const ShellModel& model, bool parallel) {
  model.validate();
  const PatchedMesh& pm = model.mesh;
  const int nv = pm.mesh.num_vertices();
  const Pattern pattern = build_pattern(pm);

  AssembledSystem sys;
  sys.num_vertices = nv;
  sys.electric = model.electric;
  sys.K = pattern.matrix(3, 3);
  sys.M = pattern.matrix(3, 3);
  sys.f = Eigen::VectorXd::Zero(3 * nv);
  if (model.electric.has_phi()) {
    sys.Cphi = pattern.matrix(3, 1);
    sys.D2 = pattern.matrix(1, 1);
  }
  if (model.electric.has_psi()) {
    sys.Cpsi = pattern.matrix(3, 1);
    sys.D1 = pattern.matrix(1, 1);
  }
  if (model.electric.condition == ElectricCondition::Electroded) sys.fV = Eigen::VectorXd::Zero(3 * nv);
  sys.free_dofs.resize(3 * nv);
  std::iota(sys.free_dofs.begin(), sys.free_dofs.end(), 0);

  const Scatter scatter{pattern, sys};
  const int ne = static_cast<int>(pm.patches.size());
  if (!parallel) {
    for (int e = 0; e < ne; ++e) {
      scatter.add(local_map(pm, pm.patches[e]), element_matrices(pm.patches[e], model));
    }
    return sys;
  }

  std::vector<ElementMatrices> buffer(kChunk);
  std::vector<std::exception_ptr> errors(kChunk);
  for (int start = 0; start < ne; start += kChunk) {
    const int count = std::min(kChunk, ne - start);
#pragma omp parallel for schedule(dynamic, 4)
    for (int k = 0; k < count; ++k) {
      try {
        buffer[k] = element_matrices(pm.patches[start + k], model);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
    for (int k = 0; k < count; ++k) {
      if (errors[k]) std::rethrow_exception(errors[k]);
      scatter.add(local_map(pm, pm.patches[start + k]), buffer[k]);
    }
  }
  return sys;
}

SpMat selection(int rows, const std::vector<int>& picked) {
  SpMat s(rows, static_cast<int>(picked.size()));
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(picked.size());
  for (std::size_t c = 0; c < picked.size(); ++c) t.emplace_back(picked[c], static_cast<int>(c), 1.0);
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

}  // namespace

void ShellModel::validate() const {
  if (!(thickness > 0.0)) throw Error(ErrorCode::BadGeometry, "thickness must be positive");
  material.validate();
  if (electric.condition != ElectricCondition::Elastic && !material.is_piezo()) {
    throw Error(ErrorCode::BadGeometry, "electric conditions other than elastic need a piezoelectric material");
  }
}

std::vector<int> select_vertices(const ControlMesh& mesh, const VertexSelector& selector) {
  const int nv = mesh.num_real_vertices();
  std::vector<int> out;
  if (std::holds_alternative<SelectAll>(selector)) {
    out.resize(nv);
    std::iota(out.begin(), out.end(), 0);
  } else if (std::holds_alternative<SelectBoundary>(selector)) {
    for (int v = 0; v < nv; ++v) {
      if (mesh.topology().is_boundary(v)) out.push_back(v);
    }
  } else if (const auto* ids = std::get_if<SelectIds>(&selector)) {
    for (int v : ids->ids) {
      if (v < 0 || v >= nv) throw Error(ErrorCode::BadConstraint, "vertex " + std::to_string(v) + " does not exist");
      out.push_back(v);
    }
  } else if (const auto* plane = std::get_if<SelectPlane>(&selector)) {
    const Vec3 n = plane->normal.normalized();
    for (int v = 0; v < nv; ++v) {
      if (plane->boundary_only && !mesh.topology().is_boundary(v)) continue;
      if (std::abs(n.dot(mesh.position(v)) - plane->offset) <= plane->tolerance) out.push_back(v);
    }
  } else {
    const auto& near = std::get<SelectNearest>(selector);
    if (near.count < 1 || near.count > nv) throw Error(ErrorCode::BadConstraint, "nearest-vertex count out of range");
    std::vector<int> order(nv);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return (mesh.position(a) - near.point).squaredNorm() < (mesh.position(b) - near.point).squaredNorm();
    });
    out.assign(order.begin(), order.begin() + near.count);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw Error(ErrorCode::BadConstraint, "selector matched no vertices");
  return out;
}

AssembledSystem assemble_system(const ShellModel& model) { return assemble(model, true); }

AssembledSystem assemble_system_serial(const ShellModel& model) { return assemble(model, false); }

AssembledSystem apply_constraints(const AssembledSystem& sys, const ShellModel& model) {
  if (sys.constrained) throw Error(ErrorCode::AssemblyError, "constraints already applied");
  const int nd = 3 * sys.num_vertices;
  std::vector<bool> fixed(nd, false);
  for (const Constraint& c : model.constraints) {
    for (int v : select_vertices(model.mesh.mesh, c.selector)) {
      for (int i = 0; i < 3; ++i) {
        if (c.fix[i]) fixed[3 * v + i] = true;
      }
    }
  }
  std::vector<int> free;
  for (int d = 0; d < nd; ++d) {
    if (!fixed[d]) free.push_back(d);
  }
  const SpMat s = selection(nd, free);
  const SpMat st = s.transpose();

  AssembledSystem out;
  out.num_vertices = sys.num_vertices;
  out.electric = sys.electric;
  out.K = st * sys.K * s;
  out.M = st * sys.M * s;
  if (sys.Cpsi.size() > 0) out.Cpsi = st * sys.Cpsi;
  if (sys.Cphi.size() > 0) out.Cphi = st * sys.Cphi;
  out.D1 = sys.D1;
  out.D2 = sys.D2;
  out.f = st * sys.f;
  if (sys.fV.size() > 0) out.fV = st * sys.fV;
  out.free_dofs = std::move(free);
  out.constrained = true;
  return out;
}

Eigen::VectorXd AssembledSystem::expand(const Eigen::VectorXd& free) const {
  if (free.size() != static_cast<Eigen::Index>(free_dofs.size())) {
    throw Error(ErrorCode::AssemblyError, "vector does not match the free dofs");
  }
  Eigen::VectorXd full = Eigen::VectorXd::Zero(3 * num_vertices);
  for (std::size_t k = 0; k < free_dofs.size(); ++k) full[free_dofs[k]] = free[static_cast<Eigen::Index>(k)];
  return full;
}

std::array<Eigen::VectorXd, 6> rigid_body_fields(const ControlMesh& mesh) {
  const int nv = mesh.num_real_vertices();
  Vec3 c = Vec3::Zero();
  for (const Vec3& p : mesh.real_positions()) c += p;
  c /= nv;
  std::array<Eigen::VectorXd, 6> out;
  for (int k = 0; k < 3; ++k) {
    out[k] = Eigen::VectorXd::Zero(3 * nv);
    out[k + 3] = Eigen::VectorXd::Zero(3 * nv);
    const Vec3 axis = Vec3::Unit(k);
    for (int v = 0; v < nv; ++v) {
      out[k][3 * v + k] = 1.0;
      out[k + 3].segment<3>(3 * v) = axis.cross(mesh.position(v) - c);
    }
  }
  return out;
}

}  // namespace shellvib
