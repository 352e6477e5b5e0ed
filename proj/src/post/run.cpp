#include <filesystem>

#include "shellvib/post.hpp"

namespace shellvib {

namespace {

ControlMesh load_mesh(const MeshSource& source) {
  return std::visit(
      [](const auto& s) -> ControlMesh {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, ObjSource>) {
          return load_obj(s.path);
        } else {
          return generate_benchmark_mesh(s);
        }
      },
      source);
}

// Flips each mode so that its largest displacement entry is positive.
void fix_signs(ModalResult& r) {
  for (int i = 0; i < r.size(); ++i) {
    Eigen::Index k = 0;
    r.modes.col(i).cwiseAbs().maxCoeff(&k);
    if (r.modes(k, i) >= 0.0) continue;
    r.modes.col(i) *= -1.0;
    if (r.psi.size() > 0) r.psi.col(i) *= -1.0;
    if (r.phi.size() > 0) r.phi.col(i) *= -1.0;
  }
}

std::string mode_label(int index, double hz) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "mode_%d_%.6gHz", index, hz);
  return buf;
}

}  // namespace

MeshStats mesh_stats(const PatchedMesh& mesh, const AssembledSystem& sys) {
  MeshStats s;
  const Topology& topo = mesh.mesh.topology();
  s.elements = static_cast<int>(mesh.patches.size());
  s.vertices = mesh.mesh.num_real_vertices();
  for (int v = 0; v < s.vertices; ++v) {
    s.extraordinary_vertices += topo.is_extraordinary(v);
    s.boundary_vertices += topo.is_boundary(v);
  }
  for (const Patch& p : mesh.patches) s.irregular_elements += p.kind == PatchKind::Irregular;
  s.isolation_steps = mesh.isolation_steps;
  s.displacement_dofs = 3 * s.vertices;
  s.free_dofs = static_cast<int>(sys.K.rows());
  s.potential_dofs = static_cast<int>(sys.Cpsi.cols() + sys.Cphi.cols());
  return s;
}

RunOutcome run(const RunConfig& config, bool write) {
  ShellModel model{.mesh = build_patches(load_mesh(config.mesh)),
                   .thickness = config.thickness,
                   .material = config.material,
                   .electric = config.electric,
                   .constraints = config.constraints,
                   .areal_load = config.areal_load,
                   .body_force = config.body_force};
  model.validate();
  const AssembledSystem sys = apply_constraints(assemble_system(model), model);

  RunOutcome out;
  out.config = config.echo;
  out.stats = mesh_stats(model.mesh, sys);
  std::vector<NodalField> fields;
  if (const auto* modal = std::get_if<ModalAnalysis>(&config.analysis)) {
    ModalResult r = solve_modal(sys, modal->options);
    fix_signs(r);
    const int count = config.output.vtk_modes > 0 ? std::min(config.output.vtk_modes, r.size()) : r.size();
    for (int i = 0; write && config.output.vtk && i < count; ++i) {
      NodalField f{mode_label(i + 1, r.frequencies[i]), sys.expand(r.modes.col(i)), {}, {}};
      if (r.psi.size() > 0) f.psi = r.psi.col(i);
      if (r.phi.size() > 0) f.phi = r.phi.col(i);
      fields.push_back(std::move(f));
    }
    out.modal = std::move(r);
  } else {
    const auto& statics = std::get<StaticAnalysis>(config.analysis);
    StaticResult r = solve_static(sys, model.mesh.mesh);
    const Eigen::VectorXd full = sys.expand(r.u);
    for (const Probe& p : statics.probes) {
      out.probes.push_back({p.name, p.component, evaluate_field(model.mesh, full, 3, p.point)[p.component]});
    }
    if (write && config.output.vtk) fields.push_back({"static", full, r.psi, r.phi});
    out.statics = std::move(r);
  }

  if (write) {
    const std::filesystem::path dir = config.output.directory;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
    out.files = export_report(out, dir, config.output.name);
    if (config.output.vtk) {
      const auto path = dir / (config.output.name + ".vtk");
      export_vtk(path, model.mesh, fields, config.output.sampling, config.output.name);
      out.files.push_back(path);
    }
  }
  return out;
}

}  // namespace shellvib
