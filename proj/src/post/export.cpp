#include <cstdio>
#include <fstream>
#include <ostream>

#include "shellvib/post.hpp"

namespace shellvib {

namespace {

struct Sample {
  Vec3 x;
  std::vector<DofWeight> weights;
};

// Limit-surface point and real-vertex weights at every sample.
std::vector<Sample> sample_mesh(const PatchedMesh& mesh, int n) {
  std::vector<Sample> out;
  out.reserve(mesh.patches.size() * n * n);
  const auto positions = mesh.extended.positions();
  for (const Patch& patch : mesh.patches) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const double xi = static_cast<double>(i) / (n - 1);
        const double eta = static_cast<double>(j) / (n - 1);
        const auto [s, t] = face_to_patch(patch.rotation, xi, eta);
        const BasisJet basis = patch_basis_jet(patch, s, t, JetOrder::Value);
        Sample smp;
        smp.x = Vec3::Zero();
        for (std::size_t a = 0; a < patch.control_ids.size(); ++a) {
          const double na = basis.N[static_cast<Eigen::Index>(a)];
          smp.x += na * positions[patch.control_ids[a]];
          for (const DofWeight& dw : mesh.condensation(patch.control_ids[a])) {
            smp.weights.push_back({dw.vertex, na * dw.weight});
          }
        }
        out.push_back(std::move(smp));
      }
    }
  }
  return out;
}

double interpolate(const Sample& s, const Eigen::VectorXd& field, int components, int c) {
  double v = 0.0;
  for (const DofWeight& dw : s.weights) v += dw.weight * field[components * dw.vertex + c];
  return v;
}

void put(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8e", v == 0.0 ? 0.0 : v);
  out << buf;
}

void scalars(std::ostream& out, const std::string& name, const std::vector<double>& values) {
  out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (double v : values) {
    put(out, v);
    out << '\n';
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

void check_written(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write to " + path.string() + " failed");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace

void write_vtk(std::ostream& out, const PatchedMesh& mesh, const std::vector<NodalField>& fields, int sampling,
               const std::string& title) {
  if (sampling < 2) throw Error(ErrorCode::ConfigError, "VTK sampling must be at least 2");
  const int nv = mesh.mesh.num_real_vertices();
  for (const NodalField& f : fields) {
    if (f.displacement.size() != 3 * nv || (f.psi.size() != 0 && f.psi.size() != nv) ||
        (f.phi.size() != 0 && f.phi.size() != nv)) {
      throw Error(ErrorCode::AssemblyError, "field '" + f.name + "' does not match the mesh");
    }
  }
  const int n = sampling;
  const std::vector<Sample> samples = sample_mesh(mesh, n);
  const std::size_t np = samples.size();
  const std::size_t per = static_cast<std::size_t>(n) * n;
  const std::size_t nc = mesh.patches.size() * (n - 1) * (n - 1);

  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << np << " double\n";
  for (const Sample& s : samples) {
    put(out, s.x.x());
    out << ' ';
    put(out, s.x.y());
    out << ' ';
    put(out, s.x.z());
    out << '\n';
  }
  out << "CELLS " << nc << ' ' << 5 * nc << '\n';
  for (std::size_t e = 0; e < mesh.patches.size(); ++e) {
    const std::size_t base = e * per;
    for (int j = 0; j + 1 < n; ++j) {
      for (int i = 0; i + 1 < n; ++i) {
        const std::size_t a = base + j * n + i;
        out << "4 " << a << ' ' << a + 1 << ' ' << a + 1 + n << ' ' << a + n << '\n';
      }
    }
  }
  out << "CELL_TYPES " << nc << '\n';
  for (std::size_t c = 0; c < nc; ++c) out << "9\n";
  if (fields.empty()) return;

  out << "POINT_DATA " << np << '\n';
  for (const NodalField& f : fields) {
    std::vector<double> mag(np);
    out << "VECTORS " << f.name << "_u double\n";
    for (std::size_t p = 0; p < np; ++p) {
      Vec3 u;
      for (int c = 0; c < 3; ++c) u[c] = interpolate(samples[p], f.displacement, 3, c);
      mag[p] = u.norm();
      put(out, u.x());
      out << ' ';
      put(out, u.y());
      out << ' ';
      put(out, u.z());
      out << '\n';
    }
    scalars(out, f.name + "_abs_u", mag);
    for (const auto& [suffix, field] : {std::pair{"_psi", &f.psi}, std::pair{"_phi", &f.phi}}) {
      if (field->size() == 0) continue;
      std::vector<double> v(np);
      for (std::size_t p = 0; p < np; ++p) v[p] = interpolate(samples[p], *field, 1, 0);
      scalars(out, f.name + suffix, v);
    }
  }
}

void export_vtk(const std::filesystem::path& path, const PatchedMesh& mesh, const std::vector<NodalField>& fields,
                int sampling, const std::string& title) {
  std::ofstream out = open_out(path);
  write_vtk(out, mesh, fields, sampling, title);
  check_written(out, path);
}

void write_modal_csv(std::ostream& out, const ModalResult& result) {
  out << "mode_index,frequency_hz,rigid_flag,residual\r\n";
  char buf[96];
  for (int i = 0; i < result.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%d,%.10g,%s,%.3e\r\n", i + 1, result.frequencies[i],
                  result.rigid[i] ? "true" : "false", result.residuals[i]);
    out << buf;
  }
}

void write_probe_csv(std::ostream& out, const std::vector<ProbeValue>& probes) {
  out << "probe,component,value\r\n";
  char buf[48];
  for (const ProbeValue& p : probes) {
    std::snprintf(buf, sizeof buf, "%.10g", p.value);
    out << csv_field(p.name) << ',' << static_cast<char>('x' + p.component) << ',' << buf << "\r\n";
  }
}

nlohmann::json report_json(const RunOutcome& outcome) {
  const MeshStats& s = outcome.stats;
  nlohmann::json j;
  j["config"] = outcome.config;
  j["mesh"] = {{"elements", s.elements},
               {"vertices", s.vertices},
               {"extraordinary_vertices", s.extraordinary_vertices},
               {"irregular_elements", s.irregular_elements},
               {"boundary_vertices", s.boundary_vertices},
               {"isolation_steps", s.isolation_steps},
               {"displacement_dofs", s.displacement_dofs},
               {"free_dofs", s.free_dofs},
               {"potential_dofs", s.potential_dofs}};
  if (outcome.modal) {
    const ModalResult& r = *outcome.modal;
    j["analysis"] = "modal";
    j["solver"] = {{"method", r.dense ? "dense" : "block_lanczos"},
                   {"restarts", r.restarts},
                   {"max_residual", r.size() > 0 ? r.residuals.maxCoeff() : 0.0},
                   {"rigid_modes", r.num_rigid()}};
    nlohmann::json modes = nlohmann::json::array();
    for (int i = 0; i < r.size(); ++i) {
      modes.push_back({{"mode_index", i + 1},
                       {"frequency_hz", r.frequencies[i]},
                       {"eigenvalue", r.eigenvalues[i]},
                       {"rigid", static_cast<bool>(r.rigid[i])},
                       {"residual", r.residuals[i]}});
    }
    j["modes"] = modes;
  } else {
    j["analysis"] = "static";
    nlohmann::json probes = nlohmann::json::array();
    for (const ProbeValue& p : outcome.probes) {
      probes.push_back({{"name", p.name}, {"component", std::string(1, static_cast<char>('x' + p.component))},
                        {"value", p.value}});
    }
    j["probes"] = probes;
    if (outcome.statics) {
      const Eigen::VectorXd& u = outcome.statics->u;
      j["max_abs_dof"] = u.size() > 0 ? u.cwiseAbs().maxCoeff() : 0.0;
    }
  }
  return j;
}

std::vector<std::filesystem::path> export_report(const RunOutcome& outcome, const std::filesystem::path& directory,
                                                 const std::string& name) {
  const auto csv = directory / (name + ".csv");
  const auto json = directory / (name + ".json");
  {
    std::ofstream out = open_out(csv);
    if (outcome.modal) {
      write_modal_csv(out, *outcome.modal);
    } else {
      write_probe_csv(out, outcome.probes);
    }
    check_written(out, csv);
  }
  {
    std::ofstream out = open_out(json);
    out << report_json(outcome).dump(2) << '\n';
    check_written(out, json);
  }
  return {csv, json};
}

nlohmann::json error_json(const Error& error) {
  return {{"error", {{"code", std::string(to_string(error.code()))}, {"message", error.what()}}}};
}

int exit_code(ErrorCode code) noexcept { return code == ErrorCode::ConfigError ? 2 : 1; }

}  // namespace shellvib
