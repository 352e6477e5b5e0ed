#include <cstdlib>
#include <iostream>

#include <omp.h>

#include <CLI11.hpp>

#include "acceptance.hpp"
#include "shellvib/post.hpp"

namespace {

int set_threads(int requested) {
  int n = requested;
  if (n <= 0) {
    if (const char* env = std::getenv("SHELLVIB_THREADS")) {
      try {
        n = std::stoi(env);
      } catch (const std::exception&) {
        throw shellvib::Error(shellvib::ErrorCode::ConfigError, std::string("SHELLVIB_THREADS is not a number: ") + env);
      }
      if (n <= 0) throw shellvib::Error(shellvib::ErrorCode::ConfigError, "SHELLVIB_THREADS must be positive");
    }
  }
  if (n > 0) omp_set_num_threads(n);
  return n;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vibration and static analysis of thin piezoelectric shells on subdivision surfaces"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("mesh-gen", "write a benchmark control mesh as OBJ");
  std::vector<double> sphere, roof;
  std::string out_path;
  auto* sphere_opt = gen->add_option("--sphere", sphere, "R LEVEL")->expected(2);
  auto* roof_opt = gen->add_option("--roof", roof, "L R THETA N (THETA is the half-angle in radians)")->expected(4);
  sphere_opt->excludes(roof_opt);
  gen->add_option("--out", out_path, "output OBJ path")->required();

  auto* run = app.add_subcommand("run", "run an analysis described by a JSON config");
  std::string config_path;
  int threads = 0;
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--threads", threads, "OpenMP threads (default: SHELLVIB_THREADS)")->check(CLI::PositiveNumber);

  auto* accept = app.add_subcommand("accept", "run the acceptance checks and print a pass/fail table");
  bool fast = false;
  std::string obj;
  accept->add_flag("--fast", fast, "smaller meshes");
  accept->add_option("--obj", obj, "closed quad mesh for the capability check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      if (sphere.empty() && roof.empty()) {
        throw shellvib::Error(shellvib::ErrorCode::ConfigError, "mesh-gen needs --sphere or --roof");
      }
      const shellvib::ControlMesh mesh =
          sphere.empty() ? shellvib::generate_benchmark_mesh(
                               shellvib::RoofSpec{roof[0], roof[1], roof[2], static_cast<int>(roof[3])})
                         : shellvib::generate_benchmark_mesh(
                               shellvib::SphereSpec{sphere[0], static_cast<int>(sphere[1])});
      shellvib::write_obj(mesh, out_path);
      std::cout << out_path << ": " << mesh.num_vertices() << " vertices, " << mesh.num_faces() << " faces\n";
      return 0;
    }
    if (run->parsed()) {
      set_threads(threads);
      const shellvib::RunOutcome outcome = shellvib::run(shellvib::load_config(config_path));
      for (const auto& f : outcome.files) std::cout << f.string() << '\n';
      return 0;
    }
    shellvib::accept::Options options;
    options.fast = fast;
    if (!obj.empty()) options.obj = obj;
    options.log = &std::cerr;
    const auto results = shellvib::accept::run_all(options);
    bool ok = true;
    for (const auto& c : results) {
      shellvib::accept::print(std::cout, c);
      ok = ok && c.passed;
    }
    shellvib::accept::print_summary(std::cout, results);
    return ok ? 0 : 1;
  } catch (const shellvib::Error& e) {
    std::cerr << shellvib::error_json(e).dump() << '\n';
    return shellvib::exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", {{"code", "InternalError"}, {"message", e.what()}}}}.dump() << '\n';
    return 1;
  }
}
