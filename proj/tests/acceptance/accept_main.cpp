#include <iostream>

#include <CLI11.hpp>

#include "acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"shellvib acceptance checks"};
  shellvib::accept::Options options;
  std::string obj;
  app.add_flag("--fast", options.fast, "smaller meshes");
  app.add_option("--obj", obj, "closed quad mesh for the capability check");
  CLI11_PARSE(app, argc, argv);
  if (!obj.empty()) options.obj = obj;
  options.log = &std::cerr;
  const auto results = shellvib::accept::run_all(options);
  for (const auto& c : results) shellvib::accept::print(std::cout, c);
  shellvib::accept::print_summary(std::cout, results);
  for (const auto& c : results) {
    if (!c.passed) return 1;
  }
  return 0;
}
