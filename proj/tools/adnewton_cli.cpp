#include "adnewton/error.hpp"
#include "adnewton/experiment.hpp"
#include "adnewton/linalg/kernels.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
  using namespace adnewton;

  CLI::App app{"Adaptive damped Newton experiments for quasilinear diffusion problems"};
  RunConfig cfg;
  std::vector<std::string> schemes;
  double fixed_delta = 0.0;
  std::string kernel_backend = "auto";
  std::string mesh_dump;

  app.add_option("--experiment", cfg.experiment, "1: L-shape, 2: unit square")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  app.add_option("--scheme", schemes, "adaptive|fixed|classical|kacanov (repeat to compare)")
      ->check(CLI::IsMember({"adaptive", "fixed", "classical", "kacanov"}));
  auto* fd = app.add_option("--fixed-delta", fixed_delta, "step size of the fixed scheme (default alpha/L)");
  app.add_option("--mesh-n", cfg.mesh_n, "cells per unit length")->capture_default_str();
  app.add_option("--sigma", cfg.solver.sigma, "backtracking factor")->capture_default_str();
  app.add_option("--theta", cfg.solver.theta, "sufficient-decrease weight")->capture_default_str();
  app.add_option("--max-iter", cfg.solver.max_outer_iter, "outer iteration budget")->capture_default_str();
  app.add_option("--stop-update", cfg.solver.stop_update_norm, "stop when ||u^n - u^{n+1}||_X is below")
      ->capture_default_str();
  app.add_option("--stop-residual", cfg.solver.stop_residual_rel, "stop when ||F(u)|| / ||load|| is below")
      ->capture_default_str();
  app.add_option("--ref-tol", cfg.ref_tol, "Kacanov reference tolerance")->capture_default_str();
  app.add_option("--output", cfg.output_path, "CSV output path");
  app.add_option("--kernels", kernel_backend, "auto|scalar|avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}))
      ->capture_default_str();
  app.add_option("--dump-mesh", mesh_dump, "write the mesh as vertex/triangle records");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!schemes.empty()) {
      cfg.schemes.clear();
      for (const auto& s : schemes) cfg.schemes.push_back(parse_scheme(s));
    }
    if (fd->count() > 0) cfg.fixed_delta = fixed_delta;
    if (kernel_backend == "scalar") kernels::select_backend(kernels::Backend::scalar);
    if (kernel_backend == "avx2") kernels::select_backend(kernels::Backend::avx2);
    cfg.validate();

    if (!mesh_dump.empty()) {
      std::ofstream out(mesh_dump);
      if (!out) throw UsageError("cannot open '" + mesh_dump + "'");
      write_mesh(out, build_experiment(cfg.experiment, cfg.mesh_n).space->mesh());
    }
    return cfg.schemes.size() == 1 ? run(cfg, std::cout) : compare(cfg, std::cout);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
