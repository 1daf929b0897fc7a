/*
plcurv

Copyright 2026 the plcurv authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

   http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

// plcurv: prescribed combinatorial alpha-curvature on closed triangulated
// surfaces. Exit codes: 0 success, 1 numeric failure, 2 input rejection,
// 3 I/O error. All floating-point output uses 17 significant digits.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plcurv/plcurv.hpp"

using namespace plcurv;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumeric = 1;
constexpr int kExitInput = 2;
constexpr int kExitIo = 3;

void print17(const char* label, double x) {
  std::printf("%s %.17g\n", label, x);
}

IntrinsicMesh load_with_warnings(const std::string& path) {
  std::vector<std::string> warnings;
  IntrinsicMesh mesh = load_mesh(path, &warnings);
  for (const auto& w : warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  return mesh;
}

Eigen::VectorXd resolve_target(const std::string& target_path,
                               std::optional<double> target_const, int n) {
  if (target_const && !target_path.empty())
    throw InvalidInputError("--target and --target-const are mutually exclusive");
  if (target_const) return Eigen::VectorXd::Constant(n, *target_const);
  if (target_path.empty())
    throw InvalidInputError("a target is required (--target or --target-const)");
  return load_factors(target_path, n);
}

uint64_t env_seed() {
  if (const char* s = std::getenv("PLCURV_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw InvalidInputError("PLCURV_SEED must be a nonnegative integer");
    }
  }
  return 0;
}

int cmd_check(const std::string& path) {
  IntrinsicMesh mesh = load_with_warnings(path);
  const TriangulatedSurface& s = mesh.surface;
  std::printf("vertices %d  edges %d  faces %d\n", s.n_vertices(), s.n_edges(),
              s.n_faces());
  std::printf("euler characteristic %d\n", s.euler_characteristic());
  FaceId bad = first_invalid_face(s, mesh.metric);
  if (bad >= 0) {
    auto l = face_lengths(s, mesh.metric, bad);
    std::printf("invalid: face %d lengths (%.17g, %.17g, %.17g) violate the "
                "triangle inequality\n", bad, l[0], l[1], l[2]);
    return kExitInput;
  }
  std::printf("metric valid\n");
  double gb = gauss_bonnet_residual(s, mesh.metric);
  print17("gauss-bonnet residual", gb);
  std::printf("delaunay violations %d\n",
              delaunay_violation_count(s, mesh.metric));
  bool ok = gb <= 1e-10 * s.n_vertices();
  std::printf("%s\n", ok ? "ok" : "failed");
  return ok ? kExitOk : kExitNumeric;
}

int cmd_curvature(const std::string& path, const std::string& u_path,
                  std::optional<double> alpha) {
  IntrinsicMesh mesh = load_with_warnings(path);
  const int n = mesh.surface.n_vertices();
  std::vector<double> u(n, 0.0);
  if (!u_path.empty()) {
    Eigen::VectorXd uv = load_factors(u_path, n);
    u.assign(uv.data(), uv.data() + n);
  }
  DiscreteMetric metric = u_path.empty()
                              ? mesh.metric
                              : vertex_scale(mesh.surface, mesh.metric, u);
  require_valid_metric(mesh.surface, metric);
  std::vector<double> K = curvature(mesh.surface, metric);
  for (int i = 0; i < n; ++i)
    std::printf("K[%d] %.17g\n", i, K[i]);
  if (alpha) {
    // alpha_curvature scales the base metric itself
    std::vector<double> R = alpha_curvature(mesh.surface, mesh.metric, u, *alpha);
    for (int i = 0; i < n; ++i)
      std::printf("R_alpha[%d] %.17g\n", i, R[i]);
  }
  print17("gauss-bonnet residual", gauss_bonnet_residual(mesh.surface, metric));
  return kExitOk;
}

int cmd_delaunay(const std::string& path, const std::string& out) {
  IntrinsicMesh mesh = load_with_warnings(path);
  require_valid_metric(mesh.surface, mesh.metric);
  int before = delaunay_violation_count(mesh.surface, mesh.metric);
  FlipLog log = make_delaunay(mesh.surface, mesh.metric);
  std::printf("violations before %d\n", before);
  std::printf("flips %zu\n", log.size());
  std::printf("violations after %d\n",
              delaunay_violation_count(mesh.surface, mesh.metric));
  if (!out.empty()) {
    save_intrinsic(out, mesh.surface, mesh.metric);
    std::printf("wrote %s\n", out.c_str());
  }
  return kExitOk;
}

int cmd_energy(const std::string& path, const std::string& u_path) {
  IntrinsicMesh mesh = load_with_warnings(path);
  EnergyState state(mesh.surface, mesh.metric);
  if (!u_path.empty())
    state.set_u(load_factors(u_path, mesh.surface.n_vertices()));
  print17("energy", state.energy());
  print17("gradient inf-norm", state.gradient().lpNorm<Eigen::Infinity>());
  std::printf("flips %zu\n", state.flip_log().size());
  return kExitOk;
}

int cmd_solve(const std::string& path, double alpha,
              const std::string& target_path, std::optional<double> target_const,
              double tol, int max_iter, double random_start,
              const std::string& out) {
  IntrinsicMesh mesh = load_with_warnings(path);
  Eigen::VectorXd rbar =
      resolve_target(target_path, target_const, mesh.surface.n_vertices());

  SolveOptions options;
  options.tolerance = tol;
  options.max_iterations = max_iter;
  if (random_start != 0.0) {
    std::mt19937_64 rng(env_seed());
    std::uniform_real_distribution<double> U(-random_start, random_start);
    options.start.resize(mesh.surface.n_vertices());
    for (int i = 0; i < options.start.size(); ++i) options.start[i] = U(rng);
  }

  SolveResult res = solve_prescribed(mesh.surface, mesh.metric, alpha, rbar,
                                     options);
  const SolveReport& rep = res.report;
  std::printf("classification: %s\n",
              rep.theorem_case ? theorem_case_name(*rep.theorem_case)
                               : "rejected");
  if (rep.status == SolveStatus::rejected) {
    std::printf("violated condition: %s\n", rep.violated_condition.c_str());
    return kExitInput;
  }
  std::printf("status: %s\n", solve_status_name(rep.status));
  std::printf("iterations: %zu\n", rep.iterations.size());
  print17("final residual", rep.final_residual);
  std::printf("flips: %zu\n", res.flip_log.size());
  print17("u min", res.u.minCoeff());
  print17("u max", res.u.maxCoeff());

  if (!out.empty()) {
    save_intrinsic(out + ".mesh.json", res.triangulation, res.metric);
    save_factors(out + ".u.json", res.u);
    std::ofstream rf(out + ".report.json");
    if (!rf) throw IoError("cannot write '" + out + ".report.json'");
    rf << report_to_json(res).dump(2) << "\n";
    std::printf("wrote %s.mesh.json %s.u.json %s.report.json\n", out.c_str(),
                out.c_str(), out.c_str());
  }
  return res.converged() ? kExitOk : kExitNumeric;
}

int cmd_verify(const std::string& path, const std::string& u_path, double alpha,
               const std::string& target_path, std::optional<double> target_const,
               double tol) {
  IntrinsicMesh mesh = load_with_warnings(path);
  const int n = mesh.surface.n_vertices();
  Eigen::VectorXd u = load_factors(u_path, n);
  Eigen::VectorXd rbar = resolve_target(target_path, target_const, n);
  VerifyReport rep = verify_solution(mesh.surface, mesh.metric, u, alpha, rbar);
  print17("curvature residual", rep.curvature_residual);
  print17("k residual", rep.k_residual);
  print17("constraint", rep.constraint_abs);
  print17("gauss-bonnet residual", rep.gauss_bonnet);
  std::printf("delaunay violations %d\n", rep.delaunay_violations);
  bool ok = rep.curvature_residual <= tol;
  std::printf("%s\n", ok ? "ok" : "failed");
  return ok ? kExitOk : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"piecewise-linear metrics with prescribed combinatorial "
               "alpha-curvature"};
  app.require_subcommand(1);

  std::string mesh_path, u_path, target_path, out;
  std::optional<double> alpha_opt, target_const;
  double alpha = 0.0, tol = 1e-10, verify_tol = 1e-8, random_start = 0.0;
  int max_iter = 50;

  auto* check = app.add_subcommand("check", "validate a mesh and its metric");
  check->add_option("mesh", mesh_path, "mesh file (.obj or intrinsic .json)")
      ->required();

  auto* curv = app.add_subcommand("curvature", "print vertex curvatures");
  curv->add_option("mesh", mesh_path)->required();
  curv->add_option("--u", u_path, "conformal factor JSON");
  curv->add_option("--alpha", alpha_opt, "also print alpha-curvature");

  auto* del = app.add_subcommand("delaunay", "flip to intrinsic Delaunay");
  del->add_option("mesh", mesh_path)->required();
  del->add_option("-o,--output", out, "write the flipped mesh JSON here");

  auto* energy = app.add_subcommand("energy", "evaluate the conformal energy");
  energy->add_option("mesh", mesh_path)->required();
  energy->add_option("--u", u_path, "conformal factor JSON");

  auto* solve = app.add_subcommand("solve", "solve K = Rbar e^{alpha u}");
  solve->add_option("mesh", mesh_path)->required();
  solve->add_option("--alpha", alpha, "curvature exponent")->required();
  solve->add_option("--target", target_path, "per-vertex target JSON");
  solve->add_option("--target-const", target_const, "constant target value");
  solve->add_option("--tol", tol, "residual tolerance (default 1e-10)");
  solve->add_option("--max-iter", max_iter, "iteration cap (default 50)");
  solve->add_option("--random-start", random_start,
                    "start from uniform factors in [-a, a]; seeded by "
                    "PLCURV_SEED (default 0)");
  solve->add_option("-o,--output", out,
                    "output prefix: writes .mesh.json, .u.json, .report.json");

  auto* verify = app.add_subcommand("verify", "check a claimed solution");
  verify->add_option("mesh", mesh_path)->required();
  verify->add_option("--u", u_path, "conformal factor JSON")->required();
  verify->add_option("--alpha", alpha, "curvature exponent")->required();
  verify->add_option("--target", target_path, "per-vertex target JSON");
  verify->add_option("--target-const", target_const, "constant target value");
  verify->add_option("--tol", verify_tol, "acceptance tolerance (default 1e-8)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (check->parsed()) return cmd_check(mesh_path);
    if (curv->parsed()) return cmd_curvature(mesh_path, u_path, alpha_opt);
    if (del->parsed()) return cmd_delaunay(mesh_path, out);
    if (energy->parsed()) return cmd_energy(mesh_path, u_path);
    if (solve->parsed())
      return cmd_solve(mesh_path, alpha, target_path, target_const, tol,
                       max_iter, random_start, out);
    if (verify->parsed())
      return cmd_verify(mesh_path, u_path, alpha, target_path, target_const,
                        verify_tol);
  } catch (const InvalidInputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumeric;
  }
  return kExitInput;
}
