// Command-line front end: configuration-driven convergence studies, the
// pressure-pulse benchmark, single runs with diagnostics, and the built-in
// invariant checks. All outputs are deterministic text files.

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "fsihdg/config.hpp"
#include "fsihdg/io.hpp"
#include "fsihdg/verify.hpp"

namespace fs = std::filesystem;
using namespace fsihdg;

namespace {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// FSIHDG_OUT > --out > config [output] directory.
std::string resolve_out_dir(const std::string& flag_value,
                            const CaseConfig& config) {
  if (const char* env = std::getenv("FSIHDG_OUT"); env && *env) return env;
  if (!flag_value.empty()) return flag_value;
  return config.out_dir;
}

CaseConfig load_config_or_exit(const std::string& path) {
  std::vector<std::string> errors;
  CaseConfig config = load_case_config(read_text_file(path), errors);
  if (!errors.empty()) {
    for (const std::string& e : errors)
      std::cerr << "config error: " << e << '\n';
    std::exit(2);
  }
  return config;
}

PreconditionerOptions preconditioner_from(const CaseConfig& c) {
  PreconditionerOptions prec;
  prec.backend = c.backend == "amg"
                     ? PreconditionerOptions::VelocityBackend::AuxiliaryAmg
                     : PreconditionerOptions::VelocityBackend::Direct;
  return prec;
}

Materials channel_materials(const CaseConfig& c) {
  Materials m;
  m.rho_f = c.rho_f;
  m.mu_f = c.mu_f;
  m.rho_s = c.rho_s.front();
  if (c.absolute_solid) {
    m.mu_s = c.mu_s;
    m.lambda_s = c.lambda_s;
    m.beta_s = c.beta_s;
  } else {
    m.mu_s = c.delta1.front() * m.rho_s;
    m.lambda_s = c.delta2.front() * m.mu_s;
    m.beta_s = 0.0;
  }
  return m;
}

BCTable bc_table_from(const CaseConfig& c) {
  BCTable bct;
  for (const auto& [part, e] : c.bc)
    bct[part] = BoundaryCondition{e.normal_essential, e.tangential_essential};
  return bct;
}

void add_traction_loads(const CaseConfig& c, TransientProblem& prob) {
  for (const auto& [part, e] : c.bc) {
    if (e.traction != "inlet_pulse") continue;
    const double pm = c.p_max, tm = c.t_max;
    prob.natural_normal_traction[part] = [pm, tm](Vec2, double t) {
      return -pulse_inlet_pressure(t, pm, tm);
    };
  }
}

struct ConfiguredRun {
  std::unique_ptr<Mesh> mesh;
  std::unique_ptr<Spaces> sp;
  Materials materials;
  BCTable bc;
  TransientProblem prob;
  std::unique_ptr<ManufacturedCase> manufactured;  // set for layered geometry
};

/// Builds mesh, spaces, materials, boundary table, and forcing for one run
/// of the configured case at mesh size n.
ConfiguredRun configure_run(const CaseConfig& c, int n) {
  ConfiguredRun run;
  if (c.geometry == "layered") {
    auto mc = std::make_unique<ManufacturedCase>(make_manufactured_case(
        n, c.rho_s.front(),
        c.absolute_solid ? c.mu_s / c.rho_s.front() : c.delta1.front(),
        c.absolute_solid ? c.lambda_s / c.mu_s : c.delta2.front()));
    mc->materials.rho_f = c.rho_f;
    mc->materials.mu_f = c.mu_f;
    if (c.absolute_solid) mc->materials.beta_s = c.beta_s;
    mc->bc = bc_table_from(c);
    run.mesh = std::move(mc->mesh);
    mc->mesh = nullptr;
    run.sp = std::make_unique<Spaces>(build_spaces(*run.mesh, c.k));
    run.materials = mc->materials;
    run.bc = mc->bc;
    run.manufactured = std::move(mc);
    run.prob = run.manufactured->problem(*run.sp);
  } else {
    PulseCase pc = make_pulse_case(n);
    run.mesh = std::move(pc.mesh);
    run.sp = std::make_unique<Spaces>(build_spaces(*run.mesh, c.k));
    run.materials = channel_materials(c);
    run.bc = bc_table_from(c);
  }
  add_traction_loads(c, run.prob);
  return run;
}

struct TransientOutcome {
  TransientResult result;
  double avg_iterations = 0;
};

double average_iterations(const std::vector<StepRecord>& records) {
  if (records.empty()) return 0.0;
  double sum = 0;
  for (const StepRecord& r : records) sum += r.iterations;
  return sum / static_cast<double>(records.size());
}

/// Steps the configured case to t_end, honoring scheme, bootstrap choice,
/// and solver backend.
TransientOutcome run_configured(const CaseConfig& c, const ConfiguredRun& run,
                                double dt, int steps) {
  const PreconditionerOptions prec = preconditioner_from(c);
  TransientOutcome out;
  if (c.scheme == "cn") {
    const FsiSystem sys =
        build_system(*run.sp, run.materials, dt, 2.0 / dt, run.bc);
    CondensedMinresSolver solver(sys, prec, c.tol, c.maxit);
    out.result = run_transient(sys, run.prob,
                               {TimeScheme::Midpoint, dt, steps},
                               [&](const Eigen::VectorXd& rhs,
                                   StepSolveStats* st) {
                                 return solver.solve(rhs, st);
                               });
  } else {
    const FsiSystem sys =
        build_system(*run.sp, run.materials, dt, 11.0 / (6.0 * dt), run.bc);
    CondensedMinresSolver solver(sys, prec, c.tol, c.maxit);
    const auto solve = [&](const Eigen::VectorXd& rhs, StepSolveStats* st) {
      return solver.solve(rhs, st);
    };
    if (c.bdf3_bootstrap == "exact") {
      out.result = run_transient(
          sys, run.prob, {TimeScheme::ThreeStepBackward, dt, steps}, solve);
    } else {
      const FsiSystem sys_mid =
          build_system(*run.sp, run.materials, dt, 2.0 / dt, run.bc);
      CondensedMinresSolver solver_mid(sys_mid, prec, c.tol, c.maxit);
      out.result = run_bdf3_with_midpoint_startup(
          sys, sys_mid, run.prob, {TimeScheme::ThreeStepBackward, dt, steps},
          solve, [&](const Eigen::VectorXd& rhs, StepSolveStats* st) {
            return solver_mid.solve(rhs, st);
          });
    }
  }
  out.avg_iterations = average_iterations(out.result.records);
  return out;
}

int command_converge(const std::string& config_path, const std::string& out_flag,
                     int jobs) {
  const CaseConfig c = load_config_or_exit(config_path);
  const std::string out_dir = resolve_out_dir(out_flag, c);
  fs::create_directories(out_dir);

  RunSettings rs;
  rs.k = c.k;
  rs.scheme = c.scheme == "bdf3" ? TimeScheme::ThreeStepBackward
                                 : TimeScheme::Midpoint;
  rs.t_end = c.t_end;
  rs.dt = c.dt_is_h ? 0.0 : c.dt;
  rs.tol = c.tol;
  rs.max_iterations = c.maxit;
  rs.prec = preconditioner_from(c);

  struct Combo {
    double rho_s, delta1, delta2;
  };
  std::vector<Combo> combos;
  for (double rho_s : c.rho_s)
    for (double d1 : c.delta1)
      for (double d2 : c.delta2) combos.push_back({rho_s, d1, d2});

  std::vector<std::vector<ConvergenceRow>> combo_rows(combos.size());
  std::vector<std::vector<RunDiagnostics>> combo_diag(combos.size());
  std::atomic<std::size_t> cursor{0};
  std::mutex log_mutex;
  auto worker = [&]() {
    for (std::size_t i; (i = cursor.fetch_add(1)) < combos.size();) {
      const Combo combo = combos[i];
      StudyGrid grid;
      grid.rho_s = {combo.rho_s};
      grid.delta1 = {combo.delta1};
      grid.delta2 = {combo.delta2};
      grid.n = c.n;
      combo_rows[i] = run_convergence_study(
          grid, rs, [&](const ConvergenceRow& row, const CaseResult& res) {
            combo_diag[i].push_back({row, res.transient.records});
            const std::scoped_lock lock(log_mutex);
            std::printf(
                "k=%d n=%-3d rho_s=%-8g delta1=%-5g delta2=%-6g "
                "error=%.6e eoc=%5.2f iters=%.1f\n",
                row.k, row.inv_h, row.rho_s, row.delta1, row.delta2, row.error,
                row.eoc, row.avg_iterations);
            std::fflush(stdout);
          });
    }
  };
  const int n_threads =
      std::max(1, std::min<int>(jobs, static_cast<int>(combos.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  std::vector<ConvergenceRow> rows;
  std::vector<RunDiagnostics> diagnostics;
  for (std::size_t i = 0; i < combos.size(); ++i) {
    rows.insert(rows.end(), combo_rows[i].begin(), combo_rows[i].end());
    diagnostics.insert(diagnostics.end(), combo_diag[i].begin(),
                       combo_diag[i].end());
  }
  write_convergence_csv((fs::path(out_dir) / "convergence.csv").string(), rows);
  write_grid_diagnostics_csv((fs::path(out_dir) / "diagnostics.csv").string(),
                             diagnostics);
  std::printf("wrote %s\n",
              (fs::path(out_dir) / "convergence.csv").string().c_str());
  return 0;
}

int command_pulse(const std::string& config_path, const std::string& out_flag) {
  const CaseConfig c = load_config_or_exit(config_path);
  const std::string out_dir = resolve_out_dir(out_flag, c);
  fs::create_directories(out_dir);

  const int n = c.n.front();
  const double dt = c.dt_is_h ? 1.0 / n : c.dt;
  const int steps = static_cast<int>(std::lround(c.t_end / dt));
  const ConfiguredRun run = configure_run(c, n);
  const TransientOutcome outcome = run_configured(c, run, dt, steps);
  const LineSamples lines =
      sample_pulse_lines(*run.sp, outcome.result.u, outcome.result.eta,
                         outcome.result.p);

  write_xy_csv((fs::path(out_dir) / "pulse_flow.csv").string(), lines.x,
               lines.flow_rate);
  write_xy_csv((fs::path(out_dir) / "pulse_pressure.csv").string(), lines.x,
               lines.pressure);
  write_xy_csv((fs::path(out_dir) / "pulse_disp.csv").string(), lines.x,
               lines.vertical_displacement);
  write_diagnostics_csv((fs::path(out_dir) / "diagnostics.csv").string(),
                        outcome.result.records);
  std::printf("completed %d steps, average iterations %.1f\n", steps,
              outcome.avg_iterations);
  return 0;
}

int command_single(const std::string& config_path, const std::string& out_flag,
                   bool dump_mesh, bool dump_matrix) {
  const CaseConfig c = load_config_or_exit(config_path);
  const std::string out_dir = resolve_out_dir(out_flag, c);
  fs::create_directories(out_dir);

  const int n = c.n.front();
  const double dt = c.dt_is_h ? 1.0 / n : c.dt;
  const int steps = static_cast<int>(std::lround(c.t_end / dt));
  const ConfiguredRun run = configure_run(c, n);

  if (dump_mesh)
    write_mesh_dump((fs::path(out_dir) / "mesh.txt").string(), *run.mesh);
  if (dump_matrix) {
    const FsiSystem sys = build_system(
        *run.sp, run.materials, dt,
        c.scheme == "cn" ? 2.0 / dt : 11.0 / (6.0 * dt), run.bc);
    write_matrix_coordinate((fs::path(out_dir) / "matrix_full.txt").string(),
                            sys.K);
    write_matrix_coordinate(
        (fs::path(out_dir) / "matrix_reduced.txt").string(), sys.S);
  }

  const TransientOutcome outcome = run_configured(c, run, dt, steps);
  write_diagnostics_csv((fs::path(out_dir) / "diagnostics.csv").string(),
                        outcome.result.records);
  std::printf("completed %d steps, average iterations %.1f\n", steps,
              outcome.avg_iterations);
  if (run.manufactured) {
    const double err =
        l2_velocity_error(*run.sp, outcome.result.u,
                          run.manufactured->velocity_at(steps * dt), 6);
    std::printf("velocity error vs closed form at t=%g: %.6e\n", steps * dt,
                err);
  }
  return 0;
}

int command_check() {
  const std::vector<CheckResult> results = run_check_suite();
  int failures = 0;
  for (const CheckResult& r : results) {
    std::printf("[%s] %-18s %s\n", r.pass ? "PASS" : "FAIL", r.group.c_str(),
                r.detail.c_str());
    failures += r.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Divergence-conforming HDG solver for linear "
               "fluid-structure interaction"};
  app.require_subcommand(1);

  std::string config_path, out_flag;
  int jobs = 1;
  bool dump_mesh = false, dump_matrix = false;

  CLI::App* converge =
      app.add_subcommand("converge", "mesh-refinement study on the layered "
                                     "manufactured case");
  converge->add_option("--config", config_path, "case configuration file")
      ->required();
  converge->add_option("--out", out_flag, "output directory");
  converge->add_option("--jobs", jobs, "parallel parameter-grid cases")
      ->check(CLI::PositiveNumber);

  CLI::App* pulse =
      app.add_subcommand("pulse2d", "pressure-pulse channel benchmark");
  pulse->add_option("--config", config_path, "case configuration file")
      ->required();
  pulse->add_option("--out", out_flag, "output directory");

  CLI::App* single = app.add_subcommand("single", "one configured run with "
                                                  "per-step diagnostics");
  single->add_option("--config", config_path, "case configuration file")
      ->required();
  single->add_option("--out", out_flag, "output directory");
  single->add_flag("--dump-mesh", dump_mesh, "write mesh.txt");
  single->add_flag("--dump-matrix", dump_matrix,
                   "write the assembled operators in coordinate format");

  CLI::App* check =
      app.add_subcommand("check", "run built-in invariant checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (converge->parsed()) return command_converge(config_path, out_flag, jobs);
    if (pulse->parsed()) return command_pulse(config_path, out_flag);
    if (single->parsed())
      return command_single(config_path, out_flag, dump_mesh, dump_matrix);
    if (check->parsed()) return command_check();
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
