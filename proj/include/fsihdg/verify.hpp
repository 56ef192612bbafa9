#pragma once

// Verification machinery: L2 error norms, the scheme's mesh-dependent
// (semi)norms, convergence-study and pulse-benchmark drivers, and the
// invariant suite behind the `check` subcommand.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsihdg/cases.hpp"
#include "fsihdg/krylov.hpp"
#include "fsihdg/stepper.hpp"

namespace fsihdg {

// ---------------------------------------------------------------------------
// Error and norm computations
// ---------------------------------------------------------------------------

/// Global L2 distance between the discrete velocity and a smooth field.
inline double l2_velocity_error(const Spaces& sp, const Eigen::VectorXd& state,
                                const VectorField& exact,
                                int extra_degree = 0) {
  const Mesh& mesh = *sp.mesh;
  const int nvb = 3 * sp.nfn + sp.nei;
  double err2 = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const auto eq =
        detail::element_quadrature(mesh, e, 2 * sp.k + 2 + extra_degree);
    const BasisTable tab = tabulate_basis(sp, e, eq.points);
    const std::vector<int> dofs = sp.element_u_dofs(e);
    for (std::size_t q = 0; q < eq.points.size(); ++q) {
      Vec2 uh{0.0, 0.0};
      for (int i = 0; i < nvb; ++i) {
        const double c = state[dofs[sp.local_of_vbasis(i)]];
        uh.x += c * tab.vx(q, i);
        uh.y += c * tab.vy(q, i);
      }
      const Vec2 ue = exact(eq.points[q]);
      const double dx = uh.x - ue.x;
      const double dy = uh.y - ue.y;
      err2 += eq.weights[q] * (dx * dx + dy * dy);
    }
  }
  return std::sqrt(err2);
}

/// Squared strain norm of a discrete field over one element boundary,
/// integrating the Frobenius norm of the symmetric gradient along all three
/// edges.
inline double boundary_strain_sq(const Spaces& sp, int e,
                                 const Eigen::VectorXd& vloc) {
  const Mesh& mesh = *sp.mesh;
  const int nvb = 3 * sp.nfn + sp.nei;
  double out = 0.0;
  for (int li = 0; li < 3; ++li) {
    const FacetFrame fr = facet_frame(mesh, mesh.elements[e].facet[li]);
    const LineQuadrature rule = line_quadrature(2 * sp.k + 1);
    std::vector<Vec2> pts(rule.nodes.size());
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
      pts[q] = fr.point(rule.nodes[q]);
    const BasisTable tab = tabulate_basis(sp, e, pts);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      double dxx = 0.0, dxy = 0.0, dyy = 0.0;
      for (int i = 0; i < nvb; ++i) {
        const double c = vloc[sp.local_of_vbasis(i)];
        dxx += c * tab.dxx(q, i);
        dxy += c * tab.dxy(q, i);
        dyy += c * tab.dyy(q, i);
      }
      out += rule.weights[q] * fr.len *
             (dxx * dxx + 2.0 * dxy * dxy + dyy * dyy);
    }
  }
  return out;
}

namespace detail {

inline Eigen::VectorXd gather_local(const Spaces& sp, int e,
                                    const Eigen::VectorXd& state) {
  const std::vector<int> dofs = sp.element_u_dofs(e);
  Eigen::VectorXd vloc(dofs.size());
  for (std::size_t i = 0; i < dofs.size(); ++i) vloc[i] = state[dofs[i]];
  return vloc;
}

}  // namespace detail

/// Region-wise mesh-dependent seminorm: strain energy plus the penalised
/// projected tangential jumps. Set `star` to add the element-boundary strain
/// term h |D(v)|^2 on each element.
inline double hdg_seminorm(const Spaces& sp, const Eigen::VectorXd& state,
                           Region region, double alpha, bool star = false) {
  const Mesh& mesh = *sp.mesh;
  double sq = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    if (mesh.elements[e].region != region) continue;
    const Eigen::VectorXd vloc = detail::gather_local(sp, e, state);
    const LocalEnergyParts parts = local_energy_parts(sp, e, alpha, vloc);
    sq += parts.strain + parts.penalty;
    if (star) sq += sp.basis[e].h * boundary_strain_sq(sp, e, vloc);
  }
  return std::sqrt(sq);
}

struct NormReport {
  double energy = 0;        // discrete energy functional
  double fluid_seminorm = 0;  // velocity seminorm over the fluid
  double solid_seminorm = 0;  // displacement seminorm over the solid
  double triple_norm = 0;     // combined state norm
  // the three squared contributions of the combined norm
  double part_kinetic = 0, part_strain = 0, part_volumetric = 0;
};

/// Discrete energy plus the scheme's (semi)norms of a velocity/displacement
/// state pair.
inline NormReport energy_and_norms(const FsiSystem& sys,
                                   const Eigen::VectorXd& u,
                                   const Eigen::VectorXd& eta) {
  const Spaces& sp = *sys.sp;
  NormReport r;
  r.energy = total_energy(sys, u, eta);
  r.fluid_seminorm = hdg_seminorm(sp, u, Region::Fluid, sys.mat.alpha);
  r.solid_seminorm = hdg_seminorm(sp, eta, Region::Solid, sys.mat.alpha);
  r.part_kinetic = u.dot(sys.raw.mass_rho * u);
  r.part_strain = 2.0 * sys.mat.mu_s * r.solid_seminorm * r.solid_seminorm;
  r.part_volumetric = sys.mat.lambda_s * eta.dot(sys.raw.divdiv_s * eta);
  r.triple_norm =
      std::sqrt(r.part_kinetic + r.part_strain + r.part_volumetric);
  return r;
}

/// Estimated order of convergence for a mesh-halving refinement step.
inline double estimated_order(double error_coarse, double error_fine) {
  return std::log2(error_coarse / error_fine);
}

// ---------------------------------------------------------------------------
// Convergence study (manufactured layered case)
// ---------------------------------------------------------------------------

struct RunSettings {
  int k = 1;
  TimeScheme scheme = TimeScheme::Midpoint;
  double t_end = 0.3;
  double dt = 0;  // 0 follows the dt = h = 1/n protocol
  double tol = 1e-8;
  int max_iterations = 500;
  PreconditionerOptions prec;
  bool use_direct_solver = false;  // bypass the iterative solver entirely
};

struct CaseResult {
  double error = 0;       // L2 velocity error at t_end
  double avg_iterations = 0;
  int steps = 0;
  TransientResult transient;
};

/// Runs the manufactured study case on an n x n-per-unit mesh with dt = h
/// and measures the final-time velocity error.
inline CaseResult run_manufactured_case(const ManufacturedCase& c, int n,
                                        const RunSettings& rs) {
  const Spaces sp = build_spaces(*c.mesh, rs.k);
  const double dt = rs.dt > 0 ? rs.dt : 1.0 / n;
  const int steps = static_cast<int>(std::lround(rs.t_end / dt));
  if (std::abs(steps * dt - rs.t_end) > 1e-9 * std::max(1.0, rs.t_end))
    throw std::invalid_argument("t_end is not a whole number of steps");
  const double a = rs.scheme == TimeScheme::Midpoint ? 2.0 / dt
                                                     : 11.0 / (6.0 * dt);
  const FsiSystem sys = build_system(sp, c.materials, dt, a, c.bc);
  const TransientProblem prob = c.problem(sp);
  const TransientOptions opt{rs.scheme, dt, steps};

  CaseResult out;
  out.steps = steps;
  if (rs.use_direct_solver) {
    DirectStepSolver solver(sys);
    out.transient = run_transient(sys, prob, opt,
                                  [&](const Eigen::VectorXd& rhs,
                                      StepSolveStats* st) {
                                    return solver.solve(rhs, st);
                                  });
  } else {
    CondensedMinresSolver solver(sys, rs.prec, rs.tol, rs.max_iterations);
    out.transient = run_transient(sys, prob, opt,
                                  [&](const Eigen::VectorXd& rhs,
                                      StepSolveStats* st) {
                                    return solver.solve(rhs, st);
                                  });
  }
  out.error = l2_velocity_error(sp, out.transient.u,
                                c.velocity_at(steps * dt), 6);
  double iters = 0;
  for (const StepRecord& rec : out.transient.records) iters += rec.iterations;
  out.avg_iterations =
      out.transient.records.empty()
          ? 0.0
          : iters / static_cast<double>(out.transient.records.size());
  return out;
}

struct ConvergenceRow {
  int k = 1;
  int inv_h = 0;
  double rho_s = 1, delta1 = 1, delta2 = 1;
  double error = 0;
  double eoc = 0;  // zero on the coarsest mesh of a parameter combination
  double avg_iterations = 0;
};

struct StudyGrid {
  std::vector<double> rho_s{1.0};
  std::vector<double> delta1{1.0};
  std::vector<double> delta2{1.0};
  std::vector<int> n{10, 20, 40};
};

/// Sweeps the material grid and mesh family; rows are ordered parameter-major
/// so consecutive rows of one combination refine the mesh.
inline std::vector<ConvergenceRow> run_convergence_study(
    const StudyGrid& grid, const RunSettings& rs,
    const std::function<void(const ConvergenceRow&, const CaseResult&)>& on_row =
        {}) {
  std::vector<ConvergenceRow> rows;
  for (double rho_s : grid.rho_s)
    for (double delta1 : grid.delta1)
      for (double delta2 : grid.delta2) {
        double prev_error = 0.0;
        for (std::size_t i = 0; i < grid.n.size(); ++i) {
          const int n = grid.n[i];
          const ManufacturedCase c =
              make_manufactured_case(n, rho_s, delta1, delta2);
          const CaseResult res = run_manufactured_case(c, n, rs);
          ConvergenceRow row;
          row.k = rs.k;
          row.inv_h = n;
          row.rho_s = rho_s;
          row.delta1 = delta1;
          row.delta2 = delta2;
          row.error = res.error;
          row.eoc = i == 0 ? 0.0 : estimated_order(prev_error, res.error);
          row.avg_iterations = res.avg_iterations;
          prev_error = res.error;
          rows.push_back(row);
          if (on_row) on_row(row, res);
        }
      }
  return rows;
}

// ---------------------------------------------------------------------------
// Pulse benchmark (channel case)
// ---------------------------------------------------------------------------

struct LineSamples {
  std::vector<double> x;
  std::vector<double> flow_rate;              // (2/3) u_x along y = 0
  std::vector<double> pressure;               // p_h along y = 0
  std::vector<double> vertical_displacement;  // solid-side eta_y at y = 1/2
};

namespace detail {

/// Element owning the boundary/interface point (x, height) on the given
/// facet family; ties take the smaller element index.
inline int element_containing_x(const Mesh& mesh,
                                const std::vector<int>& facets, double x,
                                bool solid_side) {
  int best = -1;
  for (int f : facets) {
    const Facet& fc = mesh.facets[f];
    const Vec2 a = mesh.facet_p0(f);
    const Vec2 b = mesh.facet_p1(f);
    const double lo = std::min(a.x, b.x), hi = std::max(a.x, b.x);
    const double eps = 1e-12 * std::max(1.0, hi);
    if (x < lo - eps || x > hi + eps) continue;
    for (int side = 0; side < 2; ++side) {
      const int e = fc.elem[side];
      if (e < 0) continue;
      if (solid_side && mesh.elements[e].region != Region::Solid) continue;
      if (!solid_side && mesh.elements[e].region != Region::Fluid) continue;
      if (best < 0 || e < best) best = e;
    }
  }
  if (best < 0) throw std::runtime_error("line sample point outside mesh");
  return best;
}

}  // namespace detail

/// Samples the three benchmark output curves from a solved state at
/// `count` equispaced stations across the channel length.
inline LineSamples sample_pulse_lines(const Spaces& sp,
                                      const Eigen::VectorXd& u,
                                      const Eigen::VectorXd& eta,
                                      const Eigen::VectorXd& p,
                                      int count = 200) {
  const Mesh& mesh = *sp.mesh;
  double x_lo = std::numeric_limits<double>::max(), x_hi = -x_lo;
  for (const Vec2& v : mesh.vertices) {
    x_lo = std::min(x_lo, v.x);
    x_hi = std::max(x_hi, v.x);
  }
  std::vector<int> bottom, interface;
  double y_bottom = std::numeric_limits<double>::max();
  for (const Vec2& v : mesh.vertices) y_bottom = std::min(y_bottom, v.y);
  for (int f = 0; f < mesh.n_facets(); ++f) {
    if (mesh.facets[f].interface) interface.push_back(f);
    if (mesh.facets[f].elem[1] < 0 &&
        std::abs(mesh.facet_p0(f).y - y_bottom) < 1e-12 &&
        std::abs(mesh.facet_p1(f).y - y_bottom) < 1e-12)
      bottom.push_back(f);
  }
  if (interface.empty() || bottom.empty())
    throw std::runtime_error("pulse sampling needs bottom and interface facets");
  const double y_interface = mesh.facet_p0(interface.front()).y;

  LineSamples out;
  for (int i = 0; i < count; ++i) {
    const double x = x_lo + (x_hi - x_lo) * (i + 0.5) / count;
    out.x.push_back(x);
    const int eb = detail::element_containing_x(mesh, bottom, x, false);
    const Vec2 pb{x, y_bottom};
    out.flow_rate.push_back(2.0 / 3.0 * evaluate_velocity(sp, u, eb, pb).x);
    out.pressure.push_back(evaluate_pressure(sp, p, eb, pb));
    const int es = detail::element_containing_x(mesh, interface, x, true);
    out.vertical_displacement.push_back(
        evaluate_velocity(sp, eta, es, {x, y_interface}).y);
  }
  return out;
}

struct PulseResult {
  LineSamples lines;
  double avg_iterations = 0;
  TransientResult transient;
};

struct PulseSettings {
  int k = 1;
  int cells_per_unit = 10;  // h = 1 / cells_per_unit
  double dt = 1e-4;
  int steps = 120;
  double tol = 1e-6;
  int max_iterations = 1000;
  PreconditionerOptions prec;
  int samples = 200;
};

inline PulseResult run_pulse_benchmark(const PulseSettings& ps) {
  const PulseCase c = make_pulse_case(ps.cells_per_unit);
  const Spaces sp = build_spaces(*c.mesh, ps.k);
  const double a = 2.0 / ps.dt;  // midpoint rule
  const FsiSystem sys = build_system(sp, c.materials, ps.dt, a, c.bc);
  const TransientProblem prob = c.problem(sp);
  const TransientOptions opt{TimeScheme::Midpoint, ps.dt, ps.steps};
  CondensedMinresSolver solver(sys, ps.prec, ps.tol, ps.max_iterations);
  PulseResult out;
  out.transient = run_transient(
      sys, prob, opt,
      [&](const Eigen::VectorXd& rhs, StepSolveStats* st) {
        return solver.solve(rhs, st);
      });
  out.lines = sample_pulse_lines(sp, out.transient.u, out.transient.eta,
                                 out.transient.p, ps.samples);
  double iters = 0;
  for (const StepRecord& rec : out.transient.records) iters += rec.iterations;
  out.avg_iterations =
      out.transient.records.empty()
          ? 0.0
          : iters / static_cast<double>(out.transient.records.size());
  return out;
}

// ---------------------------------------------------------------------------
// Invariant suite for the `check` subcommand
// ---------------------------------------------------------------------------

struct CheckResult {
  std::string group;
  bool pass = false;
  std::string detail;
};

namespace detail {

inline Mesh tiny_two_layer_mesh(int n = 2) {
  Mesh mesh =
      build_structured_mesh({0.0, 1.0, -1.0, 0.0}, {0.0, 1.0, 0.0, 0.5}, n);
  classify_boundary(mesh, {{"exterior", [](Vec2) { return true; }}});
  return mesh;
}

}  // namespace detail

/// Runs fast structural invariants on tiny meshes; each result is one
/// pass/fail line for the `check` subcommand.
inline std::vector<CheckResult> run_check_suite() {
  std::vector<CheckResult> results;
  auto add = [&results](const std::string& group, bool pass,
                        const std::string& detail) {
    results.push_back({group, pass, detail});
  };

  // --- mesh connectivity -------------------------------------------------
  try {
    const Mesh mesh = detail::tiny_two_layer_mesh(4);
    const std::vector<std::string> errors = mesh_invariant_errors(mesh);
    int n_interface = 0;
    for (const Facet& f : mesh.facets) n_interface += f.interface ? 1 : 0;
    const bool pass = errors.empty() && n_interface == 4;
    add("mesh-connectivity", pass,
        errors.empty() ? "interface facets = " + std::to_string(n_interface)
                       : errors.front());
  } catch (const std::exception& ex) {
    add("mesh-connectivity", false, ex.what());
  }

  // --- space dimensions and divergence compatibility ---------------------
  try {
    const Mesh mesh = detail::tiny_two_layer_mesh(2);
    bool pass = true;
    std::string note;
    for (int k : {1, 2}) {
      const Spaces sp = build_spaces(mesh, k);
      const int nf = mesh.n_facets(), ne = mesh.n_elements();
      if (sp.dim_u != nf * sp.nfn + ne * sp.nei + nf * sp.nft ||
          sp.dim_p != ne * sp.nq) {
        pass = false;
        note = "dimension bookkeeping failed at k=" + std::to_string(k);
        break;
      }
      // divergence of an interpolated linear field is reproduced exactly
      const VectorField field = [](Vec2 x) {
        return Vec2{0.25 * x.x + 0.5 * x.y, -0.75 * x.x + 0.125 * x.y};
      };
      const Eigen::VectorXd state = interpolate_hdiv(sp, field);
      for (int e = 0; e < ne && pass; ++e) {
        const double div =
            evaluate_divergence(sp, state, e, mesh.element_centroid(e));
        if (std::abs(div - (0.25 + 0.125)) > 1e-10) {
          pass = false;
          note = "divergence reproduction failed";
        }
      }
      if (!pass) break;
    }
    add("spaces", pass, pass ? "dimensions and divergence reproduction" : note);
  } catch (const std::exception& ex) {
    add("spaces", false, ex.what());
  }

  // --- viscous form: symmetry and coercivity ------------------------------
  try {
    const Mesh mesh = detail::tiny_two_layer_mesh(2);
    bool pass = true;
    std::string note = "symmetric and coercive on sampled states";
    Xorshift64 rng(0x7a11ce);
    for (int k : {1, 2}) {
      const Spaces sp = build_spaces(mesh, k);
      for (int e = 0; e < mesh.n_elements() && pass; ++e) {
        const Eigen::MatrixXd A = local_hdg_stiffness(sp, e, 8.0);
        if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
          pass = false;
          note = "local operator not symmetric";
          break;
        }
        for (int trial = 0; trial < 20; ++trial) {
          Eigen::VectorXd v(sp.n_local_u());
          for (int i = 0; i < v.size(); ++i) v[i] = rng.symmetric();
          const LocalEnergyParts parts = local_energy_parts(sp, e, 8.0, v);
          if (parts.total < 0.5 * (parts.strain + parts.penalty) - 1e-10) {
            pass = false;
            note = "coercivity constant below 1/2";
            break;
          }
        }
      }
    }
    add("viscous-form", pass, note);
  } catch (const std::exception& ex) {
    add("viscous-form", false, ex.what());
  }

  // --- assembled operator symmetry and elimination ------------------------
  try {
    const Mesh mesh = detail::tiny_two_layer_mesh(2);
    const Spaces sp = build_spaces(mesh, 1);
    Materials mat;
    mat.mu_s = 0.5;
    mat.lambda_s = 5.0;
    BCTable bc{{"exterior", BoundaryCondition{true, true}}};
    const FsiSystem sys = build_system(sp, mat, 0.1, 20.0, bc);
    const double defect = symmetry_defect(
        [&sys](const Eigen::VectorXd& x) -> Eigen::VectorXd {
          return sys.S * x;
        },
        sys.dim_reduced());
    // solve-and-recover equals the unreduced direct solution
    Xorshift64 rng(0x51af3);
    Eigen::VectorXd rhs(sys.dim_full());
    for (int i = 0; i < rhs.size(); ++i) rhs[i] = rng.symmetric();
    apply_constraints(sys, rhs);
    SparseFactorization full(sys.K, SparseFactorization::Kind::General);
    SparseFactorization red(sys.S, SparseFactorization::Kind::General);
    const Eigen::VectorXd x_full = full.solve(rhs);
    const Eigen::VectorXd x_rec =
        sys.expand_solution(red.solve(sys.reduce_rhs(rhs)), rhs);
    const double gap = (x_full - x_rec).norm() / x_full.norm();
    const bool pass = defect < 1e-10 && gap < 1e-9;
    add("condensed-system", pass,
        "symmetry defect " + std::to_string(defect) + ", recovery gap " +
            std::to_string(gap));
  } catch (const std::exception& ex) {
    add("condensed-system", false, ex.what());
  }

  // --- short transient: energy identity and fluid divergence --------------
  try {
    const ManufacturedCase c = make_manufactured_case(2);
    const Spaces sp = build_spaces(*c.mesh, 1);
    const double dt = 0.05;
    const FsiSystem sys = build_system(sp, c.materials, dt, 2.0 / dt, c.bc);
    TransientProblem prob;  // quiescent forcing, random admissible start
    Xorshift64 rng(0xfeed5);
    Eigen::VectorXd u0(sp.dim_u), eta0(sp.dim_u);
    for (int i = 0; i < sp.dim_u; ++i) {
      u0[i] = rng.symmetric();
      eta0[i] = sp.u_dof_solid[i] ? rng.symmetric() : 0.0;
    }
    const std::vector<char> fixed = constrained_velocity_dofs(sp, c.bc);
    for (int i = 0; i < sp.dim_u; ++i)
      if (fixed[i]) u0[i] = eta0[i] = 0.0;
    prob.velocity_state = [&u0](double) { return u0; };
    prob.displacement_state = [&eta0](double) { return eta0; };
    DirectStepSolver solver(sys);
    const TransientOptions opt{TimeScheme::Midpoint, dt, 5};
    const TransientResult res = run_transient(
        sys, prob, opt, [&](const Eigen::VectorXd& rhs, StepSolveStats* st) {
          return solver.solve(rhs, st);
        });
    bool pass = true;
    std::string note = "energy non-increasing, fluid divergence negligible";
    double prev = total_energy(sys, u0, eta0);
    for (const StepRecord& rec : res.records) {
      if (rec.energy > prev * (1.0 + 1e-12)) {
        pass = false;
        note = "energy grew at step " + std::to_string(rec.step);
        break;
      }
      if (rec.max_fluid_divergence > 1e-8 * std::max(rec.velocity_norm, 1e-30)) {
        pass = false;
        note = "fluid divergence too large at step " + std::to_string(rec.step);
        break;
      }
      prev = rec.energy;
    }
    add("transient-energy", pass, note);
  } catch (const std::exception& ex) {
    add("transient-energy", false, ex.what());
  }

  // --- iterative solver on a small coupled step ---------------------------
  try {
    const ManufacturedCase c = make_manufactured_case(4);
    const Spaces sp = build_spaces(*c.mesh, 1);
    const double dt = 0.1;
    const FsiSystem sys = build_system(sp, c.materials, dt, 2.0 / dt, c.bc);
    CondensedMinresSolver solver(sys, PreconditionerOptions{}, 1e-10, 400);
    Xorshift64 rng(0xabcde);
    Eigen::VectorXd rhs(sys.dim_full());
    for (int i = 0; i < rhs.size(); ++i) rhs[i] = rng.symmetric();
    apply_constraints(sys, rhs);
    StepSolveStats stats;
    const Eigen::VectorXd x = solver.solve(rhs, &stats);
    const Eigen::VectorXd kx = sys.K * x;
    double res_kept = 0.0, rhs_kept = 0.0;
    for (int g : sys.kept) {
      const double d = kx[g] - rhs[g];
      res_kept += d * d;
      rhs_kept += rhs[g] * rhs[g];
    }
    // the eliminated rows are solved exactly by back-substitution, so only
    // the kept rows carry iteration error
    const double rel = std::sqrt(res_kept / rhs_kept);
    const bool pass = stats.converged && rel < 1e-6;
    add("iterative-solver", pass,
        "iterations " + std::to_string(stats.iterations) + ", residual " +
            std::to_string(rel));
  } catch (const std::exception& ex) {
    add("iterative-solver", false, ex.what());
  }

  return results;
}

}  // namespace fsihdg
