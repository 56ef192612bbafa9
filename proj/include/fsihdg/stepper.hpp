#pragma once
// Time integration of the coupled problem. Both schemes solve one
// constrained saddle system per step (see system.hpp) and then recover the
// end-of-step velocity and displacement:
//
//  - midpoint: the unknown is w = u^{j-1/2}; afterwards u^j = 2w - u^{j-1}
//    and eta^j = eta^{j-1} + dt w on the solid.
//  - three-step backward: the unknown is u^j itself, with history
//    eta_hist = (18 eta^{j-1} - 9 eta^{j-2} + 2 eta^{j-3})/11 and
//    eta^j = eta_hist + (6 dt/11) u^j; its first three states are seeded
//    from prescribed interpolants.
//
// The displacement is carried as a compound dof vector (element and facet
// dofs restricted to the solid), so history terms are plain matrix-vector
// products with the raw scheme matrices.

#include <cmath>
#include <functional>
#include <vector>

#include "fsihdg/krylov.hpp"

namespace fsihdg {

enum class TimeScheme { Midpoint, ThreeStepBackward };

/// Time-dependent data of a transient run; absent entries mean zero.
struct TransientProblem {
  std::function<Vec2(Vec2, double)> body_fluid;
  std::function<Vec2(Vec2, double)> body_solid;
  std::function<Vec2(Vec2, double)> interface_jump;
  std::map<std::string, std::function<double(Vec2, double)>> natural_normal_traction;
  /// Dof-vector interpolants of the exact velocity/displacement; used for
  /// the initial state and the multistep startup. Null means zero start.
  std::function<Eigen::VectorXd(double)> velocity_state;
  std::function<Eigen::VectorXd(double)> displacement_state;
};

struct TransientOptions {
  TimeScheme scheme = TimeScheme::Midpoint;
  double dt = 0;
  int steps = 0;
};

struct StepRecord {
  int step = 0;
  double t = 0;
  double energy = 0;
  double max_fluid_divergence = 0;
  double velocity_norm = 0;  // L2 norm of u^j
  int iterations = 0;
  double residual = 0;
};

struct TransientResult {
  Eigen::VectorXd u, eta, p;  // end-of-run states
  std::vector<StepRecord> records;
};

using StepSolverFn =
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, StepSolveStats*)>;

/// Total discrete energy u' M_rho u + lambda_s |div eta|^2_s
/// + 2 mu_s A_s(eta, eta) + beta_s |eta|^2_s.
inline double total_energy(const FsiSystem& sys, const Eigen::VectorXd& u,
                           const Eigen::VectorXd& eta) {
  double e = u.dot(sys.raw.mass_rho * u);
  e += sys.mat.lambda_s * eta.dot(sys.raw.divdiv_s * eta);
  e += 2.0 * sys.mat.mu_s * eta.dot(sys.raw.hdg_s * eta);
  if (sys.mat.beta_s != 0.0) e += sys.mat.beta_s * eta.dot(sys.raw.mass_s * eta);
  return e;
}

/// Largest |div u_h| over the volume quadrature points of fluid elements.
inline double max_fluid_divergence(const Spaces& sp, const Eigen::VectorXd& u) {
  const Mesh& mesh = *sp.mesh;
  const int nvb = 3 * sp.nfn + sp.nei;
  double worst = 0;
  for (int e = 0; e < static_cast<int>(mesh.elements.size()); ++e) {
    if (mesh.elements[e].region != Region::Fluid) continue;
    const auto eq = detail::element_quadrature(mesh, e, 2 * sp.k + 2);
    const BasisTable t = tabulate_basis(sp, e, eq.points);
    const std::vector<int> g = sp.element_u_dofs(e);
    for (std::size_t q = 0; q < eq.points.size(); ++q) {
      double dv = 0;
      for (int i = 0; i < nvb; ++i) dv += u[g[sp.local_of_vbasis(i)]] * t.div(q, i);
      worst = std::max(worst, std::abs(dv));
    }
  }
  return worst;
}

namespace detail {

inline Eigen::VectorXd assemble_step_loads(const FsiSystem& sys,
                                           const TransientProblem& prob,
                                           double t) {
  const Spaces& sp = *sys.sp;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(sys.dim_full());
  const auto bind_vec = [t](const std::function<Vec2(Vec2, double)>& f) {
    return f ? VectorField([f, t](Vec2 x) { return f(x, t); }) : VectorField();
  };
  add_volume_loads(sp, bind_vec(prob.body_fluid), bind_vec(prob.body_solid), rhs);
  add_interface_load(sp, bind_vec(prob.interface_jump), rhs);
  for (const auto& [part, s] : prob.natural_normal_traction)
    if (s)
      add_boundary_normal_traction(
          sp, part, [s, t](Vec2 x) { return s(x, t); }, rhs);
  return rhs;
}

inline Eigen::VectorXd solid_dof_mask(const Spaces& sp) {
  Eigen::VectorXd mask = Eigen::VectorXd::Zero(sp.dim_u);
  for (int i = 0; i < sp.dim_u; ++i)
    if (sp.u_dof_solid[i]) mask[i] = 1.0;
  return mask;
}

inline StepRecord make_record(const FsiSystem& sys, int step, double t,
                              const Eigen::VectorXd& u, const Eigen::VectorXd& eta,
                              const StepSolveStats& stats) {
  StepRecord rec;
  rec.step = step;
  rec.t = t;
  rec.energy = total_energy(sys, u, eta);
  rec.max_fluid_divergence = max_fluid_divergence(*sys.sp, u);
  rec.velocity_norm = std::sqrt(u.dot(sys.raw.mass_unit * u));
  rec.iterations = stats.iterations;
  rec.residual = stats.residual;
  return rec;
}

}  // namespace detail

inline TransientResult run_transient(const FsiSystem& sys, const TransientProblem& prob,
                                     const TransientOptions& opt,
                                     const StepSolverFn& solve) {
  if (opt.dt <= 0 || opt.steps <= 0)
    throw std::invalid_argument("transient run needs dt > 0 and steps > 0");
  const Spaces& sp = *sys.sp;
  const int du = sp.dim_u, dp = sp.dim_p;
  const Eigen::VectorXd mask = detail::solid_dof_mask(sp);
  const auto state_or_zero = [&](const std::function<Eigen::VectorXd(double)>& f,
                                 double t) {
    return f ? f(t) : Eigen::VectorXd::Zero(du).eval();
  };

  TransientResult out;
  out.records.reserve(opt.steps);
  out.p = Eigen::VectorXd::Zero(dp);

  if (opt.scheme == TimeScheme::Midpoint) {
    Eigen::VectorXd u = state_or_zero(prob.velocity_state, 0.0);
    Eigen::VectorXd eta = state_or_zero(prob.displacement_state, 0.0);
    for (int j = 1; j <= opt.steps; ++j) {
      const double t_mid = (j - 0.5) * opt.dt;
      Eigen::VectorXd rhs = history_rhs(sys, (sys.a * u).eval(), eta);
      rhs += detail::assemble_step_loads(sys, prob, t_mid);
      apply_constraints(sys, rhs);
      StepSolveStats stats;
      const Eigen::VectorXd x = solve(rhs, &stats);
      const Eigen::VectorXd w = x.head(du);
      out.p = x.tail(dp);
      u = (2.0 * w - u).eval();
      eta += opt.dt * mask.cwiseProduct(w);
      out.records.push_back(detail::make_record(sys, j, j * opt.dt, u, eta, stats));
    }
    out.u = u;
    out.eta = eta;
    return out;
  }

  // three-step backward scheme
  if (opt.steps < 3)
    throw std::invalid_argument("the three-step scheme needs at least 3 steps");
  if (!prob.velocity_state || !prob.displacement_state)
    throw std::invalid_argument("the three-step scheme needs startup interpolants");
  Eigen::VectorXd u3 = prob.velocity_state(0.0);
  Eigen::VectorXd u2 = prob.velocity_state(opt.dt);
  Eigen::VectorXd u1 = prob.velocity_state(2.0 * opt.dt);
  Eigen::VectorXd eta3 = prob.displacement_state(0.0);
  Eigen::VectorXd eta2 = prob.displacement_state(opt.dt);
  Eigen::VectorXd eta1 = prob.displacement_state(2.0 * opt.dt);
  Eigen::VectorXd u, eta;
  for (int j = 3; j <= opt.steps; ++j) {
    const double t = j * opt.dt;
    const Eigen::VectorXd u_combo =
        (3.0 * u1 - 1.5 * u2 + (1.0 / 3.0) * u3) / opt.dt;
    const Eigen::VectorXd eta_hist = (18.0 * eta1 - 9.0 * eta2 + 2.0 * eta3) / 11.0;
    Eigen::VectorXd rhs = history_rhs(sys, u_combo, eta_hist);
    rhs += detail::assemble_step_loads(sys, prob, t);
    apply_constraints(sys, rhs);
    StepSolveStats stats;
    const Eigen::VectorXd x = solve(rhs, &stats);
    u = x.head(du);
    out.p = x.tail(dp);
    eta = eta_hist + sys.c * mask.cwiseProduct(u);
    u3 = u2;
    u2 = u1;
    u1 = u;
    eta3 = eta2;
    eta2 = eta1;
    eta1 = eta;
    out.records.push_back(detail::make_record(sys, j, t, u, eta, stats));
  }
  out.u = u;
  out.eta = eta;
  return out;
}

/// Three-step backward run whose startup states come from two midpoint steps
/// instead of closed-form interpolants. `sys_mid` must share the mesh,
/// spaces, and materials with `sys` but carry the midpoint time coefficient.
inline TransientResult run_bdf3_with_midpoint_startup(
    const FsiSystem& sys, const FsiSystem& sys_mid,
    const TransientProblem& prob, const TransientOptions& opt,
    const StepSolverFn& solve, const StepSolverFn& solve_mid) {
  if (opt.scheme != TimeScheme::ThreeStepBackward)
    throw std::invalid_argument("midpoint startup applies to the three-step scheme");
  if (opt.steps < 3)
    throw std::invalid_argument("the three-step scheme needs at least 3 steps");
  const Spaces& sp = *sys.sp;
  const int du = sp.dim_u, dp = sp.dim_p;
  const Eigen::VectorXd mask = detail::solid_dof_mask(sp);

  std::vector<Eigen::VectorXd> us, etas;
  us.push_back(prob.velocity_state ? prob.velocity_state(0.0)
                                   : Eigen::VectorXd::Zero(du).eval());
  etas.push_back(prob.displacement_state ? prob.displacement_state(0.0)
                                         : Eigen::VectorXd::Zero(du).eval());
  TransientResult out;
  out.records.reserve(opt.steps);
  for (int j = 1; j <= 2; ++j) {
    const double t_mid = (j - 0.5) * opt.dt;
    Eigen::VectorXd rhs =
        history_rhs(sys_mid, (sys_mid.a * us.back()).eval(), etas.back());
    rhs += detail::assemble_step_loads(sys_mid, prob, t_mid);
    apply_constraints(sys_mid, rhs);
    StepSolveStats stats;
    const Eigen::VectorXd x = solve_mid(rhs, &stats);
    const Eigen::VectorXd w = x.head(du);
    us.push_back((2.0 * w - us.back()).eval());
    etas.push_back(etas.back() + opt.dt * mask.cwiseProduct(w));
    out.records.push_back(
        detail::make_record(sys_mid, j, j * opt.dt, us.back(), etas.back(), stats));
  }

  TransientProblem boot = prob;
  boot.velocity_state = [us, dt = opt.dt](double t) {
    return us[static_cast<std::size_t>(std::lround(t / dt))];
  };
  boot.displacement_state = [etas, dt = opt.dt](double t) {
    return etas[static_cast<std::size_t>(std::lround(t / dt))];
  };
  TransientResult tail = run_transient(sys, boot, opt, solve);
  out.records.insert(out.records.end(), tail.records.begin(), tail.records.end());
  out.u = tail.u;
  out.eta = tail.eta;
  out.p = tail.p;
  return out;
}

}  // namespace fsihdg
