#pragma once

// Ready-made problem setups: the layered manufactured-solution study on the
// unit-width two-layer domain, and the pressure-pulse channel benchmark.

#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <string>
#include <utility>

#include "fsihdg/manufactured_fields.hpp"
#include "fsihdg/stepper.hpp"
#include "fsihdg/system.hpp"

namespace fsihdg {

// ---------------------------------------------------------------------------
// Manufactured layered case: fluid (0,1)x(-1,0) under solid (0,1)x(0,1/2).
// The exact solution vanishes on the exterior boundary, so every exterior
// facet carries homogeneous essential conditions in both components.
// ---------------------------------------------------------------------------

struct ManufacturedCase {
  std::unique_ptr<Mesh> mesh;
  Materials materials;
  BCTable bc;

  // Exact fields at a frozen time, for error measurement and state seeding.
  [[nodiscard]] VectorField velocity_at(double t) const {
    return [t](Vec2 x) { return manufactured::velocity(x.x, x.y, t); };
  }
  [[nodiscard]] VectorField displacement_at(double t) const {
    return [t](Vec2 x) { return manufactured::displacement(x.x, x.y, t); };
  }
  [[nodiscard]] ScalarField pressure_at(double t) const {
    return [t](Vec2 x) { return manufactured::pressure(x.x, x.y, t); };
  }

  [[nodiscard]] TransientProblem problem(const Spaces& sp) const {
    TransientProblem prob;
    const Materials m = materials;
    prob.body_fluid = [m](Vec2 x, double t) {
      return manufactured::fluid_body_force(x.x, x.y, t, m.rho_f, m.mu_f);
    };
    prob.body_solid = [m](Vec2 x, double t) {
      return manufactured::solid_body_force(x.x, x.y, t, m.rho_s, m.mu_s,
                                            m.lambda_s);
    };
    prob.interface_jump = [m](Vec2 x, double t) {
      return manufactured::interface_traction_jump(x.x, t, m.mu_f, m.mu_s,
                                                   m.lambda_s);
    };
    const Spaces* space = &sp;
    auto interp_state = [space](const VectorField& field, bool solid_only) {
      Eigen::VectorXd state = interpolate_hdiv(*space, field, 6) +
                              interpolate_facet_tangential(*space, field, 6);
      if (solid_only)
        for (int i = 0; i < space->dim_u; ++i)
          if (!space->u_dof_solid[i]) state[i] = 0.0;
      return state;
    };
    prob.velocity_state = [this, interp_state](double t) {
      return interp_state(velocity_at(t), false);
    };
    prob.displacement_state = [this, interp_state](double t) {
      return interp_state(displacement_at(t), true);
    };
    return prob;
  }
};

// rho_s is the solid density; the shear modulus is delta1 * rho_s and the
// first Lame parameter is delta2 * mu_s, matching the parameter sweep used
// in the convergence study.
inline ManufacturedCase make_manufactured_case(int n, double rho_s = 1.0,
                                               double delta1 = 1.0,
                                               double delta2 = 1.0) {
  ManufacturedCase c;
  c.mesh = std::make_unique<Mesh>(
      build_structured_mesh({0.0, 1.0, -1.0, 0.0}, {0.0, 1.0, 0.0, 0.5}, n));
  classify_boundary(*c.mesh, {{"exterior", [](Vec2) { return true; }}});
  c.materials.rho_f = 1.0;
  c.materials.mu_f = 1.0;
  c.materials.rho_s = rho_s;
  c.materials.mu_s = delta1 * rho_s;
  c.materials.lambda_s = delta2 * c.materials.mu_s;
  c.materials.beta_s = 0.0;
  c.bc["exterior"] = BoundaryCondition{true, true};
  return c;
}

// ---------------------------------------------------------------------------
// Pressure-pulse channel: fluid (0,6)x(0,1/2) under a solid wall
// (0,6)x(1/2,3/5).  A half-cosine pressure pulse drives the inlet.
// ---------------------------------------------------------------------------

inline constexpr const char* kFluidInlet = "fluid_inlet";
inline constexpr const char* kFluidOutlet = "fluid_outlet";
inline constexpr const char* kFluidBottom = "fluid_bottom";
inline constexpr const char* kSolidInlet = "solid_inlet";
inline constexpr const char* kSolidOutlet = "solid_outlet";
inline constexpr const char* kSolidTop = "solid_top";

inline double pulse_inlet_pressure(double t, double p_max, double t_max) {
  if (t < 0.0 || t > t_max) return 0.0;
  return 0.5 * p_max * (1.0 - std::cos(2.0 * std::numbers::pi * t / t_max));
}

struct PulseCase {
  std::unique_ptr<Mesh> mesh;
  Materials materials;
  BCTable bc;
  double p_max = 1.333e4;
  double t_max = 3.0e-2;

  [[nodiscard]] TransientProblem problem(const Spaces&) const {
    TransientProblem prob;
    const double pm = p_max;
    const double tm = t_max;
    // The inlet condition is a normal traction -p_in(t); the outlet keeps a
    // zero entry so natural facets without forcing stay assembled but inert.
    prob.natural_normal_traction[kFluidInlet] = [pm, tm](Vec2, double t) {
      return -pulse_inlet_pressure(t, pm, tm);
    };
    return prob;
  }
};

inline PulseCase make_pulse_case(int cells_per_unit = 10) {
  PulseCase c;
  c.mesh = std::make_unique<Mesh>(build_structured_mesh(
      {0.0, 6.0, 0.0, 0.5}, {0.0, 6.0, 0.5, 0.6}, cells_per_unit));
  const double eps = 1e-9;
  classify_boundary(
      *c.mesh,
      {{kFluidBottom, [eps](Vec2 x) { return x.y < eps; }},
       {kFluidInlet, [eps](Vec2 x) { return x.x < eps && x.y < 0.5; }},
       {kFluidOutlet, [eps](Vec2 x) { return x.x > 6.0 - eps && x.y < 0.5; }},
       {kSolidInlet, [eps](Vec2 x) { return x.x < eps && x.y > 0.5; }},
       {kSolidOutlet, [eps](Vec2 x) { return x.x > 6.0 - eps && x.y > 0.5; }},
       {kSolidTop, [eps](Vec2 x) { return x.y > 0.6 - eps; }}});
  c.materials.rho_f = 1.0;
  c.materials.mu_f = 3.5e-2;
  c.materials.rho_s = 1.1;
  c.materials.mu_s = 5.75e5;
  c.materials.lambda_s = 1.7e6;
  c.materials.beta_s = 4.0e6;
  // Inlet/outlet: pressure set through the normal traction, slip suppressed.
  c.bc[kFluidInlet] = BoundaryCondition{false, true};
  c.bc[kFluidOutlet] = BoundaryCondition{false, true};
  // Symmetry wall: no penetration, free slip.
  c.bc[kFluidBottom] = BoundaryCondition{true, false};
  // Clamped solid ends, traction-free outer wall with pinned slip.
  c.bc[kSolidInlet] = BoundaryCondition{true, true};
  c.bc[kSolidOutlet] = BoundaryCondition{true, true};
  c.bc[kSolidTop] = BoundaryCondition{false, true};
  return c;
}

}  // namespace fsihdg
