#pragma once
// GENERATED by tools/generate_manufactured.py -- do not edit by hand.
//
// Closed-form fields and source terms for the layered-domain manufactured
// verification case (fluid y < 0, solid y > 0, interface y = 0).

#include <cmath>

#include "fsihdg/geometry.hpp"

namespace fsihdg::manufactured {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

inline Vec2 velocity(double x, double y, double t) {
  return Vec2{sin(2*t)*pow(sin(2*kPi*x), 2)*cos((8.0/3.0)*kPi*y + (1.0/6.0)*kPi),
              -3.0/2.0*sin(2*t)*sin(4*kPi*x)*pow(sin((4.0/3.0)*kPi*y + (1.0/3.0)*kPi), 2)};
}

inline Vec2 displacement(double x, double y, double t) {
  return Vec2{pow(sin(t), 2)*pow(sin(2*kPi*x), 2)*cos((8.0/3.0)*kPi*y + (1.0/6.0)*kPi),
              -3.0/2.0*pow(sin(t), 2)*sin(4*kPi*x)*pow(sin((4.0/3.0)*kPi*y + (1.0/3.0)*kPi), 2)};
}

inline double pressure(double x, double y, double t) {
  return sin(t)*sin(2*kPi*x)*sin(2*kPi*y);
}

inline Mat2 velocity_gradient(double x, double y, double t) {
  return Mat2{4*kPi*sin(2*t)*sin(2*kPi*x)*cos(2*kPi*x)*cos((8.0/3.0)*kPi*y + (1.0/6.0)*kPi),
              -8.0/3.0*kPi*sin(2*t)*pow(sin(2*kPi*x), 2)*sin((8.0/3.0)*kPi*y + (1.0/6.0)*kPi),
              -6*kPi*sin(2*t)*pow(sin((4.0/3.0)*kPi*y + (1.0/3.0)*kPi), 2)*cos(4*kPi*x),
              -4*kPi*sin(2*t)*sin(4*kPi*x)*sin((4.0/3.0)*kPi*y + (1.0/3.0)*kPi)*cos((4.0/3.0)*kPi*y + (1.0/3.0)*kPi)};
}

inline Mat2 displacement_gradient(double x, double y, double t) {
  return Mat2{4*kPi*pow(sin(t), 2)*sin(2*kPi*x)*cos(2*kPi*x)*cos((8.0/3.0)*kPi*y + (1.0/6.0)*kPi),
              -8.0/3.0*kPi*pow(sin(t), 2)*pow(sin(2*kPi*x), 2)*sin((8.0/3.0)*kPi*y + (1.0/6.0)*kPi),
              -6*kPi*pow(sin(t), 2)*pow(sin((4.0/3.0)*kPi*y + (1.0/3.0)*kPi), 2)*cos(4*kPi*x),
              -4*kPi*pow(sin(t), 2)*sin(4*kPi*x)*sin((4.0/3.0)*kPi*y + (1.0/3.0)*kPi)*cos((4.0/3.0)*kPi*y + (1.0/3.0)*kPi)};
}

inline Vec2 fluid_body_force(double x, double y, double t, double rho_f, double mu_f) {
  return Vec2{(208.0/9.0)*pow(kPi, 2)*mu_f*sin(2*t)*pow(sin(2*kPi*x), 2)*cos((8.0/3.0)*kPi*y + (1.0/6.0)*kPi) + 16*pow(kPi, 2)*mu_f*sin(2*t)*sin((4.0/3.0)*kPi*y + (1.0/3.0)*kPi)*cos(4*kPi*x)*cos((4.0/3.0)*kPi*y + (1.0/3.0)*kPi) - 16*pow(kPi, 2)*mu_f*sin(2*t)*pow(cos(2*kPi*x), 2)*cos((8.0/3.0)*kPi*y + (1.0/6.0)*kPi) + 2*rho_f*pow(sin(2*kPi*x), 2)*cos(2*t)*cos((8.0/3.0)*kPi*y + (1.0/6.0)*kPi) + 2*kPi*sin(t)*sin(2*kPi*y)*cos(2*kPi*x),
              (32.0/3.0)*pow(kPi, 2)*mu_f*sin(2*t)*sin(2*kPi*x)*sin((8.0/3.0)*kPi*y + (1.0/6.0)*kPi)*cos(2*kPi*x) - 104.0/3.0*pow(kPi, 2)*mu_f*sin(2*t)*sin(4*kPi*x)*pow(sin((4.0/3.0)*kPi*y + (1.0/3.0)*kPi), 2) + (32.0/3.0)*pow(kPi, 2)*mu_f*sin(2*t)*sin(4*kPi*x)*pow(cos((4.0/3.0)*kPi*y + (1.0/3.0)*kPi), 2) - 3*rho_f*sin(4*kPi*x)*pow(sin((4.0/3.0)*kPi*y + (1.0/3.0)*kPi), 2)*cos(2*t) + 2*kPi*sin(t)*sin(2*kPi*x)*cos(2*kPi*y)};
}

inline Vec2 solid_body_force(double x, double y, double t, double rho_s, double mu_s, double lam_s) {
  return Vec2{8*pow(kPi, 2)*lam_s*pow(sin(t), 2)*pow(sin(2*kPi*x), 2)*cos((8.0/3.0)*kPi*y + (1.0/6.0)*kPi) + 16*pow(kPi, 2)*lam_s*pow(sin(t), 2)*sin((4.0/3.0)*kPi*y + (1.0/3.0)*kPi)*cos(4*kPi*x)*cos((4.0/3.0)*kPi*y + (1.0/3.0)*kPi) - 8*pow(kPi, 2)*lam_s*pow(sin(t), 2)*pow(cos(2*kPi*x), 2)*cos((8.0/3.0)*kPi*y + (1.0/6.0)*kPi) + (208.0/9.0)*pow(kPi, 2)*mu_s*pow(sin(t), 2)*pow(sin(2*kPi*x), 2)*cos((8.0/3.0)*kPi*y + (1.0/6.0)*kPi) + 16*pow(kPi, 2)*mu_s*pow(sin(t), 2)*sin((4.0/3.0)*kPi*y + (1.0/3.0)*kPi)*cos(4*kPi*x)*cos((4.0/3.0)*kPi*y + (1.0/3.0)*kPi) - 16*pow(kPi, 2)*mu_s*pow(sin(t), 2)*pow(cos(2*kPi*x), 2)*cos((8.0/3.0)*kPi*y + (1.0/6.0)*kPi) + 2*rho_s*pow(sin(2*kPi*x), 2)*cos(2*t)*cos((8.0/3.0)*kPi*y + (1.0/6.0)*kPi),
              (32.0/3.0)*pow(kPi, 2)*lam_s*pow(sin(t), 2)*sin(2*kPi*x)*sin((8.0/3.0)*kPi*y + (1.0/6.0)*kPi)*cos(2*kPi*x) - 16.0/3.0*pow(kPi, 2)*lam_s*pow(sin(t), 2)*sin(4*kPi*x)*pow(sin((4.0/3.0)*kPi*y + (1.0/3.0)*kPi), 2) + (16.0/3.0)*pow(kPi, 2)*lam_s*pow(sin(t), 2)*sin(4*kPi*x)*pow(cos((4.0/3.0)*kPi*y + (1.0/3.0)*kPi), 2) + (32.0/3.0)*pow(kPi, 2)*mu_s*pow(sin(t), 2)*sin(2*kPi*x)*sin((8.0/3.0)*kPi*y + (1.0/6.0)*kPi)*cos(2*kPi*x) - 104.0/3.0*pow(kPi, 2)*mu_s*pow(sin(t), 2)*sin(4*kPi*x)*pow(sin((4.0/3.0)*kPi*y + (1.0/3.0)*kPi), 2) + (32.0/3.0)*pow(kPi, 2)*mu_s*pow(sin(t), 2)*sin(4*kPi*x)*pow(cos((4.0/3.0)*kPi*y + (1.0/3.0)*kPi), 2) - 3*rho_s*sin(4*kPi*x)*pow(sin((4.0/3.0)*kPi*y + (1.0/3.0)*kPi), 2)*cos(2*t)};
}

inline Vec2 interface_traction_jump(double x, double t, double mu_f, double mu_s, double lam_s) {
  return Vec2{-4.0/3.0*kPi*mu_f*sin(2*t)*pow(sin(2*kPi*x), 2) - 9.0/2.0*kPi*mu_f*sin(2*t)*cos(4*kPi*x) + (4.0/3.0)*kPi*mu_s*pow(sin(t), 2)*pow(sin(2*kPi*x), 2) + (9.0/2.0)*kPi*mu_s*pow(sin(t), 2)*cos(4*kPi*x),
              -2*sqrt(3)*kPi*lam_s*pow(sin(t), 2)*sin(2*kPi*x)*cos(2*kPi*x) + sqrt(3)*kPi*lam_s*pow(sin(t), 2)*sin(4*kPi*x) - 2*sqrt(3)*kPi*mu_f*sin(2*t)*sin(4*kPi*x) + 2*sqrt(3)*kPi*mu_s*pow(sin(t), 2)*sin(4*kPi*x)};
}

}  // namespace fsihdg::manufactured
