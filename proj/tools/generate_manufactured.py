#!/usr/bin/env python3
"""Regenerates include/fsihdg/manufactured_fields.hpp and
tests/manufactured_frozen.hpp.

The manufactured verification case prescribes closed-form fields on the layered
domain (fluid below the line y = 0, solid above):

    u   = ( sin^2(2 pi x) sin(8 pi (y+1) / 3) sin(2 t),
           -1.5 sin(4 pi x) sin^2(4 pi (y+1) / 3) sin(2 t) )
    p^f =  sin(2 pi x) sin(2 pi y) sin(t)
    eta =  (same spatial factors) * sin^2(t)        so that  d/dt eta = u

The velocity is exactly divergence free.  This script derives, with sympy,

    f^f  = rho_f du/dt + grad p - 2 mu_f div D(u)          (fluid body force)
    f^s  = rho_s du/dt - lam_s grad(div eta) - 2 mu_s div D(eta)   (solid)
    g    = sigma_f(u, p) n_f + sigma_s(eta) n_s  at y = 0  (traction jump)

with sigma_f = -p I + 2 mu_f D(u), sigma_s = lam_s (div eta) I + 2 mu_s D(eta),
n_f = (0, 1), n_s = (0, -1), and emits them as plain C++ functions.  The frozen
header holds 30-digit point samples used by the test suite as an independent
oracle (the tests also cross-check the generated forces against central
finite differences of the generated fields).
"""

import sympy as sp

x, y, t = sp.symbols("x y t", real=True)
rho_f, mu_f = sp.symbols("rho_f mu_f", positive=True)
rho_s, mu_s, lam_s = sp.symbols("rho_s mu_s lam_s", positive=True)

pi = sp.pi

# Exact fields ---------------------------------------------------------------
space_x = sp.sin(2 * pi * x) ** 2 * sp.sin(sp.Rational(8, 3) * pi * (y + 1))
space_y = -sp.Rational(3, 2) * sp.sin(4 * pi * x) * sp.sin(sp.Rational(4, 3) * pi * (y + 1)) ** 2

u = sp.Matrix([space_x * sp.sin(2 * t), space_y * sp.sin(2 * t)])
eta = sp.Matrix([space_x * sp.sin(t) ** 2, space_y * sp.sin(t) ** 2])
p = sp.sin(2 * pi * x) * sp.sin(2 * pi * y) * sp.sin(t)

assert sp.simplify(sp.diff(u[0], x) + sp.diff(u[1], y)) == 0
assert sp.simplify(sp.diff(eta, t) - u) == sp.zeros(2, 1)


def grad(v):
    return sp.Matrix([[sp.diff(v[0], x), sp.diff(v[0], y)],
                      [sp.diff(v[1], x), sp.diff(v[1], y)]])


def sym(g):
    return (g + g.T) / 2


def div_tensor(T):
    return sp.Matrix([sp.diff(T[0, 0], x) + sp.diff(T[0, 1], y),
                      sp.diff(T[1, 0], x) + sp.diff(T[1, 1], y)])


Du = sym(grad(u))
Deta = sym(grad(eta))
div_eta = sp.diff(eta[0], x) + sp.diff(eta[1], y)

sigma_f = -p * sp.eye(2) + 2 * mu_f * Du
sigma_s = lam_s * div_eta * sp.eye(2) + 2 * mu_s * Deta

f_fluid = rho_f * sp.diff(u, t) - div_tensor(sigma_f)
f_solid = rho_s * sp.diff(u, t) - div_tensor(sigma_s)

# traction jump across y = 0 with fluid normal (0, 1)
g_jump = (sigma_f * sp.Matrix([0, 1]) - sigma_s * sp.Matrix([0, 1])).subs(y, 0)

HEADER = """#pragma once
// GENERATED by tools/generate_manufactured.py -- do not edit by hand.
//
// Closed-form fields and source terms for the layered-domain manufactured
// verification case (fluid y < 0, solid y > 0, interface y = 0).

#include <cmath>

#include "fsihdg/geometry.hpp"

namespace fsihdg::manufactured {{

{body}

}}  // namespace fsihdg::manufactured
"""


def cxx(expr):
    code = sp.ccode(sp.expand(expr))
    code = code.replace("M_PI", "kPi")
    return code


def fn(name, args, expr_pairs, result="Vec2"):
    lines = []
    sig_args = ", ".join(f"double {a}" for a in args)
    lines.append(f"inline {result} {name}({sig_args}) {{")
    if result == "Vec2":
        lines.append(f"  return Vec2{{{cxx(expr_pairs[0])},")
        lines.append(f"              {cxx(expr_pairs[1])}}};")
    else:
        lines.append(f"  return {cxx(expr_pairs[0])};")
    lines.append("}")
    return "\n".join(lines)


def fn_mat(name, args, M):
    sig_args = ", ".join(f"double {a}" for a in args)
    lines = [f"inline Mat2 {name}({sig_args}) {{"]
    lines.append(f"  return Mat2{{{cxx(M[0,0])},")
    lines.append(f"              {cxx(M[0,1])},")
    lines.append(f"              {cxx(M[1,0])},")
    lines.append(f"              {cxx(M[1,1])}}};")
    lines.append("}")
    return "\n".join(lines)


parts = [
    "inline constexpr double kPi = 3.14159265358979323846264338327950288;",
    fn("velocity", ["x", "y", "t"], [u[0], u[1]]),
    fn("displacement", ["x", "y", "t"], [eta[0], eta[1]]),
    fn("pressure", ["x", "y", "t"], [p], result="double"),
    fn_mat("velocity_gradient", ["x", "y", "t"], grad(u)),
    fn_mat("displacement_gradient", ["x", "y", "t"], grad(eta)),
    fn("fluid_body_force", ["x", "y", "t", "rho_f", "mu_f"],
       [f_fluid[0], f_fluid[1]]),
    fn("solid_body_force", ["x", "y", "t", "rho_s", "mu_s", "lam_s"],
       [f_solid[0], f_solid[1]]),
    fn("interface_traction_jump", ["x", "t", "mu_f", "mu_s", "lam_s"],
       [g_jump[0], g_jump[1]]),
]

with open("include/fsihdg/manufactured_fields.hpp", "w") as f:
    f.write(HEADER.format(body="\n\n".join(parts)))

# Frozen oracle samples -------------------------------------------------------
samples = [
    (sp.Rational(13, 100), -sp.Rational(37, 100), sp.Rational(1, 5)),
    (sp.Rational(71, 100), -sp.Rational(83, 100), sp.Rational(3, 10)),
    (sp.Rational(29, 100), sp.Rational(11, 50), sp.Rational(1, 4)),
    (sp.Rational(57, 100), sp.Rational(9, 25), sp.Rational(3, 20)),
]
mat = {rho_f: 1, mu_f: 1, rho_s: sp.Rational(1), mu_s: sp.Rational(1, 2),
       lam_s: sp.Rational(5)}


def num(e):
    return sp.nsimplify(e, rational=False).evalf(30)


rows = []
for (sx, sy, st) in samples:
    sub = {x: sx, y: sy, t: st}
    vals = [u[0].subs(sub), u[1].subs(sub), p.subs(sub),
            eta[0].subs(sub), eta[1].subs(sub),
            f_fluid[0].subs(mat).subs(sub), f_fluid[1].subs(mat).subs(sub),
            f_solid[0].subs(mat).subs(sub), f_solid[1].subs(mat).subs(sub),
            g_jump[0].subs(mat).subs({x: sx, t: st}),
            g_jump[1].subs(mat).subs({x: sx, t: st})]
    rows.append("  {" + ", ".join(f"{sp.Float(num(v), 30):.20e}" for v in
                                  [sx, sy, st] + vals) + "},")

FROZEN = """#pragma once
// GENERATED by tools/generate_manufactured.py -- do not edit by hand.
//
// Point samples of the manufactured fields and sources, evaluated in exact
// arithmetic and rounded once.  Material values used for the force/traction
// columns: rho_f = mu_f = 1, rho_s = 1, mu_s = 1/2, lam_s = 5.
// Columns: x, y, t, u0, u1, p, eta0, eta1, ff0, ff1, fs0, fs1, g0, g1.

namespace fsihdg::test {{

inline constexpr double kManufacturedSamples[{n}][14] = {{
{rows}
}};

}}  // namespace fsihdg::test
"""

with open("tests/manufactured_frozen.hpp", "w") as f:
    f.write(FROZEN.format(n=len(rows), rows="\n".join(rows)))

print("wrote include/fsihdg/manufactured_fields.hpp and tests/manufactured_frozen.hpp")
