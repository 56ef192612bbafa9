#pragma once
// Element-local bilinear forms and load functionals.
//
// The viscous operator is the interior-penalty HDG form with projected
// tangential jumps: for compound functions (v, vhat),
//
//   A_K((v,vhat),(w,what)) = int_K D(v):D(w)
//     - int_dK (D(v) n).t [(w - what).t] - int_dK (D(w) n).t [(v - vhat).t]
//     + (alpha k^2 / h_K) int_dK P[(v - vhat).t] P[(w - what).t]
//
// where n is the outward normal, t the facet tangent, and P the L2 projection
// onto facet polynomials of degree k-1. Because (D(v) n).t has degree k-1 on
// every facet, the consistency terms see only the projected jump as well, so
// the whole facet coupling reduces to products of Legendre jump moments.

#include <Eigen/Dense>

#include "fsihdg/spaces.hpp"

namespace fsihdg {

struct Materials {
  double rho_f = 1.0;
  double mu_f = 1.0;
  double rho_s = 1.0;
  double mu_s = 1.0;
  double lambda_s = 1.0;
  double beta_s = 0.0;   // linear spring coefficient on the solid
  double alpha = 8.0;    // HDG penalty parameter

  double rho(Region r) const { return r == Region::Fluid ? rho_f : rho_s; }
};

namespace detail {

/// Physical quadrature points and weights of a reference triangle rule
/// mapped to element e; also returns the reference points for pressure-basis
/// evaluation.
struct ElementQuadrature {
  std::vector<Vec2> points;      // physical
  std::vector<Vec2> ref_points;  // reference
  std::vector<double> weights;   // physical (include 2*area)
};

inline ElementQuadrature element_quadrature(const Mesh& mesh, int e, int degree) {
  const TriangleQuadrature quad = triangle_quadrature(degree);
  const Element& el = mesh.elements[e];
  const Vec2 a = mesh.vertices[el.v[0]], b = mesh.vertices[el.v[1]],
             c = mesh.vertices[el.v[2]];
  const double area = mesh.element_area(e);
  ElementQuadrature eq;
  eq.ref_points = quad.points;
  eq.points.reserve(quad.points.size());
  eq.weights.reserve(quad.points.size());
  for (std::size_t q = 0; q < quad.points.size(); ++q) {
    const Vec2 r = quad.points[q];
    eq.points.push_back(a + (b - a) * r.x + (c - a) * r.y);
    eq.weights.push_back(quad.weights[q] * 2.0 * area);
  }
  return eq;
}

/// Tangential jump moments J (n_local x k) and normal-stress moments
/// C (n_local x k) of the compound local basis on local edge li.
/// Column m is the moment against the m-th orthonormal facet Legendre
/// function; the penalty and consistency terms are products of these.
inline void edge_moment_matrices(const Spaces& sp, int e, int li,
                                 Eigen::MatrixXd& J, Eigen::MatrixXd& C) {
  const Mesh& mesh = *sp.mesh;
  const Element& el = mesh.elements[e];
  const int f = el.facet[li];
  const FacetFrame fr = facet_frame(mesh, f);
  const int nvb = 3 * sp.nfn + sp.nei;
  const int nloc = sp.n_local_u();
  const int nmom = sp.nft;  // jump projection degree k-1

  J = Eigen::MatrixXd::Zero(nloc, nmom);
  C = Eigen::MatrixXd::Zero(nloc, nmom);

  const LineQuadrature quad = line_quadrature(2 * sp.k + 1);
  std::vector<Vec2> pts(quad.nodes.size());
  for (std::size_t q = 0; q < quad.nodes.size(); ++q) pts[q] = fr.point(quad.nodes[q]);
  const BasisTable t = tabulate_basis(sp, e, pts);

  const Vec2 n_out = fr.n * static_cast<double>(el.facet_sign[li]);
  const double scale = 1.0 / std::sqrt(fr.len);
  std::vector<double> leg(nmom);
  for (std::size_t q = 0; q < quad.nodes.size(); ++q) {
    const double w = quad.weights[q] * fr.len;
    legendre01(nmom - 1, quad.nodes[q], leg.data());
    for (int i = 0; i < nvb; ++i) {
      const int a = sp.local_of_vbasis(i);
      const double vt = t.vx(q, i) * fr.t.x + t.vy(q, i) * fr.t.y;
      // (D(phi) n_out) . t
      const double dnt = (t.dxx(q, i) * n_out.x + t.dxy(q, i) * n_out.y) * fr.t.x +
                         (t.dxy(q, i) * n_out.x + t.dyy(q, i) * n_out.y) * fr.t.y;
      for (int m = 0; m < nmom; ++m) {
        J(a, m) += w * vt * leg[m] * scale;
        C(a, m) += w * dnt * leg[m] * scale;
      }
    }
  }
  // The tangential facet basis of this edge is the same orthonormal family,
  // entering the jump with a minus sign.
  for (int m = 0; m < nmom; ++m) J(3 * sp.nfn + li * sp.nft + m, m) = -1.0;
}

}  // namespace detail

/// Unit-coefficient viscous HDG form of element e over its compound local
/// dofs (symmetric by construction).
inline Eigen::MatrixXd local_hdg_stiffness(const Spaces& sp, int e, double alpha) {
  const Mesh& mesh = *sp.mesh;
  const int nloc = sp.n_local_u();
  const int nvb = 3 * sp.nfn + sp.nei;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nloc, nloc);

  const auto eq = detail::element_quadrature(mesh, e, 2 * sp.k + 2);
  const BasisTable t = tabulate_basis(sp, e, eq.points);
  Eigen::MatrixXd Avol = Eigen::MatrixXd::Zero(nvb, nvb);
  for (std::size_t q = 0; q < eq.points.size(); ++q) {
    const double w = eq.weights[q];
    for (int i = 0; i < nvb; ++i)
      for (int j = 0; j <= i; ++j) {
        const double dd = t.dxx(q, i) * t.dxx(q, j) + 2.0 * t.dxy(q, i) * t.dxy(q, j) +
                          t.dyy(q, i) * t.dyy(q, j);
        Avol(i, j) += w * dd;
      }
  }
  for (int i = 0; i < nvb; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v = Avol(i, j);
      const int a = sp.local_of_vbasis(i), b = sp.local_of_vbasis(j);
      A(a, b) += v;
      if (a != b) A(b, a) += v;
    }

  const double h = sp.basis[e].h;
  const double penalty = alpha * sp.k * sp.k / h;
  Eigen::MatrixXd J, C;
  for (int li = 0; li < 3; ++li) {
    detail::edge_moment_matrices(sp, e, li, J, C);
    const Eigen::MatrixXd CJt = C * J.transpose();
    A -= CJt + CJt.transpose();
    A += penalty * (J * J.transpose());
  }
  // Enforce exact symmetry against roundoff in the accumulation order.
  A = 0.5 * (A + A.transpose()).eval();
  return A;
}

/// Splits the local viscous energy of a compound vector into the volume
/// strain part and the projected-jump penalty part; used to validate the
/// coercivity bound A_K(v,v) >= (|D(v)|^2 + penalty |P jump|^2) / 2.
struct LocalEnergyParts {
  double total = 0.0;     // A_K(v, v)
  double strain = 0.0;    // |D(v)|_K^2
  double penalty = 0.0;   // (alpha k^2/h) |P tang jump|_dK^2
};

inline LocalEnergyParts local_energy_parts(const Spaces& sp, int e, double alpha,
                                           const Eigen::VectorXd& vloc) {
  LocalEnergyParts parts;
  const Eigen::MatrixXd A = local_hdg_stiffness(sp, e, alpha);
  parts.total = vloc.dot(A * vloc);
  const int nvb = 3 * sp.nfn + sp.nei;
  const auto eq = detail::element_quadrature(*sp.mesh, e, 2 * sp.k + 2);
  const BasisTable t = tabulate_basis(sp, e, eq.points);
  for (std::size_t q = 0; q < eq.points.size(); ++q) {
    double dxx = 0, dxy = 0, dyy = 0;
    for (int i = 0; i < nvb; ++i) {
      const double c = vloc[sp.local_of_vbasis(i)];
      dxx += c * t.dxx(q, i);
      dxy += c * t.dxy(q, i);
      dyy += c * t.dyy(q, i);
    }
    parts.strain += eq.weights[q] * (dxx * dxx + 2.0 * dxy * dxy + dyy * dyy);
  }
  const double pen = alpha * sp.k * sp.k / sp.basis[e].h;
  Eigen::MatrixXd J, C;
  for (int li = 0; li < 3; ++li) {
    detail::edge_moment_matrices(sp, e, li, J, C);
    const Eigen::VectorXd jm = J.transpose() * vloc;
    parts.penalty += pen * jm.squaredNorm();
  }
  return parts;
}

/// Velocity mass matrix of element e (weight 1) over compound local dofs;
/// rows/columns of tangential facet dofs are zero.
inline Eigen::MatrixXd local_mass(const Spaces& sp, int e) {
  const int nloc = sp.n_local_u();
  const int nvb = 3 * sp.nfn + sp.nei;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nloc, nloc);
  const auto eq = detail::element_quadrature(*sp.mesh, e, 2 * sp.k + 2);
  const BasisTable t = tabulate_basis(sp, e, eq.points);
  for (std::size_t q = 0; q < eq.points.size(); ++q) {
    const double w = eq.weights[q];
    for (int i = 0; i < nvb; ++i)
      for (int j = 0; j <= i; ++j) {
        const double v = w * (t.vx(q, i) * t.vx(q, j) + t.vy(q, i) * t.vy(q, j));
        const int a = sp.local_of_vbasis(i), b = sp.local_of_vbasis(j);
        M(a, b) += v;
        if (a != b) M(b, a) += v;
      }
  }
  return M;
}

/// (div u, div v) matrix of element e over compound local dofs.
inline Eigen::MatrixXd local_divdiv(const Spaces& sp, int e) {
  const int nloc = sp.n_local_u();
  const int nvb = 3 * sp.nfn + sp.nei;
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(nloc, nloc);
  const auto eq = detail::element_quadrature(*sp.mesh, e, 2 * sp.k + 2);
  const BasisTable t = tabulate_basis(sp, e, eq.points);
  for (std::size_t q = 0; q < eq.points.size(); ++q)
    for (int i = 0; i < nvb; ++i)
      for (int j = 0; j <= i; ++j) {
        const double v = eq.weights[q] * t.div(q, i) * t.div(q, j);
        const int a = sp.local_of_vbasis(i), b = sp.local_of_vbasis(j);
        D(a, b) += v;
        if (a != b) D(b, a) += v;
      }
  return D;
}

/// Velocity-pressure coupling of element e: entry (i, m) = -int_K div(phi_i) psi_m.
inline Eigen::MatrixXd local_mixed_b(const Spaces& sp, int e) {
  const int nloc = sp.n_local_u();
  const int nvb = 3 * sp.nfn + sp.nei;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nloc, sp.nq);
  const auto eq = detail::element_quadrature(*sp.mesh, e, 2 * sp.k + 2);
  const BasisTable t = tabulate_basis(sp, e, eq.points);
  std::vector<double> pv(sp.nq);
  for (std::size_t q = 0; q < eq.points.size(); ++q) {
    sp.pressure.eval(eq.ref_points[q], pv.data());
    for (int i = 0; i < nvb; ++i) {
      const int a = sp.local_of_vbasis(i);
      for (int m = 0; m < sp.nq; ++m)
        B(a, m) -= eq.weights[q] * t.div(q, i) * pv[m];
    }
  }
  return B;
}

/// Volume load (f, v) of element e over compound local dofs.
inline Eigen::VectorXd local_volume_load(const Spaces& sp, int e,
                                         const VectorField& f) {
  const int nloc = sp.n_local_u();
  const int nvb = 3 * sp.nfn + sp.nei;
  Eigen::VectorXd L = Eigen::VectorXd::Zero(nloc);
  const auto eq = detail::element_quadrature(*sp.mesh, e, 2 * sp.k + 2);
  const BasisTable t = tabulate_basis(sp, e, eq.points);
  for (std::size_t q = 0; q < eq.points.size(); ++q) {
    const Vec2 fv = f(eq.points[q]);
    for (int i = 0; i < nvb; ++i)
      L[sp.local_of_vbasis(i)] +=
          eq.weights[q] * (fv.x * t.vx(q, i) + fv.y * t.vy(q, i));
  }
  return L;
}

/// Facet load int_F g . ((v.n) n + vhat) ds for a prescribed vector field g
/// (e.g. a traction jump across the interface). The normal trace of v and
/// the tangential trace of vhat are both expansions in the orthonormal facet
/// Legendre family, so the load is basis independent; the result is written
/// into the global right-hand side.
inline void add_facet_vector_load(const Spaces& sp, int f, const VectorField& g,
                                  Eigen::VectorXd& rhs) {
  const Mesh& mesh = *sp.mesh;
  const FacetFrame fr = facet_frame(mesh, f);
  const LineQuadrature quad = line_quadrature(2 * sp.k + 1);
  const double scale = 1.0 / std::sqrt(fr.len);
  std::vector<double> leg(sp.nfn);
  for (std::size_t q = 0; q < quad.nodes.size(); ++q) {
    const double w = quad.weights[q] * fr.len;
    legendre01(sp.nfn - 1, quad.nodes[q], leg.data());
    const Vec2 gv = g(fr.point(quad.nodes[q]));
    const double gn = gv.dot(fr.n), gt = gv.dot(fr.t);
    for (int m = 0; m < sp.nfn; ++m)
      rhs[sp.u_normal_dof(f, m)] += w * gn * leg[m] * scale;
    for (int m = 0; m < sp.nft; ++m)
      rhs[sp.u_tang_dof(f, m)] += w * gt * leg[m] * scale;
  }
}

/// Boundary load of a natural normal condition (sigma n).n = s with n the
/// outward boundary normal: adds int_F s (v.n) ds to the right-hand side.
/// The facet's stored normal has arbitrary global orientation, so the load
/// carries the sign that turns it into the outward one.
inline void add_facet_normal_traction_load(const Spaces& sp, int f,
                                           const ScalarField& s,
                                           Eigen::VectorXd& rhs) {
  const Mesh& mesh = *sp.mesh;
  const Facet& fa = mesh.facets[f];
  if (fa.elem[1] >= 0) throw std::invalid_argument("traction load on interior facet");
  const Element& el = mesh.elements[fa.elem[0]];
  double sign = 0;
  for (int li = 0; li < 3; ++li)
    if (el.facet[li] == f) sign = static_cast<double>(el.facet_sign[li]);
  const FacetFrame fr = facet_frame(mesh, f);
  const LineQuadrature quad = line_quadrature(2 * sp.k + 1);
  const double scale = sign / std::sqrt(fr.len);
  std::vector<double> leg(sp.nfn);
  for (std::size_t q = 0; q < quad.nodes.size(); ++q) {
    const double w = quad.weights[q] * fr.len;
    legendre01(sp.nfn - 1, quad.nodes[q], leg.data());
    const double sv = s(fr.point(quad.nodes[q]));
    for (int m = 0; m < sp.nfn; ++m)
      rhs[sp.u_normal_dof(f, m)] += w * sv * leg[m] * scale;
  }
}

}  // namespace fsihdg
