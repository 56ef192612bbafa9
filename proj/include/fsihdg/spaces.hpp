#pragma once
// Discrete spaces on a two-region triangular mesh:
//
//  - V  : H(div)-conforming velocities; full vector polynomials of degree k
//         per element with single-valued normal traces. Facet degrees of
//         freedom are moments of v.n against an orthonormal Legendre basis
//         of the facet (global orientation), so a shared coefficient yields
//         a continuous normal flux. Interior degrees of freedom are moments
//         against vector polynomials of degree k-2 plus curls of bubble
//         functions; the moments against the degree-(k-2) fields make the
//         interpolation commute with the divergence.
//  - Vhat: tangential facet velocities of degree k-1, one scalar Legendre
//          coefficient family per facet (times the global facet tangent).
//  - Q  : discontinuous element pressures of degree k-1 in an L2-orthogonal
//         basis whose first member is the constant 1 (element mass matrix =
//         area * identity, and the leading coefficient is the cell average).
//
// Compound velocity vector layout: [facet normal | facet tangential |
// element interior]; pressure layout: element-major with the constant mode
// first.

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fsihdg/mesh.hpp"
#include "fsihdg/polynomial.hpp"
#include "fsihdg/quadrature.hpp"

namespace fsihdg {

using VectorField = std::function<Vec2(Vec2)>;
using ScalarField = std::function<double(Vec2)>;

struct FacetFrame {
  Vec2 p0, p1, t, n;
  double len = 0.0;
  Vec2 point(double s) const { return p0 + s * (p1 - p0); }
};

inline FacetFrame facet_frame(const Mesh& mesh, int f) {
  FacetFrame fr;
  fr.p0 = mesh.facet_p0(f);
  fr.p1 = mesh.facet_p1(f);
  fr.len = (fr.p1 - fr.p0).norm();
  fr.t = (fr.p1 - fr.p0) / fr.len;
  fr.n = fr.t.perp();
  return fr;
}

/// Per-element velocity basis: coefficient rows over the vector monomials
/// [ (m_j, 0) | (0, m_j) ] in the scaled local frame (x - centroid)/h.
struct ElementBasis {
  Eigen::MatrixXd coef;  // n_basis x (2 * n_mono)
  Vec2 centroid;
  double h = 0.0;
  double area = 0.0;
};

/// Velocity basis data (values, divergence, symmetric gradient) evaluated at
/// a batch of physical points. All matrices are (n_points x n_basis).
struct BasisTable {
  Eigen::MatrixXd vx, vy, div, dxx, dxy, dyy;
};

struct Spaces {
  const Mesh* mesh = nullptr;
  int k = 1;
  int nfn = 0;  // normal velocity dofs per facet       (k + 1)
  int nft = 0;  // tangential velocity dofs per facet   (k)
  int nei = 0;  // interior velocity dofs per element   ((k+1)(k-1))
  int nq = 0;   // pressure dofs per element            (k(k+1)/2)
  int n_skeleton = 0;
  int dim_u = 0;
  int dim_p = 0;
  std::vector<ElementBasis> basis;
  TriangleOrthoBasis pressure{0};
  std::vector<std::uint8_t> u_dof_solid;  // dof carried by a solid element

  int u_normal_dof(int f, int m) const { return f * nfn + m; }
  int u_tang_dof(int f, int m) const { return mesh->n_facets() * nfn + f * nft + m; }
  int u_interior_dof(int e, int i) const { return n_skeleton + e * nei + i; }
  int p_dof(int e, int m) const { return e * nq + m; }

  /// Global ids of the element's compound velocity dofs, in local order:
  /// edge-normal (edge 0..2, moment 0..k), edge-tangential, interior.
  std::vector<int> element_u_dofs(int e) const {
    const Element& el = mesh->elements[e];
    std::vector<int> dofs;
    dofs.reserve(3 * (nfn + nft) + nei);
    for (int li = 0; li < 3; ++li)
      for (int m = 0; m < nfn; ++m) dofs.push_back(u_normal_dof(el.facet[li], m));
    for (int li = 0; li < 3; ++li)
      for (int m = 0; m < nft; ++m) dofs.push_back(u_tang_dof(el.facet[li], m));
    for (int i = 0; i < nei; ++i) dofs.push_back(u_interior_dof(e, i));
    return dofs;
  }
  int n_local_u() const { return 3 * (nfn + nft) + nei; }
  /// Position of V-basis function i within the local compound dof vector.
  int local_of_vbasis(int i) const { return i < 3 * nfn ? i : 3 * nft + i; }
};

namespace detail {

/// Barycentric coordinate functions of a triangle in a given frame:
/// lambda_i(x) = bary_const[i] + bary_grad[i] . x.
struct Barycentric {
  std::array<double, 3> c{};
  std::array<Vec2, 3> g{};

  static Barycentric from(const std::array<Vec2, 3>& v) {
    Barycentric b;
    const double det = (v[1].x - v[0].x) * (v[2].y - v[0].y) -
                       (v[1].y - v[0].y) * (v[2].x - v[0].x);
    for (int i = 0; i < 3; ++i) {
      // lambda_i(x) = cross(bb - a, x - a) / det with a, bb the other vertices
      const Vec2& a = v[(i + 1) % 3];
      const Vec2& bb = v[(i + 2) % 3];
      b.g[i] = Vec2{a.y - bb.y, bb.x - a.x} / det;
      b.c[i] = -(b.g[i].x * a.x + b.g[i].y * a.y);
    }
    return b;
  }
  double value(int i, Vec2 x) const { return c[i] + g[i].dot(x); }
  /// bubble = lambda_0 lambda_1 lambda_2 and its gradient.
  double bubble(Vec2 x) const { return value(0, x) * value(1, x) * value(2, x); }
  Vec2 bubble_grad(Vec2 x) const {
    const double l0 = value(0, x), l1 = value(1, x), l2 = value(2, x);
    return g[0] * (l1 * l2) + g[1] * (l0 * l2) + g[2] * (l0 * l1);
  }
};

}  // namespace detail

/// Evaluates the interior moment functionals of element e on a vector field
/// given in physical coordinates. Order: for both components, moments
/// against the scaled local monomials of degree <= k-2; then moments against
/// curl(bubble * x^a y^{k-2-a}) for a = k-2..0.
inline Eigen::VectorXd element_interior_moments(const Mesh& mesh, int e, int k,
                                                const ElementBasis& eb,
                                                const VectorField& field) {
  const int nei = (k + 1) * (k - 1);
  if (nei == 0) return Eigen::VectorXd();
  const Element& el = mesh.elements[e];
  const TriangleQuadrature quad = triangle_quadrature(2 * k + 2);
  const MonomialBasis inner(k - 2);
  std::array<Vec2, 3> vloc;
  for (int i = 0; i < 3; ++i)
    vloc[i] = (mesh.vertices[el.v[i]] - eb.centroid) / eb.h;
  const auto bary = detail::Barycentric::from(vloc);

  Eigen::VectorXd mom = Eigen::VectorXd::Zero(nei);
  const Vec2 a = mesh.vertices[el.v[0]], b = mesh.vertices[el.v[1]],
             c = mesh.vertices[el.v[2]];
  std::vector<double> mv(inner.size());
  for (std::size_t q = 0; q < quad.points.size(); ++q) {
    const Vec2 r = quad.points[q];
    const Vec2 x = a + (b - a) * r.x + (c - a) * r.y;
    const double w = quad.weights[q] * 2.0 * eb.area;  // physical weight
    const Vec2 xl = (x - eb.centroid) / eb.h;
    const Vec2 fv = field(x);
    inner.eval(xl, mv.data());
    int row = 0;
    for (int d = 0; d < 2; ++d)
      for (int j = 0; j < inner.size(); ++j, ++row)
        mom[row] += w / eb.area * (d == 0 ? fv.x : fv.y) * mv[j];
    // curl(bubble * q), q running over homogeneous degree k-2 monomials
    for (int aexp = k - 2; aexp >= 0; --aexp, ++row) {
      const int bexp = k - 2 - aexp;
      const double qv = std::pow(xl.x, aexp) * std::pow(xl.y, bexp);
      const Vec2 qg{aexp == 0 ? 0.0 : aexp * std::pow(xl.x, aexp - 1) * std::pow(xl.y, bexp),
                    bexp == 0 ? 0.0 : bexp * std::pow(xl.x, aexp) * std::pow(xl.y, bexp - 1)};
      const Vec2 grad = bary.bubble_grad(xl) * qv + qg * bary.bubble(xl);
      const Vec2 curl{grad.y, -grad.x};
      mom[row] += w / eb.area * fv.dot(curl);
    }
  }
  return mom;
}

/// Moments of field.n on facet f against the orthonormal facet Legendre
/// basis (global orientation), i.e. the facet-normal dof values of the field.
inline Eigen::VectorXd facet_normal_moments(const Mesh& mesh, int f, int kmax,
                                            const VectorField& field,
                                            int quad_degree) {
  const FacetFrame fr = facet_frame(mesh, f);
  const LineQuadrature quad = line_quadrature(quad_degree);
  Eigen::VectorXd mom = Eigen::VectorXd::Zero(kmax + 1);
  std::vector<double> leg(kmax + 1);
  const double scale = 1.0 / std::sqrt(fr.len);
  for (std::size_t q = 0; q < quad.nodes.size(); ++q) {
    const double s = quad.nodes[q];
    const double w = quad.weights[q] * fr.len;
    legendre01(kmax, s, leg.data());
    const double vn = field(fr.point(s)).dot(fr.n);
    for (int m = 0; m <= kmax; ++m) mom[m] += w * vn * leg[m] * scale;
  }
  return mom;
}

/// Moments of field.t on facet f against the orthonormal facet Legendre
/// basis: the tangential facet dof values (degree k-1 family).
inline Eigen::VectorXd facet_tangential_moments(const Mesh& mesh, int f, int kmax,
                                                const VectorField& field,
                                                int quad_degree) {
  const FacetFrame fr = facet_frame(mesh, f);
  const LineQuadrature quad = line_quadrature(quad_degree);
  Eigen::VectorXd mom = Eigen::VectorXd::Zero(kmax + 1);
  std::vector<double> leg(kmax + 1);
  const double scale = 1.0 / std::sqrt(fr.len);
  for (std::size_t q = 0; q < quad.nodes.size(); ++q) {
    const double s = quad.nodes[q];
    const double w = quad.weights[q] * fr.len;
    legendre01(kmax, s, leg.data());
    const double vt = field(fr.point(s)).dot(fr.t);
    for (int m = 0; m <= kmax; ++m) mom[m] += w * vt * leg[m] * scale;
  }
  return mom;
}

namespace detail {

inline ElementBasis build_element_basis(const Mesh& mesh, int e, int k) {
  ElementBasis eb;
  eb.centroid = mesh.element_centroid(e);
  eb.h = mesh.element_diameter(e);
  eb.area = mesh.element_area(e);

  const MonomialBasis mono(k);
  const int nm = mono.size();
  const int n = 2 * nm;  // dim [P^k]^2
  const Element& el = mesh.elements[e];

  // Monomial vector field j (physical coordinates).
  const auto mono_field = [&](int j) {
    return [&, j](Vec2 x) -> Vec2 {
      const Vec2 xl = (x - eb.centroid) / eb.h;
      const double v = std::pow(xl.x, mono.powers[j % nm][0]) *
                       std::pow(xl.y, mono.powers[j % nm][1]);
      return j < nm ? Vec2{v, 0.0} : Vec2{0.0, v};
    };
  };

  // Generalized Vandermonde: functionals (rows) applied to monomials (cols).
  Eigen::MatrixXd V(n, n);
  const int nei = (k + 1) * (k - 1);
  for (int j = 0; j < n; ++j) {
    const auto field = mono_field(j);
    int row = 0;
    for (int li = 0; li < 3; ++li) {
      const Eigen::VectorXd mom =
          facet_normal_moments(mesh, el.facet[li], k, field, 2 * k + 1);
      for (int m = 0; m <= k; ++m, ++row) V(row, j) = mom[m];
    }
    if (nei > 0) {
      const Eigen::VectorXd mom = element_interior_moments(mesh, e, k, eb, field);
      for (int i = 0; i < nei; ++i, ++row) V(row, j) = mom[i];
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(V);
  if (!lu.isInvertible())
    throw std::runtime_error("build_spaces: element dof functionals are not unisolvent");
  eb.coef = lu.inverse().transpose();
  return eb;
}

}  // namespace detail

inline Spaces build_spaces(const Mesh& mesh, int k) {
  if (k < 1 || k > 6) throw std::invalid_argument("build_spaces: k out of range [1,6]");
  Spaces sp;
  sp.mesh = &mesh;
  sp.k = k;
  sp.nfn = k + 1;
  sp.nft = k;
  sp.nei = (k + 1) * (k - 1);
  sp.nq = k * (k + 1) / 2;
  sp.n_skeleton = mesh.n_facets() * (sp.nfn + sp.nft);
  sp.dim_u = sp.n_skeleton + mesh.n_elements() * sp.nei;
  sp.dim_p = mesh.n_elements() * sp.nq;
  sp.pressure = TriangleOrthoBasis(k - 1);
  sp.basis.reserve(mesh.n_elements());
  for (int e = 0; e < mesh.n_elements(); ++e)
    sp.basis.push_back(detail::build_element_basis(mesh, e, k));
  sp.u_dof_solid.assign(sp.dim_u, 0);
  for (int e = 0; e < mesh.n_elements(); ++e) {
    if (mesh.elements[e].region != Region::Solid) continue;
    for (int dof : sp.element_u_dofs(e)) sp.u_dof_solid[dof] = 1;
  }
  return sp;
}

/// Evaluates the velocity basis of element e at physical points.
inline BasisTable tabulate_basis(const Spaces& sp, int e,
                                 const std::vector<Vec2>& points) {
  const ElementBasis& eb = sp.basis[e];
  const MonomialBasis mono(sp.k);
  const int nm = mono.size();
  const int np = static_cast<int>(points.size());
  Eigen::MatrixXd M(np, nm), Gx(np, nm), Gy(np, nm);
  std::vector<double> mv(nm);
  std::vector<Vec2> mg(nm);
  for (int q = 0; q < np; ++q) {
    const Vec2 xl = (points[q] - eb.centroid) / eb.h;
    mono.eval(xl, mv.data());
    mono.grad(xl, mg.data());
    for (int j = 0; j < nm; ++j) {
      M(q, j) = mv[j];
      Gx(q, j) = mg[j].x / eb.h;  // physical derivatives
      Gy(q, j) = mg[j].y / eb.h;
    }
  }
  const auto cx = eb.coef.leftCols(nm).transpose();
  const auto cy = eb.coef.rightCols(nm).transpose();
  BasisTable t;
  t.vx = M * cx;
  t.vy = M * cy;
  t.div = Gx * cx + Gy * cy;
  t.dxx = Gx * cx;
  t.dyy = Gy * cy;
  t.dxy = 0.5 * (Gy * cx + Gx * cy);
  return t;
}

/// H(div) interpolation: fills the facet-normal and interior dofs with the
/// field's dof functional values (the divergence of the result is the
/// elementwise L2 projection of the field's divergence). Tangential facet
/// dofs are left zero; combine with interpolate_facet_tangential for the
/// compound interpolant.
inline Eigen::VectorXd interpolate_hdiv(const Spaces& sp, const VectorField& field,
                                        int extra_degree = 0) {
  const Mesh& mesh = *sp.mesh;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(sp.dim_u);
  for (int f = 0; f < mesh.n_facets(); ++f) {
    const Eigen::VectorXd mom =
        facet_normal_moments(mesh, f, sp.k, field, 2 * sp.k + 1 + extra_degree);
    for (int m = 0; m < sp.nfn; ++m) u[sp.u_normal_dof(f, m)] = mom[m];
  }
  for (int e = 0; e < mesh.n_elements(); ++e) {
    if (sp.nei == 0) break;
    const Eigen::VectorXd mom =
        element_interior_moments(mesh, e, sp.k, sp.basis[e], field);
    for (int i = 0; i < sp.nei; ++i) u[sp.u_interior_dof(e, i)] = mom[i];
  }
  return u;
}

/// Tangential facet projection: fills the tangential dofs with the facet
/// moments of field.t (the per-facet L2 projection onto degree k-1).
inline Eigen::VectorXd interpolate_facet_tangential(const Spaces& sp,
                                                    const VectorField& field,
                                                    int extra_degree = 0) {
  const Mesh& mesh = *sp.mesh;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(sp.dim_u);
  for (int f = 0; f < mesh.n_facets(); ++f) {
    const Eigen::VectorXd mom = facet_tangential_moments(
        mesh, f, sp.nft - 1, field, 2 * sp.k + 1 + extra_degree);
    for (int m = 0; m < sp.nft; ++m) u[sp.u_tang_dof(f, m)] = mom[m];
  }
  return u;
}

/// Elementwise L2 projection onto the pressure space.
inline Eigen::VectorXd project_pressure(const Spaces& sp, const ScalarField& field,
                                        int extra_degree = 0) {
  const Mesh& mesh = *sp.mesh;
  const TriangleQuadrature quad = triangle_quadrature(2 * sp.k + 2 + extra_degree);
  Eigen::VectorXd p = Eigen::VectorXd::Zero(sp.dim_p);
  std::vector<double> pv(sp.nq);
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const Element& el = mesh.elements[e];
    const Vec2 a = mesh.vertices[el.v[0]], b = mesh.vertices[el.v[1]],
               c = mesh.vertices[el.v[2]];
    const double area = mesh.element_area(e);
    for (std::size_t q = 0; q < quad.points.size(); ++q) {
      const Vec2 r = quad.points[q];
      const Vec2 x = a + (b - a) * r.x + (c - a) * r.y;
      const double w = quad.weights[q] * 2.0 * area;
      sp.pressure.eval(r, pv.data());
      const double g = field(x);
      for (int m = 0; m < sp.nq; ++m) p[sp.p_dof(e, m)] += w * g * pv[m] / area;
    }
  }
  return p;
}

/// Point evaluation of a discrete velocity inside element e.
inline Vec2 evaluate_velocity(const Spaces& sp, const Eigen::VectorXd& u, int e,
                              Vec2 x) {
  const BasisTable t = tabulate_basis(sp, e, {x});
  const std::vector<int> dofs = sp.element_u_dofs(e);
  Vec2 v{0.0, 0.0};
  const int nvb = 3 * sp.nfn + sp.nei;
  for (int i = 0; i < nvb; ++i) {
    const double c = u[dofs[sp.local_of_vbasis(i)]];
    v.x += c * t.vx(0, i);
    v.y += c * t.vy(0, i);
  }
  return v;
}

/// Point evaluation of the elementwise divergence of a discrete velocity.
inline double evaluate_divergence(const Spaces& sp, const Eigen::VectorXd& u, int e,
                                  Vec2 x) {
  const BasisTable t = tabulate_basis(sp, e, {x});
  const std::vector<int> dofs = sp.element_u_dofs(e);
  double d = 0.0;
  const int nvb = 3 * sp.nfn + sp.nei;
  for (int i = 0; i < nvb; ++i) d += u[dofs[sp.local_of_vbasis(i)]] * t.div(0, i);
  return d;
}

/// Point evaluation of a discrete pressure inside element e.
inline double evaluate_pressure(const Spaces& sp, const Eigen::VectorXd& p, int e,
                                Vec2 x) {
  const Mesh& mesh = *sp.mesh;
  const Element& el = mesh.elements[e];
  const Vec2 a = mesh.vertices[el.v[0]], b = mesh.vertices[el.v[1]],
             c = mesh.vertices[el.v[2]];
  // invert the affine map
  const double det = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  const Vec2 d = x - a;
  const Vec2 r{(d.x * (c.y - a.y) - d.y * (c.x - a.x)) / det,
               (d.y * (b.x - a.x) - d.x * (b.y - a.y)) / det};
  std::vector<double> pv(sp.nq);
  sp.pressure.eval(r, pv.data());
  double val = 0.0;
  for (int m = 0; m < sp.nq; ++m) val += p[sp.p_dof(e, m)] * pv[m];
  return val;
}

}  // namespace fsihdg
