#pragma once
// Global system assembly for the coupled fluid-structure scheme.
//
// Both time discretizations (midpoint and the three-step backward scheme)
// solve, once per step, a saddle problem in the new velocity iterate w and a
// pressure p defined on the whole domain:
//
//   [ A  B ] [w]   [r_u]        A = a M_rho + 2 mu_f A_f + (2 mu_s c) A_s
//   [ B' -G] [p] = [r_p],           + (beta_s c) M_s,   c = 1/a
//
// where B couples velocity divergence to pressure, and G is the pressure
// mass scaled by gamma = a / lambda_s on solid elements (zero on fluid
// elements, where the divergence constraint is exact). On the solid the
// pressure unknown is the increment part of the elastic pressure,
// p = -lambda_s c div(w), so the history term lambda_s (div eta, div v)
// stays on the right-hand side. Essential conditions are homogeneous and
// imposed by zeroing rows/columns with a unit diagonal.
//
// Static condensation eliminates, element by element, the interior velocity
// dofs and the non-constant pressure modes; both couple only inside their
// element. For k = 1 there is nothing to eliminate and the reduced system is
// the full one.

#include <Eigen/Sparse>

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsihdg/forms.hpp"

namespace fsihdg {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Essential/natural split of a velocity boundary condition, by component.
/// Essential parts are homogeneous; natural parts contribute loads only.
struct BoundaryCondition {
  bool normal_essential = true;
  bool tangential_essential = true;
};

using BCTable = std::map<std::string, BoundaryCondition>;

/// Unit-coefficient building blocks of the scheme, kept unconstrained; the
/// time stepper uses them for right-hand sides, energy bookkeeping, and
/// diagnostics.
struct SchemeMatrices {
  SpMat mass_rho;   // (rho u, v), density by region
  SpMat mass_unit;  // (u, v)
  SpMat mass_s;     // (u, v) over solid elements
  SpMat hdg_f;      // viscous HDG form over fluid elements (alpha included)
  SpMat hdg_s;      // viscous HDG form over solid elements
  SpMat divdiv_s;   // (div u, div v) over solid elements
  SpMat b_f;        // -(div v, q) over fluid elements, dim_u x dim_p
  SpMat b_s;        // -(div v, q) over solid elements
  Eigen::VectorXd p_area;  // diagonal of the unit pressure mass (element areas)
};

namespace detail {

inline void scatter_symmetric(std::vector<Triplet>& out, const std::vector<int>& g,
                              const Eigen::MatrixXd& local) {
  const int n = static_cast<int>(g.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (g[i] <= g[j]) out.emplace_back(g[i], g[j], local(i, j));
}

inline SpMat symmetric_from_upper(int n, const std::vector<Triplet>& upper) {
  SpMat u(n, n);
  u.setFromTriplets(upper.begin(), upper.end());
  SpMat full;
  full = u.selfadjointView<Eigen::Upper>();
  return full;
}

}  // namespace detail

inline SchemeMatrices assemble_scheme_matrices(const Spaces& sp, const Materials& mat) {
  const Mesh& mesh = *sp.mesh;
  const int du = sp.dim_u, dp = sp.dim_p;
  std::vector<Triplet> t_mrho, t_munit, t_ms, t_hf, t_hs, t_dd, t_bf, t_bs;
  SchemeMatrices m;
  m.p_area = Eigen::VectorXd::Zero(dp);
  for (int e = 0; e < static_cast<int>(mesh.elements.size()); ++e) {
    const bool solid = mesh.elements[e].region == Region::Solid;
    const std::vector<int> g = sp.element_u_dofs(e);
    const double area = mesh.element_area(e);
    const Eigen::MatrixXd mass = local_mass(sp, e);
    const Eigen::MatrixXd hdg = local_hdg_stiffness(sp, e, mat.alpha);
    const Eigen::MatrixXd b = local_mixed_b(sp, e);

    detail::scatter_symmetric(t_munit, g, mass);
    detail::scatter_symmetric(t_mrho, g, mat.rho(mesh.elements[e].region) * mass);
    std::vector<Triplet>& t_h = solid ? t_hs : t_hf;
    detail::scatter_symmetric(t_h, g, hdg);
    if (solid) {
      detail::scatter_symmetric(t_ms, g, mass);
      detail::scatter_symmetric(t_dd, g, local_divdiv(sp, e));
    }
    std::vector<Triplet>& t_b = solid ? t_bs : t_bf;
    for (std::size_t i = 0; i < g.size(); ++i)
      for (int q = 0; q < sp.nq; ++q)
        t_b.emplace_back(g[i], sp.p_dof(e, q), b(i, q));
    for (int q = 0; q < sp.nq; ++q) m.p_area[sp.p_dof(e, q)] = area;
  }
  m.mass_rho = detail::symmetric_from_upper(du, t_mrho);
  m.mass_unit = detail::symmetric_from_upper(du, t_munit);
  m.mass_s = detail::symmetric_from_upper(du, t_ms);
  m.hdg_f = detail::symmetric_from_upper(du, t_hf);
  m.hdg_s = detail::symmetric_from_upper(du, t_hs);
  m.divdiv_s = detail::symmetric_from_upper(du, t_dd);
  m.b_f = SpMat(du, dp);
  m.b_f.setFromTriplets(t_bf.begin(), t_bf.end());
  m.b_s = SpMat(du, dp);
  m.b_s.setFromTriplets(t_bs.begin(), t_bs.end());
  return m;
}

/// Marks every velocity dof fixed by an essential boundary condition.
/// Throws if a boundary part name is missing from the table.
inline std::vector<char> constrained_velocity_dofs(const Spaces& sp, const BCTable& bc) {
  const Mesh& mesh = *sp.mesh;
  std::vector<char> fixed(sp.dim_u, 0);
  for (int f = 0; f < static_cast<int>(mesh.facets.size()); ++f) {
    const Facet& fa = mesh.facets[f];
    if (fa.boundary_tag < 0) continue;
    const std::string& part = mesh.boundary_tag_names[fa.boundary_tag];
    const auto it = bc.find(part);
    if (it == bc.end())
      throw std::invalid_argument("no boundary condition for part '" + part + "'");
    if (it->second.normal_essential)
      for (int m = 0; m < sp.nfn; ++m) fixed[sp.u_normal_dof(f, m)] = 1;
    if (it->second.tangential_essential)
      for (int m = 0; m < sp.nft; ++m) fixed[sp.u_tang_dof(f, m)] = 1;
  }
  return fixed;
}

/// Per-element static condensation data: `elim` are the global ids removed
/// (interior velocity dofs, non-constant pressure modes), `ring` the kept
/// ids they couple to (the element's facet dofs and its mean-pressure dof).
struct ElementElimination {
  std::vector<int> elim;
  std::vector<int> ring;
  Eigen::MatrixXd einv;  // inverse of the eliminated-eliminated block
  Eigen::MatrixXd kre;   // ring-by-eliminated coupling block
};

/// Assembled and constrained one-step operator plus its condensed form.
struct FsiSystem {
  const Spaces* sp = nullptr;
  Materials mat;
  double a = 0;   // leading time-derivative coefficient
  double c = 0;   // 1/a
  double dt = 0;
  SchemeMatrices raw;
  BCTable bc;
  std::vector<char> u_constrained;
  Eigen::VectorXd gamma_elem;  // pressure relaxation a/lambda_s per element
  SpMat K;                     // full operator, dim (dim_u + dim_p)

  // condensation
  std::vector<int> kept;           // kept global ids, ascending
  std::vector<int> reduced_index;  // global id -> reduced id or -1
  std::vector<ElementElimination> elim;
  SpMat S;          // reduced operator
  int n_kept_u = 0; // facet velocity dofs come first in the reduced layout

  int dim_u() const { return sp->dim_u; }
  int dim_p() const { return sp->dim_p; }
  int dim_full() const { return sp->dim_u + sp->dim_p; }
  int dim_reduced() const { return static_cast<int>(kept.size()); }

  /// Folds the eliminated dofs of the right-hand side into the kept ones.
  Eigen::VectorXd reduce_rhs(const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd r(dim_reduced());
    for (int i = 0; i < dim_reduced(); ++i) r[i] = rhs[kept[i]];
    for (const ElementElimination& el : elim) {
      if (el.elim.empty()) continue;
      Eigen::VectorXd re(el.elim.size());
      for (std::size_t i = 0; i < el.elim.size(); ++i) re[i] = rhs[el.elim[i]];
      const Eigen::VectorXd corr = el.kre * (el.einv * re);
      for (std::size_t i = 0; i < el.ring.size(); ++i)
        r[reduced_index[el.ring[i]]] -= corr[i];
    }
    return r;
  }

  /// Recovers the full solution from the reduced one and the full rhs.
  Eigen::VectorXd expand_solution(const Eigen::VectorXd& x_red,
                                  const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(dim_full());
    for (int i = 0; i < dim_reduced(); ++i) x[kept[i]] = x_red[i];
    for (const ElementElimination& el : elim) {
      if (el.elim.empty()) continue;
      Eigen::VectorXd re(el.elim.size());
      for (std::size_t i = 0; i < el.elim.size(); ++i) re[i] = rhs[el.elim[i]];
      Eigen::VectorXd xr(el.ring.size());
      for (std::size_t i = 0; i < el.ring.size(); ++i) xr[i] = x[el.ring[i]];
      const Eigen::VectorXd xe = el.einv * (re - el.kre.transpose() * xr);
      for (std::size_t i = 0; i < el.elim.size(); ++i) x[el.elim[i]] = xe[i];
    }
    return x;
  }
};

namespace detail {

inline void condense(FsiSystem& sys) {
  const Spaces& sp = *sys.sp;
  const Mesh& mesh = *sp.mesh;
  const int n_full = sys.dim_full();
  const int n_elem = static_cast<int>(mesh.elements.size());

  std::vector<char> eliminated(n_full, 0);
  sys.elim.resize(n_elem);
  for (int e = 0; e < n_elem; ++e) {
    ElementElimination& el = sys.elim[e];
    for (int i = 0; i < sp.nei; ++i) el.elim.push_back(sp.u_interior_dof(e, i));
    for (int m = 1; m < sp.nq; ++m) el.elim.push_back(sp.dim_u + sp.p_dof(e, m));
    for (int id : el.elim) eliminated[id] = 1;
    const std::vector<int> g = sp.element_u_dofs(e);
    el.ring.assign(g.begin(), g.begin() + 3 * (sp.nfn + sp.nft));
    el.ring.push_back(sp.dim_u + sp.p_dof(e, 0));
  }

  sys.kept.clear();
  sys.reduced_index.assign(n_full, -1);
  for (int i = 0; i < n_full; ++i)
    if (!eliminated[i]) {
      sys.reduced_index[i] = static_cast<int>(sys.kept.size());
      sys.kept.push_back(i);
    }
  sys.n_kept_u = sp.n_skeleton;

  std::vector<Triplet> upper;
  for (int j = 0; j < sys.K.outerSize(); ++j) {
    if (eliminated[j]) continue;
    for (SpMat::InnerIterator it(sys.K, j); it; ++it) {
      const int i = static_cast<int>(it.row());
      if (eliminated[i] || i > j) continue;
      upper.emplace_back(sys.reduced_index[i], sys.reduced_index[j], it.value());
    }
  }

  for (int e = 0; e < n_elem; ++e) {
    ElementElimination& el = sys.elim[e];
    const int ne = static_cast<int>(el.elim.size());
    if (ne == 0) continue;
    const int nr = static_cast<int>(el.ring.size());
    std::map<int, int> le;
    for (int i = 0; i < ne; ++i) le[el.elim[i]] = i;
    std::map<int, int> lr;
    for (int i = 0; i < nr; ++i) lr[el.ring[i]] = i;

    Eigen::MatrixXd kee = Eigen::MatrixXd::Zero(ne, ne);
    el.kre = Eigen::MatrixXd::Zero(nr, ne);
    for (int jj = 0; jj < ne; ++jj)
      for (SpMat::InnerIterator it(sys.K, el.elim[jj]); it; ++it) {
        const int i = static_cast<int>(it.row());
        const auto ie = le.find(i);
        if (ie != le.end()) {
          kee(ie->second, jj) = it.value();
          continue;
        }
        const auto ir = lr.find(i);
        if (ir != lr.end())
          el.kre(ir->second, jj) = it.value();
        else
          throw std::logic_error("eliminated dof couples outside its element");
      }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(kee);
    el.einv = lu.inverse();
    el.einv = (0.5 * (el.einv + el.einv.transpose())).eval();
    Eigen::MatrixXd corr = el.kre * el.einv * el.kre.transpose();
    corr = (0.5 * (corr + corr.transpose())).eval();
    for (int ai = 0; ai < nr; ++ai)
      for (int bi = 0; bi < nr; ++bi) {
        const int ra = sys.reduced_index[el.ring[ai]];
        const int rb = sys.reduced_index[el.ring[bi]];
        if (ra <= rb) upper.emplace_back(ra, rb, -corr(ai, bi));
      }
  }

  SpMat up(sys.dim_reduced(), sys.dim_reduced());
  up.setFromTriplets(upper.begin(), upper.end());
  sys.S = up.selfadjointView<Eigen::Upper>();
}

}  // namespace detail

/// Assembles the constrained one-step operator for leading time coefficient
/// `a` (2/dt for the midpoint scheme, 11/(6 dt) for the three-step backward
/// scheme) and condenses it.
inline FsiSystem build_system(const Spaces& sp, const Materials& mat, double dt,
                              double a, const BCTable& bc) {
  if (dt <= 0 || a <= 0) throw std::invalid_argument("time coefficients must be positive");
  FsiSystem sys;
  sys.sp = &sp;
  sys.mat = mat;
  sys.dt = dt;
  sys.a = a;
  sys.c = 1.0 / a;
  sys.raw = assemble_scheme_matrices(sp, mat);
  sys.bc = bc;
  sys.u_constrained = constrained_velocity_dofs(sp, bc);

  const Mesh& mesh = *sp.mesh;
  const int n_elem = static_cast<int>(mesh.elements.size());
  sys.gamma_elem = Eigen::VectorXd::Zero(n_elem);
  for (int e = 0; e < n_elem; ++e)
    if (mesh.elements[e].region == Region::Solid)
      sys.gamma_elem[e] = a / mat.lambda_s;

  SpMat kuu = sys.a * sys.raw.mass_rho + (2.0 * mat.mu_f) * sys.raw.hdg_f +
              (2.0 * mat.mu_s * sys.c) * sys.raw.hdg_s;
  if (mat.beta_s != 0.0) kuu = (kuu + (mat.beta_s * sys.c) * sys.raw.mass_s).eval();
  const SpMat b_all = sys.raw.b_f + sys.raw.b_s;

  const int du = sp.dim_u, n_full = du + sp.dim_p;
  std::vector<Triplet> upper;
  for (int j = 0; j < kuu.outerSize(); ++j)
    for (SpMat::InnerIterator it(kuu, j); it; ++it) {
      const int i = static_cast<int>(it.row());
      if (i > j) continue;
      if (sys.u_constrained[i] || sys.u_constrained[j]) continue;
      upper.emplace_back(i, j, it.value());
    }
  for (int i = 0; i < du; ++i)
    if (sys.u_constrained[i]) upper.emplace_back(i, i, 1.0);
  for (int j = 0; j < b_all.outerSize(); ++j)
    for (SpMat::InnerIterator it(b_all, j); it; ++it) {
      const int i = static_cast<int>(it.row());
      if (sys.u_constrained[i]) continue;
      upper.emplace_back(i, du + j, it.value());
    }
  for (int e = 0; e < n_elem; ++e)
    if (sys.gamma_elem[e] != 0.0)
      for (int m = 0; m < sp.nq; ++m) {
        const int i = du + sp.p_dof(e, m);
        upper.emplace_back(i, i, -sys.gamma_elem[e] * sys.raw.p_area[sp.p_dof(e, m)]);
      }
  sys.K = detail::symmetric_from_upper(n_full, upper);
  detail::condense(sys);
  return sys;
}

/// Operator of the equivalent formulation that keeps the solid volumetric
/// term lambda_s c (div w, div v) explicit and carries a pressure unknown in
/// the fluid only; solid pressure rows become decoupled unit rows. Used to
/// validate the pressure elimination algebraically.
inline SpMat uneliminated_operator(const FsiSystem& sys) {
  const Spaces& sp = *sys.sp;
  const Mesh& mesh = *sp.mesh;
  const Materials& mat = sys.mat;
  SpMat kuu = sys.a * sys.raw.mass_rho + (2.0 * mat.mu_f) * sys.raw.hdg_f +
              (2.0 * mat.mu_s * sys.c) * sys.raw.hdg_s +
              (mat.lambda_s * sys.c) * sys.raw.divdiv_s;
  if (mat.beta_s != 0.0) kuu = (kuu + (mat.beta_s * sys.c) * sys.raw.mass_s).eval();

  const int du = sp.dim_u, n_full = du + sp.dim_p;
  std::vector<Triplet> upper;
  for (int j = 0; j < kuu.outerSize(); ++j)
    for (SpMat::InnerIterator it(kuu, j); it; ++it) {
      const int i = static_cast<int>(it.row());
      if (i > j) continue;
      if (sys.u_constrained[i] || sys.u_constrained[j]) continue;
      upper.emplace_back(i, j, it.value());
    }
  for (int i = 0; i < du; ++i)
    if (sys.u_constrained[i]) upper.emplace_back(i, i, 1.0);
  for (int j = 0; j < sys.raw.b_f.outerSize(); ++j)
    for (SpMat::InnerIterator it(sys.raw.b_f, j); it; ++it) {
      const int i = static_cast<int>(it.row());
      if (sys.u_constrained[i]) continue;
      upper.emplace_back(i, du + j, it.value());
    }
  for (int e = 0; e < static_cast<int>(mesh.elements.size()); ++e)
    if (mesh.elements[e].region == Region::Solid)
      for (int m = 0; m < sp.nq; ++m) {
        const int i = du + sp.p_dof(e, m);
        upper.emplace_back(i, i, 1.0);
      }
  return detail::symmetric_from_upper(n_full, upper);
}

/// Right-hand side of the history terms: r_u = M_rho u_combo
///   - 2 mu_s A_s eta - lambda_s DD_s eta - beta_s M_s eta, r_p = 0,
/// with essential rows zeroed. Loads are added separately.
inline Eigen::VectorXd history_rhs(const FsiSystem& sys, const Eigen::VectorXd& u_combo,
                                   const Eigen::VectorXd& eta_hist) {
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(sys.dim_full());
  rhs.head(sys.dim_u()) = sys.raw.mass_rho * u_combo -
                          (2.0 * sys.mat.mu_s) * (sys.raw.hdg_s * eta_hist) -
                          sys.mat.lambda_s * (sys.raw.divdiv_s * eta_hist);
  if (sys.mat.beta_s != 0.0)
    rhs.head(sys.dim_u()) -= sys.mat.beta_s * (sys.raw.mass_s * eta_hist);
  return rhs;
}

/// Zeroes the essential-condition rows of a full right-hand side.
inline void apply_constraints(const FsiSystem& sys, Eigen::VectorXd& rhs) {
  for (int i = 0; i < sys.dim_u(); ++i)
    if (sys.u_constrained[i]) rhs[i] = 0.0;
}

/// Adds region-wise body-force loads to the velocity rows.
inline void add_volume_loads(const Spaces& sp, const VectorField& f_fluid,
                             const VectorField& f_solid, Eigen::VectorXd& rhs) {
  const Mesh& mesh = *sp.mesh;
  for (int e = 0; e < static_cast<int>(mesh.elements.size()); ++e) {
    const bool solid = mesh.elements[e].region == Region::Solid;
    const VectorField& f = solid ? f_solid : f_fluid;
    if (!f) continue;
    const Eigen::VectorXd local = local_volume_load(sp, e, f);
    const std::vector<int> g = sp.element_u_dofs(e);
    for (std::size_t i = 0; i < g.size(); ++i) rhs[g[i]] += local[i];
  }
}

/// Adds the interface load <g, (v.n) n + vhat> over all interface facets.
inline void add_interface_load(const Spaces& sp, const VectorField& g,
                               Eigen::VectorXd& rhs) {
  if (!g) return;
  const Mesh& mesh = *sp.mesh;
  for (int f = 0; f < static_cast<int>(mesh.facets.size()); ++f)
    if (mesh.facets[f].interface) add_facet_vector_load(sp, f, g, rhs);
}

/// Adds the natural normal-traction load of one named boundary part.
inline void add_boundary_normal_traction(const Spaces& sp, const std::string& part,
                                         const ScalarField& s, Eigen::VectorXd& rhs) {
  if (!s) return;
  const Mesh& mesh = *sp.mesh;
  int tag = -1;
  for (std::size_t t = 0; t < mesh.boundary_tag_names.size(); ++t)
    if (mesh.boundary_tag_names[t] == part) tag = static_cast<int>(t);
  if (tag < 0) throw std::invalid_argument("unknown boundary part '" + part + "'");
  for (int f = 0; f < static_cast<int>(mesh.facets.size()); ++f)
    if (mesh.facets[f].boundary_tag == tag)
      add_facet_normal_traction_load(sp, f, s, rhs);
}

}  // namespace fsihdg
