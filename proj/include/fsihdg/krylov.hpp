#pragma once
// Iterative solvers and the block preconditioner for the one-step saddle
// system. The reduced operator is symmetric indefinite and is solved with
// preconditioned MinRes; the preconditioner is block diagonal,
//
//   P = diag(iA, iS),
//
// with iA an approximation of the inverse of the velocity block (exact
// factorization, or a symmetrized Gauss-Seidel sweep plus a continuous
// piecewise-linear auxiliary-space correction), and iS the pressure Schur
// approximation combining a scaled mass inverse with the inverse of a
// jump-stabilized pressure matrix.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "fsihdg/random.hpp"
#include "fsihdg/system.hpp"

namespace fsihdg {

using SpMatRow = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// ---------------------------------------------------------------------------
// direct factorizations

/// Thin wrapper over a sparse factorization: robust Cholesky for symmetric
/// positive definite matrices, LU for general (saddle) ones.
class SparseFactorization {
 public:
  enum class Kind { SymmetricPositive, General };

  SparseFactorization(const SpMat& a, Kind kind) : kind_(kind) {
    if (kind == Kind::SymmetricPositive) {
      ldlt_ = std::make_unique<Eigen::SimplicialLDLT<SpMat>>();
      ldlt_->compute(a);
      if (ldlt_->info() != Eigen::Success)
        throw std::runtime_error("symmetric factorization failed");
    } else {
      lu_ = std::make_unique<Eigen::SparseLU<SpMat>>();
      lu_->compute(a);
      if (lu_->info() != Eigen::Success)
        throw std::runtime_error("sparse LU factorization failed");
    }
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
    return kind_ == Kind::SymmetricPositive ? ldlt_->solve(b).eval() : lu_->solve(b).eval();
  }

 private:
  Kind kind_;
  std::unique_ptr<Eigen::SimplicialLDLT<SpMat>> ldlt_;
  std::unique_ptr<Eigen::SparseLU<SpMat>> lu_;
};

// ---------------------------------------------------------------------------
// relaxation

namespace detail {

inline void forward_gauss_seidel(const SpMatRow& a, const Eigen::VectorXd& rhs,
                                 Eigen::VectorXd& x) {
  const int n = static_cast<int>(a.rows());
  for (int i = 0; i < n; ++i) {
    double s = rhs[i];
    double d = 0;
    for (SpMatRow::InnerIterator it(a, i); it; ++it) {
      const int j = static_cast<int>(it.col());
      if (j == i)
        d = it.value();
      else
        s -= it.value() * x[j];
    }
    x[i] = s / d;
  }
}

inline void backward_gauss_seidel(const SpMatRow& a, const Eigen::VectorXd& rhs,
                                  Eigen::VectorXd& x) {
  const int n = static_cast<int>(a.rows());
  for (int i = n - 1; i >= 0; --i) {
    double s = rhs[i];
    double d = 0;
    for (SpMatRow::InnerIterator it(a, i); it; ++it) {
      const int j = static_cast<int>(it.col());
      if (j == i)
        d = it.value();
      else
        s -= it.value() * x[j];
    }
    x[i] = s / d;
  }
}

}  // namespace detail

/// Symmetrized Gauss-Seidel preconditioner (D+L)^-T D (D+L)^-1 of a
/// symmetric matrix with nonzero diagonal; positive definite when the
/// matrix is.
class SymmetrizedGaussSeidel {
 public:
  explicit SymmetrizedGaussSeidel(const SpMat& a) : a_(a) {
    for (int i = 0; i < a_.rows(); ++i)
      if (a_.coeff(i, i) == 0.0)
        throw std::invalid_argument("Gauss-Seidel needs a nonzero diagonal");
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& r) const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(r.size());
    detail::forward_gauss_seidel(a_, r, x);
    // x solves (D+L) x = r; feed D x through the transposed sweep.
    Eigen::VectorXd t(r.size());
    for (int i = 0; i < a_.rows(); ++i) t[i] = a_.coeff(i, i) * x[i];
    Eigen::VectorXd y = Eigen::VectorXd::Zero(r.size());
    detail::backward_gauss_seidel(a_, t, y);
    return y;
  }

 private:
  SpMatRow a_;
};

// ---------------------------------------------------------------------------
// Krylov iterations

struct KrylovResult {
  Eigen::VectorXd x;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;  // preconditioned residual norms per iteration
};

/// Preconditioned MinRes for a symmetric operator and a symmetric positive
/// definite preconditioner, with zero initial guess. Stops when the
/// preconditioned residual norm drops below tol times its initial value.
template <class Op, class Prec>
KrylovResult minres(const Op& apply_a, const Prec& apply_m, const Eigen::VectorXd& b,
                    double tol, int max_iterations) {
  KrylovResult out;
  const int n = static_cast<int>(b.size());
  out.x = Eigen::VectorXd::Zero(n);

  Eigen::VectorXd r1 = b;
  Eigen::VectorXd y = apply_m(r1);
  double beta1 = r1.dot(y);
  if (beta1 < 0) throw std::runtime_error("preconditioner is not positive definite");
  if (beta1 == 0) {
    out.converged = true;
    return out;
  }
  beta1 = std::sqrt(beta1);

  double oldb = 0, beta = beta1, dbar = 0, epsln = 0, phibar = beta1;
  double cs = -1, sn = 0;
  Eigen::VectorXd r2 = r1;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd w2 = Eigen::VectorXd::Zero(n);

  for (int itn = 1; itn <= max_iterations; ++itn) {
    const double s = 1.0 / beta;
    const Eigen::VectorXd v = s * y;
    y = apply_a(v);
    if (itn >= 2) y -= (beta / oldb) * r1;
    const double alfa = v.dot(y);
    y -= (alfa / beta) * r2;
    r1 = r2;
    r2 = y;
    y = apply_m(r2);
    oldb = beta;
    beta = r2.dot(y);
    if (beta < 0) throw std::runtime_error("preconditioner is not positive definite");
    beta = std::sqrt(beta);

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    double gamma = std::sqrt(gbar * gbar + beta * beta);
    gamma = std::max(gamma, 1e-300);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    const Eigen::VectorXd w1 = w2;
    w2 = w;
    w = (v - oldeps * w1 - delta * w2) / gamma;
    out.x += phi * w;
    out.iterations = itn;
    out.history.push_back(phibar);
    if (phibar <= tol * beta1) {
      out.converged = true;
      break;
    }
  }
  return out;
}

/// Preconditioned conjugate gradients; stops on ||r|| <= tol ||b||.
template <class Op, class Prec>
KrylovResult conjugate_gradient(const Op& apply_a, const Prec& apply_m,
                                const Eigen::VectorXd& b, double tol,
                                int max_iterations) {
  KrylovResult out;
  const int n = static_cast<int>(b.size());
  out.x = Eigen::VectorXd::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0) {
    out.converged = true;
    return out;
  }
  Eigen::VectorXd r = b;
  Eigen::VectorXd z = apply_m(r);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  for (int itn = 1; itn <= max_iterations; ++itn) {
    const Eigen::VectorXd q = apply_a(p);
    const double alpha = rz / p.dot(q);
    out.x += alpha * p;
    r -= alpha * q;
    out.iterations = itn;
    out.history.push_back(r.norm());
    if (r.norm() <= tol * bnorm) {
      out.converged = true;
      break;
    }
    z = apply_m(r);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  return out;
}

/// Largest relative asymmetry |x'Ay - y'Ax| observed over a few fixed-seed
/// random probes; cheap guard that an operator wired into MinRes really is
/// symmetric.
template <class Op>
double symmetry_defect(const Op& apply_a, int n, int probes = 3,
                       std::uint64_t seed = 0x5eedULL) {
  Xorshift64 rng(seed);
  double worst = 0;
  for (int t = 0; t < probes; ++t) {
    Eigen::VectorXd x(n), y(n);
    for (int i = 0; i < n; ++i) x[i] = rng.symmetric();
    for (int i = 0; i < n; ++i) y[i] = rng.symmetric();
    const Eigen::VectorXd ax = apply_a(x), ay = apply_a(y);
    const double defect = std::abs(x.dot(ay) - y.dot(ax));
    const double scale = ax.norm() * y.norm() + ay.norm() * x.norm() + 1e-300;
    worst = std::max(worst, defect / scale);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// aggregation-based algebraic multigrid

struct AmgOptions {
  double strength = 0.08;   // strong if |a_ij| >= strength sqrt(a_ii a_jj)
  int max_coarse = 64;      // dense direct solve below this size
  int max_levels = 25;
  double omega_factor = 4.0 / 3.0;  // prolongation smoothing: omega_factor/lambda_max
  int power_iterations = 12;
};

/// Smoothed-aggregation multigrid V-cycle for a symmetric positive definite
/// matrix. One apply runs a single V(1,1) cycle with forward/backward
/// Gauss-Seidel smoothing, which is a symmetric positive operation.
class Amg {
 public:
  explicit Amg(const SpMat& a, AmgOptions opts = {}) : opts_(opts) {
    SpMat level = a;
    while (static_cast<int>(level.rows()) > opts_.max_coarse &&
           static_cast<int>(a_.size()) < opts_.max_levels) {
      a_.push_back(SpMatRow(level));
      SpMat p = prolongation(level);
      if (p.cols() >= p.rows()) {
        a_.pop_back();
        break;  // aggregation stalled; solve this level directly
      }
      p_.push_back(p);
      level = (p.transpose() * level * p).pruned();
    }
    coarse_dim_ = static_cast<int>(level.rows());
    coarse_ = Eigen::PartialPivLU<Eigen::MatrixXd>(Eigen::MatrixXd(level));
  }

  int levels() const { return static_cast<int>(a_.size()) + 1; }

  /// One V-cycle applied to r (zero initial guess).
  Eigen::VectorXd apply(const Eigen::VectorXd& r) const { return cycle(0, r); }

 private:
  Eigen::VectorXd cycle(int l, const Eigen::VectorXd& r) const {
    if (l == static_cast<int>(a_.size()))
      return coarse_.solve(r);
    const SpMatRow& a = a_[l];
    Eigen::VectorXd x = Eigen::VectorXd::Zero(r.size());
    detail::forward_gauss_seidel(a, r, x);
    const Eigen::VectorXd res = r - a * x;
    const Eigen::VectorXd xc = cycle(l + 1, p_[l].transpose() * res);
    x += p_[l] * xc;
    detail::backward_gauss_seidel(a, r, x);
    return x;
  }

  /// Greedy strength-based aggregation followed by damped-Jacobi smoothing
  /// of the piecewise-constant tentative prolongation.
  SpMat prolongation(const SpMat& a) const {
    const int n = static_cast<int>(a.rows());
    Eigen::VectorXd diag(n);
    for (int i = 0; i < n; ++i) diag[i] = a.coeff(i, i);

    std::vector<std::vector<int>> strong(n);
    for (int j = 0; j < a.outerSize(); ++j)
      for (SpMat::InnerIterator it(a, j); it; ++it) {
        const int i = static_cast<int>(it.row());
        if (i == j) continue;
        if (std::abs(it.value()) >=
            opts_.strength * std::sqrt(std::abs(diag[i] * diag[j])))
          strong[i].push_back(j);
      }

    std::vector<int> agg(n, -1);
    int n_agg = 0;
    for (int i = 0; i < n; ++i) {
      if (agg[i] >= 0) continue;
      bool free_nbhd = true;
      for (int j : strong[i])
        if (agg[j] >= 0) free_nbhd = false;
      if (!free_nbhd) continue;
      agg[i] = n_agg;
      for (int j : strong[i]) agg[j] = n_agg;
      ++n_agg;
    }
    for (int i = 0; i < n; ++i) {
      if (agg[i] >= 0) continue;
      for (int j : strong[i])
        if (agg[j] >= 0) {
          agg[i] = agg[j];
          break;
        }
    }
    for (int i = 0; i < n; ++i)
      if (agg[i] < 0) agg[i] = n_agg++;

    std::vector<Triplet> tent;
    tent.reserve(n);
    for (int i = 0; i < n; ++i) tent.emplace_back(i, agg[i], 1.0);
    SpMat p0(n, n_agg);
    p0.setFromTriplets(tent.begin(), tent.end());

    // Estimate the top eigenvalue of D^-1 A through its symmetrized twin.
    Eigen::VectorXd dinv_sqrt = diag.cwiseAbs().cwiseSqrt().cwiseInverse();
    Xorshift64 rng(0xa66eULL);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.symmetric();
    v.normalize();
    double lambda = 1.0;
    for (int it = 0; it < opts_.power_iterations; ++it) {
      Eigen::VectorXd w = dinv_sqrt.asDiagonal() *
                          (a * (dinv_sqrt.asDiagonal() * v)).eval();
      lambda = std::max(w.norm(), 1e-12);
      v = w / lambda;
    }
    const double omega = opts_.omega_factor / lambda;

    const Eigen::VectorXd dinv = diag.cwiseInverse();
    SpMat ap = a * p0;
    for (int c = 0; c < ap.outerSize(); ++c)
      for (SpMat::InnerIterator it(ap, c); it; ++it)
        it.valueRef() *= dinv[it.row()];
    return (p0 - omega * ap).pruned();
  }

  AmgOptions opts_;
  std::vector<SpMatRow> a_;
  std::vector<SpMat> p_;
  Eigen::PartialPivLU<Eigen::MatrixXd> coarse_;
  int coarse_dim_ = 0;
};

// ---------------------------------------------------------------------------
// auxiliary continuous space for the velocity block

/// Continuous piecewise-linear vector space on the mesh vertices carrying a
/// conforming analogue of the velocity block, plus the moment-matching map
/// into the facet velocity dofs.
struct AuxiliarySpace {
  SpMat op;                       // constrained P1 operator, 2 n_vertices square
  SpMat transfer;                 // n_kept_u x 2 n_vertices
  std::vector<char> vertex_fixed; // per scalar vertex dof
};

inline AuxiliarySpace build_auxiliary_space(const FsiSystem& sys) {
  const Spaces& sp = *sys.sp;
  const Mesh& mesh = *sp.mesh;
  const int nv = static_cast<int>(mesh.vertices.size());
  AuxiliarySpace aux;
  aux.vertex_fixed.assign(2 * nv, 0);

  // vertex constraints mirroring the essential velocity conditions
  for (int f = 0; f < static_cast<int>(mesh.facets.size()); ++f) {
    const Facet& fa = mesh.facets[f];
    if (fa.boundary_tag < 0) continue;
    const BoundaryCondition b = sys.bc.at(mesh.boundary_tag_names[fa.boundary_tag]);
    const FacetFrame fr = facet_frame(mesh, f);
    for (const int v : {fa.v0, fa.v1}) {
      auto fix_direction = [&](const Vec2& d) {
        if (std::abs(d.x) > 0.99)
          aux.vertex_fixed[2 * v] = 1;
        else if (std::abs(d.y) > 0.99)
          aux.vertex_fixed[2 * v + 1] = 1;
        else {  // oblique boundary: constrain the whole vertex
          aux.vertex_fixed[2 * v] = 1;
          aux.vertex_fixed[2 * v + 1] = 1;
        }
      };
      if (b.normal_essential) fix_direction(fr.n);
      if (b.tangential_essential) fix_direction(fr.t);
    }
  }

  // operator: a (rho u, v) [+ beta_s c on the solid] + 2 (mu~ D(u), D(v))
  std::vector<Triplet> upper;
  for (int e = 0; e < static_cast<int>(mesh.elements.size()); ++e) {
    const Element& el = mesh.elements[e];
    const bool solid = el.region == Region::Solid;
    const double area = mesh.element_area(e);
    const double mu = solid ? sys.mat.mu_s * sys.c : sys.mat.mu_f;
    const double mass_coef =
        sys.a * sys.mat.rho(el.region) + (solid ? sys.mat.beta_s * sys.c : 0.0);
    const auto bc3 = detail::Barycentric::from(
        {mesh.vertices[el.v[0]], mesh.vertices[el.v[1]], mesh.vertices[el.v[2]]});
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double mij = mass_coef * area * (i == j ? 1.0 / 6.0 : 1.0 / 12.0);
        const double gg = bc3.g[i].dot(bc3.g[j]);
        for (int ki = 0; ki < 2; ++ki)
          for (int kj = 0; kj < 2; ++kj) {
            const int gi = 2 * el.v[i] + ki, gj = 2 * el.v[j] + kj;
            if (gi > gj) continue;
            if (aux.vertex_fixed[gi] || aux.vertex_fixed[gj]) continue;
            // sym(e_ki g_i') : sym(e_kj g_j') integrated over the element
            const double gi_kj = kj == 0 ? bc3.g[i].x : bc3.g[i].y;
            const double gj_ki = ki == 0 ? bc3.g[j].x : bc3.g[j].y;
            double val = mu * area * ((ki == kj ? gg : 0.0) + gi_kj * gj_ki);
            if (ki == kj) val += mij;
            upper.emplace_back(gi, gj, val);
          }
      }
  }
  for (int i = 0; i < 2 * nv; ++i)
    if (aux.vertex_fixed[i]) upper.emplace_back(i, i, 1.0);
  aux.op = detail::symmetric_from_upper(2 * nv, upper);

  // moment-matching transfer into the facet dofs: a linear trace has only
  // the first two Legendre moments.
  std::vector<Triplet> tp;
  for (int f = 0; f < static_cast<int>(mesh.facets.size()); ++f) {
    const Facet& fa = mesh.facets[f];
    const FacetFrame fr = facet_frame(mesh, f);
    const double sq = std::sqrt(fr.len);
    const double m1 = std::sqrt(3.0) / 6.0;
    auto add = [&](int row, const Vec2& d, double ca, double cb) {
      if (sys.u_constrained[row]) return;
      const double comp[2] = {d.x, d.y};
      for (int kcomp = 0; kcomp < 2; ++kcomp) {
        const int ga = 2 * fa.v0 + kcomp, gb = 2 * fa.v1 + kcomp;
        if (!aux.vertex_fixed[ga] && ca * comp[kcomp] != 0.0)
          tp.emplace_back(row, ga, ca * comp[kcomp]);
        if (!aux.vertex_fixed[gb] && cb * comp[kcomp] != 0.0)
          tp.emplace_back(row, gb, cb * comp[kcomp]);
      }
    };
    add(sp.u_normal_dof(f, 0), fr.n, sq / 2.0, sq / 2.0);
    if (sp.nfn > 1) add(sp.u_normal_dof(f, 1), fr.n, -sq * m1, sq * m1);
    add(sp.u_tang_dof(f, 0), fr.t, sq / 2.0, sq / 2.0);
    if (sp.nft > 1) add(sp.u_tang_dof(f, 1), fr.t, -sq * m1, sq * m1);
  }
  aux.transfer = SpMat(sp.n_skeleton, 2 * nv);
  aux.transfer.setFromTriplets(tp.begin(), tp.end());
  return aux;
}

// ---------------------------------------------------------------------------
// pressure Schur approximation

/// Diagonal of the viscosity/relaxation-scaled pressure mass on the reduced
/// (mean-per-element) pressure space: entry (1/mu~ + gamma) |K|.
inline Eigen::VectorXd schur_mass_diag(const FsiSystem& sys) {
  const Mesh& mesh = *sys.sp->mesh;
  const int n = static_cast<int>(mesh.elements.size());
  Eigen::VectorXd d(n);
  for (int e = 0; e < n; ++e) {
    const bool solid = mesh.elements[e].region == Region::Solid;
    const double mu = solid ? sys.mat.mu_s * sys.c : sys.mat.mu_f;
    d[e] = (1.0 / mu + sys.gamma_elem[e]) * mesh.element_area(e);
  }
  return d;
}

/// Marks boundary facets whose part has a natural normal condition; those
/// facets augment the pressure jump matrix.
inline std::vector<char> natural_normal_facets(const FsiSystem& sys) {
  const Mesh& mesh = *sys.sp->mesh;
  std::vector<char> out(mesh.facets.size(), 0);
  for (int f = 0; f < static_cast<int>(mesh.facets.size()); ++f) {
    const Facet& fa = mesh.facets[f];
    if (fa.boundary_tag < 0) continue;
    if (!sys.bc.at(mesh.boundary_tag_names[fa.boundary_tag]).normal_essential)
      out[f] = 1;
  }
  return out;
}

/// Jump-stabilized pressure matrix on the mean-per-element space:
///   N(p, q) = sum_e gamma_e |K_e| p_e q_e
///     + (dt/2) sum_{interior F} ((1/rho+ + 1/rho-)/h_F) int_F [p][q]
///     + sum_{natural-normal F} (1/(rho h_F)) int_F p q,
/// with h_F the facet length.
inline SpMat schur_pressure_jump_matrix(const FsiSystem& sys) {
  const Mesh& mesh = *sys.sp->mesh;
  const int n = static_cast<int>(mesh.elements.size());
  const std::vector<char> augmented = natural_normal_facets(sys);
  std::vector<Triplet> tr;
  for (int e = 0; e < n; ++e)
    if (sys.gamma_elem[e] != 0.0)
      tr.emplace_back(e, e, sys.gamma_elem[e] * mesh.element_area(e));
  for (int f = 0; f < static_cast<int>(mesh.facets.size()); ++f) {
    const Facet& fa = mesh.facets[f];
    const double len = mesh.facet_length(f);
    const double h = len;
    if (fa.elem[1] >= 0) {
      const double rho0 = sys.mat.rho(mesh.elements[fa.elem[0]].region);
      const double rho1 = sys.mat.rho(mesh.elements[fa.elem[1]].region);
      const double w = 0.5 * sys.dt * (1.0 / rho0 + 1.0 / rho1) * len / h;
      tr.emplace_back(fa.elem[0], fa.elem[0], w);
      tr.emplace_back(fa.elem[1], fa.elem[1], w);
      tr.emplace_back(fa.elem[0], fa.elem[1], -w);
      tr.emplace_back(fa.elem[1], fa.elem[0], -w);
    } else if (augmented[f]) {
      const double rho = sys.mat.rho(mesh.elements[fa.elem[0]].region);
      tr.emplace_back(fa.elem[0], fa.elem[0], len / (rho * h));
    }
  }
  SpMat nmat(n, n);
  nmat.setFromTriplets(tr.begin(), tr.end());
  return nmat;
}

/// Inverse approximation of the pressure Schur complement:
/// iS = inv(diag M) + inv(N). When N is singular (no relaxation, no
/// natural-normal boundary), its constant nullspace is removed by pinning
/// one entry before factorizing.
class PressureSchurPreconditioner {
 public:
  explicit PressureSchurPreconditioner(const FsiSystem& sys)
      : mdiag_inv_(schur_mass_diag(sys).cwiseInverse()) {
    SpMat n = schur_pressure_jump_matrix(sys);
    const bool no_relaxation = sys.gamma_elem.isZero(0.0);
    bool no_augmentation = true;
    for (const char c : natural_normal_facets(sys))
      if (c) no_augmentation = false;
    if (no_relaxation && no_augmentation) {
      double tau = n.diagonal().sum() / static_cast<double>(n.rows());
      if (tau <= 0) tau = 1.0;
      n.coeffRef(0, 0) += tau;
    }
    solver_ = std::make_unique<SparseFactorization>(
        n, SparseFactorization::Kind::SymmetricPositive);
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& r) const {
    return mdiag_inv_.cwiseProduct(r) + solver_->solve(r);
  }

 private:
  Eigen::VectorXd mdiag_inv_;
  std::unique_ptr<SparseFactorization> solver_;
};

// ---------------------------------------------------------------------------
// velocity block and the assembled block preconditioner

struct PreconditionerOptions {
  enum class VelocityBackend {
    Direct,          // exact factorization of the condensed velocity block
    AuxiliaryExact,  // Gauss-Seidel + auxiliary correction, exact inner solve
    AuxiliaryAmg,    // Gauss-Seidel + auxiliary correction, multigrid inner
  };
  VelocityBackend backend = VelocityBackend::Direct;
  int amg_cycles = 2;  // inner V-cycles per application (fixed, keeps it linear)
};

/// Extracts the leading principal block of a sparse matrix.
inline SpMat top_left_block(const SpMat& a, int n) {
  std::vector<Triplet> tr;
  for (int j = 0; j < n && j < a.outerSize(); ++j)
    for (SpMat::InnerIterator it(a, j); it; ++it)
      if (it.row() < n) tr.emplace_back(it.row(), it.col(), it.value());
  SpMat out(n, n);
  out.setFromTriplets(tr.begin(), tr.end());
  return out;
}

class VelocityBlockPreconditioner {
 public:
  VelocityBlockPreconditioner(const FsiSystem& sys, const SpMat& s_uu,
                              const PreconditionerOptions& opts) {
    using Backend = PreconditionerOptions::VelocityBackend;
    backend_ = opts.backend;
    if (backend_ == Backend::Direct) {
      direct_ = std::make_unique<SparseFactorization>(
          s_uu, SparseFactorization::Kind::SymmetricPositive);
      return;
    }
    relax_ = std::make_unique<SymmetrizedGaussSeidel>(s_uu);
    aux_ = build_auxiliary_space(sys);
    if (backend_ == Backend::AuxiliaryExact)
      aux_exact_ = std::make_unique<SparseFactorization>(
          aux_.op, SparseFactorization::Kind::SymmetricPositive);
    else {
      aux_amg_ = std::make_unique<Amg>(aux_.op);
      amg_cycles_ = opts.amg_cycles;
    }
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& r) const {
    if (direct_) return direct_->solve(r);
    Eigen::VectorXd z = relax_->apply(r);
    const Eigen::VectorXd raux = aux_.transfer.transpose() * r;
    Eigen::VectorXd xaux;
    if (aux_exact_)
      xaux = aux_exact_->solve(raux);
    else {
      xaux = Eigen::VectorXd::Zero(raux.size());
      for (int cyc = 0; cyc < amg_cycles_; ++cyc)
        xaux += aux_amg_->apply(raux - aux_.op * xaux);
    }
    z += aux_.transfer * xaux;
    return z;
  }

 private:
  PreconditionerOptions::VelocityBackend backend_;
  std::unique_ptr<SparseFactorization> direct_;
  std::unique_ptr<SymmetrizedGaussSeidel> relax_;
  AuxiliarySpace aux_;
  std::unique_ptr<SparseFactorization> aux_exact_;
  std::unique_ptr<Amg> aux_amg_;
  int amg_cycles_ = 1;
};

/// Block-diagonal preconditioner diag(iA, iS) on the condensed layout
/// (facet velocity dofs, then one mean pressure per element).
class BlockPreconditioner {
 public:
  BlockPreconditioner(const FsiSystem& sys, const PreconditionerOptions& opts)
      : nu_(sys.n_kept_u),
        np_(sys.dim_reduced() - sys.n_kept_u),
        velocity_(sys, top_left_block(sys.S, sys.n_kept_u), opts),
        schur_(sys) {}

  Eigen::VectorXd apply(const Eigen::VectorXd& r) const {
    Eigen::VectorXd z(nu_ + np_);
    z.head(nu_) = velocity_.apply(r.head(nu_));
    z.tail(np_) = schur_.apply(r.tail(np_));
    return z;
  }

 private:
  int nu_, np_;
  VelocityBlockPreconditioner velocity_;
  PressureSchurPreconditioner schur_;
};

// ---------------------------------------------------------------------------
// per-step solvers

struct StepSolveStats {
  int iterations = 0;
  double residual = 0.0;  // relative preconditioned residual at exit
  bool converged = true;
};

/// MinRes on the condensed system with the block preconditioner. The
/// operator's symmetry is probed once at construction.
class CondensedMinresSolver {
 public:
  CondensedMinresSolver(const FsiSystem& sys, const PreconditionerOptions& opts,
                        double tol, int max_iterations)
      : sys_(&sys), prec_(sys, opts), tol_(tol), max_iterations_(max_iterations) {
    const auto apply_s = [&sys](const Eigen::VectorXd& v) {
      return (sys.S * v).eval();
    };
    const double defect = symmetry_defect(apply_s, sys.dim_reduced());
    if (defect > 1e-10)
      throw std::runtime_error("condensed operator failed the symmetry probe");
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs_full, StepSolveStats* stats) const {
    const Eigen::VectorXd rr = sys_->reduce_rhs(rhs_full);
    const FsiSystem& sys = *sys_;
    const KrylovResult res = minres(
        [&sys](const Eigen::VectorXd& v) { return (sys.S * v).eval(); },
        [this](const Eigen::VectorXd& v) { return prec_.apply(v); }, rr, tol_,
        max_iterations_);
    if (stats) {
      stats->iterations = res.iterations;
      stats->residual = res.history.empty() ? 0.0 : res.history.back();
      stats->converged = res.converged;
    }
    return sys_->expand_solution(res.x, rhs_full);
  }

 private:
  const FsiSystem* sys_;
  BlockPreconditioner prec_;
  double tol_;
  int max_iterations_;
};

/// Sparse LU on the full (uncondensed) operator; the tight reference path.
class DirectStepSolver {
 public:
  explicit DirectStepSolver(const FsiSystem& sys)
      : sys_(&sys),
        solver_(sys.K, SparseFactorization::Kind::General) {}

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs_full, StepSolveStats* stats) const {
    if (stats) *stats = StepSolveStats{};
    return solver_.solve(rhs_full);
  }

 private:
  const FsiSystem* sys_;
  SparseFactorization solver_;
};

}  // namespace fsihdg
