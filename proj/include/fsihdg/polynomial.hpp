#pragma once
// Polynomial bases:
//  - shifted Legendre polynomials, orthonormal in L2(0,1) (facet bases),
//  - scalar monomial bases on a triangle in local coordinates,
//  - an L2-orthogonal scalar basis on the reference triangle whose first
//    member is the constant 1 (element pressure basis; after an affine map
//    to a physical element the mass matrix is area * identity).

#include <Eigen/Dense>
#include <array>
#include <stdexcept>
#include <vector>

#include "fsihdg/geometry.hpp"

namespace fsihdg {

/// Values of the orthonormal shifted Legendre polynomials L_0..L_kmax at s,
/// normalized so that int_0^1 L_a L_b ds = delta_ab.
inline void legendre01(int kmax, double s, double* out) {
  const double t = 2.0 * s - 1.0;
  double p0 = 1.0, p1 = t;
  for (int m = 0; m <= kmax; ++m) {
    double pm;
    if (m == 0) {
      pm = 1.0;
    } else if (m == 1) {
      pm = t;
    } else {
      pm = ((2 * m - 1) * t * p1 - (m - 1) * p0) / m;
      p0 = p1;
      p1 = pm;
    }
    out[m] = std::sqrt(2.0 * m + 1.0) * pm;
  }
}

/// Scalar monomials x^a y^b with a+b <= degree, ordered by total degree and,
/// within a degree, by descending power of x.
struct MonomialBasis {
  int degree = 0;
  std::vector<std::array<int, 2>> powers;

  explicit MonomialBasis(int deg) : degree(deg) {
    if (deg < 0) throw std::invalid_argument("MonomialBasis: negative degree");
    for (int d = 0; d <= deg; ++d)
      for (int a = d; a >= 0; --a) powers.push_back({a, d - a});
  }

  int size() const { return static_cast<int>(powers.size()); }

  void eval(const Vec2& p, double* vals) const {
    for (int j = 0; j < size(); ++j)
      vals[j] = std::pow(p.x, powers[j][0]) * std::pow(p.y, powers[j][1]);
  }

  void grad(const Vec2& p, Vec2* grads) const {
    for (int j = 0; j < size(); ++j) {
      const int a = powers[j][0], b = powers[j][1];
      grads[j].x = a == 0 ? 0.0 : a * std::pow(p.x, a - 1) * std::pow(p.y, b);
      grads[j].y = b == 0 ? 0.0 : b * std::pow(p.x, a) * std::pow(p.y, b - 1);
    }
  }
};

namespace detail {

/// Exact integral of x^a y^b over the reference triangle: a! b! / (a+b+2)!.
inline double triangle_monomial_integral(int a, int b) {
  double v = 1.0;
  // a! b! / (a+b+2)! = 1 / [ (a+1)(a+2)...(a+b+2) / b! ] computed stably.
  for (int i = 1; i <= b; ++i) v *= static_cast<double>(i);
  for (int i = a + 1; i <= a + b + 2; ++i) v /= static_cast<double>(i);
  return v;
}

}  // namespace detail

/// L2(reference triangle)-orthogonal scalar basis phi_0..phi_{n-1} spanning
/// polynomials up to `degree`, with phi_0 = 1 and every member normalized so
/// that int_T phi_m^2 = 1/2 (the reference area). Coefficients are stored
/// over MonomialBasis(degree).
struct TriangleOrthoBasis {
  MonomialBasis mono;
  Eigen::MatrixXd coeff;  // row m = monomial coefficients of phi_m

  explicit TriangleOrthoBasis(int degree) : mono(degree) {
    const int n = mono.size();
    // Gram matrix of the monomials from the closed-form integrals.
    Eigen::MatrixXd G(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        G(i, j) = detail::triangle_monomial_integral(
            mono.powers[i][0] + mono.powers[j][0],
            mono.powers[i][1] + mono.powers[j][1]);
    // Gram-Schmidt in coefficient space.
    coeff = Eigen::MatrixXd::Identity(n, n);
    for (int m = 0; m < n; ++m) {
      Eigen::VectorXd c = coeff.row(m).transpose();
      for (int r = 0; r < m; ++r) {
        const Eigen::VectorXd cr = coeff.row(r).transpose();
        const double proj = (c.transpose() * G * cr)(0) / 0.5;
        c -= proj * cr;
      }
      const double nrm2 = (c.transpose() * G * c)(0);
      if (!(nrm2 > 0.0))
        throw std::runtime_error("TriangleOrthoBasis: degenerate Gram matrix");
      coeff.row(m) = (c / std::sqrt(nrm2 / 0.5)).transpose();
    }
  }

  int size() const { return mono.size(); }

  /// Values of all basis members at a reference point.
  void eval(const Vec2& p, double* vals) const {
    std::vector<double> mv(mono.size());
    mono.eval(p, mv.data());
    for (int m = 0; m < size(); ++m) {
      double s = 0.0;
      for (int j = 0; j < mono.size(); ++j) s += coeff(m, j) * mv[j];
      vals[m] = s;
    }
  }
};

}  // namespace fsihdg
