#pragma once
// Gauss-Legendre quadrature on [0,1] and collapsed (Duffy) tensor rules on
// the reference triangle {(x,y) : x >= 0, y >= 0, x + y <= 1}.
//
// Rules are constructed for a requested polynomial exactness degree; the
// triangle rule integrates every bivariate monomial of total degree up to
// that exactness exactly (tested against the closed form a! b! / (a+b+2)!).
// All weights are positive.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fsihdg/geometry.hpp"

namespace fsihdg {

/// Nodes/weights on [0,1]; weights sum to 1.
struct LineQuadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
  int exact_degree = 0;
};

/// Points/weights on the reference triangle; weights sum to 1/2.
struct TriangleQuadrature {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int exact_degree = 0;
};

namespace detail {

/// n-point Gauss-Legendre rule on [-1,1] by Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Legendre recurrence for P_n(t) and P_{n-1}(t).
      double p0 = 1.0, p1 = t;
      for (int m = 2; m <= n; ++m) {
        const double p2 = ((2 * m - 1) * t * p1 - (m - 1) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = t;
    w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

}  // namespace detail

/// Gauss-Legendre rule on [0,1] exact for polynomials up to `degree`.
inline LineQuadrature line_quadrature(int degree) {
  if (degree < 0) throw std::invalid_argument("line_quadrature: negative degree");
  const int n = (degree + 2) / 2;  // 2n-1 >= degree
  std::vector<double> x, w;
  detail::gauss_legendre(n, x, w);
  LineQuadrature q;
  q.exact_degree = 2 * n - 1;
  q.nodes.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    q.nodes[i] = 0.5 * (x[i] + 1.0);
    q.weights[i] = 0.5 * w[i];
  }
  return q;
}

/// Collapsed tensor rule on the reference triangle, exact to `degree`.
///
/// Map (a,b) in [0,1]^2 to (x,y) = (a(1-b), b) with Jacobian (1-b). A
/// monomial x^p y^q with p+q <= d pulls back to a^p (1-b)^{p+1} b^q, so the
/// b-direction needs one extra degree of exactness.
inline TriangleQuadrature triangle_quadrature(int degree) {
  if (degree < 0) throw std::invalid_argument("triangle_quadrature: negative degree");
  const LineQuadrature qa = line_quadrature(degree);
  const LineQuadrature qb = line_quadrature(degree + 1);
  TriangleQuadrature q;
  q.exact_degree = degree;
  q.points.reserve(qa.nodes.size() * qb.nodes.size());
  q.weights.reserve(qa.nodes.size() * qb.nodes.size());
  for (std::size_t j = 0; j < qb.nodes.size(); ++j) {
    const double b = qb.nodes[j];
    for (std::size_t i = 0; i < qa.nodes.size(); ++i) {
      const double a = qa.nodes[i];
      q.points.push_back({a * (1.0 - b), b});
      q.weights.push_back(qa.weights[i] * qb.weights[j] * (1.0 - b));
    }
  }
  return q;
}

}  // namespace fsihdg
