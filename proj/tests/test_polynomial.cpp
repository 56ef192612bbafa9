#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "fsihdg/polynomial.hpp"
#include "fsihdg/quadrature.hpp"

using namespace fsihdg;

TEST_CASE("shifted Legendre family is orthonormal on [0,1]") {
  const int kmax = 5;
  const LineQuadrature q = line_quadrature(2 * kmax + 2);
  std::vector<double> vals(kmax + 1);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(kmax + 1, kmax + 1);
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    legendre01(kmax, q.nodes[i], vals.data());
    for (int a = 0; a <= kmax; ++a)
      for (int b = 0; b <= kmax; ++b)
        gram(a, b) += q.weights[i] * vals[a] * vals[b];
  }
  CHECK((gram - Eigen::MatrixXd::Identity(kmax + 1, kmax + 1))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
}

TEST_CASE("monomial gradients match finite differences") {
  const MonomialBasis mono(4);
  const Vec2 p{0.37, 0.61};
  const double h = 1e-6;
  std::vector<double> vp(mono.size()), vm(mono.size());
  std::vector<Vec2> g(mono.size());
  mono.grad(p, g.data());
  mono.eval({p.x + h, p.y}, vp.data());
  mono.eval({p.x - h, p.y}, vm.data());
  for (int j = 0; j < mono.size(); ++j)
    CHECK_THAT(g[j].x,
               Catch::Matchers::WithinAbs((vp[j] - vm[j]) / (2 * h), 1e-6));
  mono.eval({p.x, p.y + h}, vp.data());
  mono.eval({p.x, p.y - h}, vm.data());
  for (int j = 0; j < mono.size(); ++j)
    CHECK_THAT(g[j].y,
               Catch::Matchers::WithinAbs((vp[j] - vm[j]) / (2 * h), 1e-6));
}

TEST_CASE("triangle orthogonal basis has Gram matrix I/2 and constant lead") {
  for (int degree : {0, 1, 2, 3}) {
    const TriangleOrthoBasis basis(degree);
    const int n = basis.size();
    const TriangleQuadrature q = triangle_quadrature(2 * degree + 1);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
    std::vector<double> vals(n);
    for (std::size_t i = 0; i < q.points.size(); ++i) {
      basis.eval(q.points[i], vals.data());
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          gram(a, b) += q.weights[i] * vals[a] * vals[b];
    }
    CHECK((gram - 0.5 * Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <
          1e-12);
    // first member is the constant 1
    basis.eval({0.123, 0.456}, vals.data());
    CHECK_THAT(vals[0], Catch::Matchers::WithinAbs(1.0, 1e-13));
  }
}
