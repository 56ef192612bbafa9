#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fsihdg/quadrature.hpp"

using namespace fsihdg;

namespace {

double factorial(int n) {
  double v = 1;
  for (int i = 2; i <= n; ++i) v *= i;
  return v;
}

}  // namespace

TEST_CASE("line rule integrates monomials exactly up to its degree") {
  for (int degree = 0; degree <= 12; ++degree) {
    const LineQuadrature q = line_quadrature(degree);
    REQUIRE(q.exact_degree >= degree);
    double wsum = 0;
    for (double w : q.weights) wsum += w;
    CHECK_THAT(wsum, Catch::Matchers::WithinAbs(1.0, 1e-14));
    for (int d = 0; d <= q.exact_degree; ++d) {
      double val = 0;
      for (std::size_t i = 0; i < q.nodes.size(); ++i)
        val += q.weights[i] * std::pow(q.nodes[i], d);
      CHECK_THAT(val, Catch::Matchers::WithinAbs(1.0 / (d + 1), 1e-13));
    }
  }
}

TEST_CASE("triangle rule matches closed-form monomial integrals") {
  // int_T x^a y^b = a! b! / (a+b+2)! on the unit reference triangle
  for (int degree = 0; degree <= 8; ++degree) {
    const TriangleQuadrature q = triangle_quadrature(degree);
    double wsum = 0;
    for (double w : q.weights) wsum += w;
    CHECK_THAT(wsum, Catch::Matchers::WithinAbs(0.5, 1e-14));
    for (int a = 0; a + 0 <= degree; ++a)
      for (int b = 0; a + b <= degree; ++b) {
        double val = 0;
        for (std::size_t i = 0; i < q.points.size(); ++i)
          val += q.weights[i] * std::pow(q.points[i].x, a) *
                 std::pow(q.points[i].y, b);
        const double exact =
            factorial(a) * factorial(b) / factorial(a + b + 2);
        CHECK_THAT(val, Catch::Matchers::WithinAbs(exact, 1e-13));
      }
  }
}

TEST_CASE("negative degree is rejected") {
  CHECK_THROWS_AS(line_quadrature(-1), std::invalid_argument);
  CHECK_THROWS_AS(triangle_quadrature(-2), std::invalid_argument);
}
