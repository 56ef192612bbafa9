#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fsihdg/mesh.hpp"

using namespace fsihdg;

TEST_CASE("structured two-layer mesh satisfies the connectivity invariants") {
  for (int n : {2, 4, 10}) {
    const Mesh mesh =
        build_structured_mesh({0.0, 1.0, -1.0, 0.0}, {0.0, 1.0, 0.0, 0.5}, n);
    CAPTURE(n);
    CHECK(mesh_invariant_errors(mesh).empty());
    // Euler characteristic of a triangulated disk: V - E + T = 1
    CHECK(mesh.n_vertices() - mesh.n_facets() + mesh.n_elements() == 1);
    int n_interface = 0;
    for (const Facet& f : mesh.facets)
      if (f.interface) {
        ++n_interface;
        CHECK(mesh.facet_region(f, 0) != mesh.facet_region(f, 1));
      }
    CHECK(n_interface == n);  // one horizontal run of facets at y = 0
  }
}

TEST_CASE("facet frames are unit-length and element areas sum to the domain") {
  const Mesh mesh =
      build_structured_mesh({0.0, 6.0, 0.0, 0.5}, {0.0, 6.0, 0.5, 0.6}, 10);
  CHECK(mesh_invariant_errors(mesh).empty());
  double area = 0;
  for (int e = 0; e < mesh.n_elements(); ++e) area += mesh.element_area(e);
  CHECK_THAT(area, Catch::Matchers::WithinRel(6.0 * 0.6, 1e-12));
  for (int f = 0; f < mesh.n_facets(); ++f) {
    const Vec2 t = mesh.facet_tangent(f);
    const Vec2 nrm = mesh.facet_normal(f);
    CHECK_THAT(t.x * t.x + t.y * t.y, Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK_THAT(t.x * nrm.x + t.y * nrm.y,
               Catch::Matchers::WithinAbs(0.0, 1e-12));
  }
}

TEST_CASE("boundary classification is exhaustive and rejects overlaps") {
  Mesh mesh =
      build_structured_mesh({0.0, 1.0, -1.0, 0.0}, {0.0, 1.0, 0.0, 0.5}, 2);
  classify_boundary(mesh, {{"exterior", [](Vec2) { return true; }}});
  for (const Facet& f : mesh.facets)
    if (f.elem[1] < 0) CHECK(f.boundary_tag == 0);

  // a part set that misses facets must be rejected
  CHECK_THROWS_AS(
      classify_boundary(mesh, {{"left", [](Vec2 x) { return x.x < 0.25; }}}),
      std::runtime_error);
  // overlapping parts must be rejected
  CHECK_THROWS_AS(
      classify_boundary(mesh, {{"a", [](Vec2) { return true; }},
                               {"b", [](Vec2) { return true; }}}),
      std::runtime_error);
}

TEST_CASE("hand-built triangulation shares one facet with opposite signs") {
  // unit shared edge from (0,0) to (0,1)
  const Mesh mesh = build_triangulation(
      {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}},
      {{{{0, 1, 2}}, Region::Fluid}, {{{0, 2, 3}}, Region::Fluid}});
  CHECK(mesh.n_elements() == 2);
  CHECK(mesh.n_facets() == 5);
  CHECK(mesh_invariant_errors(mesh).empty());
  int shared = -1;
  for (int f = 0; f < mesh.n_facets(); ++f)
    if (mesh.facets[f].elem[1] >= 0) shared = f;
  REQUIRE(shared >= 0);
  CHECK_THAT(mesh.facet_length(shared), Catch::Matchers::WithinRel(1.0, 1e-12));
  // the shared facet must appear with opposite orientation in its two owners
  int sign_product = 1;
  for (int side = 0; side < 2; ++side) {
    const int e = mesh.facets[shared].elem[side];
    for (int li = 0; li < 3; ++li)
      if (mesh.elements[e].facet[li] == shared)
        sign_product *= mesh.elements[e].facet_sign[li];
  }
  CHECK(sign_product == -1);
}

TEST_CASE("incompatible layer extents are rejected") {
  CHECK_THROWS_AS(build_structured_mesh({0.0, 1.0, -1.0, 0.0},
                                        {0.0, 1.0, 0.0, 0.5}, 3),
                  std::invalid_argument);
}
