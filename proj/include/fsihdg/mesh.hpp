#pragma once
// Conforming triangular meshes of a two-region (fluid/solid) domain built
// from two axis-aligned rectangles sharing one full edge.
//
// Conventions:
//  - element vertices are stored counterclockwise;
//  - local edge i of an element is opposite local vertex i;
//  - a facet stores its vertices in ascending global index; its global
//    tangent runs from the lower to the higher vertex id and its global
//    normal is the clockwise quarter turn of the tangent. Each element
//    records, per local edge, the sign relating the global facet normal to
//    its own outward normal.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsihdg/geometry.hpp"

namespace fsihdg {

enum class Region : std::uint8_t { Fluid = 0, Solid = 1 };

struct Element {
  std::array<int, 3> v{};          // vertex ids, counterclockwise
  Region region = Region::Fluid;
  std::array<int, 3> facet{};      // global facet id of local edge i
  std::array<int, 3> facet_sign{}; // +1 if the global facet normal is outward
};

struct Facet {
  int v0 = -1, v1 = -1;            // vertex ids, v0 < v1
  std::array<int, 2> elem{-1, -1}; // adjacent elements; elem[1] = -1 on the boundary
  int boundary_tag = -1;           // index into boundary_tag_names, -1 if interior
  bool interface = false;          // separates the two regions
};

/// Axis-aligned rectangle (x0,x1) x (y0,y1).
struct Rect {
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};

struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<Element> elements;
  std::vector<Facet> facets;
  std::vector<std::string> boundary_tag_names;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_elements() const { return static_cast<int>(elements.size()); }
  int n_facets() const { return static_cast<int>(facets.size()); }

  Vec2 facet_p0(int f) const { return vertices[facets[f].v0]; }
  Vec2 facet_p1(int f) const { return vertices[facets[f].v1]; }
  double facet_length(int f) const { return (facet_p1(f) - facet_p0(f)).norm(); }
  Vec2 facet_tangent(int f) const {
    const Vec2 d = facet_p1(f) - facet_p0(f);
    return d / d.norm();
  }
  Vec2 facet_normal(int f) const { return facet_tangent(f).perp(); }
  Vec2 facet_midpoint(int f) const { return (facet_p0(f) + facet_p1(f)) * 0.5; }

  double element_area(int e) const {
    const auto& el = elements[e];
    const Vec2 a = vertices[el.v[0]], b = vertices[el.v[1]], c = vertices[el.v[2]];
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
  }
  double element_diameter(int e) const {
    const auto& el = elements[e];
    double d = 0.0;
    for (int i = 0; i < 3; ++i) {
      const Vec2 a = vertices[el.v[i]], b = vertices[el.v[(i + 1) % 3]];
      d = std::max(d, (b - a).norm());
    }
    return d;
  }
  Vec2 element_centroid(int e) const {
    const auto& el = elements[e];
    return (vertices[el.v[0]] + vertices[el.v[1]] + vertices[el.v[2]]) / 3.0;
  }
  /// Vertex ids of local edge i (opposite local vertex i), in element order.
  std::array<int, 2> element_edge(int e, int i) const {
    const auto& el = elements[e];
    return {el.v[(i + 1) % 3], el.v[(i + 2) % 3]};
  }
  Region facet_region(int f, int side) const {
    return elements[facets[f].elem[side]].region;
  }
};

namespace detail {

inline void finish_connectivity(Mesh& mesh) {
  std::map<std::pair<int, int>, int> facet_of;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    if (mesh.element_area(e) <= 0.0)
      throw std::runtime_error("mesh: element not counterclockwise");
    for (int i = 0; i < 3; ++i) {
      const auto edge = mesh.element_edge(e, i);
      const std::pair<int, int> key{std::min(edge[0], edge[1]),
                                    std::max(edge[0], edge[1])};
      auto [it, inserted] = facet_of.try_emplace(key, mesh.n_facets());
      if (inserted) {
        Facet f;
        f.v0 = key.first;
        f.v1 = key.second;
        f.elem[0] = e;
        mesh.facets.push_back(f);
      } else {
        Facet& f = mesh.facets[it->second];
        if (f.elem[1] != -1) throw std::runtime_error("mesh: facet shared by >2 elements");
        f.elem[1] = e;
      }
      mesh.elements[e].facet[i] = it->second;
      // Outward normal of edge i: rotate the edge direction clockwise.
      const Vec2 a = mesh.vertices[edge[0]], b = mesh.vertices[edge[1]];
      const Vec2 out = (b - a).perp();
      const Vec2 gn = mesh.vertices[key.second] - mesh.vertices[key.first];
      mesh.elements[e].facet_sign[i] = out.dot(gn.perp()) > 0.0 ? 1 : -1;
    }
  }
  for (auto& f : mesh.facets)
    f.interface = f.elem[1] != -1 &&
                  mesh.elements[f.elem[0]].region != mesh.elements[f.elem[1]].region;
}

}  // namespace detail

/// Builds a structured triangulation of fluid + solid rectangles sharing one
/// full edge. Each 1/n x 1/n grid cell is split along its lower-left to
/// upper-right diagonal, so the longest edge is sqrt(2)/n.
inline Mesh build_structured_mesh(const Rect& fluid, const Rect& solid, int n) {
  if (n <= 0) throw std::invalid_argument("build_structured_mesh: n must be positive");
  const auto cells = [n](double extent, const char* what) {
    const double c = extent * n;
    const long r = std::lround(c);
    if (r <= 0 || std::abs(c - static_cast<double>(r)) > 1e-9 * n)
      throw std::invalid_argument(std::string("build_structured_mesh: ") + what +
                                  " extent is not a multiple of 1/n");
    return static_cast<int>(r);
  };
  // Identify the shared edge: the rectangles must abut along a full edge.
  const double tol = 1e-12;
  const bool vertical = std::abs(fluid.x0 - solid.x0) < tol &&
                        std::abs(fluid.x1 - solid.x1) < tol &&
                        (std::abs(fluid.y1 - solid.y0) < tol ||
                         std::abs(solid.y1 - fluid.y0) < tol);
  const bool horizontal = std::abs(fluid.y0 - solid.y0) < tol &&
                          std::abs(fluid.y1 - solid.y1) < tol &&
                          (std::abs(fluid.x1 - solid.x0) < tol ||
                           std::abs(solid.x1 - fluid.x0) < tol);
  if (!vertical && !horizontal)
    throw std::invalid_argument(
        "build_structured_mesh: rectangles must share one full edge");

  Mesh mesh;
  const double ox = std::min(fluid.x0, solid.x0);
  const double oy = std::min(fluid.y0, solid.y0);
  std::map<std::pair<long, long>, int> vertex_of;
  const auto vertex = [&](long ix, long iy) {
    auto [it, inserted] = vertex_of.try_emplace({ix, iy}, mesh.n_vertices());
    if (inserted)
      mesh.vertices.push_back({ox + static_cast<double>(ix) / n,
                               oy + static_cast<double>(iy) / n});
    return it->second;
  };
  const auto add_region = [&](const Rect& r, Region region) {
    const int nx = cells(r.width(), "rectangle x");
    const int ny = cells(r.height(), "rectangle y");
    const long bx = std::lround((r.x0 - ox) * n);
    const long by = std::lround((r.y0 - oy) * n);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const int v00 = vertex(bx + i, by + j);
        const int v10 = vertex(bx + i + 1, by + j);
        const int v11 = vertex(bx + i + 1, by + j + 1);
        const int v01 = vertex(bx + i, by + j + 1);
        mesh.elements.push_back({{v00, v10, v11}, region, {}, {}});
        mesh.elements.push_back({{v00, v11, v01}, region, {}, {}});
      }
  };
  add_region(fluid, Region::Fluid);
  add_region(solid, Region::Solid);
  detail::finish_connectivity(mesh);
  return mesh;
}

/// Builds a mesh from explicit vertices and counterclockwise triangles
/// (vertex triples paired with a region). Useful for tiny hand-made meshes.
inline Mesh build_triangulation(std::vector<Vec2> vertices,
                                const std::vector<std::pair<std::array<int, 3>, Region>>& tris) {
  Mesh mesh;
  mesh.vertices = std::move(vertices);
  for (const auto& [v, region] : tris)
    mesh.elements.push_back({v, region, {}, {}});
  detail::finish_connectivity(mesh);
  return mesh;
}

/// A named boundary part, selected by a predicate on facet midpoints.
struct BoundaryPart {
  std::string name;
  std::function<bool(Vec2)> contains;
};

/// Tags every exterior facet with exactly one part; throws if any facet is
/// matched by zero or by several predicates.
inline void classify_boundary(Mesh& mesh, const std::vector<BoundaryPart>& parts) {
  mesh.boundary_tag_names.clear();
  for (const auto& p : parts) mesh.boundary_tag_names.push_back(p.name);
  for (int f = 0; f < mesh.n_facets(); ++f) {
    Facet& facet = mesh.facets[f];
    if (facet.elem[1] != -1) {
      facet.boundary_tag = -1;
      continue;
    }
    const Vec2 mid = mesh.facet_midpoint(f);
    int tag = -1;
    for (int t = 0; t < static_cast<int>(parts.size()); ++t) {
      if (parts[t].contains(mid)) {
        if (tag != -1)
          throw std::runtime_error("classify_boundary: facet matched by both '" +
                                   parts[tag].name + "' and '" + parts[t].name + "'");
        tag = t;
      }
    }
    if (tag == -1)
      throw std::runtime_error("classify_boundary: uncovered boundary facet at (" +
                               std::to_string(mid.x) + ", " + std::to_string(mid.y) + ")");
    facet.boundary_tag = tag;
  }
}

/// Structural checks; returns human-readable problems (empty when sound).
inline std::vector<std::string> mesh_invariant_errors(const Mesh& mesh) {
  std::vector<std::string> errors;
  const long euler = static_cast<long>(mesh.n_vertices()) - mesh.n_facets() +
                     mesh.n_elements();
  if (euler != 1)
    errors.push_back("Euler relation V - E + T = " + std::to_string(euler) + ", expected 1");
  for (int e = 0; e < mesh.n_elements(); ++e)
    if (mesh.element_area(e) <= 0.0)
      errors.push_back("element " + std::to_string(e) + " is not counterclockwise");
  for (int f = 0; f < mesh.n_facets(); ++f) {
    const Facet& facet = mesh.facets[f];
    for (int s = 0; s < 2; ++s) {
      if (facet.elem[s] == -1) continue;
      const Element& el = mesh.elements[facet.elem[s]];
      bool found = false;
      for (int i = 0; i < 3; ++i) found = found || el.facet[i] == f;
      if (!found)
        errors.push_back("facet " + std::to_string(f) + " not referenced by element " +
                         std::to_string(facet.elem[s]));
    }
    if (facet.elem[1] != -1) {
      // The two adjacent elements must see the shared facet from opposite sides.
      int signs = 0;
      for (int s = 0; s < 2; ++s) {
        const Element& el = mesh.elements[facet.elem[s]];
        for (int i = 0; i < 3; ++i)
          if (el.facet[i] == f) signs += el.facet_sign[i];
      }
      if (signs != 0)
        errors.push_back("facet " + std::to_string(f) + " has inconsistent orientation signs");
    }
  }
  return errors;
}

}  // namespace fsihdg
