#pragma once

// Deterministic text output: CSV writers (17 significant digits), the mesh
// dump, and coordinate-format sparse-matrix export.

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsihdg/stepper.hpp"
#include "fsihdg/verify.hpp"

namespace fsihdg {

/// Full-precision scientific form: 17 significant digits round-trip doubles.
inline std::string float17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

namespace detail {

inline std::ofstream open_text(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace detail

inline void write_convergence_csv(const std::string& path,
                                  const std::vector<ConvergenceRow>& rows) {
  std::ofstream out = detail::open_text(path);
  out << "k,inv_h,rho_s,delta1,delta2,error,eoc,avg_iters\n";
  for (const ConvergenceRow& r : rows)
    out << r.k << ',' << r.inv_h << ',' << float17(r.rho_s) << ','
        << float17(r.delta1) << ',' << float17(r.delta2) << ','
        << float17(r.error) << ',' << float17(r.eoc) << ','
        << float17(r.avg_iterations) << '\n';
}

inline void write_xy_csv(const std::string& path,
                         const std::vector<double>& x,
                         const std::vector<double>& value) {
  if (x.size() != value.size())
    throw std::invalid_argument("write_xy_csv: length mismatch");
  std::ofstream out = detail::open_text(path);
  out << "x,value\n";
  for (std::size_t i = 0; i < x.size(); ++i)
    out << float17(x[i]) << ',' << float17(value[i]) << '\n';
}

inline void write_diagnostics_csv(const std::string& path,
                                  const std::vector<StepRecord>& records) {
  std::ofstream out = detail::open_text(path);
  out << "step,t,energy,max_fluid_divergence,minres_iters,residual\n";
  for (const StepRecord& r : records)
    out << r.step << ',' << float17(r.t) << ',' << float17(r.energy) << ','
        << float17(r.max_fluid_divergence) << ',' << r.iterations << ','
        << float17(r.residual) << '\n';
}

/// Per-run diagnostics of a parameter study, keyed by the run's grid row.
struct RunDiagnostics {
  ConvergenceRow row;
  std::vector<StepRecord> records;
};

inline void write_grid_diagnostics_csv(const std::string& path,
                                       const std::vector<RunDiagnostics>& runs) {
  std::ofstream out = detail::open_text(path);
  out << "k,inv_h,rho_s,delta1,delta2,"
         "step,t,energy,max_fluid_divergence,minres_iters,residual\n";
  for (const RunDiagnostics& run : runs)
    for (const StepRecord& r : run.records)
      out << run.row.k << ',' << run.row.inv_h << ','
          << float17(run.row.rho_s) << ',' << float17(run.row.delta1) << ','
          << float17(run.row.delta2) << ',' << r.step << ',' << float17(r.t)
          << ',' << float17(r.energy) << ','
          << float17(r.max_fluid_divergence) << ',' << r.iterations << ','
          << float17(r.residual) << '\n';
}

/// Plain-text mesh dump: a count line, then one line per vertex (x y),
/// element (v0 v1 v2 region), and facet (v0 v1 kind). Kind is `interior`,
/// `interface`, or the boundary part name.
inline void write_mesh_dump(const std::string& path, const Mesh& mesh) {
  std::ofstream out = detail::open_text(path);
  out << mesh.n_vertices() << ' ' << mesh.n_elements() << ' '
      << mesh.n_facets() << '\n';
  for (const Vec2& v : mesh.vertices)
    out << float17(v.x) << ' ' << float17(v.y) << '\n';
  for (const Element& e : mesh.elements)
    out << e.v[0] << ' ' << e.v[1] << ' ' << e.v[2] << ' '
        << (e.region == Region::Fluid ? "fluid" : "solid") << '\n';
  for (const Facet& f : mesh.facets) {
    out << f.v0 << ' ' << f.v1 << ' ';
    if (f.elem[1] < 0)
      out << (f.boundary_tag >= 0 ? mesh.boundary_tag_names[f.boundary_tag]
                                  : std::string("boundary"));
    else
      out << (f.interface ? "interface" : "interior");
    out << '\n';
  }
}

/// Coordinate text format: a size line `rows cols nnz`, then one
/// `row col value` line per stored entry (0-based indices).
inline void write_matrix_coordinate(const std::string& path, const SpMat& m) {
  std::ofstream out = detail::open_text(path);
  out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  for (int col = 0; col < m.outerSize(); ++col)
    for (SpMat::InnerIterator it(m, col); it; ++it)
      out << it.row() << ' ' << it.col() << ' ' << float17(it.value()) << '\n';
}

}  // namespace fsihdg
