#include "elastrim/io.hpp"

#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>

#include "elastrim/errors.hpp"

namespace elastrim {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

}  // namespace

void write_vtu(const State& state, const Mesh& mesh, const DofLayout& layout,
               const std::string& path) {
  std::ofstream out = open_out(path);
  const int cells = mesh.n_cells();
  const int points = 6 * cells;
  const auto& ref_nodes = p2_triangle_nodes();

  out << "<?xml version=\"1.0\"?>\n"
      << "<VTKFile type=\"UnstructuredGrid\" version=\"0.1\" "
         "byte_order=\"LittleEndian\">\n"
      << "  <UnstructuredGrid>\n"
      << "    <Piece NumberOfPoints=\"" << points << "\" NumberOfCells=\""
      << cells << "\">\n";

  // One block of 6 points per cell: the discontinuous space needs
  // per-cell point data, so shared mesh nodes are duplicated.
  out << "      <Points>\n"
      << "        <DataArray type=\"Float64\" NumberOfComponents=\"3\" "
         "format=\"ascii\">\n";
  for (int c = 0; c < cells; ++c)
    for (int node = 0; node < 6; ++node) {
      const Vec2 p = mesh.physical_point(c, ref_nodes[node]);
      out << "          " << fmt(p.x()) << ' ' << fmt(p.y()) << " 0\n";
    }
  out << "        </DataArray>\n      </Points>\n";

  out << "      <Cells>\n"
      << "        <DataArray type=\"Int32\" Name=\"connectivity\" "
         "format=\"ascii\">\n";
  for (int c = 0; c < cells; ++c) {
    out << "         ";
    for (int node = 0; node < 6; ++node) out << ' ' << (6 * c + node);
    out << '\n';
  }
  out << "        </DataArray>\n"
      << "        <DataArray type=\"Int32\" Name=\"offsets\" "
         "format=\"ascii\">\n";
  for (int c = 0; c < cells; ++c) out << "          " << 6 * (c + 1) << '\n';
  out << "        </DataArray>\n"
      << "        <DataArray type=\"UInt8\" Name=\"types\" format=\"ascii\">\n";
  for (int c = 0; c < cells; ++c) out << "          22\n";  // quadratic triangle
  out << "        </DataArray>\n      </Cells>\n";

  out << "      <PointData Vectors=\"displacement\">\n"
      << "        <DataArray type=\"Float64\" Name=\"displacement\" "
         "NumberOfComponents=\"3\" format=\"ascii\">\n";
  for (int c = 0; c < cells; ++c)
    for (int node = 0; node < 6; ++node) {
      out << "         ";
      for (int comp = 0; comp < 3; ++comp)
        out << ' ' << fmt(state.x[layout.membrane_dof(c, node, comp)]);
      out << '\n';
    }
  out << "        </DataArray>\n"
      << "        <DataArray type=\"Float64\" Name=\"magnitude\" "
         "format=\"ascii\">\n";
  for (int c = 0; c < cells; ++c)
    for (int node = 0; node < 6; ++node) {
      Vec3 v;
      for (int comp = 0; comp < 3; ++comp)
        v[comp] = state.x[layout.membrane_dof(c, node, comp)];
      out << "          " << fmt(v.norm()) << '\n';
    }
  out << "        </DataArray>\n      </PointData>\n"
      << "    </Piece>\n  </UnstructuredGrid>\n</VTKFile>\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_iteration_log(const NewtonReport& report, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "iter,residual_norm,step_length\n";
  const std::size_t rows = report.residual_norms.size();
  for (std::size_t i = 0; i < rows; ++i) {
    out << i << ',' << fmt(report.residual_norms[i]) << ',';
    if (i > 0 && i - 1 < report.step_lengths.size())
      out << fmt(report.step_lengths[i - 1]);
    if (i + 1 == rows) out << ',' << termination_name(report.termination_reason);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_summary(const NewtonReport& report, const EnergyBreakdown& energy,
                   const ShapeReport& shape, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "# run summary; constraint thresholds are artifact defaults\n";
  out << "converged = " << (report.converged ? "true" : "false") << '\n';
  out << "iterations = " << report.iterations << '\n';
  out << "termination_reason = " << termination_name(report.termination_reason)
      << '\n';
  out << "final_residual_norm = "
      << fmt(report.residual_norms.empty() ? 0.0
                                           : report.residual_norms.back())
      << '\n';
  out << "energy_total = " << fmt(energy.total) << '\n';
  out << "energy_bending = " << fmt(energy.bending) << '\n';
  out << "energy_membrane = " << fmt(energy.membrane) << '\n';
  out << "energy_constraint = " << fmt(energy.constraint) << '\n';
  out << "energy_sipg_consistency = " << fmt(energy.sipg_consistency) << '\n';
  out << "energy_sipg_penalty = " << fmt(energy.sipg_penalty) << '\n';
  out << "energy_anchor = " << fmt(energy.anchor) << '\n';
  out << "perimeter = " << fmt(shape.perimeter) << '\n';
  out << "perimeter_target = " << fmt(2.0 * std::numbers::pi) << '\n';
  out << "max_speed_violation = " << fmt(shape.max_speed_violation) << '\n';
  out << "circularity = " << fmt(shape.circularity) << '\n';
  out << "planarity = " << fmt(shape.planarity) << '\n';
  out << "plane_offset = " << fmt(shape.plane_offset) << '\n';
  out << "plane_normal = " << fmt(shape.plane_normal.x()) << ' '
      << fmt(shape.plane_normal.y()) << ' ' << fmt(shape.plane_normal.z())
      << '\n';
  out << "self_intersection_hint = "
      << (shape.self_intersection_hint ? "true" : "false") << '\n';
  out << "constraints_pass = " << (constraints_pass(shape) ? "true" : "false")
      << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace elastrim
