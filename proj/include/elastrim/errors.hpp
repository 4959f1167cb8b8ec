#pragma once

#include <stdexcept>
#include <string>

namespace elastrim {

struct MeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input file (bad section headers, counts, versions).
struct ParseError : MeshError {
  using MeshError::MeshError;
};

// Connectivity defects: non-manifold edges, holes, multiple boundary loops.
struct TopologyError : MeshError {
  using MeshError::MeshError;
};

// Geometric defects: degenerate cells, boundary vertices off the unit circle.
struct GeometryError : MeshError {
  using MeshError::MeshError;
};

struct LinearSolveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LineSearchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace elastrim
