#pragma once

#include <string>

#include "elastrim/mesh.hpp"

namespace elastrim {

// Reads an ASCII MSH v2.2 file ($MeshFormat "2.2 0 8", $Nodes, $Elements).
// Only 3-node triangles (element type 2) are kept; line and point elements
// are skipped, physical tags are ignored, and z coordinates are dropped.
// Nodes not referenced by any triangle are discarded before topology is
// rebuilt. Throws ParseError on malformed input and Topology/GeometryError
// when the triangulation is not a valid unit-disc mesh.
Mesh read_msh(const std::string& path);

}  // namespace elastrim
