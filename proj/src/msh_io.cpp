#include "elastrim/msh_io.hpp"

#include <array>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "elastrim/errors.hpp"

namespace elastrim {

namespace {

std::string next_line(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    // Tolerate CRLF endings and blank lines between sections.
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (!line.empty()) return line;
  }
  return {};
}

// Nodes per element for the MSH v2 types we may encounter while skipping.
int msh_node_count(int type) {
  switch (type) {
    case 1: return 2;   // 2-node line
    case 2: return 3;   // 3-node triangle
    case 3: return 4;   // 4-node quad
    case 8: return 3;   // 3-node second order line
    case 9: return 6;   // 6-node second order triangle
    case 15: return 1;  // point
    default: return -1;
  }
}

}  // namespace

Mesh read_msh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file: " + path);

  std::map<long, Vec2> nodes_by_id;
  std::vector<std::array<long, 3>> tri_ids;
  bool saw_format = false;

  std::string line;
  while (!(line = next_line(in)).empty()) {
    if (line[0] != '$')
      throw ParseError("expected a $Section header, got: " + line);
    const std::string section = line.substr(1);

    if (section == "MeshFormat") {
      std::istringstream fmt(next_line(in));
      std::string version;
      int file_type = -1, data_size = -1;
      fmt >> version >> file_type >> data_size;
      if (!fmt || version.substr(0, 3) != "2.2")
        throw ParseError("unsupported MSH version (need ASCII 2.2): " + version);
      if (file_type != 0)
        throw ParseError("binary MSH files are not supported");
      if (next_line(in) != "$EndMeshFormat")
        throw ParseError("missing $EndMeshFormat");
      saw_format = true;
    } else if (section == "Nodes") {
      std::istringstream cnt(next_line(in));
      long n = -1;
      cnt >> n;
      if (!cnt || n < 0) throw ParseError("malformed $Nodes count");
      for (long i = 0; i < n; ++i) {
        std::istringstream row(next_line(in));
        long id;
        double x, y, z;
        row >> id >> x >> y >> z;
        if (!row) throw ParseError("malformed node line in $Nodes");
        nodes_by_id[id] = Vec2(x, y);  // z ignored
      }
      if (next_line(in) != "$EndNodes") throw ParseError("missing $EndNodes");
    } else if (section == "Elements") {
      std::istringstream cnt(next_line(in));
      long n = -1;
      cnt >> n;
      if (!cnt || n < 0) throw ParseError("malformed $Elements count");
      for (long i = 0; i < n; ++i) {
        std::istringstream row(next_line(in));
        long id;
        int type, ntags;
        row >> id >> type >> ntags;
        if (!row) throw ParseError("malformed element line in $Elements");
        for (int t = 0; t < ntags; ++t) {
          long tag;
          row >> tag;  // physical/geometric tags ignored
        }
        const int nn = msh_node_count(type);
        if (nn < 0) throw ParseError("unsupported element type " +
                                     std::to_string(type));
        std::array<long, 3> tri{};
        long node;
        for (int k = 0; k < nn; ++k) {
          row >> node;
          if (type == 2 && k < 3) tri[k] = node;
        }
        if (!row) throw ParseError("element line ends early in $Elements");
        if (type == 2) tri_ids.push_back(tri);
      }
      if (next_line(in) != "$EndElements")
        throw ParseError("missing $EndElements");
    } else {
      // Unknown section: skip to its matching end marker.
      const std::string end = "$End" + section;
      std::string skip;
      bool closed = false;
      while (!(skip = next_line(in)).empty()) {
        if (skip == end) {
          closed = true;
          break;
        }
      }
      if (!closed) throw ParseError("unterminated section $" + section);
    }
  }

  if (!saw_format) throw ParseError("missing $MeshFormat section");
  if (tri_ids.empty())
    throw ParseError("no 3-node triangles (element type 2) in file");

  // Compact to the nodes actually used by triangles.
  std::map<long, int> index_of;
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  for (const auto& tri : tri_ids) {
    std::array<int, 3> t{};
    for (int k = 0; k < 3; ++k) {
      const auto node = nodes_by_id.find(tri[k]);
      if (node == nodes_by_id.end())
        throw ParseError("element references unknown node " +
                         std::to_string(tri[k]));
      auto [it, inserted] = index_of.try_emplace(tri[k],
                                                 static_cast<int>(vertices.size()));
      if (inserted) vertices.push_back(node->second);
      t[k] = it->second;
    }
    triangles.push_back(t);
  }

  return make_mesh(std::move(vertices), std::move(triangles));
}

}  // namespace elastrim
