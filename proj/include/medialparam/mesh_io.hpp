#pragma once

// Plain-text mesh files.  Layout:
//   # medialparam mesh bverts=B sverts=S loops=L faces=F <config echo>
//   v x y b loop theta        boundary vertices, grouped by loop, in order
//   v x y s -1 -1             spine vertices
//   f i j k [l]               1-based combined indices, CCW
// Numbers carry 17 significant digits, so doubles survive a round trip
// bit-exactly.  Everything else in RemeshedMesh (loop ranges, limbs, spine
// edges, interval table) is derivable from the vertex and face lists; the
// reader rebuilds it and the round-trip test pins that equivalence.

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "medialparam/param.hpp"
#include "medialparam/remesh.hpp"

namespace medial {

inline std::string fmt17(double v) {
  char buf[64];
  auto res =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline void write_mesh(const RemeshedMesh& m, std::ostream& os,
                       const std::string& config_echo = "") {
  os << "# medialparam mesh bverts=" << m.bverts.size()
     << " sverts=" << m.sverts.size() << " loops=" << m.loop_range.size()
     << " faces=" << m.faces.size();
  if (!config_echo.empty()) os << " " << config_echo;
  os << "\n";
  for (const auto& bv : m.bverts)
    os << "v " << fmt17(bv.pos.x) << " " << fmt17(bv.pos.y) << " b "
       << bv.loop << " " << fmt17(bv.theta) << "\n";
  for (const auto& sv : m.sverts)
    os << "v " << fmt17(sv.x) << " " << fmt17(sv.y) << " s -1 -1\n";
  for (const auto& f : m.faces) {
    os << "f";
    for (int k = 0; k < f.n; k++) os << " " << f.v[k] + 1;
    os << "\n";
  }
}

inline void write_mesh_file(const RemeshedMesh& m, const std::string& path,
                            const std::string& config_echo = "") {
  std::ofstream out(path);
  if (!out) throw ValidationError("mesh_io", "cannot write " + path);
  write_mesh(m, out, config_echo);
}

inline RemeshedMesh read_mesh(std::istream& is) {
  RemeshedMesh m;
  bool seen_spine = false;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    return ValidationError("mesh_io",
                           "line " + std::to_string(lineno) + ": " + msg);
  };

  std::vector<MeshFace> faces;
  while (std::getline(is, line)) {
    lineno++;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v") {
      double x, y;
      std::string kind;
      if (!(ls >> x >> y >> kind)) throw fail("malformed vertex line");
      if (kind == "b") {
        if (seen_spine)
          throw fail("boundary vertex after spine vertices");
        BVert bv;
        bv.pos = {x, y};
        if (!(ls >> bv.loop >> bv.theta) || bv.loop < 0)
          throw fail("malformed boundary vertex line");
        m.bverts.push_back(bv);
      } else if (kind == "s") {
        seen_spine = true;
        m.sverts.push_back({x, y});
      } else {
        throw fail("vertex kind must be b or s");
      }
    } else if (tag == "f") {
      MeshFace f;
      f.n = 0;
      int idx;
      while (ls >> idx) {
        if (f.n == 4) throw fail("face with more than 4 vertices");
        f.v[f.n++] = idx - 1;
      }
      if (f.n < 3) throw fail("face with fewer than 3 vertices");
      if (f.n == 3) f.v[3] = -1;
      faces.push_back(f);
    } else {
      throw fail("unknown record \"" + tag + "\"");
    }
  }

  int nb = static_cast<int>(m.bverts.size());
  int ns = static_cast<int>(m.sverts.size());
  if (nb == 0) throw ValidationError("mesh_io", "no boundary vertices");

  // Loop ranges from the grouped boundary vertices.
  int nloops = 0;
  for (int i = 0; i < nb; i++) {
    int li = m.bverts[i].loop;
    if (li != nloops - 1 && li != nloops)
      throw ValidationError("mesh_io", "boundary vertex " + std::to_string(i) +
                                           " breaks loop grouping");
    if (li == nloops) {
      m.loop_range.push_back({i, i});
      nloops++;
    }
    m.loop_range[li][1] = i + 1;
  }

  // Faces: validate indexing, recover loop ids and the interval table.
  m.face_of_interval.resize(nloops);
  for (int li = 0; li < nloops; li++)
    m.face_of_interval[li].assign(m.loop_range[li][1] - m.loop_range[li][0],
                                  -1);
  for (size_t j = 0; j < faces.size(); j++) {
    MeshFace f = faces[j];
    std::string where = "face " + std::to_string(j);
    if (f.v[0] < 0 || f.v[0] >= nb || f.v[1] < 0 || f.v[1] >= nb)
      throw ValidationError("mesh_io", where + ": first two vertices must be "
                                               "boundary vertices");
    for (int k = 2; k < f.n; k++)
      if (f.v[k] < nb || f.v[k] >= nb + ns)
        throw ValidationError("mesh_io",
                              where + ": trailing vertices must be spine "
                                      "vertices");
    f.loop = m.bverts[f.v[0]].loop;
    auto [base, end] = m.loop_range[f.loop];
    int nbl = end - base;
    if (f.v[1] != base + (f.v[0] - base + 1) % nbl)
      throw ValidationError(
          "mesh_io", where + ": boundary edge is not a loop-adjacent pair");
    int interval = f.v[0] - base;
    if (m.face_of_interval[f.loop][interval] != -1)
      throw ValidationError("mesh_io", where + ": duplicate face on interval " +
                                           std::to_string(interval));
    m.face_of_interval[f.loop][interval] = static_cast<int>(j);
    m.faces.push_back(f);
  }
  for (int li = 0; li < nloops; li++)
    for (size_t k = 0; k < m.face_of_interval[li].size(); k++)
      if (m.face_of_interval[li][k] < 0)
        throw ValidationError("mesh_io", "interval " + std::to_string(k) +
                                             " of loop " + std::to_string(li) +
                                             " has no face");

  // Limbs, in boundary order.  The face over interval k leans on the limb
  // (b_k, s_first) at its left corner and (b_{k+1}, s_last) at its right;
  // adjacent faces share one limb exactly when those spine vertices agree.
  auto s_first = [&](const MeshFace& f) {
    return (f.n == 4 ? f.v[3] : f.v[2]) - nb;
  };
  auto s_last = [&](const MeshFace& f) { return f.v[2] - nb; };
  for (int li = 0; li < nloops; li++) {
    const auto& foi = m.face_of_interval[li];
    int base = m.loop_range[li][0];
    int nbl = static_cast<int>(foi.size());
    for (int k = 0; k < nbl; k++) {
      const MeshFace& fk = m.faces[foi[k]];
      if (k > 0) {
        const MeshFace& fp = m.faces[foi[k - 1]];
        if (s_last(fp) != s_first(fk))
          m.limbs.push_back({base + k, s_last(fp)});
      }
      m.limbs.push_back({base + k, s_first(fk)});
    }
    const MeshFace& flast = m.faces[foi[nbl - 1]];
    const MeshFace& ffirst = m.faces[foi[0]];
    if (s_last(flast) != s_first(ffirst))
      m.limbs.push_back({base, s_last(flast)});
  }

  m.spine_edges = derive_spine_edges(m);
  return m;
}

inline RemeshedMesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("mesh_io", "cannot open " + path);
  return read_mesh(in);
}

inline void write_field_csv(const FieldGrid& g, std::ostream& os) {
  os << "x,y,F\n";
  for (const auto& s : g.samples)
    os << fmt17(s.point.x) << "," << fmt17(s.point.y) << "," << fmt17(s.value)
       << "\n";
}

inline void write_field_csv_file(const FieldGrid& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("mesh_io", "cannot write " + path);
  write_field_csv(g, out);
}

}  // namespace medial
