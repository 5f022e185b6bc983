// Copyright 2026 The Carrier Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Abstract branched surfaces: sectors glued along a cell structure whose
// edges are smooth (one sector on both sides), branch edges (a parent sheet
// splitting into two children) or boundary train-track edges.

#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "carrier/error.hpp"
#include "carrier/normalize.hpp"
#include "carrier/triangulation.hpp"
#include "carrier/util.hpp"

namespace carrier {

enum class EdgeKind { kInterior, kBranch, kBoundary };

struct BranchData {
  int parent = 0;
  int child_j = 0;
  int child_k = 0;
  int first = 0;  // sector of the child stacked against the parent's sheet 0
  bool rev = false;
  bool operator==(const BranchData&) const = default;
};

struct CellEdge {
  int from = 0;
  int to = 0;
  EdgeKind kind = EdgeKind::kBoundary;
  int sector = -1;  // interior edges only
  BranchData branch;
  bool operator==(const CellEdge&) const = default;
};

struct SignedEdge {
  int edge = 0;
  bool reversed = false;
  bool operator==(const SignedEdge&) const = default;
};

struct CellFace {
  int sector = 0;
  std::vector<SignedEdge> cycle;
  bool operator==(const CellFace&) const = default;
};

/// Position `position` of the boundary cycle of face `face`.
struct Incidence {
  int face = 0;
  int position = 0;
  auto operator<=>(const Incidence&) const = default;
};

struct BranchedComplex {
  int sectors = 0;
  std::vector<int> dominant;  // per vertex
  std::vector<CellEdge> edges;
  std::vector<CellFace> faces;

  int vertex_count() const { return static_cast<int>(dominant.size()); }

  bool closed() const {
    return std::none_of(edges.begin(), edges.end(),
                        [](const CellEdge& e) { return e.kind == EdgeKind::kBoundary; });
  }

  int start_of(const SignedEdge& s) const {
    return s.reversed ? edges[s.edge].to : edges[s.edge].from;
  }
  int end_of(const SignedEdge& s) const {
    return s.reversed ? edges[s.edge].from : edges[s.edge].to;
  }

  /// Sector whose sheets count the fiber intersections along an edge.
  int edge_dominant(int e) const {
    const auto& edge = edges[e];
    return edge.kind == EdgeKind::kBranch ? edge.branch.parent : edge.sector;
  }

  std::vector<std::vector<Incidence>> incidences() const {
    std::vector<std::vector<Incidence>> out(edges.size());
    for (int f = 0; f < static_cast<int>(faces.size()); ++f)
      for (int p = 0; p < static_cast<int>(faces[f].cycle.size()); ++p) {
        const int e = faces[f].cycle[p].edge;
        if (e >= 0 && e < static_cast<int>(edges.size())) out[e].push_back({f, p});
      }
    return out;
  }

  bool operator==(const BranchedComplex&) const = default;
};

struct BranchRoles {
  Incidence parent;
  Incidence first;
  Incidence second;
};

/// Assigns the three incidences of a branch edge to the parent and the two
/// children. A parent sector that also appears as a child is told apart by
/// its traversal sign, which differs from both children's.
inline std::optional<BranchRoles> branch_roles(const BranchedComplex& b, int e,
                                               const std::vector<Incidence>& inc) {
  if (inc.size() != 3) return std::nullopt;
  const auto& data = b.edges[e].branch;
  auto sector = [&](const Incidence& i) { return b.faces[i.face].sector; };
  auto sign = [&](const Incidence& i) { return b.faces[i.face].cycle[i.position].reversed; };
  std::vector<int> parents;
  for (int i = 0; i < 3; ++i)
    if (sector(inc[i]) == data.parent) parents.push_back(i);
  if (parents.empty()) return std::nullopt;
  int p = parents.front();
  if (parents.size() > 1) {
    for (int i : parents) {
      const int a = (i + 1) % 3, c = (i + 2) % 3;
      if (sign(inc[a]) == sign(inc[c]) && sign(inc[i]) != sign(inc[a])) {
        p = i;
        break;
      }
    }
  }
  std::vector<Incidence> kids;
  for (int i = 0; i < 3; ++i)
    if (i != p) kids.push_back(inc[i]);
  std::vector<int> got{sector(kids[0]), sector(kids[1])};
  std::vector<int> want{data.child_j, data.child_k};
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  if (got != want) return std::nullopt;
  if (data.child_j != data.child_k && sector(kids[0]) != data.first)
    std::swap(kids[0], kids[1]);
  return BranchRoles{inc[p], kids[0], kids[1]};
}

struct ValidationReport {
  std::vector<std::pair<ErrorCode, std::string>> violations;
  bool closed = true;

  bool ok() const { return violations.empty(); }
};

inline ValidationReport validate(const BranchedComplex& b) {
  ValidationReport report;
  auto bad = [&](ErrorCode code, const std::string& why) {
    report.violations.emplace_back(code, why);
  };
  const int nv = b.vertex_count();
  const int ne = static_cast<int>(b.edges.size());
  report.closed = b.closed();

  std::vector<bool> has_face(b.sectors, false);
  for (int f = 0; f < static_cast<int>(b.faces.size()); ++f) {
    const auto& face = b.faces[f];
    const std::string name = "face " + std::to_string(f);
    if (face.sector < 0 || face.sector >= b.sectors) {
      bad(ErrorCode::kBadIncidence, name + " has sector out of range");
      continue;
    }
    has_face[face.sector] = true;
    if (face.cycle.empty()) {
      bad(ErrorCode::kBadIncidence, name + " has an empty boundary cycle");
      continue;
    }
    bool in_range = true;
    for (const auto& s : face.cycle)
      if (s.edge < 0 || s.edge >= ne) in_range = false;
    if (!in_range) {
      bad(ErrorCode::kBadIncidence, name + " references an unknown edge");
      continue;
    }
    const int n = static_cast<int>(face.cycle.size());
    for (int p = 0; p < n; ++p)
      if (b.end_of(face.cycle[p]) != b.start_of(face.cycle[(p + 1) % n]))
        bad(ErrorCode::kBadIncidence, name + " boundary cycle is not closed at position " +
                                          std::to_string(p));
  }
  for (int s = 0; s < b.sectors; ++s)
    if (!has_face[s]) bad(ErrorCode::kDanglingSector, "sector " + std::to_string(s) + " has no faces");

  const auto inc = b.incidences();
  std::vector<bool> used(nv, false);
  for (int e = 0; e < ne; ++e) {
    const auto& edge = b.edges[e];
    const std::string name = "edge " + std::to_string(e);
    if (edge.from < 0 || edge.from >= nv || edge.to < 0 || edge.to >= nv) {
      bad(ErrorCode::kBadIncidence, name + " has an endpoint out of range");
      continue;
    }
    used[edge.from] = used[edge.to] = true;
    const int n = static_cast<int>(inc[e].size());
    if (n > 3) {
      bad(ErrorCode::kBadIncidence, name + " has " + std::to_string(n) + " face incidences");
      continue;
    }
    switch (edge.kind) {
      case EdgeKind::kInterior:
        if (n != 2) {
          bad(ErrorCode::kBadIncidence, name + " is interior but has " + std::to_string(n) +
                                            " face incidences");
        } else {
          for (const auto& i : inc[e])
            if (b.faces[i.face].sector != edge.sector)
              bad(ErrorCode::kBadIncidence, name + " is interior to sector " +
                                                std::to_string(edge.sector) +
                                                " but bounds face " + std::to_string(i.face));
        }
        break;
      case EdgeKind::kBoundary:
        if (n != 1)
          bad(ErrorCode::kBadIncidence, name + " is boundary but has " + std::to_string(n) +
                                            " face incidences");
        break;
      case EdgeKind::kBranch: {
        const auto& d = edge.branch;
        if (d.first != d.child_j && d.first != d.child_k)
          bad(ErrorCode::kBadIncidence, name + " orders a sector that is not one of its children");
        if (n != 3)
          bad(ErrorCode::kBadIncidence, name + " is a branch edge but has " + std::to_string(n) +
                                            " face incidences");
        else if (!branch_roles(b, e, inc[e]))
          bad(ErrorCode::kBadIncidence, name + " incidences do not match its branch sectors");
        break;
      }
    }
  }
  for (int v = 0; v < nv; ++v) {
    const std::string name = "vertex " + std::to_string(v);
    if (!used[v]) {
      bad(ErrorCode::kBadIncidence, name + " is not on any edge");
      continue;
    }
    const int dom = b.dominant[v];
    bool seen = false;
    for (const auto& face : b.faces) {
      if (face.sector != dom) continue;
      for (const auto& s : face.cycle)
        if (s.edge >= 0 && s.edge < ne && b.start_of(s) == v) seen = true;
    }
    if (!seen)
      bad(ErrorCode::kBadIncidence, name + " is dominated by sector " + std::to_string(dom) +
                                        " which has no corner there");
  }
  return report;
}

inline void require_valid(const BranchedComplex& b) {
  const auto report = validate(b);
  if (!report.ok()) throw Error(report.violations.front().first, report.violations.front().second);
}

/// Parses a `.bs` file. Vertex, edge and face ids must be dense and listed in
/// increasing order.
inline BranchedComplex load_branched(std::string_view text) {
  const auto lines = text::lines(text);
  if (lines.empty()) throw Error(ErrorCode::kParseError, "empty branched-surface file");
  BranchedComplex b;
  const auto& head = lines.front();
  text::expect(head, 0, "sectors");
  if (head.tokens.size() != 2) text::fail(head, "expected 'sectors <d>'");
  b.sectors = text::to_index(head, head.tokens[1]);

  auto sector_ref = [&](const text::Line& line, const std::string& tok) {
    const int s = text::to_index(line, tok);
    if (s >= b.sectors) text::fail(line, "sector " + tok + " out of range");
    return s;
  };
  auto dense = [&](const text::Line& line, const std::string& tok, std::size_t next) {
    if (text::to_index(line, tok) != static_cast<int>(next))
      text::fail(line, "expected id " + std::to_string(next));
  };

  std::vector<const text::Line*> edge_lines;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    const auto& tok = line.tokens;
    if (tok[0] == "vertex") {
      if (tok.size() != 4 || tok[2] != "dom") text::fail(line, "expected 'vertex <id> dom <sector>'");
      dense(line, tok[1], b.dominant.size());
      b.dominant.push_back(sector_ref(line, tok[3]));
    } else if (tok[0] == "edge") {
      if (tok.size() < 5) text::fail(line, "expected 'edge <id> <v> <v> <kind> ...'");
      dense(line, tok[1], b.edges.size());
      CellEdge e;
      e.from = text::to_index(line, tok[2]);
      e.to = text::to_index(line, tok[3]);
      if (tok[4] == "interior") {
        if (tok.size() != 6) text::fail(line, "expected 'interior <sector>'");
        e.kind = EdgeKind::kInterior;
        e.sector = sector_ref(line, tok[5]);
      } else if (tok[4] == "branch") {
        if (tok.size() != 12 || tok[8] != "order" || tok[10] != "rev")
          text::fail(line, "expected 'branch <i> <j> <k> order <j|k> rev <0|1>'");
        e.kind = EdgeKind::kBranch;
        e.branch.parent = sector_ref(line, tok[5]);
        e.branch.child_j = sector_ref(line, tok[6]);
        e.branch.child_k = sector_ref(line, tok[7]);
        e.branch.first = sector_ref(line, tok[9]);
        if (e.branch.first != e.branch.child_j && e.branch.first != e.branch.child_k)
          text::fail(line, "order must name one of the children");
        if (tok[11] != "0" && tok[11] != "1") text::fail(line, "rev must be 0 or 1");
        e.branch.rev = tok[11] == "1";
      } else if (tok[4] == "boundary") {
        if (tok.size() != 5) text::fail(line, "unexpected tokens after 'boundary'");
        e.kind = EdgeKind::kBoundary;
      } else {
        text::fail(line, "unknown edge kind '" + tok[4] + "'");
      }
      b.edges.push_back(e);
      edge_lines.push_back(&line);
    } else if (tok[0] == "face") {
      if (tok.size() < 6 || tok[2] != "sector" || tok[4] != "cycle")
        text::fail(line, "expected 'face <id> sector <s> cycle <+-edge> ...'");
      dense(line, tok[1], b.faces.size());
      CellFace f;
      f.sector = sector_ref(line, tok[3]);
      for (std::size_t k = 5; k < tok.size(); ++k) {
        const auto& t = tok[k];
        if (t.size() < 2 || (t[0] != '+' && t[0] != '-'))
          text::fail(line, "cycle entries must be signed edge ids, got '" + t + "'");
        f.cycle.push_back({text::to_index(line, t.substr(1)), t[0] == '-'});
      }
      b.faces.push_back(std::move(f));
    } else {
      text::fail(line, "unknown keyword '" + tok[0] + "'");
    }
  }
  for (std::size_t e = 0; e < b.edges.size(); ++e)
    if (b.edges[e].from >= b.vertex_count() || b.edges[e].to >= b.vertex_count())
      text::fail(*edge_lines[e], "vertex out of range");
  for (const auto& f : b.faces)
    for (const auto& s : f.cycle)
      if (s.edge >= static_cast<int>(b.edges.size()))
        throw Error(ErrorCode::kParseError, "face cycle references unknown edge " +
                                                std::to_string(s.edge));
  require_valid(b);
  return b;
}

inline std::string serialize(const BranchedComplex& b) {
  std::ostringstream out;
  out << "sectors " << b.sectors << "\n";
  for (int v = 0; v < b.vertex_count(); ++v) out << "vertex " << v << " dom " << b.dominant[v] << "\n";
  for (int e = 0; e < static_cast<int>(b.edges.size()); ++e) {
    const auto& edge = b.edges[e];
    out << "edge " << e << " " << edge.from << " " << edge.to << " ";
    switch (edge.kind) {
      case EdgeKind::kInterior:
        out << "interior " << edge.sector;
        break;
      case EdgeKind::kBranch:
        out << "branch " << edge.branch.parent << " " << edge.branch.child_j << " "
            << edge.branch.child_k << " order " << edge.branch.first << " rev "
            << (edge.branch.rev ? 1 : 0);
        break;
      case EdgeKind::kBoundary:
        out << "boundary";
        break;
    }
    out << "\n";
  }
  for (int f = 0; f < static_cast<int>(b.faces.size()); ++f) {
    out << "face " << f << " sector " << b.faces[f].sector << " cycle";
    for (const auto& s : b.faces[f].cycle) out << " " << (s.reversed ? '-' : '+') << s.edge;
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Assembly from prism coordinates.

/// A band joins prism blocks of two tetrahedra across a shared face.
struct Band {
  int face = 0;    // global face
  int corner = 0;  // representative face-local label the arcs go around
  int offset = 0;  // distance from the corner, in arcs
  int width = 0;
  bool operator==(const Band&) const = default;
};

struct BuiltComplex {
  BranchedComplex complex;
  std::vector<int> weights;  // prism count of each sector
  std::vector<Band> bands;
};

namespace detail {

struct PrismSide {
  int polygon = 0;
  int position = 0;
  int tet = 0;
  int face = 0;    // tetrahedron face the side lies on
  int corner = 0;  // tetrahedron vertex the arcs go around
  int from = 0;    // other vertex of the face at the side's start
  int to = 0;
  int offset = 0;
  int width = 0;
};

// Representative face-local label of tetrahedron vertex v seen from (t, f).
inline int rep_label(const Triangulation& tri, int t, int f, int v) {
  const auto verts = face_vertices(f);
  const int local = static_cast<int>(std::find(verts.begin(), verts.end(), v) - verts.begin());
  const auto& gf = tri.faces()[tri.face_of({t, f})];
  if (gf.rep == FaceRef{t, f}) return local;
  return tri.gluing(t, f)->perm[local];
}

}  // namespace detail

/// Turns each prism family into one polygonal face and bands the families
/// together across shared faces. Blocks of arcs around the same corner of a
/// face are stacked triangles first, then rectangles. Equal blocks on the two
/// sides become smooth edges; a block meeting two blocks on the other side
/// becomes a branch edge with that block as parent. Edge tubes are collapsed:
/// every polygon corner on an edge of the triangulation is one vertex.
inline BuiltComplex build_from_prisms(const Triangulation& tri, const PrismCoordinates& p) {
  using detail::PrismSide;
  if (static_cast<int>(p.tets.size()) != tri.tet_count())
    throw Error(ErrorCode::kUnmatchedRectangle, "prism coordinates do not match the triangulation");

  std::vector<int> polygon_weight;
  std::vector<std::vector<PrismSide>> polygons;
  auto add_polygon = [&](int t, int weight, const std::vector<std::array<int, 4>>& sides,
                         const TetPrisms& tp, bool quad) {
    const int id = static_cast<int>(polygons.size());
    std::vector<PrismSide> out;
    for (int i = 0; i < static_cast<int>(sides.size()); ++i) {
      const auto [face, corner, from, to] = sides[i];
      PrismSide s{id, i, t, face, corner, from, to, quad ? tp.tri[corner] : 0, weight};
      out.push_back(s);
    }
    polygons.push_back(std::move(out));
    polygon_weight.push_back(weight);
  };
  for (int t = 0; t < tri.tet_count(); ++t) {
    const auto& tp = p.tets[t];
    for (int v = 0; v < 4; ++v) {
      if (tp.tri[v] <= 0) continue;
      const auto o = face_vertices(v);  // the other three vertices, sorted
      add_polygon(t, tp.tri[v],
                  {{o[2], v, o[0], o[1]}, {o[0], v, o[1], o[2]}, {o[1], v, o[2], o[0]}}, tp,
                  false);
    }
    if (tp.quad > 0 && tp.quad_axis >= 0) {
      const int a0 = 0, a1 = tp.quad_axis + 1;
      std::array<int, 2> bs{};
      for (int v = 1, k = 0; v < 4; ++v)
        if (v != a1) bs[k++] = v;
      const int b0 = bs[0], b1 = bs[1];
      add_polygon(t, tp.quad,
                  {{a1, a0, b0, b1}, {b0, b1, a0, a1}, {a0, a1, b1, b0}, {b1, b0, a1, a0}}, tp,
                  true);
    }
  }

  // Group sides by (global face, representative corner).
  std::map<std::pair<int, int>, std::array<std::vector<PrismSide>, 2>> groups;
  for (const auto& poly : polygons)
    for (const auto& s : poly) {
      const int g = tri.face_of({s.tet, s.face});
      const bool rep = tri.faces()[g].rep == FaceRef{s.tet, s.face};
      const int corner = detail::rep_label(tri, s.tet, s.face, s.corner);
      groups[{g, corner}][rep ? 0 : 1].push_back(s);
    }

  BuiltComplex out;
  UnionFind sectors(polygons.size());
  struct PendingEdge {
    CellEdge edge;  // branch sectors hold polygon ids until compaction
    std::vector<std::pair<PrismSide, bool>> sides;  // side, reversed
  };
  std::vector<PendingEdge> pending;
  std::vector<int> vertex_of_edge(tri.edges().size(), -1);
  auto orient = [&](const PrismSide& s) {
    const int from = detail::rep_label(tri, s.tet, s.face, s.from);
    const int to = detail::rep_label(tri, s.tet, s.face, s.to);
    return from > to;
  };
  auto endpoints = [&](const PrismSide& s) {
    int a = tri.edge_of(s.tet, s.corner, s.from).edge;
    int b = tri.edge_of(s.tet, s.corner, s.to).edge;
    if (orient(s)) std::swap(a, b);
    return std::pair{a, b};
  };
  auto make_edge = [&](const PrismSide& s) {
    CellEdge e;
    std::tie(e.from, e.to) = endpoints(s);
    return e;
  };

  for (auto& [key, sides] : groups) {
    const auto [g, corner] = key;
    for (auto& list : sides)
      std::sort(list.begin(), list.end(),
                [](const PrismSide& a, const PrismSide& b) { return a.offset < b.offset; });
    const bool shared = tri.faces()[g].other.has_value();
    if (!shared) {
      for (const auto& list : sides)
        for (const auto& s : list) {
          PendingEdge pe{make_edge(s), {{s, orient(s)}}};
          pe.edge.kind = EdgeKind::kBoundary;
          pending.push_back(std::move(pe));
        }
      continue;
    }
    auto total = [](const std::vector<PrismSide>& l) {
      int n = 0;
      for (const auto& s : l) n += s.width;
      return n;
    };
    if (total(sides[0]) != total(sides[1]))
      throw Error(ErrorCode::kUnmatchedRectangle,
                  "face " + std::to_string(g) + " carries " + std::to_string(total(sides[0])) +
                      " and " + std::to_string(total(sides[1])) + " prism arcs around corner " +
                      std::to_string(corner) + " on its two sides");
    if (sides[0].empty()) continue;
    const auto& a = sides[0];
    const auto& b = sides[1];
    auto cuts = [](const std::vector<PrismSide>& l) {
      std::vector<int> c;
      for (const auto& s : l) c.push_back(s.offset);
      return c;
    };
    if (cuts(a) == cuts(b)) {
      for (std::size_t i = 0; i < a.size(); ++i) {
        sectors.unite(a[i].polygon, b[i].polygon);
        PendingEdge pe{make_edge(a[i]), {{a[i], orient(a[i])}, {b[i], orient(b[i])}}};
        pe.edge.kind = EdgeKind::kInterior;
        pe.edge.sector = a[i].polygon;
        pending.push_back(std::move(pe));
        out.bands.push_back({g, corner, a[i].offset, a[i].width});
      }
    } else if (a.size() + b.size() == 3) {
      const auto& parent = a.size() == 1 ? a[0] : b[0];
      const auto& kids = a.size() == 1 ? b : a;
      PendingEdge pe{make_edge(parent),
                     {{parent, orient(parent)}, {kids[0], orient(kids[0])}, {kids[1], orient(kids[1])}}};
      pe.edge.kind = EdgeKind::kBranch;
      pe.edge.branch = {parent.polygon, kids[0].polygon, kids[1].polygon, kids[0].polygon, false};
      pending.push_back(std::move(pe));
      for (const auto& k : kids) out.bands.push_back({g, corner, k.offset, k.width});
    } else {
      throw Error(ErrorCode::kUnmatchedRectangle,
                  "prism blocks on face " + std::to_string(g) + " around corner " +
                      std::to_string(corner) + " cross");
    }
  }

  // Sector ids: classes of polygons in order of their smallest member.
  std::vector<int> sector_id(polygons.size(), -1);
  int next_sector = 0;
  for (std::size_t i = 0; i < polygons.size(); ++i) {
    const auto root = sectors.find(i);
    if (sector_id[root] < 0) {
      sector_id[root] = next_sector++;
      out.weights.push_back(polygon_weight[i]);
    }
  }
  auto sector_of = [&](int polygon) { return sector_id[sectors.find(polygon)]; };

  auto& cx = out.complex;
  cx.sectors = next_sector;
  std::vector<std::vector<SignedEdge>> cycles(polygons.size());
  for (std::size_t i = 0; i < polygons.size(); ++i) cycles[i].resize(polygons[i].size());
  for (std::size_t e = 0; e < pending.size(); ++e) {
    auto edge = pending[e].edge;
    for (int* v : {&edge.from, &edge.to}) {
      if (vertex_of_edge[*v] < 0) vertex_of_edge[*v] = -2;  // mark used
    }
    if (edge.kind == EdgeKind::kInterior) edge.sector = sector_of(edge.sector);
    if (edge.kind == EdgeKind::kBranch) {
      auto& d = edge.branch;
      d.parent = sector_of(d.parent);
      d.child_j = sector_of(d.child_j);
      d.child_k = sector_of(d.child_k);
      d.first = sector_of(d.first);
      if (d.parent == d.child_j || d.parent == d.child_k)
        throw Error(ErrorCode::kDegenerateBranch,
                    "banding makes a branch parent one of its own children");
    }
    cx.edges.push_back(edge);
    for (const auto& [s, rev] : pending[e].sides)
      cycles[s.polygon][s.position] = {static_cast<int>(e), rev};
  }
  int next_vertex = 0;
  for (auto& v : vertex_of_edge)
    if (v == -2) v = next_vertex++;
  for (auto& edge : cx.edges) {
    edge.from = vertex_of_edge[edge.from];
    edge.to = vertex_of_edge[edge.to];
  }
  for (std::size_t i = 0; i < polygons.size(); ++i)
    cx.faces.push_back({sector_of(static_cast<int>(i)), std::move(cycles[i])});

  cx.dominant.assign(next_vertex, cx.sectors);
  for (const auto& face : cx.faces)
    for (const auto& s : face.cycle) {
      int& dom = cx.dominant[cx.start_of(s)];
      dom = std::min(dom, face.sector);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Amputation of sectors that reach the boundary.

struct Amputation {
  BranchedComplex complex;
  std::vector<std::vector<int>> ledger;  // original sector ids removed per step
};

namespace detail {

struct Piece {
  EdgeKind kind = EdgeKind::kBoundary;
  std::vector<Incidence> inc;  // branch: parent, first, second
  bool rev = false;
};

}  // namespace detail

/// Repeatedly removes the sector (or merged sector) with the smallest id
/// among those with a face on a boundary edge, until no boundary edge is
/// left. With `rng` set the sector to remove is drawn at random instead.
/// Removing a child of a branch edge joins the parent to the other child;
/// removing the parent leaves both children with boundary edges there.
inline Amputation amputate_boundary(const BranchedComplex& in, Rng* rng = nullptr) {
  using detail::Piece;
  const auto inc = in.incidences();
  std::vector<std::vector<Piece>> pieces(in.edges.size());
  for (int e = 0; e < static_cast<int>(in.edges.size()); ++e) {
    const auto& edge = in.edges[e];
    Piece p;
    p.kind = edge.kind;
    if (edge.kind == EdgeKind::kBranch) {
      const auto roles = branch_roles(in, e, inc[e]);
      if (!roles) throw Error(ErrorCode::kBadIncidence, "edge " + std::to_string(e) + " has bad roles");
      p.inc = {roles->parent, roles->first, roles->second};
      p.rev = edge.branch.rev;
    } else {
      p.inc = inc[e];
    }
    pieces[e].push_back(std::move(p));
  }
  std::vector<bool> alive(in.faces.size(), true);
  UnionFind cls(in.sectors);
  Amputation out;

  auto face_alive = [&](const Incidence& i) { return alive[i.face]; };
  auto sector_root = [&](int face) { return static_cast<int>(cls.find(in.faces[face].sector)); };

  while (true) {
    std::vector<int> exposed;
    for (const auto& list : pieces)
      for (const auto& p : list)
        if (p.kind == EdgeKind::kBoundary) exposed.push_back(sector_root(p.inc[0].face));
    if (exposed.empty()) break;
    std::sort(exposed.begin(), exposed.end());
    exposed.erase(std::unique(exposed.begin(), exposed.end()), exposed.end());
    const int victim = rng ? exposed[rng->uniform(0, static_cast<int>(exposed.size()) - 1)]
                           : exposed.front();
    std::vector<int> removed;
    for (int s = 0; s < in.sectors; ++s)
      if (static_cast<int>(cls.find(s)) == victim) removed.push_back(s);
    out.ledger.push_back(removed);
    for (int f = 0; f < static_cast<int>(in.faces.size()); ++f)
      if (alive[f] && sector_root(f) == victim) alive[f] = false;

    for (auto& list : pieces) {
      std::vector<Piece> next;
      for (auto& p : list) {
        if (p.kind != EdgeKind::kBranch) {
          std::vector<Incidence> keep;
          for (const auto& i : p.inc)
            if (face_alive(i)) keep.push_back(i);
          if (keep.empty()) continue;
          p.kind = keep.size() == 1 ? EdgeKind::kBoundary : p.kind;
          p.inc = std::move(keep);
          next.push_back(std::move(p));
          continue;
        }
        const bool par = face_alive(p.inc[0]), a = face_alive(p.inc[1]), b = face_alive(p.inc[2]);
        if (par && a && b) {
          next.push_back(std::move(p));
        } else if (par && (a || b)) {
          const auto child = a ? p.inc[1] : p.inc[2];
          cls.unite(in.faces[p.inc[0].face].sector, in.faces[child.face].sector);
          next.push_back({EdgeKind::kInterior, {p.inc[0], child}, false});
        } else if (par) {
          next.push_back({EdgeKind::kBoundary, {p.inc[0]}, false});
        } else {
          if (a) next.push_back({EdgeKind::kBoundary, {p.inc[1]}, false});
          if (b) next.push_back({EdgeKind::kBoundary, {p.inc[2]}, false});
        }
      }
      list = std::move(next);
    }
  }

  // Compact what is left.
  auto& cx = out.complex;
  std::vector<int> sector_id(in.sectors, -1);
  for (int s = 0; s < in.sectors; ++s) {
    const auto root = cls.find(s);
    bool live = false;
    for (int f = 0; f < static_cast<int>(in.faces.size()); ++f)
      if (alive[f] && cls.find(in.faces[f].sector) == root) live = true;
    if (live && sector_id[root] < 0) sector_id[root] = cx.sectors++;
  }
  auto new_sector = [&](int original) { return sector_id[cls.find(original)]; };

  std::vector<int> face_id(in.faces.size(), -1);
  for (int f = 0; f < static_cast<int>(in.faces.size()); ++f)
    if (alive[f]) {
      face_id[f] = static_cast<int>(cx.faces.size());
      cx.faces.push_back({new_sector(in.faces[f].sector), in.faces[f].cycle});
    }

  std::vector<int> vertex_id(in.vertex_count(), -1);
  std::vector<int> vertex_order;
  std::map<Incidence, int> new_edge;
  for (int e = 0; e < static_cast<int>(in.edges.size()); ++e) {
    for (const auto& p : pieces[e]) {
      CellEdge edge;
      edge.from = in.edges[e].from;
      edge.to = in.edges[e].to;
      edge.kind = p.kind;
      const int s0 = new_sector(in.faces[p.inc[0].face].sector);
      if (p.kind == EdgeKind::kInterior) edge.sector = s0;
      if (p.kind == EdgeKind::kBranch) {
        const int s1 = new_sector(in.faces[p.inc[1].face].sector);
        const int s2 = new_sector(in.faces[p.inc[2].face].sector);
        edge.branch = {s0, s1, s2, s1, p.rev};
      }
      const int id = static_cast<int>(cx.edges.size());
      cx.edges.push_back(edge);
      for (const auto& i : p.inc) new_edge[i] = id;
    }
  }
  for (int f = 0; f < static_cast<int>(in.faces.size()); ++f) {
    if (!alive[f]) continue;
    auto& cycle = cx.faces[face_id[f]].cycle;
    for (int p = 0; p < static_cast<int>(cycle.size()); ++p) cycle[p].edge = new_edge.at({f, p});
  }
  for (auto& edge : cx.edges)
    for (int* v : {&edge.from, &edge.to}) vertex_id[*v] = 0;
  for (int v = 0; v < in.vertex_count(); ++v)
    if (vertex_id[v] == 0) {
      vertex_id[v] = static_cast<int>(vertex_order.size());
      vertex_order.push_back(v);
    }
  for (auto& edge : cx.edges) {
    edge.from = vertex_id[edge.from];
    edge.to = vertex_id[edge.to];
  }
  cx.dominant.assign(vertex_order.size(), cx.sectors);
  for (std::size_t i = 0; i < vertex_order.size(); ++i) {
    const int dom = new_sector(in.dominant[vertex_order[i]]);
    int best = cx.sectors;
    bool dom_here = false;
    for (const auto& face : cx.faces)
      for (const auto& s : face.cycle)
        if (cx.start_of(s) == static_cast<int>(i)) {
          best = std::min(best, face.sector);
          if (face.sector == dom && dom >= 0) dom_here = true;
        }
    cx.dominant[i] = dom_here ? dom : best;
  }
  return out;
}

}  // namespace carrier
