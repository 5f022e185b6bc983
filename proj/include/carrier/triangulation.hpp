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

// Triangulations of 3-manifolds given by face gluings of tetrahedra, with the
// vertex/edge/face skeleta derived after identification.

#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "carrier/error.hpp"
#include "carrier/util.hpp"

namespace carrier {

struct FaceRef {
  int tet = 0;
  int face = 0;
  auto operator<=>(const FaceRef&) const = default;
};

/// Bijection of the three face-vertex labels; perm[i] is the image of label i.
using Perm3 = std::array<int, 3>;

inline Perm3 inverse(const Perm3& p) {
  Perm3 q{};
  for (int i = 0; i < 3; ++i) q[p[i]] = i;
  return q;
}

inline bool is_perm3(const Perm3& p) {
  std::array<bool, 3> seen{};
  for (int v : p) {
    if (v < 0 || v > 2 || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

struct Gluing {
  FaceRef target;
  Perm3 perm{0, 1, 2};
};

/// The three tetrahedron vertices of face f (the face opposite vertex f), in
/// increasing order. Face-local label i refers to entry i.
inline std::array<int, 3> face_vertices(int f) {
  std::array<int, 3> out{};
  int k = 0;
  for (int v = 0; v < 4; ++v)
    if (v != f) out[k++] = v;
  return out;
}

/// Face-local edge e runs from local vertex (e+1)%3 to local vertex (e+2)%3,
/// so walking edges 2, 0, 1 traverses the face boundary v0 -> v1 -> v2 -> v0.
inline int local_edge_start(int e) { return (e + 1) % 3; }
inline int local_edge_end(int e) { return (e + 2) % 3; }

/// Index 0..5 of the tetrahedron edge {a, b}.
inline int tet_edge_index(int a, int b) {
  if (a > b) std::swap(a, b);
  static constexpr int kTable[4][4] = {
      {-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
  return kTable[a][b];
}

inline std::array<int, 2> tet_edge_vertices(int index) {
  static constexpr std::array<std::array<int, 2>, 6> kEdges = {
      {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  return kEdges[index];
}

struct SkeletonCounts {
  int vertices = 0;
  int edges = 0;
  int faces = 0;
  int tetrahedra = 0;

  int euler() const { return vertices - edges + faces - tetrahedra; }
  bool operator==(const SkeletonCounts&) const = default;
};

/// Position of a global edge inside one tetrahedron or one face.
struct EdgeUse {
  int edge = -1;
  /// True when the local direction agrees with the edge's canonical direction.
  bool aligned = true;
};

/// A global face seen from its representative (t, f): local edge `local_edge`
/// of the representative's labelling lies on the global edge.
struct FaceSide {
  int face = 0;
  int local_edge = 0;
  auto operator<=>(const FaceSide&) const = default;
};

class Triangulation {
 public:
  struct GlobalFace {
    FaceRef rep;
    std::optional<FaceRef> other;
    Perm3 perm{0, 1, 2};  // rep-local label -> other-local label
  };

  struct GlobalEdge {
    std::vector<std::array<int, 2>> members;  // (tet, tet-edge index)
    std::vector<FaceRef> ring;                // faces crossed walking around
    bool interior = true;                     // no boundary face on the ring
  };

  Triangulation() = default;

  /// Validates the gluing table and builds the skeleta.
  static Triangulation from_gluings(
      int tet_count, std::vector<std::array<std::optional<Gluing>, 4>> gluings) {
    Triangulation tri;
    tri.tet_count_ = tet_count;
    tri.gluings_ = std::move(gluings);
    if (static_cast<int>(tri.gluings_.size()) != tet_count)
      throw Error(ErrorCode::kParseError, "gluing table size mismatch");
    tri.check_gluings();
    tri.build_faces();
    tri.build_vertices();
    tri.build_edges();
    return tri;
  }

  int tet_count() const { return tet_count_; }

  const std::optional<Gluing>& gluing(int tet, int face) const {
    return gluings_.at(tet).at(face);
  }

  SkeletonCounts skeleton_counts() const {
    return {static_cast<int>(vertex_rep_.size()), static_cast<int>(edges_.size()),
            static_cast<int>(faces_.size()), tet_count_};
  }

  bool closed() const {
    for (const auto& g : faces_)
      if (!g.other) return false;
    return true;
  }

  const std::vector<GlobalFace>& faces() const { return faces_; }
  const std::vector<GlobalEdge>& edges() const { return edges_; }

  int face_of(FaceRef ref) const { return face_index_.at(ref.tet).at(ref.face); }
  int vertex_of(int tet, int v) const { return vertex_index_.at(tet).at(v); }

  /// Global edge of the tetrahedron edge a -> b and whether a -> b runs along
  /// the canonical direction.
  EdgeUse edge_of(int tet, int a, int b) const {
    const auto& slot = tet_edges_.at(tet).at(tet_edge_index(a, b));
    return {slot.edge, (a < b) == slot.aligned};
  }

  /// Local edge e of the representative of global face g.
  EdgeUse face_edge(int g, int e) const {
    const FaceRef rep = faces_.at(g).rep;
    auto vs = face_vertices(rep.face);
    return edge_of(rep.tet, vs[local_edge_start(e)], vs[local_edge_end(e)]);
  }

  /// Every (face, local edge) lying on global edge `edge`, ordered.
  const std::vector<FaceSide>& sides_of_edge(int edge) const {
    return edge_sides_.at(edge);
  }

  /// Tetrahedron vertex of `tet` at local label `label` of face (tet, face).
  static int face_label_vertex(int face, int label) {
    return face_vertices(face)[label];
  }

 private:
  struct TetEdgeSlot {
    int edge = -1;
    bool aligned = true;  // low -> high vertex agrees with canonical direction
  };

  void check_gluings() {
    for (int t = 0; t < tet_count_; ++t) {
      for (int f = 0; f < 4; ++f) {
        const auto& g = gluings_[t][f];
        if (!g) continue;
        const FaceRef src{t, f};
        if (g->target.tet < 0 || g->target.tet >= tet_count_)
          throw Error(ErrorCode::kDanglingReference,
                      "tetrahedron " + std::to_string(g->target.tet) + " out of range");
        if (g->target.face < 0 || g->target.face > 3)
          throw Error(ErrorCode::kParseError, "face index out of range");
        if (!is_perm3(g->perm))
          throw Error(ErrorCode::kParseError, "correspondence is not a permutation");
        if (g->target == src)
          throw Error(ErrorCode::kSelfGluedFace, "face (" + std::to_string(t) + "," +
                                                     std::to_string(f) + ") glued to itself");
        const auto& back = gluings_[g->target.tet][g->target.face];
        if (!back || back->target != src || back->perm != inverse(g->perm))
          throw Error(ErrorCode::kGlueNotInvolutive,
                      "gluing of (" + std::to_string(t) + "," + std::to_string(f) +
                          ") has no matching inverse");
      }
    }
  }

  void build_faces() {
    face_index_.assign(tet_count_, {-1, -1, -1, -1});
    for (int t = 0; t < tet_count_; ++t) {
      for (int f = 0; f < 4; ++f) {
        if (face_index_[t][f] >= 0) continue;
        GlobalFace g;
        g.rep = {t, f};
        face_index_[t][f] = static_cast<int>(faces_.size());
        if (const auto& glue = gluings_[t][f]) {
          g.other = glue->target;
          g.perm = glue->perm;
          face_index_[glue->target.tet][glue->target.face] = face_index_[t][f];
        }
        faces_.push_back(g);
      }
    }
  }

  // Image of tetrahedron vertex v of `tet` across the gluing of face f.
  int map_vertex(int tet, int f, int v) const {
    const auto& g = *gluings_[tet][f];
    const auto vs = face_vertices(f);
    const int label = static_cast<int>(std::find(vs.begin(), vs.end(), v) - vs.begin());
    return face_vertices(g.target.face)[g.perm[label]];
  }

  void build_vertices() {
    UnionFind uf(static_cast<std::size_t>(tet_count_) * 4);
    for (int t = 0; t < tet_count_; ++t)
      for (int f = 0; f < 4; ++f)
        if (const auto& g = gluings_[t][f])
          for (int v : face_vertices(f))
            uf.unite(t * 4 + v, g->target.tet * 4 + map_vertex(t, f, v));
    vertex_index_.assign(tet_count_, {-1, -1, -1, -1});
    std::vector<int> root_index(uf.size(), -1);
    for (int t = 0; t < tet_count_; ++t) {
      for (int v = 0; v < 4; ++v) {
        auto r = uf.find(t * 4 + v);
        if (root_index[r] < 0) {
          root_index[r] = static_cast<int>(vertex_rep_.size());
          vertex_rep_.push_back({t, v});
        }
        vertex_index_[t][v] = root_index[r];
      }
    }
  }

  void build_edges() {
    const std::size_t n = static_cast<std::size_t>(tet_count_) * 6;
    // Parity union-find: parity[x] is the orientation of x relative to parent.
    std::vector<std::size_t> parent(n);
    std::vector<int> parity(n, 0);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](std::size_t x) {
      int p = 0;
      std::size_t r = x;
      while (parent[r] != r) {
        p ^= parity[r];
        r = parent[r];
      }
      return std::pair{r, p};
    };
    for (int t = 0; t < tet_count_; ++t) {
      for (int f = 0; f < 4; ++f) {
        const auto& g = gluings_[t][f];
        if (!g) continue;
        const auto vs = face_vertices(f);
        for (int i = 0; i < 3; ++i) {
          for (int j = i + 1; j < 3; ++j) {
            const int a = vs[i], b = vs[j];  // a < b
            const int a2 = map_vertex(t, f, a), b2 = map_vertex(t, f, b);
            const std::size_t x = t * 6 + tet_edge_index(a, b);
            const std::size_t y = g->target.tet * 6 + tet_edge_index(a2, b2);
            const int rel = a2 > b2 ? 1 : 0;
            auto [rx, px] = find(x);
            auto [ry, py] = find(y);
            if (rx == ry) {
              if ((px ^ py) != rel)
                throw Error(ErrorCode::kEdgeSelfReversed,
                            "an edge is identified with itself reversed (tetrahedron " +
                                std::to_string(t) + ")");
              continue;
            }
            if (ry < rx) {
              std::swap(rx, ry);
              std::swap(px, py);
            }
            parent[ry] = rx;
            parity[ry] = px ^ py ^ rel;
          }
        }
      }
    }
    tet_edges_.assign(tet_count_, {});
    std::vector<int> root_index(n, -1);
    for (int t = 0; t < tet_count_; ++t) {
      for (int e = 0; e < 6; ++e) {
        auto [r, p] = find(t * 6 + e);
        if (root_index[r] < 0) {
          root_index[r] = static_cast<int>(edges_.size());
          edges_.emplace_back();
        }
        const int id = root_index[r];
        tet_edges_[t][e] = {id, p == 0};
        edges_[id].members.push_back({t, e});
      }
    }
    for (int id = 0; id < static_cast<int>(edges_.size()); ++id) build_ring(id);

    edge_sides_.assign(edges_.size(), {});
    for (int g = 0; g < static_cast<int>(faces_.size()); ++g)
      for (int e = 0; e < 3; ++e) edge_sides_[face_edge(g, e).edge].push_back({g, e});
  }

  void build_ring(int id) {
    auto& edge = edges_[id];
    // Start from a boundary face if there is one, so an open ring is walked
    // end to end.
    int t = edge.members.front()[0];
    auto ab = tet_edge_vertices(edge.members.front()[1]);
    int entry = -1;
    for (const auto& m : edge.members) {
      auto vs = tet_edge_vertices(m[1]);
      for (int c = 0; c < 4; ++c) {
        if (c == vs[0] || c == vs[1]) continue;
        if (!gluings_[m[0]][c]) {
          edge.interior = false;
          if (entry < 0) {
            t = m[0];
            ab = vs;
            entry = c;  // walk away from the boundary face until the far end
          }
        }
      }
    }
    if (entry < 0) {
      for (int c = 3; c >= 0; --c)
        if (c != ab[0] && c != ab[1]) {
          entry = c;
          break;
        }
    }
    if (!edge.interior) edge.ring.push_back({t, entry});
    const int start_tet = t, start_entry = entry;
    const int start_edge = tet_edge_index(ab[0], ab[1]);
    const int limit = tet_count_ * 12 + 4;
    for (int step = 0; step < limit; ++step) {
      int exit = -1;
      for (int d = 0; d < 4; ++d)
        if (d != ab[0] && d != ab[1] && d != entry) exit = d;
      edge.ring.push_back({t, exit});
      const auto& g = gluings_[t][exit];
      if (!g) break;
      const int a2 = map_vertex(t, exit, ab[0]), b2 = map_vertex(t, exit, ab[1]);
      t = g->target.tet;
      entry = g->target.face;
      ab = {a2, b2};
      if (t == start_tet && entry == start_entry &&
          tet_edge_index(ab[0], ab[1]) == start_edge)
        break;
    }
  }

  int tet_count_ = 0;
  std::vector<std::array<std::optional<Gluing>, 4>> gluings_;
  std::vector<GlobalFace> faces_;
  std::vector<std::array<int, 4>> face_index_;
  std::vector<std::array<int, 4>> vertex_index_;
  std::vector<std::array<int, 2>> vertex_rep_;
  std::vector<std::array<TetEdgeSlot, 6>> tet_edges_;
  std::vector<GlobalEdge> edges_;
  std::vector<std::vector<FaceSide>> edge_sides_;
};

inline std::string perm_string(const Perm3& p) {
  return {static_cast<char>('0' + p[0]), static_cast<char>('0' + p[1]),
          static_cast<char>('0' + p[2])};
}

/// Parses a `.tri` file: a `tetrahedra <N>` header followed by exactly one
/// `glue` or `boundary` line per (tetrahedron, face).
inline Triangulation load_triangulation(std::string_view text) {
  const auto lines = text::lines(text);
  if (lines.empty()) throw Error(ErrorCode::kParseError, "empty triangulation file");
  const auto& head = lines.front();
  text::expect(head, 0, "tetrahedra");
  if (head.tokens.size() != 2) text::fail(head, "expected 'tetrahedra <N>'");
  const int n = text::to_index(head, head.tokens[1]);

  std::vector<std::array<std::optional<Gluing>, 4>> gluings(n);
  std::vector<std::array<bool, 4>> seen(n, {false, false, false, false});
  auto claim = [&](const text::Line& line, int t, int f) {
    if (t >= n)
      throw Error(ErrorCode::kDanglingReference,
                  "line " + std::to_string(line.number) + ": tetrahedron " +
                      std::to_string(t) + " out of range");
    if (f > 3) text::fail(line, "face index must be 0..3");
    if (seen[t][f]) text::fail(line, "face listed twice");
    seen[t][f] = true;
  };
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    const auto& tok = line.tokens;
    if (tok[0] == "glue") {
      if (tok.size() != 7 || tok[3] != "->")
        text::fail(line, "expected 'glue <t> <f> -> <t'> <f'> <perm>'");
      const int t = text::to_index(line, tok[1]), f = text::to_index(line, tok[2]);
      claim(line, t, f);
      Gluing g;
      g.target = {text::to_index(line, tok[4]), text::to_index(line, tok[5])};
      if (tok[6].size() != 3) text::fail(line, "permutation must have 3 digits");
      for (int k = 0; k < 3; ++k) g.perm[k] = tok[6][k] - '0';
      if (!is_perm3(g.perm)) text::fail(line, "bad permutation '" + tok[6] + "'");
      if (g.target.face > 3) text::fail(line, "face index must be 0..3");
      if (g.target.tet >= n)
        throw Error(ErrorCode::kDanglingReference,
                    "line " + std::to_string(line.number) + ": tetrahedron " +
                        std::to_string(g.target.tet) + " out of range");
      gluings[t][f] = g;
    } else if (tok[0] == "boundary") {
      if (tok.size() != 3) text::fail(line, "expected 'boundary <t> <f>'");
      claim(line, text::to_index(line, tok[1]), text::to_index(line, tok[2]));
    } else {
      text::fail(line, "unknown keyword '" + tok[0] + "'");
    }
  }
  for (int t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f)
      if (!seen[t][f])
        throw Error(ErrorCode::kParseError, "face (" + std::to_string(t) + "," +
                                                std::to_string(f) + ") not listed");
  return Triangulation::from_gluings(n, std::move(gluings));
}

inline std::string serialize(const Triangulation& tri) {
  std::ostringstream out;
  out << "tetrahedra " << tri.tet_count() << "\n";
  for (int t = 0; t < tri.tet_count(); ++t) {
    for (int f = 0; f < 4; ++f) {
      if (const auto& g = tri.gluing(t, f))
        out << "glue " << t << " " << f << " -> " << g->target.tet << " "
            << g->target.face << " " << perm_string(g->perm) << "\n";
      else
        out << "boundary " << t << " " << f << "\n";
    }
  }
  return out.str();
}

inline SkeletonCounts skeleton_counts(const Triangulation& tri) {
  return tri.skeleton_counts();
}

}  // namespace carrier
