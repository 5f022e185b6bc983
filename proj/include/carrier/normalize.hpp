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

// Normal form of dividing sets under TB-increasing edge isotopies across
// bypasses, and the packing of normal arcs into fibered prisms.

#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "carrier/dividing.hpp"
#include "carrier/error.hpp"
#include "carrier/triangulation.hpp"

namespace carrier {

/// A boundary-parallel arc on adjacent slots (edge, index), (edge, index + 1)
/// whose half disk stays away from both vertices of the edge.
struct BypassCandidate {
  int face = 0;
  int edge = 0;   // face-local
  int index = 0;  // lower slot
  auto operator<=>(const BypassCandidate&) const = default;
};

struct SideRewrite {
  int face = 0;
  int local_edge = 0;
  int index = 0;
};

struct MoveRecord {
  BypassCandidate removed;
  int edge = 0;  // global edge isotoped
  std::vector<SideRewrite> rewrites;
  int tb_before = 0;
  int tb_after = 0;
};

/// Rewrites one adjacent face when the edge moves across a bypass: the two
/// slots (edge, index), (edge, index + 1) disappear. Returns false when the
/// rewrite would produce a closed component.
using AttachmentRule =
    std::function<bool(const FaceDiagram& in, int edge, int index, FaceDiagram& out)>;

/// Default rule: the arcs ending at the two vanishing slots are joined into
/// one arc running around the move site; the third nearby endpoint keeps its
/// arc.
inline bool join_attachment(const FaceDiagram& in, int edge, int index, FaceDiagram& out) {
  return in.join_at(edge, index, out);
}

inline void require_no_closed(const DividingSet& d) {
  if (auto closed = detect_closed(d); !closed.empty())
    throw Error(ErrorCode::kOvertwistedHint,
                "face " + std::to_string(closed.front().first) +
                    " has closed dividing curves; the structure cannot be tight");
}

/// Lists removable boundary-parallel arcs in (face, edge, slot) order.
inline std::vector<BypassCandidate> find_bypass_candidates(const DividingSet& d) {
  require_no_closed(d);
  std::vector<BypassCandidate> out;
  for (int g = 0; g < d.face_count(); ++g) {
    const auto& f = d.face(g);
    if (f.arc_count() < 2) continue;  // a connected dividing set on a disk has no bypass
    for (const auto& [a, b] : f.arcs()) {
      if (a.edge != b.edge) continue;
      const int lo = std::min(a.index, b.index), hi = std::max(a.index, b.index);
      if (hi != lo + 1) continue;  // encloses other endpoints
      if (lo == 0 || hi == f.slots_on(a.edge) - 1) continue;  // near a vertex
      out.push_back({g, a.edge, lo});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Isotopes the edge carrying the candidate arc across its bypass.
inline std::pair<DividingSet, MoveRecord> apply_edge_isotopy(
    const DividingSet& d, const BypassCandidate& c,
    const AttachmentRule& rule = join_attachment) {
  const auto candidates = find_bypass_candidates(d);
  if (!std::binary_search(candidates.begin(), candidates.end(), c))
    throw Error(ErrorCode::kNotACandidate, "arc is not a bypass candidate");
  const auto& tri = d.triangulation();
  MoveRecord record;
  record.removed = c;
  record.tb_before = tb_total(d);
  const EdgeUse use = tri.face_edge(c.face, c.edge);
  record.edge = use.edge;

  auto faces = d.faces();
  const int k = faces[c.face].slots_on(c.edge);
  faces[c.face] = faces[c.face].without_arc({c.edge, c.index}, {c.edge, c.index + 1});
  if (tri.edges()[use.edge].interior) {
    const FaceSide acted{c.face, c.edge};
    const int g0 = std::min(global_slot(tri, acted, k, c.index),
                            global_slot(tri, acted, k, c.index + 1));
    for (const auto& side : tri.sides_of_edge(use.edge)) {
      if (side == acted) continue;
      const int lo = std::min(global_slot(tri, side, k, g0), global_slot(tri, side, k, g0 + 1));
      FaceDiagram next;
      if (!rule(faces[side.face], side.local_edge, lo, next))
        throw Error(ErrorCode::kAttachmentCreatesClosed,
                    "rewriting face " + std::to_string(side.face) +
                        " along edge " + std::to_string(use.edge) + " closes a dividing curve");
      faces[side.face] = std::move(next);
      record.rewrites.push_back({side.face, side.local_edge, lo});
    }
  }
  DividingSet out(d.triangulation_ptr(), std::move(faces));
  record.tb_after = tb_total(out);
  return {std::move(out), std::move(record)};
}

namespace detail {

inline int blocked_candidates(const DividingSet& d, const AttachmentRule& rule) {
  int blocked = 0;
  for (const auto& c : find_bypass_candidates(d)) {
    try {
      apply_edge_isotopy(d, c, rule);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kAttachmentCreatesClosed) throw;
      ++blocked;
    }
  }
  return blocked;
}

struct NormalSearch {
  const AttachmentRule& rule;
  std::unordered_set<std::string> dead;
  std::vector<MoveRecord> path;
  std::optional<Error> first_failure;
  long nodes = 0;
  long node_budget;

  std::optional<DividingSet> run(const DividingSet& d) {
    if (++nodes > node_budget)
      throw Error(ErrorCode::kInternalBound, "normalization search exceeded its node budget");
    std::string key = serialize(d);
    if (dead.count(key)) return std::nullopt;
    const auto candidates = find_bypass_candidates(d);
    if (candidates.empty()) return d;
    struct Child {
      int blocked;
      DividingSet next;
      MoveRecord record;
    };
    std::vector<Child> children;
    for (const auto& c : candidates) {
      try {
        auto [next, record] = apply_edge_isotopy(d, c, rule);
        const int b = blocked_candidates(next, rule);
        children.push_back({b, std::move(next), std::move(record)});
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kAttachmentCreatesClosed) throw;
        if (!first_failure) first_failure = e;
      }
    }
    std::stable_sort(children.begin(), children.end(),
                     [](const Child& a, const Child& b) { return a.blocked < b.blocked; });
    for (auto& child : children) {
      path.push_back(std::move(child.record));
      if (auto done = run(child.next)) return done;
      path.pop_back();
    }
    dead.insert(std::move(key));
    return std::nullopt;
  }
};

}  // namespace detail

/// Applies edge isotopies until no candidate remains. At each step the moves
/// that leave the fewest blocked candidates behind are tried first; a move
/// sequence that runs into a state where every candidate would close a curve
/// is backed out. When no sequence reaches a state without candidates the
/// first such failure is raised.
inline std::pair<DividingSet, std::vector<MoveRecord>> normalize(
    const DividingSet& d, const AttachmentRule& rule = join_attachment,
    long node_budget = 200000) {
  require_no_closed(d);
  detail::NormalSearch search{rule, {}, {}, std::nullopt, 0, node_budget};
  if (auto out = search.run(d)) return {std::move(*out), std::move(search.path)};
  throw *search.first_failure;
}

inline std::string format_move(const MoveRecord& m) {
  std::ostringstream out;
  out << "move face " << m.removed.face << " arc (" << m.removed.edge << m.removed.index
      << "," << m.removed.edge << m.removed.index + 1 << ") edge " << m.edge << " rewrites ";
  if (m.rewrites.empty()) out << "-";
  for (std::size_t i = 0; i < m.rewrites.size(); ++i) {
    if (i) out << ",";
    out << m.rewrites[i].face << ":" << m.rewrites[i].local_edge << ":" << m.rewrites[i].index;
  }
  out << " tb " << m.tb_before << " -> " << m.tb_after;
  return out.str();
}

// ---------------------------------------------------------------------------
// Fibered prisms.

/// Quadrilateral axes: axis a pairs the vertices {0, a+1} against the rest.
inline int quad_partner(int axis, int v) {
  static constexpr int kPartner[3][4] = {{1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  return kPartner[axis][v];
}

/// Corner arc counts on the four faces of one tetrahedron, in tetrahedron
/// labels: corners[f][v] arcs around vertex v on the face opposite f.
struct TetCorners {
  std::array<std::array<int, 4>, 4> corners{};
  std::array<int, 4> boundary_parallel{};
};

inline TetCorners tet_corners(const DividingSet& d, int tet) {
  const auto& tri = d.triangulation();
  TetCorners out;
  for (int f = 0; f < 4; ++f) {
    const int g = tri.face_of({tet, f});
    const auto& gf = tri.faces()[g];
    const auto counts = d.face(g).classify();
    const bool is_rep = gf.rep == FaceRef{tet, f};
    for (int label = 0; label < 3; ++label) {
      const int here = is_rep ? label : gf.perm[label];
      out.corners[f][face_vertices(f)[here]] = counts.corner(label);
    }
    out.boundary_parallel[f] = counts.boundary_parallel();
  }
  return out;
}

struct TetPrisms {
  std::array<int, 4> tri{};  // triangle prism at each vertex
  int quad_axis = -1;        // -1 when no rectangle prism
  int quad = 0;
  std::array<std::array<int, 4>, 4> leftover_corners{};  // [face][vertex]
  std::array<int, 4> leftover{};                         // components per face

  int positions_used() const {
    int n = quad > 0 ? 1 : 0;
    for (int a : tri) n += a > 0;
    return n;
  }
  int packed_arcs() const { return 3 * (tri[0] + tri[1] + tri[2] + tri[3]) + 4 * quad; }
};

struct PrismCoordinates {
  std::vector<TetPrisms> tets;
  int bound_c = 12;

  int max_leftover() const {
    int m = 0;
    for (const auto& t : tets)
      for (int v : t.leftover) m = std::max(m, v);
    return m;
  }
};

/// Arcs a rectangle prism of the given axis would take from face f.
inline int quad_use(int axis, int quad, int f, int v) {
  return axis >= 0 && quad_partner(axis, f) == v ? quad : 0;
}

/// Best packing of one tetrahedron: triangle prisms at up to four vertices
/// and rectangle prisms along at most one axis, maximizing packed arcs.
/// Ties go to the lowest axis, then the larger rectangle count.
inline TetPrisms pack_tetrahedron(const TetCorners& tc) {
  auto evaluate = [&](int axis, int q) {
    TetPrisms p;
    p.quad_axis = q > 0 ? axis : -1;
    p.quad = q;
    for (int v = 0; v < 4; ++v) {
      int best = 1 << 30;
      for (int f = 0; f < 4; ++f)
        if (f != v) best = std::min(best, tc.corners[f][v] - quad_use(p.quad_axis, q, f, v));
      p.tri[v] = best;
    }
    return p;
  };
  TetPrisms best = evaluate(-1, 0);
  bool have = false;
  for (int axis = 0; axis < 3; ++axis) {
    int qmax = 1 << 30;
    for (int f = 0; f < 4; ++f) qmax = std::min(qmax, tc.corners[f][quad_partner(axis, f)]);
    for (int q = qmax; q >= 1; --q) {
      auto p = evaluate(axis, q);
      if (!have || p.packed_arcs() > best.packed_arcs()) {
        best = p;
        have = true;
      }
    }
  }
  if (auto none = evaluate(-1, 0); !have || none.packed_arcs() > best.packed_arcs())
    best = none;
  for (int f = 0; f < 4; ++f) {
    int left = tc.boundary_parallel[f];
    for (int v = 0; v < 4; ++v) {
      if (v == f) continue;
      const int used = best.tri[v] + quad_use(best.quad_axis, best.quad, f, v);
      best.leftover_corners[f][v] = tc.corners[f][v] - used;
      left += best.leftover_corners[f][v];
    }
    best.leftover[f] = left;
  }
  return best;
}

/// Prism coordinates without enforcing the leftover bound.
inline PrismCoordinates pack_prisms(const DividingSet& d, int bound_c = 12) {
  PrismCoordinates out;
  out.bound_c = bound_c;
  for (int t = 0; t < d.triangulation().tet_count(); ++t)
    out.tets.push_back(pack_tetrahedron(tet_corners(d, t)));
  return out;
}

inline PrismCoordinates extract_prisms(const DividingSet& d, int bound_c = 12) {
  auto out = pack_prisms(d, bound_c);
  for (std::size_t t = 0; t < out.tets.size(); ++t)
    for (int f = 0; f < 4; ++f)
      if (out.tets[t].leftover[f] > bound_c)
        throw Error(ErrorCode::kLeftoverExceedsC,
                    "tetrahedron " + std::to_string(t) + " face " + std::to_string(f) +
                        " leaves " + std::to_string(out.tets[t].leftover[f]) +
                        " arcs unpacked (C = " + std::to_string(bound_c) + ")");
  return out;
}

inline std::string format_prisms(const PrismCoordinates& p) {
  std::ostringstream out;
  for (std::size_t t = 0; t < p.tets.size(); ++t) {
    const auto& tp = p.tets[t];
    out << "tet " << t << " tri " << tp.tri[0] << " " << tp.tri[1] << " " << tp.tri[2] << " "
        << tp.tri[3] << " quad ";
    if (tp.quad_axis < 0)
      out << "- 0";
    else
      out << tp.quad_axis << " " << tp.quad;
    out << " leftover ";
    for (int f = 0; f < 4; ++f) out << (f ? "," : "") << f << ":" << tp.leftover[f];
    out << "\n";
  }
  return out.str();
}

}  // namespace carrier
