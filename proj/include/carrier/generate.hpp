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

// Seeded generators for triangulations, dividing sets and branch systems,
// used by the randomized property suites and the bundled corpus.

#pragma once

#include <array>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "carrier/diophantine.hpp"
#include "carrier/dividing.hpp"
#include "carrier/normalize.hpp"
#include "carrier/triangulation.hpp"
#include "carrier/util.hpp"

namespace carrier::generate {

inline Perm3 random_perm(Rng& rng) {
  static constexpr std::array<Perm3, 6> kPerms = {
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  return kPerms[rng.uniform(0, 5)];
}

/// True when some face meets one global edge along two of its sides. Edge
/// isotopies on such faces rewrite the acted face itself and normalization
/// can dead-end, so the generators avoid them.
inline bool has_folded_face(const Triangulation& tri) {
  for (int g = 0; g < static_cast<int>(tri.faces().size()); ++g) {
    const int a = tri.face_edge(g, 0).edge, b = tri.face_edge(g, 1).edge,
              c = tri.face_edge(g, 2).edge;
    if (a == b || b == c || a == c) return true;
  }
  return false;
}

/// A tree of tetrahedra glued face to face, plus up to `extra` further
/// gluings between free faces. Gluings that would reverse an edge onto itself
/// or fold a face onto itself are skipped.
inline Triangulation random_triangulation(Rng& rng, int tets, int extra) {
  using Table = std::vector<std::array<std::optional<Gluing>, 4>>;
  Table table(tets);
  auto free_faces = [&] {
    std::vector<FaceRef> out;
    for (int t = 0; t < tets; ++t)
      for (int f = 0; f < 4; ++f)
        if (!table[t][f]) out.push_back({t, f});
    return out;
  };
  auto glue = [&](FaceRef a, FaceRef b, Perm3 p) {
    table[a.tet][a.face] = Gluing{b, p};
    table[b.tet][b.face] = Gluing{a, inverse(p)};
  };
  for (int t = 1; t < tets; ++t) {
    std::vector<FaceRef> open;
    for (const auto& f : free_faces())
      if (f.tet < t) open.push_back(f);
    glue(open[rng.uniform(0, static_cast<int>(open.size()) - 1)], {t, rng.uniform(0, 3)},
         random_perm(rng));
  }
  for (int i = 0; i < extra; ++i) {
    auto open = free_faces();
    if (open.size() < 2) break;
    const int x = rng.uniform(0, static_cast<int>(open.size()) - 1);
    int y = rng.uniform(0, static_cast<int>(open.size()) - 2);
    if (y >= x) ++y;
    Table backup = table;
    glue(open[x], open[y], random_perm(rng));
    try {
      auto tri = Triangulation::from_gluings(tets, table);
      if (has_folded_face(tri)) table = std::move(backup);
    } catch (const Error&) {
      table = std::move(backup);
    }
  }
  return Triangulation::from_gluings(tets, std::move(table));
}

/// Inserts a boundary-parallel arc on `face` before slot `index` of local
/// edge `edge`, pushing two matching endpoints into every other face on an
/// interior edge by rerouting one of their arcs. This is the inverse of an
/// edge isotopy; returns false when some face has no arc to reroute.
inline bool insert_bump(const Triangulation& tri, std::vector<FaceDiagram>& faces, int face,
                        int edge, int index, Rng& rng) {
  const EdgeUse use = tri.face_edge(face, edge);
  std::vector<FaceDiagram> next = faces;
  next[face] = faces[face].with_bump(edge, index);
  const int k = next[face].slots_on(edge);
  if (tri.edges()[use.edge].interior) {
    const FaceSide acted{face, edge};
    const int g0 = std::min(global_slot(tri, acted, k, index), global_slot(tri, acted, k, index + 1));
    for (const auto& side : tri.sides_of_edge(use.edge)) {
      if (side == acted) continue;
      const int lo = std::min(global_slot(tri, side, k, g0), global_slot(tri, side, k, g0 + 1));
      auto arcs = next[side.face].arcs();
      // Random starting point, then every arc in turn.
      const int n = static_cast<int>(arcs.size());
      bool done = false;
      const int start = n ? rng.uniform(0, n - 1) : 0;
      for (int i = 0; i < n && !done; ++i) {
        const auto& [a, b] = arcs[(start + i) % n];
        FaceDiagram out;
        if (next[side.face].split_at(side.local_edge, lo, a, b, out) ||
            next[side.face].split_at(side.local_edge, lo, b, a, out)) {
          next[side.face] = std::move(out);
          done = true;
        }
      }
      if (!done) return false;
    }
  }
  faces = std::move(next);
  return true;
}

/// True when one edge isotopy on side (`face`, `edge`) turns `after` back
/// into `before`.
inline bool undoable(const std::shared_ptr<const Triangulation>& tri,
                     const std::vector<FaceDiagram>& before,
                     const std::vector<FaceDiagram>& after, int face, int edge) {
  const DividingSet target(tri, before);
  const DividingSet d(tri, after);
  for (const auto& c : find_bypass_candidates(d)) {
    if (c.face != face || c.edge != edge) continue;
    try {
      if (apply_edge_isotopy(d, c).first == target) return true;
    } catch (const Error&) {
    }
  }
  return false;
}

/// A dividing set in normal form (corner arcs only, even endpoint counts of
/// 4..8 per edge) with `bumps` boundary-parallel arcs inserted at random,
/// each one removable by an edge isotopy,
/// keeping at most `max_arcs` arcs on any face.
inline DividingSet random_dividing(std::shared_ptr<const Triangulation> tri, Rng& rng,
                                   int bumps, int max_arcs = 40) {
  const int edge_count = static_cast<int>(tri->edges().size());
  std::vector<int> per_edge(edge_count);
  for (auto& k : per_edge) k = 2 * rng.uniform(2, 4);
  std::vector<FaceDiagram> faces;
  for (int g = 0; g < static_cast<int>(tri->faces().size()); ++g) {
    std::array<int, 3> k{};
    for (int e = 0; e < 3; ++e) k[e] = per_edge[tri->face_edge(g, e).edge];
    ArcCounts c;
    c.n01 = (k[0] + k[1] - k[2]) / 2;
    c.n02 = (k[0] + k[2] - k[1]) / 2;
    c.n12 = (k[1] + k[2] - k[0]) / 2;
    faces.push_back(FaceDiagram::from_counts(c));
  }
  for (int i = 0, tries = 0; i < bumps && tries < bumps * 20; ++tries) {
    const int g = rng.uniform(0, static_cast<int>(faces.size()) - 1);
    const int e = rng.uniform(0, 2);
    const int k = faces[g].slots_on(e);
    const int index = rng.uniform(0, k);
    const EdgeUse use = tri->face_edge(g, e);
    bool room = true;
    for (const auto& side : tri->sides_of_edge(use.edge))
      if (faces[side.face].arc_count() + 1 > max_arcs) room = false;
    if (!room) continue;
    auto trial = faces;
    if (!insert_bump(*tri, trial, g, e, index, rng)) continue;
    if (!undoable(tri, faces, trial, g, e)) continue;
    faces = std::move(trial);
    ++i;
  }
  return DividingSet(std::move(tri), std::move(faces));
}

/// A system of up to `max_equations` equations x_i = x_j + x_k in dimension
/// 1..max_dim, with i distinct from j and k.
inline BranchSystem random_system(Rng& rng, int max_dim = 6, int max_equations = 4) {
  BranchSystem s;
  s.dim = rng.uniform(1, max_dim);
  if (s.dim < 2) return s;
  const int m = rng.uniform(0, max_equations);
  for (int n = 0; n < m; ++n) {
    Equation e;
    e.i = rng.uniform(0, s.dim - 1);
    auto other = [&] {
      int v = rng.uniform(0, s.dim - 2);
      return v >= e.i ? v + 1 : v;
    };
    e.j = other();
    e.k = other();
    s.equations.push_back(e);
  }
  return s;
}

}  // namespace carrier::generate
