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

// Surfaces carried by a branched surface: w_i parallel sheets over each face
// of sector i, glued across edges, with their Euler characteristic,
// orientability and components.

#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "carrier/branched.hpp"
#include "carrier/diophantine.hpp"
#include "carrier/error.hpp"
#include "carrier/util.hpp"

namespace carrier {

enum class Verdict { kTorus, kKleinBottle, kOther };

struct ComponentSummary {
  int chi = 0;
  bool orientable = true;
  Verdict verdict = Verdict::kOther;
  bool operator==(const ComponentSummary&) const = default;
};

inline std::string verdict_string(const ComponentSummary& c) {
  switch (c.verdict) {
    case Verdict::kTorus: return "Torus";
    case Verdict::kKleinBottle: return "KleinBottle";
    case Verdict::kOther: break;
  }
  return "Other(" + std::to_string(c.chi) + ")";
}

/// Side `position` of sheet face `sheet_face`.
struct SheetSide {
  int sheet_face = 0;
  int position = 0;
  bool operator==(const SheetSide&) const = default;
};

struct CarriedSurface {
  Weight weight;
  std::vector<std::pair<int, int>> sheet_faces;       // (face, sheet)
  std::vector<std::pair<SheetSide, SheetSide>> gluings;
  std::vector<int> corner_class;    // per (sheet face, position), flattened
  std::vector<int> corner_offset;   // per sheet face
  int vertices = 0;
  std::vector<int> component;       // per sheet face
  std::vector<ComponentSummary> components;

  int faces() const { return static_cast<int>(sheet_faces.size()); }
  int edges() const { return static_cast<int>(gluings.size()); }
  int euler() const { return faces() - edges() + vertices; }
};

namespace detail {

struct SheetGluing {
  std::vector<std::pair<SheetSide, SheetSide>> pairs;
  bool perfect = true;
};

inline std::vector<int> sheet_offsets(const BranchedComplex& b, const Weight& w) {
  std::vector<int> offset(b.faces.size() + 1, 0);
  for (std::size_t f = 0; f < b.faces.size(); ++f)
    offset[f + 1] = offset[f] + std::max(0, w[b.faces[f].sector]);
  return offset;
}

// Pairs up sheet sides across every edge. `perfect` is false when some side
// is left unglued or claimed twice.
inline SheetGluing glue_sheets(const BranchedComplex& b, const Weight& w) {
  const auto offset = sheet_offsets(b, w);
  const auto inc = b.incidences();
  SheetGluing out;
  std::vector<std::vector<int>> uses(b.faces.size());
  for (std::size_t f = 0; f < b.faces.size(); ++f)
    uses[f].assign(b.faces[f].cycle.size() * std::max(0, w[b.faces[f].sector]), 0);
  auto weight_of = [&](const Incidence& i) { return w[b.faces[i.face].sector]; };
  auto side = [&](const Incidence& i, int sheet) {
    ++uses[i.face][sheet * b.faces[i.face].cycle.size() + i.position];
    return SheetSide{offset[i.face] + sheet, i.position};
  };
  for (int e = 0; e < static_cast<int>(b.edges.size()); ++e) {
    const auto& edge = b.edges[e];
    if (edge.kind == EdgeKind::kInterior) {
      const int n = weight_of(inc[e][0]);
      for (int s = 0; s < n; ++s) out.pairs.emplace_back(side(inc[e][0], s), side(inc[e][1], s));
    } else if (edge.kind == EdgeKind::kBranch) {
      const auto roles = branch_roles(b, e, inc[e]);
      const int wp = weight_of(roles->parent);
      const int wf = weight_of(roles->first);
      const int ws = weight_of(roles->second);
      auto parent_sheet = [&](int s) { return edge.branch.rev ? wp - 1 - s : s; };
      for (int s = 0; s < wf; ++s) {
        const int ps = parent_sheet(s);
        if (ps < 0 || ps >= wp) {
          out.perfect = false;
          continue;
        }
        out.pairs.emplace_back(side(roles->first, s), side(roles->parent, ps));
      }
      for (int s = 0; s < ws; ++s) {
        const int ps = parent_sheet(wf + s);
        if (ps < 0 || ps >= wp) {
          out.perfect = false;
          continue;
        }
        out.pairs.emplace_back(side(roles->second, s), side(roles->parent, ps));
      }
    } else {
      if (weight_of(inc[e][0]) > 0) out.perfect = false;
    }
  }
  for (const auto& u : uses)
    for (int n : u)
      if (n != 1) out.perfect = false;
  return out;
}

inline void require_weight(const BranchedComplex& b, const Weight& w) {
  if (!b.closed()) throw Error(ErrorCode::kNotClosed, "branched surface has boundary edges");
  const auto s = equations_from(b);
  require_length(s, w);
  if (!is_solution(s, w))
    throw Error(ErrorCode::kNotASolution,
                "weight (" + format_weight(w, ",") + ") does not solve the branch equations");
}

}  // namespace detail

/// True when the sheets over `w` glue up into a closed surface, i.e. every
/// sheet side meets exactly one other.
inline bool glues_perfectly(const BranchedComplex& b, const Weight& w) {
  require_valid(b);
  if (static_cast<int>(w.size()) != b.sectors)
    throw Error(ErrorCode::kUsage, "weight length does not match sector count");
  if (std::any_of(w.begin(), w.end(), [](int v) { return v < 0; })) return false;
  return detail::glue_sheets(b, w).perfect;
}

inline CarriedSurface surface_from_weight(const BranchedComplex& b, const Weight& w) {
  detail::require_weight(b, w);
  CarriedSurface out;
  out.weight = w;
  const auto offset = detail::sheet_offsets(b, w);
  for (int f = 0; f < static_cast<int>(b.faces.size()); ++f)
    for (int s = 0; s < offset[f + 1] - offset[f]; ++s) out.sheet_faces.emplace_back(f, s);
  auto glued = detail::glue_sheets(b, w);
  if (!glued.perfect) throw Error(ErrorCode::kInternalBound, "sheets of a solution failed to glue");
  out.gluings = std::move(glued.pairs);

  const int nf = out.faces();
  auto cycle_of = [&](int x) -> const std::vector<SignedEdge>& {
    return b.faces[out.sheet_faces[x].first].cycle;
  };
  out.corner_offset.assign(nf + 1, 0);
  for (int x = 0; x < nf; ++x)
    out.corner_offset[x + 1] = out.corner_offset[x] + static_cast<int>(cycle_of(x).size());
  auto corner = [&](int x, int p) {
    const int n = static_cast<int>(cycle_of(x).size());
    return out.corner_offset[x] + (p % n);
  };
  // Corners at the start and end of the underlying edge, for a sheet side.
  auto ends = [&](const SheetSide& s) {
    const bool rev = cycle_of(s.sheet_face)[s.position].reversed;
    const int a = corner(s.sheet_face, s.position), c = corner(s.sheet_face, s.position + 1);
    return rev ? std::pair{c, a} : std::pair{a, c};
  };

  UnionFind corners(out.corner_offset[nf]);
  UnionFind parts(nf);
  std::vector<std::vector<std::pair<int, bool>>> adjacency(nf);
  for (const auto& [x, y] : out.gluings) {
    const auto [xs, xe] = ends(x);
    const auto [ys, ye] = ends(y);
    corners.unite(xs, ys);
    corners.unite(xe, ye);
    parts.unite(x.sheet_face, y.sheet_face);
    const bool same_sign = cycle_of(x.sheet_face)[x.position].reversed ==
                           cycle_of(y.sheet_face)[y.position].reversed;
    adjacency[x.sheet_face].emplace_back(y.sheet_face, same_sign);
    adjacency[y.sheet_face].emplace_back(x.sheet_face, same_sign);
  }

  out.corner_class.assign(out.corner_offset[nf], -1);
  std::vector<int> class_id(out.corner_offset[nf], -1);
  for (int c = 0; c < out.corner_offset[nf]; ++c) {
    const auto root = corners.find(c);
    if (class_id[root] < 0) class_id[root] = out.vertices++;
    out.corner_class[c] = class_id[root];
  }

  out.component.assign(nf, -1);
  std::vector<int> root_id(nf, -1);
  int nc = 0;
  for (int x = 0; x < nf; ++x) {
    const auto root = parts.find(x);
    if (root_id[root] < 0) root_id[root] = nc++;
    out.component[x] = root_id[root];
  }
  std::vector<int> cf(nc, 0), ce(nc, 0), cv(nc, 0);
  for (int x = 0; x < nf; ++x) ++cf[out.component[x]];
  for (const auto& [x, y] : out.gluings) ++ce[out.component[x.sheet_face]];
  std::vector<bool> counted(out.vertices, false);
  for (int x = 0; x < nf; ++x)
    for (int c = out.corner_offset[x]; c < out.corner_offset[x + 1]; ++c)
      if (!counted[out.corner_class[c]]) {
        counted[out.corner_class[c]] = true;
        ++cv[out.component[x]];
      }

  // Orientations: faces glued along sides traversed the same way must have
  // opposite orientations.
  std::vector<int> orient(nf, 0);
  std::vector<bool> orientable(nc, true);
  for (int start = 0; start < nf; ++start) {
    if (orient[start]) continue;
    orient[start] = 1;
    std::vector<int> stack{start};
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      for (const auto& [y, same_sign] : adjacency[x]) {
        const int want = same_sign ? -orient[x] : orient[x];
        if (!orient[y]) {
          orient[y] = want;
          stack.push_back(y);
        } else if (orient[y] != want) {
          orientable[out.component[x]] = false;
        }
      }
    }
  }
  for (int c = 0; c < nc; ++c) {
    ComponentSummary s;
    s.chi = cf[c] - ce[c] + cv[c];
    s.orientable = orientable[c];
    s.verdict = s.chi != 0 ? Verdict::kOther
                : s.orientable ? Verdict::kTorus
                               : Verdict::kKleinBottle;
    out.components.push_back(s);
  }
  return out;
}

/// c_i = faces of sector i - edges dominated by i + vertices dominated by i.
inline std::vector<int> euler_coefficients(const BranchedComplex& b) {
  std::vector<int> c(b.sectors, 0);
  for (const auto& f : b.faces) ++c[f.sector];
  for (int e = 0; e < static_cast<int>(b.edges.size()); ++e) --c[b.edge_dominant(e)];
  for (int d : b.dominant) ++c[d];
  return c;
}

inline int euler_characteristic(const BranchedComplex& b, const Weight& w) {
  detail::require_weight(b, w);
  const auto c = euler_coefficients(b);
  long long chi = 0;
  for (int i = 0; i < b.sectors; ++i) chi += static_cast<long long>(c[i]) * w[i];
  return static_cast<int>(chi);
}

inline std::vector<ComponentSummary> classify(const BranchedComplex& b, const Weight& w) {
  return surface_from_weight(b, w).components;
}

inline std::string format_report(const Weight& w, const std::vector<ComponentSummary>& comps) {
  std::ostringstream out;
  out << "w=" << format_weight(w, ",") << " components=" << comps.size() << " chi=";
  for (std::size_t i = 0; i < comps.size(); ++i) out << (i ? "," : "") << comps[i].chi;
  if (comps.empty()) out << "-";
  out << " verdicts=";
  for (std::size_t i = 0; i < comps.size(); ++i) out << (i ? "," : "") << verdict_string(comps[i]);
  if (comps.empty()) out << "-";
  return out.str();
}

struct CarriedEntry {
  Weight weight;
  std::vector<ComponentSummary> components;
};

/// Every weight in [0, bound]^d whose sheets glue up into a closed surface,
/// with that surface's summary. Found by gluing, not by the branch equations.
inline std::vector<CarriedEntry> enumerate_carried(const BranchedComplex& b, int bound) {
  require_valid(b);
  if (!b.closed()) throw Error(ErrorCode::kNotClosed, "branched surface has boundary edges");
  check_box(b.sectors, bound);
  std::vector<CarriedEntry> out;
  if (bound < 0) return out;
  for_each_in_box(Weight(b.sectors, bound), [&](const Weight& w) {
    if (glues_perfectly(b, w)) out.push_back({w, classify(b, w)});
  });
  return out;
}

/// The carried surface as a branch-free complex, one sector per component.
inline BranchedComplex to_complex(const BranchedComplex& b, const CarriedSurface& s) {
  BranchedComplex out;
  out.sectors = static_cast<int>(s.components.size());
  out.dominant.assign(s.vertices, 0);
  out.faces.resize(s.faces());
  for (int x = 0; x < s.faces(); ++x) {
    out.faces[x].sector = s.component[x];
    out.faces[x].cycle = b.faces[s.sheet_faces[x].first].cycle;
    for (int c = s.corner_offset[x]; c < s.corner_offset[x + 1]; ++c)
      out.dominant[s.corner_class[c]] = s.component[x];
  }
  for (int e = 0; e < s.edges(); ++e) {
    const auto& [x, y] = s.gluings[e];
    const auto& cx = b.faces[s.sheet_faces[x.sheet_face].first].cycle;
    const int n = static_cast<int>(cx.size());
    const int a = s.corner_class[s.corner_offset[x.sheet_face] + x.position];
    const int c = s.corner_class[s.corner_offset[x.sheet_face] + (x.position + 1) % n];
    CellEdge edge;
    edge.kind = EdgeKind::kInterior;
    edge.sector = s.component[x.sheet_face];
    edge.from = cx[x.position].reversed ? c : a;
    edge.to = cx[x.position].reversed ? a : c;
    out.edges.push_back(edge);
    out.faces[x.sheet_face].cycle[x.position].edge = e;
    out.faces[y.sheet_face].cycle[y.position].edge = e;
  }
  return out;
}

}  // namespace carrier
