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

// Dividing sets on the faces of a triangulation, encoded as non-crossing chord
// diagrams whose endpoints sit in discrete slots along the three face edges.

#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "carrier/error.hpp"
#include "carrier/triangulation.hpp"
#include "carrier/util.hpp"

namespace carrier {

/// Endpoint slot on a face: `index` counts along local edge `edge` in the
/// direction of the face boundary traversal.
struct Slot {
  int edge = 0;
  int index = 0;
  auto operator<=>(const Slot&) const = default;
};

/// Per-face arc census. A normal arc joining edges i and j turns around the
/// corner at the third vertex. Same-edge arcs are keyed by (edge, nearer end).
struct ArcCounts {
  int n01 = 0;
  int n02 = 0;
  int n12 = 0;
  std::array<std::array<int, 3>, 3> bp{};  // bp[edge][vertex]
  int closed = 0;

  /// Normal arcs cutting off face-local vertex v.
  int corner(int v) const { return v == 0 ? n12 : v == 1 ? n02 : n01; }
  int& corner(int v) { return v == 0 ? n12 : v == 1 ? n02 : n01; }

  int boundary_parallel() const {
    int total = 0;
    for (const auto& row : bp)
      for (int k : row) total += k;
    return total;
  }
  int normal() const { return n01 + n02 + n12; }
  int arcs() const { return normal() + boundary_parallel(); }

  int endpoints_on(int edge) const {
    const int s = local_edge_start(edge), t = local_edge_end(edge);
    return corner(s) + corner(t) + 2 * (bp[edge][s] + bp[edge][t]);
  }

  bool operator==(const ArcCounts&) const = default;
};

/// A chord diagram on one triangular face.
class FaceDiagram {
 public:
  FaceDiagram() = default;

  /// Builds a diagram from explicit slot pairs; every slot must be used once
  /// and no two chords may interleave along the boundary circle.
  static FaceDiagram from_matching(std::array<int, 3> slots,
                                   const std::vector<std::pair<Slot, Slot>>& pairs,
                                   int closed = 0) {
    FaceDiagram d;
    d.slots_ = slots;
    d.closed_ = closed;
    for (int k : slots)
      if (k < 0) throw Error(ErrorCode::kParseError, "negative slot count");
    d.match_.assign(d.total_slots(), -1);
    for (const auto& [a, b] : pairs) {
      if (!d.has_slot(a) || !d.has_slot(b))
        throw Error(ErrorCode::kParseError, "slot out of range");
      const int p = d.position(a), q = d.position(b);
      if (p == q || d.match_[p] >= 0 || d.match_[q] >= 0)
        throw Error(ErrorCode::kParseError, "slot matched more than once");
      d.match_[p] = q;
      d.match_[q] = p;
    }
    for (int m : d.match_)
      if (m < 0) throw Error(ErrorCode::kParseError, "unmatched slot");
    if (!noncrossing(d.match_))
      throw Error(ErrorCode::kCrossingArcs, "dividing arcs cross");
    return d;
  }

  /// Canonical diagram realizing `counts`: along each edge, from its start
  /// vertex, the boundary-parallel arcs at the start sit side by side, then
  /// the corner arcs around the start, the corner arcs around the end, and the
  /// boundary-parallel arcs at the end.
  static FaceDiagram from_counts(const ArcCounts& c) {
    FaceDiagram d;
    d.closed_ = c.closed;
    for (int e = 0; e < 3; ++e) {
      if (c.bp[e][e] != 0)
        throw Error(ErrorCode::kParseError, "boundary-parallel vertex is not on its edge");
      d.slots_[e] = c.endpoints_on(e);
    }
    if (c.n01 < 0 || c.n02 < 0 || c.n12 < 0 || c.closed < 0)
      throw Error(ErrorCode::kParseError, "negative arc count");
    d.match_.assign(d.total_slots(), -1);
    auto link = [&](Slot a, Slot b) {
      const int p = d.position(a), q = d.position(b);
      d.match_[p] = q;
      d.match_[q] = p;
    };
    for (int e = 0; e < 3; ++e) {
      const int s = local_edge_start(e), t = local_edge_end(e);
      for (int i = 0; i < c.bp[e][s]; ++i) link({e, 2 * i}, {e, 2 * i + 1});
      const int base = d.slots_[e] - 2 * c.bp[e][t];
      for (int i = 0; i < c.bp[e][t]; ++i) link({e, base + 2 * i}, {e, base + 2 * i + 1});
    }
    for (int v = 0; v < 3; ++v) {
      const int leaving = (v + 2) % 3, entering = (v + 1) % 3;
      for (int r = 0; r < c.corner(v); ++r)
        link({leaving, 2 * c.bp[leaving][v] + r},
             {entering, d.slots_[entering] - 2 * c.bp[entering][v] - 1 - r});
    }
    return d;
  }

  const std::array<int, 3>& slots() const { return slots_; }
  int slots_on(int edge) const { return slots_[edge]; }
  int total_slots() const { return slots_[0] + slots_[1] + slots_[2]; }
  int arc_count() const { return total_slots() / 2; }
  int closed() const { return closed_; }
  bool empty() const { return total_slots() == 0 && closed_ == 0; }

  bool has_slot(Slot s) const {
    return s.edge >= 0 && s.edge < 3 && s.index >= 0 && s.index < slots_[s.edge];
  }

  /// Position on the boundary circle, walking edges 2, 0, 1.
  int position(Slot s) const {
    switch (s.edge) {
      case 2: return s.index;
      case 0: return slots_[2] + s.index;
      default: return slots_[2] + slots_[0] + s.index;
    }
  }

  Slot slot_at(int pos) const {
    if (pos < slots_[2]) return {2, pos};
    pos -= slots_[2];
    if (pos < slots_[0]) return {0, pos};
    return {1, pos - slots_[0]};
  }

  Slot partner(Slot s) const { return slot_at(match_[position(s)]); }

  /// Arcs as slot pairs, each listed once from its lower boundary position.
  std::vector<std::pair<Slot, Slot>> arcs() const {
    std::vector<std::pair<Slot, Slot>> out;
    for (int p = 0; p < static_cast<int>(match_.size()); ++p)
      if (p < match_[p]) out.push_back({slot_at(p), slot_at(match_[p])});
    return out;
  }

  ArcCounts classify() const {
    ArcCounts c;
    c.closed = closed_;
    for (const auto& [a, b] : arcs()) {
      if (a.edge != b.edge) {
        c.corner(3 - a.edge - b.edge) += 1;
        continue;
      }
      const int lo = std::min(a.index, b.index), hi = std::max(a.index, b.index);
      const int k = slots_[a.edge];
      const int end = lo <= k - 1 - hi ? local_edge_start(a.edge) : local_edge_end(a.edge);
      c.bp[a.edge][end] += 1;
    }
    return c;
  }

  /// True when the diagram is exactly the canonical layout of its counts.
  bool determined_by_counts() const {
    return from_counts(classify()).match_ == match_;
  }

  /// Removes the arc joining two slots of one edge.
  FaceDiagram without_arc(Slot a, Slot b) const;

  /// Deletes adjacent slots `index`, `index + 1` on `edge` and joins the arcs
  /// that ended there. Returns false when those slots were matched to each
  /// other, which would close up a component.
  bool join_at(int edge, int index, FaceDiagram& out) const;

  /// Inserts two adjacent slots before `index` on `edge` and reroutes the arc
  /// {a, b} through them. Returns false when the reroute would cross.
  bool split_at(int edge, int index, Slot a, Slot b, FaceDiagram& out) const;

  /// Inserts a boundary-parallel arc on adjacent new slots before `index`.
  FaceDiagram with_bump(int edge, int index) const;

  static bool noncrossing(const std::vector<int>& match) {
    // Stack check: scanning positions, a chord closes only when its opening
    // endpoint is on top.
    std::vector<int> stack;
    for (int p = 0; p < static_cast<int>(match.size()); ++p) {
      const int q = match[p];
      if (q > p) {
        stack.push_back(p);
      } else {
        if (stack.empty() || stack.back() != q) return false;
        stack.pop_back();
      }
    }
    return stack.empty();
  }

  bool operator==(const FaceDiagram&) const = default;

 private:
  // Rebuilds from a list of (slot, slot) pairs after slot renumbering.
  static FaceDiagram rebuild(std::array<int, 3> slots,
                             const std::vector<std::pair<Slot, Slot>>& pairs, int closed,
                             bool& ok) {
    FaceDiagram d;
    d.slots_ = slots;
    d.closed_ = closed;
    d.match_.assign(d.total_slots(), -1);
    for (const auto& [a, b] : pairs) {
      const int p = d.position(a), q = d.position(b);
      d.match_[p] = q;
      d.match_[q] = p;
    }
    ok = noncrossing(d.match_);
    return d;
  }

  std::array<int, 3> slots_{0, 0, 0};
  std::vector<int> match_;
  int closed_ = 0;
};

inline FaceDiagram FaceDiagram::without_arc(Slot a, Slot b) const {
  auto shift = [&](Slot s) {
    if (s.edge == a.edge) s.index -= (s.index > a.index) + (s.index > b.index);
    return s;
  };
  std::vector<std::pair<Slot, Slot>> pairs;
  for (const auto& [x, y] : arcs()) {
    if ((x == a && y == b) || (x == b && y == a)) continue;
    pairs.push_back({shift(x), shift(y)});
  }
  auto slots = slots_;
  slots[a.edge] -= 2;
  bool ok = true;
  return rebuild(slots, pairs, closed_, ok);
}

inline bool FaceDiagram::join_at(int edge, int index, FaceDiagram& out) const {
  const Slot p1{edge, index}, p2{edge, index + 1};
  const Slot q1 = partner(p1), q2 = partner(p2);
  if (q1 == p2) return false;
  auto shift = [&](Slot s) {
    if (s.edge == edge && s.index > index + 1) s.index -= 2;
    return s;
  };
  std::vector<std::pair<Slot, Slot>> pairs;
  for (const auto& [x, y] : arcs()) {
    if (x == p1 || x == p2 || y == p1 || y == p2) continue;
    pairs.push_back({shift(x), shift(y)});
  }
  pairs.push_back({shift(q1), shift(q2)});
  auto slots = slots_;
  slots[edge] -= 2;
  bool ok = true;
  out = rebuild(slots, pairs, closed_, ok);
  return ok;
}

inline bool FaceDiagram::split_at(int edge, int index, Slot a, Slot b,
                                  FaceDiagram& out) const {
  auto shift = [&](Slot s) {
    if (s.edge == edge && s.index >= index) s.index += 2;
    return s;
  };
  std::vector<std::pair<Slot, Slot>> pairs;
  bool found = false;
  for (const auto& [x, y] : arcs()) {
    if ((x == a && y == b) || (x == b && y == a)) {
      found = true;
      continue;
    }
    pairs.push_back({shift(x), shift(y)});
  }
  if (!found) return false;
  pairs.push_back({Slot{edge, index}, shift(a)});
  pairs.push_back({Slot{edge, index + 1}, shift(b)});
  auto slots = slots_;
  slots[edge] += 2;
  bool ok = true;
  out = rebuild(slots, pairs, closed_, ok);
  return ok;
}

inline FaceDiagram FaceDiagram::with_bump(int edge, int index) const {
  auto shift = [&](Slot s) {
    if (s.edge == edge && s.index >= index) s.index += 2;
    return s;
  };
  std::vector<std::pair<Slot, Slot>> pairs;
  for (const auto& [x, y] : arcs()) pairs.push_back({shift(x), shift(y)});
  pairs.push_back({Slot{edge, index}, Slot{edge, index + 1}});
  auto slots = slots_;
  slots[edge] += 2;
  bool ok = true;
  return rebuild(slots, pairs, closed_, ok);
}

/// Slot index along a global edge, shared by every face on that edge.
inline int global_slot(const Triangulation& tri, FaceSide side, int slots, int index) {
  return tri.face_edge(side.face, side.local_edge).aligned ? index : slots - 1 - index;
}

/// A dividing set: one chord diagram per global face, in the representative's
/// labelling. Interior edges carry the same number of endpoints from every
/// adjacent face, and at least two.
class DividingSet {
 public:
  DividingSet(std::shared_ptr<const Triangulation> tri, std::vector<FaceDiagram> faces)
      : tri_(std::move(tri)), faces_(std::move(faces)) {
    validate();
  }

  const Triangulation& triangulation() const { return *tri_; }
  const std::shared_ptr<const Triangulation>& triangulation_ptr() const { return tri_; }
  const std::vector<FaceDiagram>& faces() const { return faces_; }
  const FaceDiagram& face(int g) const { return faces_.at(g); }
  int face_count() const { return static_cast<int>(faces_.size()); }

  int total_endpoints() const {
    int n = 0;
    for (const auto& f : faces_) n += f.total_slots();
    return n;
  }

  bool operator==(const DividingSet& other) const { return faces_ == other.faces_; }

 private:
  void validate() const {
    const auto& tri = *tri_;
    if (static_cast<int>(faces_.size()) != static_cast<int>(tri.faces().size()))
      throw Error(ErrorCode::kParseError, "one diagram per face required");
    for (int e = 0; e < static_cast<int>(tri.edges().size()); ++e) {
      if (!tri.edges()[e].interior) continue;
      const auto& sides = tri.sides_of_edge(e);
      const int k = faces_[sides.front().face].slots_on(sides.front().local_edge);
      for (const auto& side : sides) {
        if (faces_[side.face].slots_on(side.local_edge) != k)
          throw Error(ErrorCode::kEdgeMismatch,
                      "faces disagree on the endpoint count along edge " + std::to_string(e));
      }
      if (k < 2)
        throw Error(ErrorCode::kNonnegativeTb,
                    "edge " + std::to_string(e) + " carries fewer than 2 endpoints");
    }
  }

  std::shared_ptr<const Triangulation> tri_;
  std::vector<FaceDiagram> faces_;
};

/// Relative Thurston-Bennequin number of a face boundary: minus half the
/// endpoint count, i.e. minus the number of arcs.
inline int tb_face(const DividingSet& d, int face) {
  const auto& f = d.face(face);
  if (f.closed() > 0)
    throw Error(ErrorCode::kClosedComponent,
                "face " + std::to_string(face) + " has closed dividing curves");
  return -f.arc_count();
}

/// Faces with no dividing arcs at all; their tb is 0 and they cannot be convex.
inline std::vector<int> nonconvex_faces(const DividingSet& d) {
  std::vector<int> out;
  for (int g = 0; g < d.face_count(); ++g)
    if (d.face(g).empty()) out.push_back(g);
  return out;
}

inline int tb_total(const DividingSet& d) {
  int total = 0;
  for (int g = 0; g < d.face_count(); ++g) total += tb_face(d, g);
  return total;
}

inline std::vector<std::pair<int, int>> detect_closed(const DividingSet& d) {
  std::vector<std::pair<int, int>> out;
  for (int g = 0; g < d.face_count(); ++g)
    if (d.face(g).closed() > 0) out.push_back({g, d.face(g).closed()});
  return out;
}

inline ArcCounts classify_arcs(const DividingSet& d, int face) {
  return d.face(face).classify();
}

namespace detail {

inline bool parse_slot(std::string_view tok, Slot& out) {
  if (tok.size() < 2 || tok[0] < '0' || tok[0] > '2') return false;
  out.edge = tok[0] - '0';
  out.index = 0;
  for (std::size_t i = 1; i < tok.size(); ++i) {
    if (tok[i] < '0' || tok[i] > '9') return false;
    out.index = out.index * 10 + (tok[i] - '0');
  }
  return true;
}

inline std::pair<std::string_view, std::string_view> key_value(const text::Line& line,
                                                               std::string_view tok) {
  auto eq = tok.find('=');
  if (eq == std::string_view::npos) text::fail(line, "expected key=value");
  return {tok.substr(0, eq), tok.substr(eq + 1)};
}

// Moves a diagram written from the non-representative side of a glued face
// into the representative's labels.
inline FaceDiagram to_representative(const Triangulation::GlobalFace& g,
                                     const FaceDiagram& other) {
  const Perm3 inv = inverse(g.perm);
  auto map_slot = [&](Slot s) {
    const int rep_edge = inv[s.edge];
    const bool same = inv[local_edge_start(s.edge)] == local_edge_start(rep_edge);
    const int k = other.slots_on(s.edge);
    return Slot{rep_edge, same ? s.index : k - 1 - s.index};
  };
  std::array<int, 3> slots{};
  for (int e = 0; e < 3; ++e) slots[inv[e]] = other.slots_on(e);
  std::vector<std::pair<Slot, Slot>> pairs;
  for (const auto& [a, b] : other.arcs()) pairs.push_back({map_slot(a), map_slot(b)});
  return FaceDiagram::from_matching(slots, pairs, other.closed());
}

}  // namespace detail

/// Parses a `.div` file against `tri`. Faces not listed carry empty diagrams.
inline DividingSet load_dividing(std::shared_ptr<const Triangulation> tri,
                                 std::string_view text) {
  std::vector<FaceDiagram> faces(tri->faces().size());
  std::vector<bool> seen(faces.size(), false);
  for (const auto& line : text::lines(text)) {
    const auto& tok = line.tokens;
    if (tok[0] != "face" || tok.size() < 4) text::fail(line, "expected 'face <t> <f> ...'");
    const FaceRef ref{text::to_index(line, tok[1]), text::to_index(line, tok[2])};
    if (ref.tet >= tri->tet_count() || ref.face > 3)
      throw Error(ErrorCode::kDanglingReference,
                  "line " + std::to_string(line.number) + ": no such face");
    const int g = tri->face_of(ref);
    if (seen[g]) text::fail(line, "face listed twice");
    seen[g] = true;

    FaceDiagram diagram;
    if (tok[3] == "counts") {
      ArcCounts c;
      bool have_closed = false;
      for (std::size_t i = 4; i < tok.size(); ++i) {
        auto [key, value] = detail::key_value(line, tok[i]);
        if (key == "n01") {
          c.n01 = text::to_index(line, value);
        } else if (key == "n02") {
          c.n02 = text::to_index(line, value);
        } else if (key == "n12") {
          c.n12 = text::to_index(line, value);
        } else if (key == "closed") {
          c.closed = text::to_index(line, value);
          have_closed = true;
        } else if (key == "bp") {
          std::istringstream in{std::string(value)};
          std::string e, v, k;
          if (!std::getline(in, e, ':') || !std::getline(in, v, ':') || !std::getline(in, k))
            text::fail(line, "expected bp=<edge>:<vertex>:<count>");
          const int edge = text::to_index(line, e), vertex = text::to_index(line, v);
          if (edge > 2 || vertex > 2 || edge == vertex)
            text::fail(line, "boundary-parallel vertex must be an endpoint of its edge");
          c.bp[edge][vertex] += text::to_index(line, k);
        } else {
          text::fail(line, "unknown key '" + std::string(key) + "'");
        }
      }
      if (!have_closed) c.closed = 0;
      diagram = FaceDiagram::from_counts(c);
    } else if (tok[3] == "explicit") {
      text::expect(line, 4, "slots");
      std::array<int, 3> slots{-1, -1, -1};
      std::size_t i = 5;
      for (int e = 0; e < 3; ++e, ++i) {
        if (i >= tok.size()) text::fail(line, "expected e0= e1= e2=");
        auto [key, value] = detail::key_value(line, tok[i]);
        if (key != "e" + std::to_string(e)) text::fail(line, "expected e" + std::to_string(e));
        slots[e] = text::to_index(line, value);
      }
      text::expect(line, i++, "match");
      std::vector<std::pair<Slot, Slot>> pairs;
      int closed = 0;
      for (; i < tok.size(); ++i) {
        const std::string_view t = tok[i];
        if (t.starts_with("closed=")) {
          closed = text::to_index(line, t.substr(7));
          continue;
        }
        const auto comma = t.find(',');
        Slot a, b;
        if (t.size() < 5 || t.front() != '(' || t.back() != ')' ||
            comma == std::string_view::npos ||
            !detail::parse_slot(t.substr(1, comma - 1), a) ||
            !detail::parse_slot(t.substr(comma + 1, t.size() - comma - 2), b))
          text::fail(line, "bad slot pair '" + tok[i] + "'");
        pairs.push_back({a, b});
      }
      diagram = FaceDiagram::from_matching(slots, pairs, closed);
    } else {
      text::fail(line, "expected 'counts' or 'explicit'");
    }
    const auto& gf = tri->faces()[g];
    faces[g] = gf.rep == ref ? diagram : detail::to_representative(gf, diagram);
  }
  return DividingSet(std::move(tri), std::move(faces));
}

inline std::string serialize_face(FaceRef ref, const FaceDiagram& d) {
  std::ostringstream out;
  out << "face " << ref.tet << " " << ref.face;
  if (d.determined_by_counts()) {
    const auto c = d.classify();
    out << " counts n01=" << c.n01 << " n02=" << c.n02 << " n12=" << c.n12;
    for (int e = 0; e < 3; ++e)
      for (int v = 0; v < 3; ++v)
        if (c.bp[e][v] > 0) out << " bp=" << e << ":" << v << ":" << c.bp[e][v];
    out << " closed=" << c.closed;
  } else {
    out << " explicit slots e0=" << d.slots_on(0) << " e1=" << d.slots_on(1)
        << " e2=" << d.slots_on(2) << " match";
    for (const auto& [a, b] : d.arcs())
      out << " (" << a.edge << a.index << "," << b.edge << b.index << ")";
    out << " closed=" << d.closed();
  }
  return out.str();
}

inline std::string serialize(const DividingSet& d) {
  std::ostringstream out;
  const auto& tri = d.triangulation();
  for (int g = 0; g < d.face_count(); ++g)
    out << serialize_face(tri.faces()[g].rep, d.face(g)) << "\n";
  return out.str();
}

}  // namespace carrier
