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

#include "carrier/triangulation.hpp"

#include <functional>
#include <map>
#include <tuple>
#include <set>
#include <string>

#include "gtest/gtest.h"

namespace carrier {
namespace {

constexpr char kSingle[] =
    "tetrahedra 1\n"
    "boundary 0 0\nboundary 0 1\nboundary 0 2\nboundary 0 3\n";

constexpr char kDouble[] =
    "tetrahedra 2\n"
    "glue 0 0 -> 1 0 012\nglue 0 1 -> 1 1 012\nglue 0 2 -> 1 2 012\n"
    "glue 0 3 -> 1 3 012\nglue 1 0 -> 0 0 012\nglue 1 1 -> 0 1 012\n"
    "glue 1 2 -> 0 2 012\nglue 1 3 -> 0 3 012\n";

// Counts cells by tracing identifications on plain (tet, vertex) and
// (tet, vertex-pair) labels, independently of the library's derived indices.
SkeletonCounts trace_counts(const Triangulation& tri) {
  const int n = tri.tet_count();
  std::map<std::pair<int, int>, std::pair<int, int>> vparent;
  std::function<std::pair<int, int>(std::pair<int, int>)> vfind = [&](std::pair<int, int> x) {
    auto it = vparent.find(x);
    if (it == vparent.end() || it->second == x) return x;
    return vfind(it->second);
  };
  using E = std::tuple<int, int, int>;
  std::map<E, E> eparent;
  std::function<E(E)> efind = [&](E x) {
    auto it = eparent.find(x);
    if (it == eparent.end() || it->second == x) return x;
    return efind(it->second);
  };
  int faces = 0;
  for (int t = 0; t < n; ++t) {
    for (int f = 0; f < 4; ++f) {
      const auto& g = tri.gluing(t, f);
      if (!g) {
        ++faces;
        continue;
      }
      if (std::pair{t, f} < std::pair{g->target.tet, g->target.face}) ++faces;
      std::vector<int> src, dst;
      for (int v = 0; v < 4; ++v)
        if (v != f) src.push_back(v);
      for (int v = 0; v < 4; ++v)
        if (v != g->target.face) dst.push_back(v);
      std::map<int, int> image;
      for (int i = 0; i < 3; ++i) image[src[i]] = dst[g->perm[i]];
      for (int v : src) {
        auto a = vfind({t, v}), b = vfind({g->target.tet, image[v]});
        if (a != b) vparent[std::max(a, b)] = std::min(a, b);
      }
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
          int x = image[src[i]], y = image[src[j]];
          E a = efind({t, src[i], src[j]});
          E b = efind({g->target.tet, std::min(x, y), std::max(x, y)});
          if (a != b) eparent[std::max(a, b)] = std::min(a, b);
        }
    }
  }
  std::set<std::pair<int, int>> vroots;
  std::set<E> eroots;
  for (int t = 0; t < n; ++t)
    for (int a = 0; a < 4; ++a) {
      vroots.insert(vfind({t, a}));
      for (int b = a + 1; b < 4; ++b) eroots.insert(efind({t, a, b}));
    }
  return {static_cast<int>(vroots.size()), static_cast<int>(eroots.size()), faces, n};
}

TEST(TriangulationTest, SingleTetrahedron) {
  auto tri = load_triangulation(kSingle);
  EXPECT_EQ(tri.skeleton_counts(), (SkeletonCounts{4, 6, 4, 1}));
  EXPECT_FALSE(tri.closed());
  for (const auto& e : tri.edges()) {
    EXPECT_FALSE(e.interior);
    EXPECT_EQ(e.ring.size(), 2u);
  }
}

TEST(TriangulationTest, TwoTetrahedraClosed) {
  auto tri = load_triangulation(kDouble);
  EXPECT_TRUE(tri.closed());
  EXPECT_EQ(tri.faces().size(), 4u);
  const auto counts = tri.skeleton_counts();
  EXPECT_EQ(counts, trace_counts(tri));
  EXPECT_EQ(counts.euler(), 0);
  for (const auto& e : tri.edges()) {
    EXPECT_TRUE(e.interior);
    EXPECT_EQ(e.ring.size(), 2u);  // each edge has valence 2
  }
}

TEST(TriangulationTest, SelfGluedFace) {
  try {
    load_triangulation(
        "tetrahedra 1\nglue 0 0 -> 0 0 012\nboundary 0 1\nboundary 0 2\nboundary 0 3\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSelfGluedFace);
  }
}

TEST(TriangulationTest, GluingErrors) {
  auto code_of = [](const std::string& text) {
    try {
      load_triangulation(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kUsage;
  };
  EXPECT_EQ(code_of("tetrahedra 2\nglue 0 0 -> 1 0 012\nboundary 0 1\nboundary 0 2\n"
                    "boundary 0 3\nboundary 1 0\nboundary 1 1\nboundary 1 2\nboundary 1 3\n"),
            ErrorCode::kGlueNotInvolutive);
  EXPECT_EQ(code_of("tetrahedra 2\nglue 0 0 -> 1 0 120\nglue 1 0 -> 0 0 120\nboundary 0 1\n"
                    "boundary 0 2\nboundary 0 3\nboundary 1 1\nboundary 1 2\nboundary 1 3\n"),
            ErrorCode::kGlueNotInvolutive);
  EXPECT_EQ(code_of("tetrahedra 1\nglue 0 0 -> 3 0 012\nboundary 0 1\nboundary 0 2\n"
                    "boundary 0 3\n"),
            ErrorCode::kDanglingReference);
  EXPECT_EQ(code_of("tetrahedra 1\nboundary 0 0\nboundary 0 1\nboundary 0 2\n"),
            ErrorCode::kParseError);
  EXPECT_EQ(code_of("tetrahedra 1\nboundary 0 0\nboundary 0 0\nboundary 0 1\nboundary 0 2\n"
                    "boundary 0 3\n"),
            ErrorCode::kParseError);
  EXPECT_EQ(code_of("tetrahedra 1\nboundary 0 0\nboundary 0 1\nboundary 0 2\nglue 0 3 x\n"),
            ErrorCode::kParseError);
  EXPECT_EQ(code_of("tetrahedra 1\nboundary 0 0\nboundary 0 1\nboundary 0 2\n"
                    "glue 0 3 -> 0 2 011\n"),
            ErrorCode::kParseError);
}

TEST(TriangulationTest, SelfReversedEdgeRejected) {
  // Face 3 (vertices 0,1,2) onto face 2 (vertices 0,1,3) fixing 0 and 2->3 but
  // swapping the images of 0 and 1 sends edge 01 to itself reversed.
  try {
    load_triangulation(
        "tetrahedra 1\nboundary 0 0\nboundary 0 1\nglue 0 3 -> 0 2 102\n"
        "glue 0 2 -> 0 3 102\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEdgeSelfReversed);
  }
}

TEST(TriangulationTest, CanonicalRoundtrip) {
  for (const char* text : {kSingle, kDouble}) {
    auto tri = load_triangulation(text);
    EXPECT_EQ(serialize(tri), text);
  }
  // Comments, spacing and line order are normalized away.
  auto tri = load_triangulation(
      "# two tets\ntetrahedra 2\nglue 1 0 -> 0 0 012\n  glue 0 0 ->  1 0 012 # x\n"
      "glue 0 1 -> 1 1 012\nglue 0 2 -> 1 2 012\nglue 0 3 -> 1 3 012\n"
      "glue 1 1 -> 0 1 012\nglue 1 2 -> 0 2 012\nglue 1 3 -> 0 3 012\n");
  EXPECT_EQ(serialize(tri), kDouble);
  EXPECT_EQ(serialize(load_triangulation(serialize(tri))), serialize(tri));
}

TEST(TriangulationTest, FaceEdgesAgreeAcrossGluing) {
  // Twisted gluing: each local edge of a glued face must land on the same
  // global edge from both sides.
  auto tri = load_triangulation(
      "tetrahedra 2\nglue 0 3 -> 1 3 120\nglue 1 3 -> 0 3 201\nboundary 0 0\nboundary 0 1\n"
      "boundary 0 2\nboundary 1 0\nboundary 1 1\nboundary 1 2\n");
  EXPECT_EQ(tri.skeleton_counts(), (SkeletonCounts{5, 9, 7, 2}));
  const auto& g = tri.faces()[tri.face_of({0, 3})];
  ASSERT_TRUE(g.other.has_value());
  for (int label = 0; label < 3; ++label) {
    const int a = face_vertices(3)[label];
    const int a2 = face_vertices(3)[g.perm[label]];
    EXPECT_EQ(tri.vertex_of(0, a), tri.vertex_of(1, a2));
  }
  const auto& e = tri.edges()[tri.edge_of(0, 0, 1).edge];
  EXPECT_EQ(e.members.size(), 2u);
  EXPECT_FALSE(e.interior);
  EXPECT_EQ(e.ring.size(), 3u);
}

}  // namespace
}  // namespace carrier
