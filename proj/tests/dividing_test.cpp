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

#include "carrier/dividing.hpp"

#include <memory>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace carrier {
namespace {

std::shared_ptr<const Triangulation> single() {
  return std::make_shared<const Triangulation>(load_triangulation(
      "tetrahedra 1\nboundary 0 0\nboundary 0 1\nboundary 0 2\nboundary 0 3\n"));
}

std::shared_ptr<const Triangulation> double_tet() {
  return std::make_shared<const Triangulation>(load_triangulation(
      "tetrahedra 2\n"
      "glue 0 0 -> 1 0 012\nglue 0 1 -> 1 1 012\nglue 0 2 -> 1 2 012\n"
      "glue 0 3 -> 1 3 012\nglue 1 0 -> 0 0 012\nglue 1 1 -> 0 1 012\n"
      "glue 1 2 -> 0 2 012\nglue 1 3 -> 0 3 012\n"));
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kUsage;
}

long long catalan(int m) {
  long long c = 1;
  for (int i = 0; i < m; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

// All perfect matchings of {0..n-1}.
void matchings(std::vector<int>& match, std::vector<std::vector<int>>& out) {
  int first = -1;
  for (int i = 0; i < static_cast<int>(match.size()); ++i)
    if (match[i] < 0) {
      first = i;
      break;
    }
  if (first < 0) {
    out.push_back(match);
    return;
  }
  for (int j = first + 1; j < static_cast<int>(match.size()); ++j) {
    if (match[j] >= 0) continue;
    match[first] = j;
    match[j] = first;
    matchings(match, out);
    match[first] = match[j] = -1;
  }
}

TEST(FaceDiagramTest, AcceptsExactlyCatalanManyMatchings) {
  for (int m = 1; m <= 6; ++m) {
    // Spread the 2m slots over the three edges in a fixed uneven way.
    const std::array<int, 3> slots{m, m / 2, 2 * m - m - m / 2};
    std::vector<int> match(2 * m, -1);
    std::vector<std::vector<int>> all;
    matchings(match, all);
    long long accepted = 0;
    FaceDiagram probe = FaceDiagram::from_counts({});
    for (const auto& mt : all) {
      FaceDiagram shape;
      std::vector<std::pair<Slot, Slot>> pairs;
      // Positions follow the boundary walk 2, 0, 1.
      auto slot_at = [&](int p) {
        if (p < slots[2]) return Slot{2, p};
        p -= slots[2];
        if (p < slots[0]) return Slot{0, p};
        return Slot{1, p - slots[0]};
      };
      for (int p = 0; p < 2 * m; ++p)
        if (p < mt[p]) pairs.push_back({slot_at(p), slot_at(mt[p])});
      try {
        FaceDiagram::from_matching(slots, pairs);
        ++accepted;
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kCrossingArcs);
      }
    }
    EXPECT_EQ(accepted, catalan(m)) << "m=" << m;
  }
}

TEST(FaceDiagramTest, InterleavedPairsCross) {
  EXPECT_EQ(code_of([] {
              FaceDiagram::from_matching({4, 0, 0}, {{{0, 0}, {0, 2}}, {{0, 1}, {0, 3}}});
            }),
            ErrorCode::kCrossingArcs);
}

TEST(FaceDiagramTest, CountsLayoutIsNoncrossingAndClassifiesBack) {
  Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    ArcCounts c;
    c.n01 = rng.uniform(0, 6);
    c.n02 = rng.uniform(0, 6);
    c.n12 = rng.uniform(0, 6);
    for (int e = 0; e < 3; ++e)
      for (int v = 0; v < 3; ++v)
        if (v != e) c.bp[e][v] = rng.uniform(0, 1) * rng.uniform(0, 2);
    const auto d = FaceDiagram::from_counts(c);
    EXPECT_TRUE(FaceDiagram::noncrossing(
        [&] {
          std::vector<int> m(d.total_slots());
          for (const auto& [a, b] : d.arcs()) {
            m[d.position(a)] = d.position(b);
            m[d.position(b)] = d.position(a);
          }
          return m;
        }()));
    // Side-by-side boundary-parallel arcs beyond the first at an end sit
    // farther from the vertex, but are still keyed by the nearer end unless
    // they pass the middle of the edge.
    const auto back = d.classify();
    EXPECT_EQ(back.normal(), c.normal());
    EXPECT_EQ(back.boundary_parallel(), c.boundary_parallel());
    EXPECT_EQ(back.arcs(), d.arc_count());
  }
}

TEST(FaceDiagramTest, ClassifyPartitionsArcs) {
  // One arc with both endpoints in the middle of edge 2.
  auto d = FaceDiagram::from_matching({1, 1, 4}, {{{2, 0}, {1, 0}},
                                                  {{2, 1}, {2, 2}},
                                                  {{2, 3}, {0, 0}}});
  auto c = d.classify();
  EXPECT_EQ(c.bp[2][0] + c.bp[2][1], 1);
  EXPECT_EQ(c.n12, 1);
  EXPECT_EQ(c.n02, 1);
  EXPECT_EQ(c.n01, 0);
  EXPECT_EQ(c.arcs(), 3);
}

TEST(DividingSetTest, OneArcOfType01OnEveryFaceOfSingleTet) {
  auto tri = single();
  std::string text;
  for (int f = 0; f < 4; ++f)
    text += "face 0 " + std::to_string(f) + " counts n01=1 n02=0 n12=0 closed=0\n";
  auto d = load_dividing(tri, text);
  for (int g = 0; g < 4; ++g) EXPECT_EQ(tb_face(d, g), -1);
  EXPECT_EQ(tb_total(d), -4);
  EXPECT_TRUE(detect_closed(d).empty());
  EXPECT_EQ(serialize(d), text);
}

TEST(DividingSetTest, TbFaceCounts) {
  auto tri = single();
  auto d = load_dividing(tri,
                         "face 0 0 counts n01=1 n02=1 n12=1 bp=0:1:1 bp=2:0:1 closed=0\n"
                         "face 0 1 counts n01=1 n02=0 n12=0 closed=0\n");
  EXPECT_EQ(tb_face(d, 0), -5);
  EXPECT_EQ(tb_face(d, 1), -1);
  EXPECT_EQ(tb_face(d, 2), 0);
  EXPECT_EQ(nonconvex_faces(d), (std::vector<int>{2, 3}));
  EXPECT_EQ(tb_total(d), -6);
  auto empty = load_dividing(tri, "");
  EXPECT_EQ(tb_total(empty), 0);
}

TEST(DividingSetTest, ClosedComponentsReported) {
  auto tri = single();
  auto d = load_dividing(tri, "face 0 2 counts n01=1 n02=0 n12=0 closed=2\n");
  EXPECT_EQ(detect_closed(d), (std::vector<std::pair<int, int>>{{2, 2}}));
  EXPECT_EQ(code_of([&] { tb_face(d, 2); }), ErrorCode::kClosedComponent);
  EXPECT_EQ(code_of([&] { tb_total(d); }), ErrorCode::kClosedComponent);
}

TEST(DividingSetTest, EdgeMismatchAndNonnegativeTb) {
  auto tri = double_tet();
  std::string ok;
  for (int f = 0; f < 4; ++f)
    ok += "face 0 " + std::to_string(f) + " counts n01=1 n02=1 n12=1 closed=0\n";
  EXPECT_NO_THROW(load_dividing(tri, ok));
  std::string mismatch = ok;
  mismatch.replace(mismatch.find("n01=1 n02=1 n12=1"), 17, "n01=2 n02=2 n12=2");
  EXPECT_EQ(code_of([&] { load_dividing(tri, mismatch); }), ErrorCode::kEdgeMismatch);
  EXPECT_EQ(code_of([&] { load_dividing(tri, ""); }), ErrorCode::kNonnegativeTb);
}

TEST(DividingSetTest, ParseErrors) {
  auto tri = single();
  EXPECT_EQ(code_of([&] { load_dividing(tri, "face 0 0 counts n03=1\n"); }),
            ErrorCode::kParseError);
  EXPECT_EQ(code_of([&] { load_dividing(tri, "face 0 0 counts bp=0:0:1\n"); }),
            ErrorCode::kParseError);
  EXPECT_EQ(code_of([&] { load_dividing(tri, "face 0 0 explicit slots e0=2 e1=0 e2=0 match\n"); }),
            ErrorCode::kParseError);
  EXPECT_EQ(code_of([&] { load_dividing(tri, "face 0 9 counts\n"); }),
            ErrorCode::kDanglingReference);
  EXPECT_EQ(code_of([&] {
              load_dividing(tri,
                            "face 0 0 explicit slots e0=4 e1=0 e2=0 match (00,02) (01,03)\n");
            }),
            ErrorCode::kCrossingArcs);
}

TEST(DividingSetTest, ExplicitFormRoundtripsWhenCountsDoNotDetermineIt) {
  auto tri = single();
  // Nested same-edge arcs cannot be written as counts.
  const std::string text =
      "face 0 0 explicit slots e0=4 e1=1 e2=1 match (20,10) (00,03) (01,02) closed=0\n"
      "face 0 1 counts n01=0 n02=0 n12=0 closed=0\n"
      "face 0 2 counts n01=0 n02=0 n12=0 closed=0\n"
      "face 0 3 counts n01=0 n02=0 n12=0 closed=0\n";
  auto d = load_dividing(tri, text);
  EXPECT_EQ(serialize(d), text);
  EXPECT_EQ(tb_face(d, 0), -3);
}

TEST(DividingSetTest, OtherSideOfGluedFaceIsTranslated) {
  auto tri = std::make_shared<const Triangulation>(load_triangulation(
      "tetrahedra 2\nglue 0 3 -> 1 3 120\nglue 1 3 -> 0 3 201\nboundary 0 0\nboundary 0 1\n"
      "boundary 0 2\nboundary 1 0\nboundary 1 1\nboundary 1 2\n"));
  // A corner arc around other-side vertex 0 is a corner arc around the
  // representative vertex mapped onto it (rep label 2 -> other label 0).
  auto d = load_dividing(tri, "face 1 3 counts n01=0 n02=0 n12=1 bp=0:1:1 closed=0\n");
  const auto c = classify_arcs(d, tri->face_of({0, 3}));
  EXPECT_EQ(c.n01, 1);
  EXPECT_EQ(c.bp[2][0] + c.bp[2][1], 1);
}

}  // namespace
}  // namespace carrier
