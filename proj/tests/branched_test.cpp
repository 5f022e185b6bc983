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

#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "carrier/branched.hpp"

namespace carrier {
namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(CARRIER_CORPUS_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ErrorCode load_error(const std::string& text) {
  try {
    load_branched(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kUsage;
}

// Sector 0 is the parent at a branch circle and also touches the boundary;
// removing it strands both children.
constexpr const char* kChain = R"(sectors 3
vertex 0 dom 0
edge 0 0 0 branch 0 1 2 order 1 rev 0
edge 1 0 0 boundary
edge 2 0 0 interior 1
edge 3 0 0 interior 2
face 0 sector 0 cycle -0 +1
face 1 sector 1 cycle +0 +2 -2
face 2 sector 2 cycle +0 +3 -3
)";

// Here the sector touching the boundary is a child.
constexpr const char* kChildOnBoundary = R"(sectors 3
vertex 0 dom 1
edge 0 0 0 branch 1 0 2 order 0 rev 0
edge 1 0 0 boundary
edge 2 0 0 interior 1
edge 3 0 0 interior 2
face 0 sector 0 cycle +0 +1
face 1 sector 1 cycle -0 +2 -2
face 2 sector 2 cycle +0 +3 -3
)";

TEST(BranchedLoadTest, FlapTorusIncidenceAudit) {
  const auto b = load_branched(slurp("flap-torus.bs"));
  EXPECT_EQ(b.sectors, 3);
  EXPECT_TRUE(b.closed());
  // Hand count from the cell list: each branch circle is met by one face of
  // every sector, each smooth edge twice by its own face.
  const auto inc = b.incidences();
  const std::vector<std::size_t> expected{3, 3, 2, 2, 2};
  for (std::size_t e = 0; e < expected.size(); ++e) EXPECT_EQ(inc[e].size(), expected[e]) << e;
  const auto roles = branch_roles(b, 0, inc[0]);
  ASSERT_TRUE(roles);
  EXPECT_EQ(roles->parent.face, 1);
  EXPECT_EQ(roles->first.face, 0);
  EXPECT_EQ(roles->second.face, 2);
  EXPECT_TRUE(validate(b).ok());
}

TEST(BranchedLoadTest, TorusCells) {
  const auto b = load_branched(slurp("torus.bs"));
  EXPECT_EQ(b.sectors, 1);
  EXPECT_EQ(b.vertex_count() - static_cast<int>(b.edges.size()) + static_cast<int>(b.faces.size()), 0);
}

TEST(BranchedLoadTest, RepeatedChildSector) {
  const auto b = load_branched(slurp("double-annulus.bs"));
  const auto inc = b.incidences();
  const auto roles = branch_roles(b, 0, inc[0]);
  ASSERT_TRUE(roles);
  EXPECT_EQ(roles->parent, (Incidence{0, 0}));
  EXPECT_EQ(roles->first, (Incidence{1, 0}));
  EXPECT_EQ(roles->second, (Incidence{1, 2}));
}

TEST(BranchedLoadTest, BranchEdgeWithTwoIncidences) {
  EXPECT_EQ(load_error(R"(sectors 2
vertex 0 dom 0
edge 0 0 0 branch 0 1 1 order 1 rev 0
edge 1 0 0 interior 1
face 0 sector 0 cycle +0
face 1 sector 1 cycle +0 +1 -1
)"),
            ErrorCode::kBadIncidence);
}

TEST(BranchedLoadTest, DanglingSector) {
  EXPECT_EQ(load_error(R"(sectors 2
vertex 0 dom 0
edge 0 0 0 interior 0
edge 1 0 0 interior 0
face 0 sector 0 cycle +0 +1 -0 -1
)"),
            ErrorCode::kDanglingSector);
}

TEST(BranchedLoadTest, ParseErrors) {
  const std::string torus = slurp("torus.bs");
  EXPECT_EQ(load_error(""), ErrorCode::kParseError);
  EXPECT_EQ(load_error("sectors 1\nvertex 1 dom 0\n"), ErrorCode::kParseError);
  EXPECT_EQ(load_error("sectors 1\nvertex 0 dom 3\n"), ErrorCode::kParseError);
  EXPECT_EQ(load_error("sectors 1\nvertex 0 dom 0\nedge 0 0 0 interior 0\n"
                       "face 0 sector 0 cycle 0 -0\n"),
            ErrorCode::kParseError);
  EXPECT_EQ(load_error("sectors 3\nvertex 0 dom 0\nedge 0 0 0 branch 0 1 2 order 0 rev 0\n"),
            ErrorCode::kParseError);
  EXPECT_EQ(load_error("sectors 1\nvertex 0 dom 0\nedge 0 0 5 interior 0\n"),
            ErrorCode::kParseError);
  EXPECT_EQ(load_error(torus + "bogus 1\n"), ErrorCode::kParseError);
}

TEST(BranchedValidateTest, FourIncidencesListed) {
  auto b = load_branched(slurp("torus.bs"));
  b.faces.push_back({0, {{0, false}, {0, true}}});
  const auto report = validate(b);
  ASSERT_FALSE(report.ok());
  bool found = false;
  for (const auto& [code, why] : report.violations)
    if (why.find("4 face incidences") != std::string::npos) found = true;
  EXPECT_TRUE(found);
}

TEST(BranchedValidateTest, BoundaryClearsClosedFlag) {
  const auto b = load_branched("sectors 1\nvertex 0 dom 0\nedge 0 0 0 boundary\n"
                               "face 0 sector 0 cycle +0\n");
  const auto report = validate(b);
  EXPECT_TRUE(report.ok());
  EXPECT_FALSE(report.closed);
}

TEST(BranchedValidateTest, OpenCycleIsReported) {
  auto b = load_branched(slurp("flap-torus.bs"));
  b.faces[0].cycle[1].reversed = !b.faces[0].cycle[1].reversed;
  EXPECT_FALSE(validate(b).ok());
}

TEST(BranchedIoTest, CorpusRoundTrip) {
  for (const char* name :
       {"flap-torus.bs", "torus.bs", "klein.bs", "negative/sphere.bs", "double-annulus.bs"}) {
    const std::string text = slurp(name);
    EXPECT_EQ(serialize(load_branched(text)), text) << name;
  }
}

// ---------------------------------------------------------------------------

std::shared_ptr<const Triangulation> single_tet() {
  return std::make_shared<const Triangulation>(load_triangulation(
      "tetrahedra 1\nboundary 0 0\nboundary 0 1\nboundary 0 2\nboundary 0 3\n"));
}

// Two tetrahedra sharing face 0 by the identity; every other face is free.
std::shared_ptr<const Triangulation> hinge() {
  return std::make_shared<const Triangulation>(load_triangulation(
      "tetrahedra 2\nglue 0 0 -> 1 0 012\nboundary 0 1\nboundary 0 2\nboundary 0 3\n"
      "glue 1 0 -> 0 0 012\nboundary 1 1\nboundary 1 2\nboundary 1 3\n"));
}

TEST(BuildTest, EmptyCoordinatesGiveEmptyComplex) {
  auto tri = single_tet();
  PrismCoordinates p;
  p.tets.resize(1);
  const auto built = build_from_prisms(*tri, p);
  EXPECT_EQ(built.complex.sectors, 0);
  EXPECT_TRUE(built.complex.faces.empty());
  EXPECT_TRUE(built.complex.edges.empty());
}

TEST(BuildTest, SingleTrianglePrism) {
  auto tri = single_tet();
  PrismCoordinates p;
  p.tets.resize(1);
  p.tets[0].tri = {0, 3, 0, 0};
  const auto built = build_from_prisms(*tri, p);
  const auto& b = built.complex;
  EXPECT_EQ(b.sectors, 1);
  EXPECT_EQ(built.weights, std::vector<int>{3});
  ASSERT_EQ(b.edges.size(), 3u);
  for (const auto& e : b.edges) EXPECT_EQ(e.kind, EdgeKind::kBoundary);
  EXPECT_EQ(b.vertex_count(), 3);
  EXPECT_TRUE(validate(b).ok());
  EXPECT_FALSE(b.closed());
}

TEST(BuildTest, MatchingRectanglesBandIntoOneSector) {
  auto tri = hinge();
  PrismCoordinates p;
  p.tets.resize(2);
  for (auto& t : p.tets) {
    t.quad_axis = 0;
    t.quad = 2;
  }
  p.tets[1].quad = 2;
  const auto built = build_from_prisms(*tri, p);
  EXPECT_EQ(built.complex.sectors, 1);
  EXPECT_TRUE(validate(built.complex).ok());
  ASSERT_EQ(built.bands.size(), 1u);
  // Band width is the smaller of the two rectangle counts meeting there.
  EXPECT_EQ(built.bands[0].width, std::min(p.tets[0].quad, p.tets[1].quad));
  EXPECT_EQ(built.bands[0].face, 0);
}

TEST(BuildTest, SplitBlockBecomesBranchEdge) {
  auto tri = hinge();
  PrismCoordinates p;
  p.tets.resize(2);
  p.tets[0].tri = {0, 1, 0, 0};
  p.tets[0].quad_axis = 0;
  p.tets[0].quad = 1;
  p.tets[1].tri = {0, 2, 0, 0};
  const auto built = build_from_prisms(*tri, p);
  const auto& b = built.complex;
  ASSERT_TRUE(validate(b).ok());
  EXPECT_EQ(b.sectors, 3);
  int branches = 0;
  for (const auto& e : b.edges)
    if (e.kind == EdgeKind::kBranch) {
      ++branches;
      // The parent is the lone block; the first child sits nearest the corner.
      EXPECT_EQ(built.weights[e.branch.parent], 2);
      EXPECT_EQ(e.branch.first, 0);
      EXPECT_EQ(built.weights[e.branch.child_j] + built.weights[e.branch.child_k], 2);
    }
  EXPECT_EQ(branches, 1);
  EXPECT_EQ(serialize(load_branched(serialize(b))), serialize(b));
}

TEST(BuildTest, MismatchedCountsAreRejected) {
  auto tri = hinge();
  PrismCoordinates p;
  p.tets.resize(2);
  p.tets[0].tri = {0, 1, 0, 0};
  p.tets[1].tri = {0, 2, 0, 0};
  try {
    build_from_prisms(*tri, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnmatchedRectangle);
  }
  // Same totals, but the cut points on the two sides differ.
  p.tets[0].tri = {0, 1, 0, 0};
  p.tets[0].quad_axis = 0;
  p.tets[0].quad = 2;
  p.tets[1].tri = {0, 2, 0, 0};
  p.tets[1].quad_axis = 0;
  p.tets[1].quad = 1;
  try {
    build_from_prisms(*tri, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnmatchedRectangle);
  }
}

TEST(BuildTest, ClosedDoubleOfTrianglePrisms) {
  auto tri = std::make_shared<const Triangulation>(load_triangulation(
      "tetrahedra 2\nglue 0 0 -> 1 0 012\nglue 0 1 -> 1 1 012\nglue 0 2 -> 1 2 012\n"
      "glue 0 3 -> 1 3 012\nglue 1 0 -> 0 0 012\nglue 1 1 -> 0 1 012\n"
      "glue 1 2 -> 0 2 012\nglue 1 3 -> 0 3 012\n"));
  PrismCoordinates p;
  p.tets.resize(2);
  p.tets[0].tri = p.tets[1].tri = {2, 2, 2, 2};
  const auto built = build_from_prisms(*tri, p);
  const auto& b = built.complex;
  EXPECT_TRUE(validate(b).ok());
  EXPECT_TRUE(b.closed());
  // Each vertex link is a sphere made of two triangles.
  EXPECT_EQ(b.sectors, 4);
  int interior_edges = 0;
  for (const auto& e : tri->edges()) interior_edges += e.interior;
  EXPECT_LE(b.sectors, 8 + interior_edges);
  EXPECT_EQ(built.weights, (std::vector<int>{2, 2, 2, 2}));
}

// ---------------------------------------------------------------------------

// Disjoint union, for building larger amputation inputs.
BranchedComplex disjoint_union(const BranchedComplex& a, const BranchedComplex& b) {
  BranchedComplex out = a;
  const int ds = a.sectors, dv = a.vertex_count(), de = static_cast<int>(a.edges.size());
  out.sectors += b.sectors;
  for (int d : b.dominant) out.dominant.push_back(d + ds);
  for (auto e : b.edges) {
    e.from += dv;
    e.to += dv;
    if (e.kind == EdgeKind::kInterior) e.sector += ds;
    if (e.kind == EdgeKind::kBranch) {
      e.branch.parent += ds;
      e.branch.child_j += ds;
      e.branch.child_k += ds;
      e.branch.first += ds;
    }
    out.edges.push_back(e);
  }
  for (auto f : b.faces) {
    f.sector += ds;
    for (auto& s : f.cycle) s.edge += de;
    out.faces.push_back(f);
  }
  return out;
}

TEST(AmputateTest, ClosedInputUnchanged) {
  const auto b = load_branched(slurp("flap-torus.bs"));
  const auto a = amputate_boundary(b);
  EXPECT_EQ(a.complex, b);
  EXPECT_TRUE(a.ledger.empty());
}

TEST(AmputateTest, ParentRemovalExposesChildren) {
  const auto b = load_branched(kChain);
  const auto a = amputate_boundary(b);
  EXPECT_EQ(a.complex.sectors, 0);
  EXPECT_TRUE(a.complex.faces.empty());
  EXPECT_EQ(a.ledger, (std::vector<std::vector<int>>{{0}, {1}, {2}}));
}

TEST(AmputateTest, ChildRemovalMergesParentAndSibling) {
  const auto b = load_branched(kChildOnBoundary);
  const auto a = amputate_boundary(b);
  EXPECT_EQ(a.ledger, (std::vector<std::vector<int>>{{0}}));
  EXPECT_EQ(a.complex.sectors, 1);
  EXPECT_EQ(a.complex.faces.size(), 2u);
  EXPECT_TRUE(a.complex.closed());
  EXPECT_TRUE(validate(a.complex).ok());
}

TEST(AmputateTest, EverySectorOnBoundary) {
  auto tri = single_tet();
  PrismCoordinates p;
  p.tets.resize(1);
  p.tets[0].tri = {1, 1, 0, 0};
  const auto b = build_from_prisms(*tri, p).complex;
  const auto a = amputate_boundary(b);
  EXPECT_EQ(a.complex.sectors, 0);
  EXPECT_EQ(a.ledger, (std::vector<std::vector<int>>{{0}, {1}}));
}

TEST(AmputateTest, IdempotentAndOrderIndependent) {
  BranchedComplex big = load_branched(kChain);
  for (const auto* text : {kChildOnBoundary})
    big = disjoint_union(big, load_branched(text));
  for (const char* name : {"flap-torus.bs", "double-annulus.bs", "klein.bs"})
    big = disjoint_union(big, load_branched(slurp(name)));
  {
    auto tri = hinge();
    PrismCoordinates p;
    p.tets.resize(2);
    p.tets[0].tri = {0, 1, 0, 0};
    p.tets[0].quad_axis = 0;
    p.tets[0].quad = 1;
    p.tets[1].tri = {0, 2, 0, 0};
    big = disjoint_union(big, build_from_prisms(*tri, p).complex);
  }
  ASSERT_TRUE(validate(big).ok());
  const auto reference = amputate_boundary(big);
  EXPECT_TRUE(reference.complex.closed());
  EXPECT_TRUE(validate(reference.complex).ok());
  EXPECT_EQ(amputate_boundary(reference.complex).complex, reference.complex);
  EXPECT_TRUE(amputate_boundary(reference.complex).ledger.empty());
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    Rng rng(seed);
    const auto shuffled = amputate_boundary(big, &rng);
    EXPECT_EQ(serialize(shuffled.complex), serialize(reference.complex)) << seed;
    std::size_t removed = 0, expected = 0;
    for (const auto& step : shuffled.ledger) removed += step.size();
    for (const auto& step : reference.ledger) expected += step.size();
    EXPECT_EQ(removed, expected);
  }
}

}  // namespace
}  // namespace carrier
