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
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "carrier/diophantine.hpp"
#include "carrier/generate.hpp"

namespace carrier {
namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(CARRIER_CORPUS_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

BranchSystem system(int dim, std::vector<std::array<int, 3>> eqs) {
  BranchSystem s;
  s.dim = dim;
  for (const auto& [i, j, k] : eqs) s.equations.push_back({i, j, k, {}});
  return s;
}

using Basis = std::vector<Weight>;

TEST(HilbertBasisTest, NoEquations) {
  EXPECT_EQ(hilbert_basis(system(2, {})).members, (Basis{{0, 1}, {1, 0}}));
}

TEST(HilbertBasisTest, SingleBranchEquation) {
  const auto s = system(3, {{0, 1, 2}});
  EXPECT_EQ(hilbert_basis(s).members, (Basis{{1, 0, 1}, {1, 1, 0}}));
}

TEST(HilbertBasisTest, TwoEquationsAgainstBruteForce) {
  const auto s = system(3, {{0, 1, 2}, {1, 0, 2}});
  const auto h = hilbert_basis(s);
  EXPECT_EQ(h.members, (Basis{{1, 1, 0}}));
  EXPECT_EQ(h.members, brute_force_basis(s, 3).members);
}

TEST(HilbertBasisTest, DoubledChild) {
  const auto s = system(2, {{0, 1, 1}});
  EXPECT_EQ(hilbert_basis(s).members, (Basis{{2, 1}}));
}

TEST(HilbertBasisTest, InfeasibleSystemHasEmptyBasis) {
  // x0 = x1 + x2 and x1 = x0 + x2 force x2 = 0 and x0 = x1; adding
  // x0 = x1 + x1 forces everything to zero.
  const auto s = system(3, {{0, 1, 2}, {1, 0, 2}, {0, 1, 1}});
  EXPECT_TRUE(hilbert_basis(s).members.empty());
  EXPECT_TRUE(brute_force_basis(s, 4).members.empty());
}

TEST(EquationsFromTest, FlapTorus) {
  const auto b = load_branched(slurp("flap-torus.bs"));
  const auto s = equations_from(b);
  EXPECT_EQ(s.dim, 3);
  ASSERT_EQ(s.equations.size(), 2u);  // one per branch circle
  EXPECT_EQ(s.equations[0], (Equation{1, 0, 2, {}}));
  EXPECT_EQ(s.equations[0].edges, std::vector<int>{0});
  EXPECT_EQ(s.equations[1].edges, std::vector<int>{1});
  const auto h = hilbert_basis(s);
  EXPECT_EQ(h.members, (Basis{{0, 1, 1}, {1, 1, 0}}));
  EXPECT_EQ(h.members, brute_force_basis(s, 3).members);
}

TEST(EquationsFromTest, TorusHasNoEquations) {
  const auto s = equations_from(load_branched(slurp("torus.bs")));
  EXPECT_EQ(s.dim, 1);
  EXPECT_TRUE(s.equations.empty());
  EXPECT_EQ(hilbert_basis(s).members, (Basis{{1}}));
}

TEST(EquationsFromTest, RepeatedChild) {
  const auto s = equations_from(load_branched(slurp("double-annulus.bs")));
  ASSERT_EQ(s.equations.size(), 2u);
  EXPECT_EQ(s.equations[0], (Equation{0, 1, 1, {}}));
  EXPECT_EQ(s.rows()[0], (std::vector<int>{1, -2, 0}));
  EXPECT_EQ(hilbert_basis(s).members, (Basis{{2, 1, 1}}));
}

TEST(EquationsFromTest, ConnectedBranchEdgesShareOneEquation) {
  // A branch circle cut into two edges through two vertices.
  const auto b = load_branched(R"(sectors 3
vertex 0 dom 1
vertex 1 dom 1
edge 0 0 1 branch 1 0 2 order 0 rev 0
edge 1 1 0 branch 1 0 2 order 0 rev 0
edge 2 0 0 interior 0
edge 3 0 0 interior 1
edge 4 0 0 interior 2
face 0 sector 0 cycle +0 +1 +2 -2
face 1 sector 1 cycle -1 -0 +3 -3
face 2 sector 2 cycle +0 +1 +4 -4
)");
  const auto s = equations_from(b);
  ASSERT_EQ(s.equations.size(), 1u);
  EXPECT_EQ(s.equations[0].edges, (std::vector<int>{0, 1}));
}

TEST(EquationsFromTest, BoundaryIsRejected) {
  const auto b = load_branched("sectors 1\nvertex 0 dom 0\nedge 0 0 0 boundary\n"
                               "face 0 sector 0 cycle +0\n");
  try {
    equations_from(b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotClosed);
  }
}

TEST(BruteForceTest, SmallBoxes) {
  const auto s = system(3, {{0, 1, 2}});
  EXPECT_EQ(brute_force_basis(s, 2).members, (Basis{{1, 0, 1}, {1, 1, 0}}));
  EXPECT_TRUE(brute_force_basis(s, 0).members.empty());
  EXPECT_EQ(boxed_solutions(s, 1).size(), 3u);
  try {
    brute_force_basis(system(7, {}), 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBoxTooLarge);
  }
}

TEST(SolutionTest, Predicates) {
  const auto s = system(3, {{0, 1, 2}});
  EXPECT_TRUE(is_solution(s, {2, 1, 1}));
  EXPECT_FALSE(is_minimal(s, {2, 1, 1}));
  EXPECT_TRUE(is_minimal(s, {1, 1, 0}));
  EXPECT_FALSE(is_solution(s, {1, 0, 0}));
  EXPECT_TRUE(is_solution(s, {0, 0, 0}));
  EXPECT_FALSE(is_minimal(s, {0, 0, 0}));
}

TEST(EquationsIoTest, RoundTripAndErrors) {
  const std::string text = slurp("flap-torus.eqs");
  EXPECT_EQ(serialize(load_equations(text)), text);
  for (const char* bad : {"", "dim\n", "dim 2\neq 0 1\n", "dim 2\neq 0 1 2\n", "dim 2\nfoo 0 1 1\n"}) {
    try {
      load_equations(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kParseError);
    }
  }
}

TEST(HilbertBasisTest, RandomSystemsAgreeWithBruteForce) {
  Rng rng(20261017);
  for (int n = 0; n < 40; ++n) {
    const auto s = generate::random_system(rng, 5, 4);
    const auto h = hilbert_basis(s);
    EXPECT_EQ(restrict_to_box(h, 6), brute_force_basis(s, 6).members) << serialize(s);
    for (const auto& u : h.members) {
      EXPECT_TRUE(is_solution(s, u));
      EXPECT_TRUE(is_minimal(s, u));
    }
  }
}

}  // namespace
}  // namespace carrier
