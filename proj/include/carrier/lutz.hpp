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

// Weight arithmetic of generalized Lutz modifications: decomposing weights
// over a Hilbert basis, twist plans, and generators with Klein bottles
// doubled into tori.

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "carrier/carried.hpp"
#include "carrier/diophantine.hpp"
#include "carrier/error.hpp"
#include "carrier/util.hpp"

namespace carrier {

inline Weight combine(const std::vector<Weight>& members, const std::vector<int>& n, Weight base) {
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = 0; j < base.size(); ++j) base[j] += n[i] * members[i][j];
  return base;
}

inline Weight combine(const std::vector<Weight>& members, const std::vector<int>& n, int dim) {
  return combine(members, n, Weight(dim, 0));
}

namespace detail {

// Depth-first search for coefficients, larger values first; failed
// (index, remainder) states are remembered.
class Decomposer {
 public:
  explicit Decomposer(const std::vector<Weight>& members) : members_(members) {}

  std::optional<std::vector<int>> run(const Weight& target) {
    failed_.clear();
    std::vector<int> n(members_.size(), 0);
    if (search(0, target, n)) return n;
    return std::nullopt;
  }

 private:
  bool search(std::size_t i, const Weight& rest, std::vector<int>& n) {
    if (i == members_.size())
      return std::all_of(rest.begin(), rest.end(), [](int v) { return v == 0; });
    if (failed_.count({i, rest})) return false;
    const auto& u = members_[i];
    int cap = -1;
    for (std::size_t j = 0; j < u.size(); ++j)
      if (u[j] > 0) cap = cap < 0 ? rest[j] / u[j] : std::min(cap, rest[j] / u[j]);
    if (cap < 0) cap = 0;
    for (int c = cap; c >= 0; --c) {
      Weight next = rest;
      for (std::size_t j = 0; j < u.size(); ++j) next[j] -= c * u[j];
      n[i] = c;
      if (search(i + 1, next, n)) return true;
    }
    n[i] = 0;
    failed_.insert({i, rest});
    return false;
  }

  const std::vector<Weight>& members_;
  std::set<std::pair<std::size_t, Weight>> failed_;
};

}  // namespace detail

/// Nonnegative coefficients n with sum n_i u_i = w, the lexicographically
/// greatest such vector.
inline std::vector<int> decompose(const BranchSystem& s, const HilbertBasis& basis, const Weight& w) {
  require_length(s, w);
  if (!is_solution(s, w))
    throw Error(ErrorCode::kNotInCone, "weight (" + format_weight(w, ",") + ") is not a solution");
  detail::Decomposer d(basis.members);
  if (auto n = d.run(w)) return *n;
  throw Error(ErrorCode::kIncompleteBasis,
              "no decomposition of (" + format_weight(w, ",") + ") over the basis");
}

// ---------------------------------------------------------------------------

struct LutzPlan {
  std::string base = "b0";
  std::map<int, int> twists;  // generator index -> total index

  bool operator==(const LutzPlan&) const = default;
};

inline LutzPlan load_plan(std::string_view text) {
  const auto lines = text::lines(text);
  if (lines.empty()) throw Error(ErrorCode::kParseError, "empty plan file");
  const auto& head = lines.front();
  text::expect(head, 0, "base");
  if (head.tokens.size() != 2) text::fail(head, "expected 'base <id>'");
  LutzPlan plan;
  plan.base = head.tokens[1];
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    text::expect(line, 0, "twist");
    if (line.tokens.size() != 3) text::fail(line, "expected 'twist <i> <n>'");
    const int g = text::to_index(line, line.tokens[1]);
    const int n = text::to_index(line, line.tokens[2]);
    if (n < 1) text::fail(line, "twist index must be positive");
    plan.twists[g] += n;
  }
  return plan;
}

inline std::string serialize(const LutzPlan& plan) {
  std::ostringstream out;
  out << "base " << plan.base << "\n";
  for (const auto& [g, n] : plan.twists) out << "twist " << g << " " << n << "\n";
  return out.str();
}

enum class GeneratorKind { kTorus, kKleinBottle };

struct GeneratorSet {
  HilbertBasis basis;
  std::vector<GeneratorKind> kinds;              // per basis member
  std::vector<Weight> generators;                // tori, Klein bottles doubled
  std::vector<std::pair<std::string, Weight>> offsets;  // base id -> offset

  const Weight& offset(const std::string& id) const {
    for (const auto& [name, w] : offsets)
      if (name == id) return w;
    throw Error(ErrorCode::kBadIndex, "unknown base '" + id + "'");
  }
};

/// Tori pass through; each Klein bottle u becomes the torus 2u, and the
/// bases are offset by every sum of a subset of the Klein bottles. Base
/// b<mask> adds the Klein bottles whose bit is set in mask.
inline GeneratorSet derive_generators(const BranchedComplex& b, const HilbertBasis& basis) {
  GeneratorSet out;
  out.basis = basis;
  std::vector<Weight> klein;
  for (const auto& u : basis.members) {
    const auto comps = classify(b, u);
    bool torus = true;
    for (const auto& c : comps) {
      if (c.verdict == Verdict::kOther)
        throw Error(ErrorCode::kOtherVerdict, "basis element (" + format_weight(u, ",") +
                                                  ") carries " + verdict_string(c));
      if (c.verdict == Verdict::kKleinBottle) torus = false;
    }
    out.kinds.push_back(torus ? GeneratorKind::kTorus : GeneratorKind::kKleinBottle);
    if (torus) {
      out.generators.push_back(u);
    } else {
      out.generators.push_back(scaled_weight(u, 2));
      klein.push_back(u);
    }
  }
  if (klein.size() > 20) throw Error(ErrorCode::kInternalBound, "too many Klein bottles");
  for (unsigned mask = 0; mask < (1u << klein.size()); ++mask) {
    Weight w(basis.system.dim, 0);
    for (std::size_t k = 0; k < klein.size(); ++k)
      if (mask & (1u << k))
        for (std::size_t j = 0; j < w.size(); ++j) w[j] += klein[k][j];
    out.offsets.emplace_back("b" + std::to_string(mask), std::move(w));
  }
  return out;
}

inline LutzPlan apply_lutz(LutzPlan plan, const GeneratorSet& gen, int i, int n) {
  if (i < 0 || i >= static_cast<int>(gen.generators.size()))
    throw Error(ErrorCode::kBadIndex, "no generator " + std::to_string(i));
  if (n < 1) throw Error(ErrorCode::kBadIndex, "Lutz index must be positive");
  plan.twists[i] += n;
  return plan;
}

inline Weight realize(const LutzPlan& plan, const GeneratorSet& gen) {
  Weight w = gen.offset(plan.base);
  for (const auto& [i, n] : plan.twists) {
    if (i < 0 || i >= static_cast<int>(gen.generators.size()))
      throw Error(ErrorCode::kBadIndex, "no generator " + std::to_string(i));
    for (std::size_t j = 0; j < w.size(); ++j) w[j] += n * gen.generators[i][j];
  }
  return w;
}

/// A plan realizing w: the first base, in mask order, from which the rest
/// is a nonnegative combination of generators.
inline std::optional<LutzPlan> plan_for(const GeneratorSet& gen, const Weight& w) {
  detail::Decomposer d(gen.generators);
  for (const auto& [id, off] : gen.offsets) {
    Weight rest = w;
    bool ok = true;
    for (std::size_t j = 0; j < rest.size(); ++j)
      if ((rest[j] -= off[j]) < 0) ok = false;
    if (!ok) continue;
    if (auto n = d.run(rest)) {
      LutzPlan plan;
      plan.base = id;
      for (std::size_t i = 0; i < n->size(); ++i)
        if ((*n)[i] > 0) plan.twists[static_cast<int>(i)] = (*n)[i];
      return plan;
    }
  }
  return std::nullopt;
}

struct CoverReport {
  int checked = 0;
  std::vector<Weight> uncovered;

  bool ok() const { return uncovered.empty(); }
};

/// Checks that every solution in [0, bound]^d is a base offset plus a
/// nonnegative combination of the derived generators.
inline CoverReport cover_check(const BranchSystem& s, const GeneratorSet& gen, int bound) {
  CoverReport report;
  for (const auto& w : boxed_solutions(s, bound)) {
    ++report.checked;
    if (!plan_for(gen, w)) report.uncovered.push_back(w);
  }
  return report;
}

}  // namespace carrier
