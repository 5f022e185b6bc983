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

// Branch equations x_i = x_j + x_k and the minimal nonnegative solutions of
// the homogeneous systems they form.

#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "carrier/branched.hpp"
#include "carrier/error.hpp"
#include "carrier/util.hpp"

namespace carrier {

using Weight = std::vector<int>;

/// x_i - x_j - x_k = 0. With j == k this reads x_i - 2 x_j = 0.
struct Equation {
  int i = 0;
  int j = 0;
  int k = 0;
  std::vector<int> edges;  // branch edges of the curve it came from

  bool operator==(const Equation& o) const { return i == o.i && j == o.j && k == o.k; }
};

struct BranchSystem {
  int dim = 0;
  std::vector<Equation> equations;

  std::vector<std::vector<int>> rows() const {
    std::vector<std::vector<int>> out;
    for (const auto& e : equations) {
      std::vector<int> r(dim, 0);
      r[e.i] += 1;
      r[e.j] -= 1;
      r[e.k] -= 1;
      out.push_back(std::move(r));
    }
    return out;
  }
};

struct HilbertBasis {
  BranchSystem system;
  std::vector<Weight> members;  // sorted
};

/// One equation per branch curve: maximal sets of branch edges with the same
/// sector data that are joined through shared vertices.
inline BranchSystem equations_from(const BranchedComplex& b) {
  require_valid(b);
  if (!b.closed()) throw Error(ErrorCode::kNotClosed, "branched surface has boundary edges");
  BranchSystem s;
  s.dim = b.sectors;
  const int ne = static_cast<int>(b.edges.size());
  auto key = [&](int e) {
    const auto& d = b.edges[e].branch;
    return std::tuple{d.parent, std::min(d.child_j, d.child_k), std::max(d.child_j, d.child_k)};
  };
  UnionFind curves(ne);
  for (int a = 0; a < ne; ++a) {
    if (b.edges[a].kind != EdgeKind::kBranch) continue;
    for (int c = a + 1; c < ne; ++c) {
      if (b.edges[c].kind != EdgeKind::kBranch || key(a) != key(c)) continue;
      const auto& x = b.edges[a];
      const auto& y = b.edges[c];
      if (x.from == y.from || x.from == y.to || x.to == y.from || x.to == y.to) curves.unite(a, c);
    }
  }
  std::vector<int> slot(ne, -1);
  for (int e = 0; e < ne; ++e) {
    if (b.edges[e].kind != EdgeKind::kBranch) continue;
    const auto root = curves.find(e);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(s.equations.size());
      const auto& d = b.edges[e].branch;
      s.equations.push_back({d.parent, d.child_j, d.child_k, {}});
    }
    s.equations[slot[root]].edges.push_back(e);
  }
  return s;
}

inline BranchSystem load_equations(std::string_view text) {
  const auto lines = text::lines(text);
  if (lines.empty()) throw Error(ErrorCode::kParseError, "empty equations file");
  const auto& head = lines.front();
  text::expect(head, 0, "dim");
  if (head.tokens.size() != 2) text::fail(head, "expected 'dim <d>'");
  BranchSystem s;
  s.dim = text::to_index(head, head.tokens[1]);
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const auto& line = lines[n];
    text::expect(line, 0, "eq");
    if (line.tokens.size() != 4) text::fail(line, "expected 'eq <i> <j> <k>'");
    Equation e;
    e.i = text::to_index(line, line.tokens[1]);
    e.j = text::to_index(line, line.tokens[2]);
    e.k = text::to_index(line, line.tokens[3]);
    if (e.i >= s.dim || e.j >= s.dim || e.k >= s.dim) text::fail(line, "index out of range");
    s.equations.push_back(e);
  }
  return s;
}

inline std::string serialize(const BranchSystem& s) {
  std::ostringstream out;
  out << "dim " << s.dim << "\n";
  for (const auto& e : s.equations) out << "eq " << e.i << " " << e.j << " " << e.k << "\n";
  return out.str();
}

inline std::string format_weight(const Weight& w, std::string_view sep = " ") {
  std::ostringstream out;
  for (std::size_t i = 0; i < w.size(); ++i) out << (i ? sep : "") << w[i];
  return out.str();
}

inline Weight scaled_weight(Weight w, int n) {
  for (int& v : w) v *= n;
  return w;
}

inline void require_length(const BranchSystem& s, const Weight& w) {
  if (static_cast<int>(w.size()) != s.dim)
    throw Error(ErrorCode::kUsage, "weight has " + std::to_string(w.size()) +
                                       " entries, system has dimension " + std::to_string(s.dim));
}

inline bool is_solution(const BranchSystem& s, const Weight& w) {
  require_length(s, w);
  for (int v : w)
    if (v < 0) return false;
  for (const auto& e : s.equations)
    if (static_cast<long long>(w[e.i]) != static_cast<long long>(w[e.j]) + w[e.k]) return false;
  return true;
}

inline bool dominates(const Weight& big, const Weight& small) {
  for (std::size_t i = 0; i < big.size(); ++i)
    if (big[i] < small[i]) return false;
  return true;
}

inline void check_box(int dim, long long bound) {
  long long points = 1;
  for (int i = 0; i < dim; ++i) {
    points *= bound + 1;
    if (points > 10'000'000)
      throw Error(ErrorCode::kBoxTooLarge, "box of side " + std::to_string(bound + 1) +
                                               " in dimension " + std::to_string(dim) +
                                               " exceeds 10^7 points");
  }
}

/// Calls f on every point of the box [0, upper_i] in lexicographic order.
template <typename F>
void for_each_in_box(const Weight& upper, F&& f) {
  Weight x(upper.size(), 0);
  while (true) {
    f(x);
    std::size_t i = x.size();
    while (i > 0) {
      --i;
      if (x[i] < upper[i]) {
        ++x[i];
        break;
      }
      x[i] = 0;
      if (i == 0) return;
    }
    if (x.empty()) return;
  }
}

/// All solutions in [0, bound]^d, sorted.
inline std::vector<Weight> boxed_solutions(const BranchSystem& s, int bound) {
  check_box(s.dim, bound);
  std::vector<Weight> out;
  if (bound < 0) return out;
  for_each_in_box(Weight(s.dim, bound), [&](const Weight& x) {
    if (is_solution(s, x)) out.push_back(x);
  });
  return out;
}

namespace detail {

inline std::vector<Weight> minimal_nonzero(std::vector<Weight> sols) {
  auto sum = [](const Weight& w) {
    long long t = 0;
    for (int v : w) t += v;
    return t;
  };
  std::stable_sort(sols.begin(), sols.end(),
                   [&](const Weight& a, const Weight& b) { return sum(a) < sum(b); });
  std::vector<Weight> keep;
  for (const auto& w : sols) {
    if (sum(w) == 0) continue;
    if (std::none_of(keep.begin(), keep.end(), [&](const Weight& m) { return dominates(w, m); }))
      keep.push_back(w);
  }
  std::sort(keep.begin(), keep.end());
  return keep;
}

}  // namespace detail

/// Minimal nonzero solutions inside [0, bound]^d by exhaustive enumeration.
inline HilbertBasis brute_force_basis(const BranchSystem& s, int bound) {
  return {s, detail::minimal_nonzero(boxed_solutions(s, bound))};
}

/// Completion in the style of Contejean and Devie: grow candidate vectors
/// one unit at a time, only in directions that reduce the defect A x, and
/// drop any candidate that dominates a solution already found.
inline HilbertBasis hilbert_basis(const BranchSystem& s) {
  constexpr long long kLimit = 1LL << 31;
  const auto rows = s.rows();
  const int d = s.dim;
  const int m = static_cast<int>(rows.size());
  using Vec = std::vector<long long>;
  auto defect = [&](const Vec& x) {
    Vec a(m, 0);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < d; ++c) a[r] += rows[r][c] * x[c];
    return a;
  };
  std::vector<Vec> found;
  auto dominated = [&](const Vec& x) {
    for (const auto& b : found) {
      bool ge = true;
      for (int c = 0; c < d && ge; ++c) ge = x[c] >= b[c];
      if (ge) return true;
    }
    return false;
  };
  std::set<Vec> frontier;
  for (int c = 0; c < d; ++c) {
    Vec e(d, 0);
    e[c] = 1;
    frontier.insert(e);
  }
  while (!frontier.empty()) {
    std::vector<Vec> pending;
    for (const auto& x : frontier) {
      const Vec a = defect(x);
      if (std::all_of(a.begin(), a.end(), [](long long v) { return v == 0; }))
        found.push_back(x);
      else
        pending.push_back(x);
    }
    std::set<Vec> next;
    for (const auto& x : pending) {
      const Vec a = defect(x);
      for (int c = 0; c < d; ++c) {
        long long dot = 0;
        for (int r = 0; r < m; ++r) dot += a[r] * rows[r][c];
        if (dot >= 0) continue;
        Vec y = x;
        if (++y[c] > kLimit)
          throw Error(ErrorCode::kInternalBound, "completion entry exceeded 2^31");
        if (!dominated(y)) next.insert(std::move(y));
      }
    }
    frontier = std::move(next);
  }
  HilbertBasis out{s, {}};
  for (const auto& x : found) out.members.emplace_back(x.begin(), x.end());
  std::sort(out.members.begin(), out.members.end());
  return out;
}

/// A nonzero solution with no other nonzero solution below it.
inline bool is_minimal(const BranchSystem& s, const Weight& w) {
  if (!is_solution(s, w)) return false;
  if (std::all_of(w.begin(), w.end(), [](int v) { return v == 0; })) return false;
  long long points = 1;
  for (int v : w) {
    points *= v + 1;
    if (points > 10'000'000) throw Error(ErrorCode::kBoxTooLarge, "too many points under weight");
  }
  bool minimal = true;
  for_each_in_box(w, [&](const Weight& y) {
    if (!minimal || y == w) return;
    if (std::any_of(y.begin(), y.end(), [](int v) { return v != 0; }) && is_solution(s, y))
      minimal = false;
  });
  return minimal;
}

/// Members of a basis with every entry at most `bound`.
inline std::vector<Weight> restrict_to_box(const HilbertBasis& h, int bound) {
  std::vector<Weight> out;
  for (const auto& u : h.members)
    if (std::all_of(u.begin(), u.end(), [&](int v) { return v <= bound; })) out.push_back(u);
  return out;
}

}  // namespace carrier
