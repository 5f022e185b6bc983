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

// Oracle suites over random instances and the bundled corpus. Each check
// returns one Outcome; `run_all` runs them in order.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "carrier/branched.hpp"
#include "carrier/carried.hpp"
#include "carrier/diophantine.hpp"
#include "carrier/dividing.hpp"
#include "carrier/error.hpp"
#include "carrier/generate.hpp"
#include "carrier/lutz.hpp"
#include "carrier/normalize.hpp"
#include "carrier/triangulation.hpp"
#include "carrier/util.hpp"

namespace carrier::selftest {

struct Config {
  std::string corpus_dir;
  std::uint64_t seed = 1;
  int bound_c = 12;
};

struct Outcome {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

inline std::string format_outcome(const Outcome& o) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(3);
  out << (o.pass ? "PASS" : "FAIL") << " [" << o.id << "] " << o.title << ": " << o.detail
      << " (" << o.seconds << " s)";
  return out.str();
}

// ---------------------------------------------------------------------------
// Corpus.

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::kUsage, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Files under negative/ are deliberate counterexamples: they are loaded and
/// round-tripped but skipped where a contact structure is presumed.
struct CorpusFile {
  std::filesystem::path path;
  std::string name;  // relative to the corpus root
  bool negative = false;
};

inline std::vector<CorpusFile> corpus_files(const std::string& dir, const std::string& ext) {
  std::vector<CorpusFile> out;
  const std::filesystem::path root(dir);
  if (!std::filesystem::is_directory(root))
    throw Error(ErrorCode::kUsage, "no corpus directory at " + dir);
  for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file() || entry.path().extension() != ext) continue;
    const auto rel = std::filesystem::relative(entry.path(), root);
    out.push_back({entry.path(), rel.generic_string(), *rel.begin() == "negative"});
  }
  std::sort(out.begin(), out.end(),
            [](const CorpusFile& a, const CorpusFile& b) { return a.name < b.name; });
  return out;
}

inline std::shared_ptr<const Triangulation> triangulation_for(const CorpusFile& div) {
  auto tri_path = div.path;
  tri_path.replace_extension(".tri");
  return std::make_shared<const Triangulation>(load_triangulation(read_file(tri_path)));
}

// ---------------------------------------------------------------------------

namespace detail {

using Clock = std::chrono::steady_clock;

inline double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Collects the first few failure messages of one check.
class Failures {
 public:
  void add(const std::string& msg) {
    if (count_++ < 3) messages_.push_back(msg);
  }
  bool empty() const { return count_ == 0; }
  std::string summary() const {
    std::string out = std::to_string(count_) + " failure(s): " + text::join(messages_, "; ");
    return out;
  }

 private:
  int count_ = 0;
  std::vector<std::string> messages_;
};

inline Outcome finish(int id, std::string title, const Failures& f, std::string ok_detail,
                      Clock::time_point t0, double limit = 0) {
  Outcome o{id, std::move(title), f.empty(), f.empty() ? std::move(ok_detail) : f.summary(),
            since(t0)};
  if (limit > 0 && o.seconds >= limit) {
    o.pass = false;
    std::ostringstream msg;
    msg << o.detail << "; over the " << limit << " s limit";
    o.detail = msg.str();
  }
  return o;
}

struct NormalizedInstance {
  std::uint64_t seed = 0;
  DividingSet input;
  DividingSet output;
  std::vector<MoveRecord> moves;
};

inline DividingSet random_instance(std::uint64_t seed) {
  Rng rng(seed);
  const int tets = rng.uniform(1, 20);
  const int extra = rng.uniform(0, 6);
  auto tri = std::make_shared<const Triangulation>(
      generate::random_triangulation(rng, tets, extra));
  return generate::random_dividing(tri, rng, rng.uniform(0, 30), 40);
}

}  // namespace detail

/// Holds shared state so the prism check reuses the normalization outputs.
class Runner {
 public:
  explicit Runner(Config cfg) : cfg_(std::move(cfg)) {}

  std::vector<Outcome> run_all() {
    return {hilbert_oracle(),  worked_systems(),       normalization(),
            prism_packing(),   bijection(),           carried_invariants(),
            lutz_generation(), decompose_roundtrip(), io_roundtrip()};
  }

  Outcome hilbert_oracle() {
    const auto t0 = detail::Clock::now();
    detail::Failures f;
    Rng rng(cfg_.seed);
    std::size_t members = 0;
    for (int n = 0; n < 100; ++n) {
      const auto s = generate::random_system(rng, 6, 4);
      const auto fast = restrict_to_box(hilbert_basis(s), 8);
      const auto slow = brute_force_basis(s, 8).members;
      members += slow.size();
      if (fast != slow) f.add("system " + std::to_string(n) + ":\n" + serialize(s));
    }
    return detail::finish(1, "Hilbert basis agrees with brute force in the box 8", f,
                          "100 systems, " + std::to_string(members) + " basis members", t0, 5.0);
  }

  Outcome worked_systems() {
    const auto t0 = detail::Clock::now();
    detail::Failures f;
    const auto single = hilbert_basis(load_equations("dim 3\neq 0 1 2\n"));
    if (single.members != std::vector<Weight>{{1, 0, 1}, {1, 1, 0}})
      f.add("x0 = x1 + x2 gave " + std::to_string(single.members.size()) + " members");
    const auto flap = load_branched(read_file(cfg_.corpus_dir + "/flap-torus.bs"));
    const auto basis = hilbert_basis(equations_from(flap));
    if (basis.members.size() != 2)
      f.add("flap-torus basis has " + std::to_string(basis.members.size()) + " members");
    for (const auto& u : basis.members) {
      if (euler_characteristic(flap, u) != 0) f.add("chi != 0 for " + format_weight(u, ","));
      for (const auto& c : classify(flap, u))
        if (c.verdict == Verdict::kOther) f.add(format_weight(u, ",") + " is " + verdict_string(c));
    }
    return detail::finish(2, "Worked-example systems", f,
                          "x0=x1+x2 -> {(1,0,1),(1,1,0)}; flap-torus -> 2 members, chi 0", t0,
                          1.0);
  }

  Outcome normalization() {
    const auto t0 = detail::Clock::now();
    detail::Failures f;
    int total_moves = 0;
    for (const auto& inst : normalized()) {
      const std::string tag = "seed " + std::to_string(inst.seed);
      for (int g = 0; g < inst.input.face_count(); ++g)
        if (inst.input.face(g).arc_count() > 40) f.add(tag + ": input face over 40 arcs");
      if (static_cast<int>(inst.moves.size()) > inst.input.total_endpoints())
        f.add(tag + ": more moves than endpoints");
      total_moves += static_cast<int>(inst.moves.size());
      DividingSet replay = inst.input;
      int tb = tb_total(replay);
      for (const auto& m : inst.moves) {
        replay = apply_edge_isotopy(replay, m.removed).first;
        const int now = tb_total(replay);
        if (now < tb + 1) f.add(tag + ": move did not raise tb");
        tb = now;
      }
      if (!(replay == inst.output)) f.add(tag + ": replay differs from output");
      if (!find_bypass_candidates(inst.output).empty()) f.add(tag + ": candidates remain");
      for (int g = 0; g < inst.output.face_count(); ++g)
        if (classify_arcs(inst.output, g).boundary_parallel() > 6)
          f.add(tag + ": face " + std::to_string(g) + " keeps over 6 boundary-parallel arcs");
    }
    for (const auto& e : errors_) f.add(e);
    return detail::finish(3, "Normalization contract", f,
                          "50 random dividing sets, " + std::to_string(total_moves) + " moves",
                          t0, 10.0);
  }

  Outcome prism_packing() {
    const auto t0 = detail::Clock::now();
    detail::Failures f;
    auto audit = [&](const DividingSet& d, const std::string& tag) {
      const auto p = pack_prisms(d, cfg_.bound_c);
      for (int t = 0; t < d.triangulation().tet_count(); ++t) {
        const auto tc = tet_corners(d, t);
        const auto& tp = p.tets[t];
        if (tp.positions_used() > 5) f.add(tag + ": over 5 positions");
        if ((tp.quad_axis < 0) != (tp.quad == 0)) f.add(tag + ": rectangle family malformed");
        for (int face = 0; face < 4; ++face) {
          int left = tc.boundary_parallel[face];
          for (int v = 0; v < 4; ++v) {
            if (v == face) continue;
            const int used = tp.tri[v] + quad_use(tp.quad_axis, tp.quad, face, v);
            if (used + tp.leftover_corners[face][v] != tc.corners[face][v] ||
                tp.leftover_corners[face][v] < 0)
              f.add(tag + ": packed plus leftover differs from input");
            left += tp.leftover_corners[face][v];
          }
          if (left != tp.leftover[face]) f.add(tag + ": leftover count differs");
        }
      }
      return p.max_leftover();
    };
    for (const auto& inst : normalized()) audit(inst.output, "seed " + std::to_string(inst.seed));
    int worst = 0;
    int examples = 0;
    for (const auto& file : corpus_files(cfg_.corpus_dir, ".div")) {
      if (file.negative) continue;
      try {
        const auto d = load_dividing(triangulation_for(file), read_file(file.path));
        const auto out = normalize(d).first;
        worst = std::max(worst, audit(out, file.name));
        extract_prisms(out, cfg_.bound_c);
        ++examples;
      } catch (const Error& e) {
        f.add(file.name + ": " + e.what());
      }
    }
    return detail::finish(4, "Prism packing", f,
                          std::to_string(examples) + " corpus examples, leftover <= " +
                              std::to_string(worst) + " (C = " + std::to_string(cfg_.bound_c) + ")",
                          t0);
  }

  Outcome bijection() {
    const auto t0 = detail::Clock::now();
    detail::Failures f;
    int weights = 0;
    for (const auto& file : corpus_files(cfg_.corpus_dir, ".bs")) {
      const auto b = load_branched(read_file(file.path));
      std::vector<Weight> carried;
      for (const auto& e : enumerate_carried(b, 5)) carried.push_back(e.weight);
      const auto sols = boxed_solutions(equations_from(b), 5);
      weights += static_cast<int>(sols.size());
      if (carried != sols) f.add(file.name + ": carried weights differ from solutions");
    }
    return detail::finish(5, "Carried surfaces match boxed solutions", f,
                          std::to_string(weights) + " weights at bound 5", t0);
  }

  Outcome carried_invariants() {
    const auto t0 = detail::Clock::now();
    detail::Failures f;
    int checked = 0;
    for (const auto& file : corpus_files(cfg_.corpus_dir, ".bs")) {
      const auto b = load_branched(read_file(file.path));
      const auto sols = boxed_solutions(equations_from(b), 3);
      for (const auto& w : sols) {
        const std::string tag = file.name + " w=" + format_weight(w, ",");
        const auto s = surface_from_weight(b, w);
        if (!to_complex(b, s).closed() || !glues_perfectly(b, w)) f.add(tag + ": not closed");
        if (euler_characteristic(b, w) != s.euler()) f.add(tag + ": chi formulas differ");
        for (int n = 1; n <= 3; ++n) {
          const auto m = surface_from_weight(b, scaled_weight(w, n));
          if (m.components.size() != static_cast<std::size_t>(n) * s.components.size())
            f.add(tag + ": components do not scale by " + std::to_string(n));
        }
        for (const auto& v : sols) {
          Weight sum(w.size());
          for (std::size_t i = 0; i < w.size(); ++i) sum[i] = w[i] + v[i];
          if (euler_characteristic(b, sum) != euler_characteristic(b, w) + euler_characteristic(b, v))
            f.add(tag + ": chi not additive");
        }
        ++checked;
      }
    }
    return detail::finish(6, "Carried-surface invariants", f,
                          std::to_string(checked) + " solutions at bound 3", t0);
  }

  Outcome lutz_generation() {
    const auto t0 = detail::Clock::now();
    detail::Failures f;
    int examples = 0;
    int adversarial = 0;
    for (const auto& file : corpus_files(cfg_.corpus_dir, ".bs")) {
      const auto b = load_branched(read_file(file.path));
      const auto s = equations_from(b);
      if (file.negative) {
        try {
          derive_generators(b, hilbert_basis(s));
          f.add(file.name + ": counterexample accepted");
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kOtherVerdict) f.add(file.name + ": " + e.what());
        }
        continue;
      }
      const auto gen = derive_generators(b, hilbert_basis(s));
      const auto report = cover_check(s, gen, 5);
      if (!report.ok())
        f.add(file.name + ": " + format_weight(report.uncovered.front(), ",") + " uncovered");
      for (std::size_t i = 0; i < gen.generators.size(); ++i) {
        auto fewer = gen;
        fewer.generators.erase(fewer.generators.begin() + static_cast<long>(i));
        if (cover_check(s, fewer, 5).ok())
          f.add(file.name + ": still covered without generator " + std::to_string(i));
        ++adversarial;
      }
      ++examples;
    }
    return detail::finish(7, "Lutz generators cover the box", f,
                          std::to_string(examples) + " examples covered at bound 5, " +
                              std::to_string(adversarial) + " generator removals detected",
                          t0);
  }

  Outcome decompose_roundtrip() {
    const auto t0 = detail::Clock::now();
    detail::Failures f;
    std::vector<std::pair<std::string, BranchSystem>> systems;
    for (const auto& file : corpus_files(cfg_.corpus_dir, ".eqs"))
      systems.emplace_back(file.name, load_equations(read_file(file.path)));
    for (const auto& file : corpus_files(cfg_.corpus_dir, ".bs"))
      systems.emplace_back(file.name, equations_from(load_branched(read_file(file.path))));
    Rng rng(cfg_.seed);
    for (const auto& [name, s] : systems) {
      const auto h = hilbert_basis(s);
      for (int trial = 0; trial < 100; ++trial) {
        std::vector<int> n(h.members.size());
        for (int& v : n) v = rng.uniform(0, 5);
        const Weight w = combine(h.members, n, s.dim);
        try {
          if (combine(h.members, decompose(s, h, w), s.dim) != w)
            f.add(name + ": " + format_weight(w, ",") + " does not round-trip");
        } catch (const Error& e) {
          f.add(name + ": " + e.what());
        }
      }
    }
    return detail::finish(8, "Decompose round trip", f,
                          std::to_string(systems.size()) + " systems x 100 weights", t0, 1.0);
  }

  Outcome io_roundtrip() {
    const auto t0 = detail::Clock::now();
    detail::Failures f;
    int files = 0;
    auto check = [&](const std::string& ext, const std::function<std::string(const CorpusFile&)>& rt) {
      for (const auto& file : corpus_files(cfg_.corpus_dir, ext)) {
        try {
          if (rt(file) != read_file(file.path)) f.add(file.name + " changes on round trip");
        } catch (const Error& e) {
          f.add(file.name + ": " + e.what());
        }
        ++files;
      }
    };
    check(".tri", [](const CorpusFile& c) { return serialize(load_triangulation(read_file(c.path))); });
    check(".div", [](const CorpusFile& c) {
      return serialize(load_dividing(triangulation_for(c), read_file(c.path)));
    });
    check(".bs", [](const CorpusFile& c) { return serialize(load_branched(read_file(c.path))); });
    check(".eqs", [](const CorpusFile& c) { return serialize(load_equations(read_file(c.path))); });
    check(".plan", [](const CorpusFile& c) { return serialize(load_plan(read_file(c.path))); });
    return detail::finish(9, "Serialization round trip", f,
                          std::to_string(files) + " corpus files byte-identical", t0);
  }

 private:
  const std::vector<detail::NormalizedInstance>& normalized() {
    if (!instances_) {
      instances_.emplace();
      for (std::uint64_t k = 0; k < 50; ++k) {
        const std::uint64_t seed = cfg_.seed * 1000 + k;
        auto d = detail::random_instance(seed);
        try {
          auto [out, moves] = normalize(d);
          instances_->push_back({seed, d, std::move(out), std::move(moves)});
        } catch (const Error& e) {
          errors_.push_back("seed " + std::to_string(seed) + ": " + e.what());
        }
      }
    }
    return *instances_;
  }

  Config cfg_;
  std::optional<std::vector<detail::NormalizedInstance>> instances_;
  std::vector<std::string> errors_;
};

inline std::vector<Outcome> run_all(const Config& cfg) { return Runner(cfg).run_all(); }

}  // namespace carrier::selftest
