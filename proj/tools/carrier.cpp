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

// Command-line front end. Every subcommand prints text lines, or with
// --format json one JSON object per line carrying the same fields.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "carrier/branched.hpp"
#include "carrier/carried.hpp"
#include "carrier/diophantine.hpp"
#include "carrier/dividing.hpp"
#include "carrier/error.hpp"
#include "carrier/lutz.hpp"
#include "carrier/normalize.hpp"
#include "carrier/selftest.hpp"
#include "carrier/triangulation.hpp"

namespace {

using carrier::Error;
using carrier::ErrorCode;
using carrier::Weight;
using json = nlohmann::ordered_json;

struct Options {
  int bound_c = 12;
  int bound = 5;
  std::string format = "text";
  std::uint64_t seed = 1;
};

class Output {
 public:
  explicit Output(const Options& opt) : json_(opt.format == "json") {}

  void line(const std::string& text, const json& obj) const {
    if (json_)
      std::cout << obj.dump() << "\n";
    else
      std::cout << text << "\n";
  }

  // Whole files are printed verbatim, or wrapped under one key.
  void document(const std::string& key, const std::string& text) const {
    if (json_)
      std::cout << json{{key, text}}.dump() << "\n";
    else
      std::cout << text;
  }

 private:
  bool json_;
};

std::string read(const std::string& path) { return carrier::selftest::read_file(path); }

std::shared_ptr<const carrier::Triangulation> read_triangulation(const std::string& path) {
  return std::make_shared<const carrier::Triangulation>(carrier::load_triangulation(read(path)));
}

carrier::DividingSet read_dividing(const std::string& tri, const std::string& div) {
  return carrier::load_dividing(read_triangulation(tri), read(div));
}

carrier::BranchSystem read_system(const std::string& path) {
  if (std::filesystem::path(path).extension() == ".eqs")
    return carrier::load_equations(read(path));
  return carrier::equations_from(carrier::load_branched(read(path)));
}

Weight parse_weight(const std::string& text) {
  Weight w;
  std::string tok;
  std::istringstream in(text);
  while (std::getline(in, tok, ',')) {
    try {
      std::size_t used = 0;
      w.push_back(std::stoi(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kUsage, "bad weight '" + text + "', expected e.g. 0,1,1");
    }
  }
  return w;
}

json components_json(const std::vector<carrier::ComponentSummary>& comps) {
  json chi = json::array(), verdicts = json::array();
  for (const auto& c : comps) {
    chi.push_back(c.chi);
    verdicts.push_back(carrier::verdict_string(c));
  }
  return json{{"components", comps.size()}, {"chi", chi}, {"verdicts", verdicts}};
}

void report(const Output& out, const Weight& w,
            const std::vector<carrier::ComponentSummary>& comps) {
  json obj{{"w", w}};
  obj.update(components_json(comps));
  out.line(carrier::format_report(w, comps), obj);
}

json move_json(const carrier::MoveRecord& m) {
  json rewrites = json::array();
  for (const auto& r : m.rewrites) rewrites.push_back({r.face, r.local_edge, r.index});
  return json{{"face", m.removed.face},     {"arc_edge", m.removed.edge},
              {"arc_index", m.removed.index}, {"edge", m.edge},
              {"rewrites", rewrites},         {"tb_before", m.tb_before},
              {"tb_after", m.tb_after}};
}

// ---------------------------------------------------------------------------

int cmd_check(const Options& opt, const std::string& tri, const std::string& div) {
  const Output out(opt);
  const auto d = read_dividing(tri, div);
  const auto counts = carrier::skeleton_counts(d.triangulation());
  out.line("skeleton vertices " + std::to_string(counts.vertices) + " edges " +
               std::to_string(counts.edges) + " faces " + std::to_string(counts.faces) +
               " tetrahedra " + std::to_string(counts.tetrahedra),
           json{{"vertices", counts.vertices},
                {"edges", counts.edges},
                {"faces", counts.faces},
                {"tetrahedra", counts.tetrahedra}});
  const auto closed = carrier::detect_closed(d);
  for (const auto& [face, n] : closed)
    out.line("closed face " + std::to_string(face) + " count " + std::to_string(n),
             json{{"closed_face", face}, {"count", n}});
  if (!closed.empty())
    throw Error(ErrorCode::kClosedComponent,
                std::to_string(closed.size()) + " face(s) carry a closed dividing curve");
  for (int f = 0; f < d.face_count(); ++f) {
    const auto a = carrier::classify_arcs(d, f);
    const int tb = carrier::tb_face(d, f);
    out.line("face " + std::to_string(f) + " n01 " + std::to_string(a.n01) + " n02 " +
                 std::to_string(a.n02) + " n12 " + std::to_string(a.n12) + " bp " +
                 std::to_string(a.boundary_parallel()) + " tb " + std::to_string(tb),
             json{{"face", f},
                  {"n01", a.n01},
                  {"n02", a.n02},
                  {"n12", a.n12},
                  {"bp", a.boundary_parallel()},
                  {"tb", tb}});
  }
  const int tb = carrier::tb_total(d);
  const int nonconvex = static_cast<int>(carrier::nonconvex_faces(d).size());
  out.line("tb " + std::to_string(tb) + " endpoints " + std::to_string(d.total_endpoints()) +
               " nonconvex " + std::to_string(nonconvex),
           json{{"tb", tb}, {"endpoints", d.total_endpoints()}, {"nonconvex", nonconvex}});
  return 0;
}

carrier::DividingSet normalized(const Options& opt, const std::string& tri,
                                const std::string& div, bool trace) {
  const Output out(opt);
  auto [d, moves] = carrier::normalize(read_dividing(tri, div));
  if (trace)
    for (const auto& m : moves) out.line(carrier::format_move(m), move_json(m));
  const int tb = carrier::tb_total(d);
  out.line("moves " + std::to_string(moves.size()) + " tb " + std::to_string(tb),
           json{{"moves", moves.size()}, {"tb", tb}});
  return d;
}

int cmd_normalize(const Options& opt, const std::string& tri, const std::string& div,
                  const std::string& save) {
  const auto d = normalized(opt, tri, div, true);
  if (!save.empty()) {
    std::ofstream f(save, std::ios::binary);
    if (!f) throw Error(ErrorCode::kUsage, "cannot write " + save);
    f << carrier::serialize(d);
  }
  return 0;
}

int cmd_prisms(const Options& opt, const std::string& tri, const std::string& div) {
  const Output out(opt);
  const auto d = normalized(opt, tri, div, false);
  const auto p = carrier::extract_prisms(d, opt.bound_c);
  if (opt.format != "json") {
    std::cout << carrier::format_prisms(p);
  } else {
    for (std::size_t t = 0; t < p.tets.size(); ++t) {
      const auto& tp = p.tets[t];
      json quad = tp.quad_axis < 0 ? json(nullptr) : json(tp.quad_axis);
      out.line("", json{{"tet", t},
                        {"tri", tp.tri},
                        {"quad_axis", quad},
                        {"quad", tp.quad},
                        {"leftover", tp.leftover}});
    }
  }
  out.line("max_leftover " + std::to_string(p.max_leftover()) + " C " +
               std::to_string(opt.bound_c),
           json{{"max_leftover", p.max_leftover()}, {"C", opt.bound_c}});
  return 0;
}

int cmd_build(const Options& opt, const std::string& tri, const std::string& div) {
  const Output out(opt);
  const auto d = normalized(opt, tri, div, false);
  const auto built =
      carrier::build_from_prisms(d.triangulation(), carrier::extract_prisms(d, opt.bound_c));
  out.document("bs", carrier::serialize(built.complex));
  out.line("# weights " + carrier::format_weight(built.weights), json{{"weights", built.weights}});
  return 0;
}

int cmd_amputate(const Options& opt, const std::string& bs) {
  const Output out(opt);
  carrier::Rng rng(opt.seed);
  const auto a = carrier::amputate_boundary(carrier::load_branched(read(bs)), &rng);
  out.document("bs", carrier::serialize(a.complex));
  for (std::size_t i = 0; i < a.ledger.size(); ++i)
    out.line("# step " + std::to_string(i) + " removed " + carrier::format_weight(a.ledger[i], ","),
             json{{"step", i}, {"removed", a.ledger[i]}});
  return 0;
}

int cmd_equations(const Options& opt, const std::string& bs) {
  Output(opt).document("eqs",
                       carrier::serialize(carrier::equations_from(carrier::load_branched(read(bs)))));
  return 0;
}

int cmd_hilbert(const Options& opt, const std::string& input) {
  const Output out(opt);
  for (const auto& u : carrier::hilbert_basis(read_system(input)).members)
    out.line(carrier::format_weight(u), json{{"w", u}});
  return 0;
}

int cmd_carried(const Options& opt, const std::string& bs, const std::string& weight,
                bool emit_complex) {
  const Output out(opt);
  const auto b = carrier::load_branched(read(bs));
  if (weight.empty()) {
    if (emit_complex) throw Error(ErrorCode::kUsage, "--emit-complex needs a weight");
    for (const auto& e : carrier::enumerate_carried(b, opt.bound)) report(out, e.weight, e.components);
    return 0;
  }
  const auto s = carrier::surface_from_weight(b, parse_weight(weight));
  if (emit_complex)
    out.document("bs", carrier::serialize(carrier::to_complex(b, s)));
  else
    report(out, s.weight, s.components);
  return 0;
}

int cmd_classify(const Options& opt, const std::string& bs, const std::string& weight) {
  const auto b = carrier::load_branched(read(bs));
  const auto w = parse_weight(weight);
  report(Output(opt), w, carrier::classify(b, w));
  return 0;
}

int cmd_decompose(const Options& opt, const std::string& input, const std::string& weight) {
  const Output out(opt);
  const auto s = read_system(input);
  const auto basis = carrier::hilbert_basis(s);
  const auto n = carrier::decompose(s, basis, parse_weight(weight));
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] == 0) continue;
    out.line(std::to_string(n[i]) + " x " + carrier::format_weight(basis.members[i]),
             json{{"coefficient", n[i]}, {"member", basis.members[i]}});
  }
  out.line("coefficients " + carrier::format_weight(n), json{{"coefficients", n}});
  return 0;
}

int cmd_lutz(const Options& opt, const std::string& bs, const std::string& plan_path) {
  const Output out(opt);
  const auto b = carrier::load_branched(read(bs));
  const auto s = carrier::equations_from(b);
  const auto gen = carrier::derive_generators(b, carrier::hilbert_basis(s));
  for (std::size_t i = 0; i < gen.generators.size(); ++i)
    out.line("generator " + std::to_string(i) + " " + carrier::format_weight(gen.generators[i]),
             json{{"generator", i}, {"w", gen.generators[i]}});
  for (const auto& [id, w] : gen.offsets)
    out.line("base " + id + " " + carrier::format_weight(w), json{{"base", id}, {"w", w}});
  const auto cover = carrier::cover_check(s, gen, opt.bound);
  out.line("cover checked " + std::to_string(cover.checked) + " uncovered " +
               std::to_string(cover.uncovered.size()),
           json{{"checked", cover.checked}, {"uncovered", cover.uncovered}});
  if (!cover.ok())
    throw Error(ErrorCode::kIncompleteBasis,
                "weight " + carrier::format_weight(cover.uncovered.front(), ",") +
                    " is not reached by any base and generators");
  if (!plan_path.empty()) {
    const auto plan = carrier::load_plan(read(plan_path));
    const auto w = carrier::realize(plan, gen);
    report(out, w, carrier::classify(b, w));
  }
  return 0;
}

int cmd_selftest(const Options& opt, const std::string& corpus) {
  const Output out(opt);
  carrier::selftest::Config cfg;
  cfg.corpus_dir = corpus;
  cfg.seed = opt.seed;
  cfg.bound_c = opt.bound_c;
  int failed = 0;
  for (const auto& o : carrier::selftest::run_all(cfg)) {
    failed += !o.pass;
    out.line(carrier::selftest::format_outcome(o), json{{"id", o.id},
                                                        {"title", o.title},
                                                        {"pass", o.pass},
                                                        {"detail", o.detail},
                                                        {"seconds", o.seconds}});
  }
  return failed ? 4 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dividing sets, branched surfaces and carried tori"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--C", opt.bound_c, "Leftover bound per face for prism packing")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--bound", opt.bound, "Box bound for weight enumeration")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", opt.seed, "Random seed");

  std::string tri, div, bs, input, weight, plan, save;
  std::string corpus = CARRIER_CORPUS_DIR;
  bool emit_complex = false;
  std::function<int()> run;

  auto with_tri_div = [&](const char* name, const char* help, auto fn) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("tri", tri, "Triangulation (.tri)")->required()->check(CLI::ExistingFile);
    sub->add_option("div", div, "Dividing set (.div)")->required()->check(CLI::ExistingFile);
    sub->callback([&, fn] { run = [&, fn] { return fn(); }; });
    return sub;
  };
  auto with_input = [&](const char* name, const char* help, std::string& target, auto fn) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("input", target, "Input file")->required()->check(CLI::ExistingFile);
    sub->callback([&, fn] { run = [&, fn] { return fn(); }; });
    return sub;
  };

  with_tri_div("check", "Validate a dividing set and report Thurston-Bennequin numbers",
               [&] { return cmd_check(opt, tri, div); });
  with_tri_div("normalize", "Remove boundary-parallel arcs by edge isotopies",
               [&] { return cmd_normalize(opt, tri, div, save); })
      ->add_option("--out", save, "Write the normalized dividing set here");
  with_tri_div("prisms", "Pack a normalized dividing set into fibered prisms",
               [&] { return cmd_prisms(opt, tri, div); });
  with_tri_div("build", "Build the branched surface from the prism packing",
               [&] { return cmd_build(opt, tri, div); });
  with_input("amputate", "Remove boundary sectors until the surface is closed", bs,
             [&] { return cmd_amputate(opt, bs); });
  with_input("equations", "Print the branch equations of a branched surface", bs,
             [&] { return cmd_equations(opt, bs); });
  with_input("hilbert", "Hilbert basis of the branch equations (.bs or .eqs)", input,
             [&] { return cmd_hilbert(opt, input); });
  auto* carried = with_input("carried", "Carried surfaces of a branched surface", bs,
                             [&] { return cmd_carried(opt, bs, weight, emit_complex); });
  carried->add_option("weight", weight, "Sector weights, e.g. 0,1,1");
  carried->add_flag("--emit-complex", emit_complex, "Print the carried surface as a .bs");
  with_input("classify", "Classify the surface carried with the given weight", bs,
             [&] { return cmd_classify(opt, bs, weight); })
      ->add_option("weight", weight, "Sector weights, e.g. 0,1,1")
      ->required();
  with_input("decompose", "Write a weight as a sum of Hilbert basis members", input,
             [&] { return cmd_decompose(opt, input, weight); })
      ->add_option("weight", weight, "Sector weights, e.g. 2,3,1")
      ->required();
  with_input("lutz", "Generators and base offsets for Lutz twisting", bs,
             [&] { return cmd_lutz(opt, bs, plan); })
      ->add_option("plan", plan, "Twist plan (.plan) to realize")
      ->check(CLI::ExistingFile);
  auto* selftest = app.add_subcommand("selftest", "Run the oracle checks");
  selftest->add_option("--corpus", corpus, "Corpus directory")->check(CLI::ExistingDirectory);
  selftest->callback([&] { run = [&] { return cmd_selftest(opt, corpus); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e);
    return status == 0 ? 0 : 1;
  }

  try {
    return run();
  } catch (const Error& e) {
    std::cerr << "carrier: " << e.what() << "\n";
    return carrier::exit_status(e.code());
  } catch (const std::exception& e) {
    std::cerr << "carrier: " << e.what() << "\n";
    return 2;
  }
}
