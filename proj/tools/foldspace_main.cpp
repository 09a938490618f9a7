// foldspace: 2-covered graphs of spaces over free groups - folding,
// cylinder decomposition, splitting, and word-level oracles.

#include <CLI11.hpp>
#include <random>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "foldspace/io.hpp"
#include "foldspace/random_gos.hpp"
#include "foldspace/splitting.hpp"

using namespace foldspace;

namespace {

// exit codes: 0 ok, 1 internal invariant failure, 2 precondition failure,
// 3 parse failure
struct PreconditionError : Error {
  using Error::Error;
};

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open input file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("json parse error: ") + e.what());
  }
  return j;
}

Instance load_instance(const std::string& path, const std::string& expect_kind = "") {
  Json j = load_json(path);
  Instance inst;
  try {
    inst = instance_from_json(j);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("instance parse error: ") + e.what());
  }
  if (!expect_kind.empty() && inst.kind != expect_kind)
    throw PreconditionError("instance kind '" + inst.kind + "' does not match the command");
  return inst;
}

Gos instance_gos(const Instance& inst) {
  if (inst.gos) return *inst.gos;
  if (inst.adjoin) {
    GraphOfFreeGroupsData d =
        adjoin_root_data_to_gofg(*inst.adjoin, inst.base_images, inst.root_images);
    return build_gos(d).built.gos;
  }
  if (inst.gofg) return build_gos(*inst.gofg).built.gos;
  throw PreconditionError("instance does not describe a graph of spaces");
}

void emit(const Json& report, const std::string& json_path) {
  std::string text = dump_sorted(report);
  if (!json_path.empty()) {
    std::ofstream out(json_path);
    out << text << "\n";
  }
  std::cout << text << "\n";
}

void write_dot(const std::string& dir, const std::string& name, const std::string& content) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  std::ofstream out(dir + "/" + name);
  out << content;
}

void dump_dots(const std::string& dir, const Gos& x) {
  if (dir.empty()) return;
  write_dot(dir, "underlying.dot", gos_to_dot_underlying(x));
  write_dot(dir, "horizontal.dot", gos_to_dot_horizontal(x));
  for (int v = 0; v < x.u.nv; ++v)
    write_dot(dir, "vertex" + std::to_string(v) + ".dot", gos_to_dot_vertex_graph(x, v));
}

Json summary_lines(std::initializer_list<std::string> lines) {
  Json j = Json::array();
  for (const auto& s : lines) j.push_back(s);
  return j;
}

int run_oracle_suite(const std::string& module, bool inject_fault) {
  int failures = 0;
  auto report = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "[pass] " : "[FAIL] ") << name << "\n";
    if (!ok) failures++;
  };
  bool all = module.empty() || module == "all";
  if (all || module == "words") {
    // root against brute force
    bool ok = true;
    Alphabet f2(2);
    for (uint64_t s = 1; s <= 50 && ok; ++s) {
      std::mt19937_64 rng(s);
      Letters w;
      for (int i = 0; i < 2 + static_cast<int>(rng() % 6); ++i) {
        int x = 1 + static_cast<int>(rng() % 2);
        if (rng() % 2) x = -x;
        if (!w.empty() && w.back() == -x) continue;
        w.push_back(x);
      }
      if (cyclic_reduce(w).empty()) continue;
      CyclicWord c = cyclic_canonical(Word{f2, free_reduce(w)});
      auto [r, k] = root(c);
      Letters power;
      for (int i = 0; i < k; ++i) power.insert(power.end(), r.letters.begin(), r.letters.end());
      if (!(cyclic_canonical(Word{f2, power}) == c)) ok = false;
      if (root(r).second != 1) ok = false;
    }
    report("words.root reassembly", ok);
    report("words.primitive basics",
           is_primitive(cyclic_canonical(parse_word("ab", f2))) &&
               !is_primitive(cyclic_canonical(parse_word("abAB", f2))));
  }
  if (all || module == "gos") {
    bool ok = true;
    for (uint64_t s = 1; s <= 25 && ok; ++s) {
      Gos x = gen_random_gos(s);
      auto [cg, cu] = chi_pair(x);
      if (cg > cu) ok = false;
      std::mt19937_64 rng(s);
      int v = static_cast<int>(rng() % x.u.nv);
      std::vector<int> I;
      for (int o = 0; o < x.u.noriented(); ++o)
        if (x.u.tau(o) == v) I.push_back(o);
      if (I.size() < 2) continue;
      std::vector<int> J{I[rng() % I.size()]};
      FoldResult f = fold(x, v, J, nullptr);
      if (inject_fault && !f.new_edges.empty()) {
        // deliberately forget one introduced edge: the round trip must fail
        f.new_edges.pop_back();
      }
      CollapseResult c = collapse_set(f.gos, f.new_edges, nullptr);
      if (!gos_isomorphic(c.gos, x)) ok = false;
    }
    report(inject_fault ? "gos.fold round trip (fault injected, expect FAIL)"
                        : "gos.fold round trip",
           ok);
    if (inject_fault && !ok) {
      std::cout << "fault injection detected as intended\n";
      failures--;  // the red line above is the expected outcome
    }
  }
  if (all || module == "uot") {
    bool ok = true;
    for (uint64_t s = 1; s <= 50 && ok; ++s) {
      UnionOfTrees z = random_uot(s);
      if (!kappa_balance(z).holds) ok = false;
      Deltas d = deltas(z);
      if (!d.tree_independent) ok = false;
    }
    report("uot.kappa balance and tree independence", ok);
  }
  std::cout << (failures == 0 ? "oracle suite: all green\n"
                              : "oracle suite: failures present\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"foldspace: folding and splitting 2-covered graphs of spaces"};
  app.require_subcommand(1);

  std::string input, json_path, dot_dir, word, module;
  uint64_t seed = 1;
  int rank = 2, max_length = 3, count = 1;
  bool inject_fault = false;

  auto add_common = [&](CLI::App* cmd, bool needs_input) {
    if (needs_input) cmd->add_option("--input", input, "instance file (json)")->required();
    cmd->add_option("--json", json_path, "write the report to this path");
    cmd->add_option("--dot", dot_dir, "write DOT exports into this directory");
  };

  CLI::App* c_validate = app.add_subcommand("validate", "validate a 2-covered graph of spaces");
  add_common(c_validate, true);
  CLI::App* c_minimize = app.add_subcommand("minimize", "fold and reduce to minimal complexity");
  add_common(c_minimize, true);
  CLI::App* c_cyl = app.add_subcommand("cylinders", "annulus and cylinder decomposition");
  add_common(c_cyl, true);
  CLI::App* c_split = app.add_subcommand("split", "split to bad cylinders");
  add_common(c_split, true);
  CLI::App* c_theorem = app.add_subcommand("theorem", "adjoin-root pipeline report");
  add_common(c_theorem, true);
  CLI::App* c_corollary = app.add_subcommand("corollary", "conjugacy-separation pipeline report");
  add_common(c_corollary, true);
  CLI::App* c_uot = app.add_subcommand("uot", "union-of-trees report");
  add_common(c_uot, true);
  CLI::App* c_prim = app.add_subcommand("primitive", "whitehead primitivity of a word");
  c_prim->add_option("word", word, "word over a..z with capitals for inverses")->required();
  c_prim->add_option("--rank", rank, "alphabet rank");
  c_prim->add_option("--json", json_path, "write the report to this path");
  CLI::App* c_corank = app.add_subcommand("corank-search", "bounded corank witness search");
  add_common(c_corank, true);
  c_corank->add_option("--max-length", max_length, "maximum image word length");
  CLI::App* c_gen = app.add_subcommand("gen", "generate a random valid instance");
  c_gen->add_option("--seed", seed, "seed");
  c_gen->add_option("--count", count, "how many instances to emit");
  c_gen->add_option("--json", json_path, "write to this path (single instance)");
  CLI::App* c_oracle = app.add_subcommand("oracle-suite", "run the derived-value oracles");
  c_oracle->add_option("--module", module, "restrict to one module (words|gos|uot)");
  c_oracle->add_flag("--inject-fault", inject_fault, "self-test: inject a fault");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*c_validate) {
      Instance inst = load_instance(input);
      Gos x = instance_gos(inst);
      ValidationReport r = validate(x);
      Json j;
      j["formatVersion"] = kFormatVersion;
      j["ok"] = r.ok;
      j["issues"] = r.issues;
      auto [cg, cu] = chi_pair(x);
      if (r.ok) j["chi"] = {{"horizontal", cg}, {"underlying", cu}};
      j["summary"] = summary_lines({r.ok ? "valid 2-covered graph of spaces"
                                         : "invalid: see issues"});
      dump_dots(dot_dir, x);
      emit(j, json_path);
      return r.ok ? 0 : 2;
    }
    if (*c_minimize) {
      Instance inst = load_instance(input);
      Gos x = instance_gos(inst);
      require_valid(x, "minimize");
      MinimizeResult m = minimize(x, nullptr);
      Json j;
      j["formatVersion"] = kFormatVersion;
      j["complexity"] = complexity_to_json(complexity(m.gos));
      j["moves"] = Json::array();
      for (const Move& mv : m.trace) j["moves"].push_back(move_to_json(mv));
      j["gos"] = gos_to_json(m.gos);
      SeparabilityResult sep = is_cylinder_space(m.gos) ? SeparabilityResult{} : separability(m.gos);
      j["separable"] = sep.separable;
      if (!sep.separable && !sep.reason.empty()) j["separabilityReason"] = sep.reason;
      if (sep.separable) {
        Json verts = Json::array();
        for (const auto& sv : sep.vertices) {
          verts.push_back(sv.kind == SeparableVertex::Kind::Trivial
                              ? "trivial"
                              : (sv.kind == SeparableVertex::Kind::Splittable ? "splittable"
                                                                              : "unsplittable"));
        }
        j["vertices"] = verts;
      }
      dump_dots(dot_dir, m.gos);
      emit(j, json_path);
      return 0;
    }
    if (*c_cyl) {
      Instance inst = load_instance(input);
      Gos x = instance_gos(inst);
      require_valid(x, "cylinders");
      CylinderSet cs = build_cylinders(x);
      Json j = cylinder_report(x, cs);
      if (!dot_dir.empty()) write_dot(dot_dir, "squares.dot", squares_to_dot(x, cs.annuli));
      emit(j, json_path);
      return 0;
    }
    if (*c_split) {
      Instance inst = load_instance(input);
      Gos x = instance_gos(inst);
      require_valid(x, "split");
      MinimizeResult m = minimize(x, nullptr);
      SplitToBadResult r = split_to_bad(m.gos, nullptr);
      Json j;
      j["formatVersion"] = kFormatVersion;
      j["splitsPerformed"] = r.splits_performed;
      j["components"] = Json::array();
      for (const Gos& y : r.components) {
        CylinderSet cs = build_cylinders(y);
        j["components"].push_back(cylinder_report(y, cs));
      }
      j["moves"] = Json::array();
      for (const Move& mv : r.trace) j["moves"].push_back(move_to_json(mv));
      emit(j, json_path);
      return 0;
    }
    if (*c_theorem) {
      Instance inst = load_instance(input, "adjoin-root");
      TheoremReport r = theorem_report(*inst.adjoin, inst.base_images, inst.root_images);
      emit(theorem_report_to_json(r), json_path);
      return r.ok ? 0 : 2;
    }
    if (*c_corollary) {
      Instance inst = load_instance(input, "hnn-conjugacy");
      CorollaryReport r = corollary_report(*inst.gofg);
      emit(corollary_report_to_json(r), json_path);
      return r.ok ? 0 : 2;
    }
    if (*c_uot) {
      Instance inst = load_instance(input, "union-of-trees");
      const UnionOfTrees& z = *inst.uot;
      UotValidation v = validate_uot(z);
      Json j;
      j["formatVersion"] = kFormatVersion;
      j["ok"] = v.ok;
      j["issues"] = v.issues;
      if (v.ok) {
        Deltas d = deltas(z);
        j["class"] = d.cls == ZClass::Z1 ? "Z1" : (d.cls == ZClass::Z2 ? "Z2" : "Z3");
        j["deltaQMinus2"] = d.q_minus2;
        j["deltaQPlus2"] = d.q_plus2;
        j["deltaPMinus"] = d.p_minus;
        j["deltaPPlus"] = d.p_plus;
        KappaBalance kb = kappa_balance(z);
        j["kappaBalanceHolds"] = kb.holds;
        j["treelike"] = is_treelike(z);
        if (is_treelike(z)) {
          ProductDecomposition pd = product_decomposition(z);
          j["bands"] = pd.bands.size();
          j["incidenceTree"] = pd.incidence_tree;
          LeafSpace ls = leaf_space(z);
          j["leafSpace"] = {{"vertices", ls.tree.nv},
                            {"edges", ls.tree.ne()},
                            {"isTree", ls.tree.is_tree()},
                            {"kappaEqual", ls.kappa_equal}};
        }
      }
      emit(j, json_path);
      return v.ok ? 0 : 2;
    }
    if (*c_prim) {
      Alphabet a(rank);
      Word w = parse_word(word, a);
      CyclicWord c = cyclic_canonical(w);
      WhiteheadResult r = whitehead_minimize(c);
      Json j;
      j["formatVersion"] = kFormatVersion;
      j["word"] = word;
      j["minimalLength"] = r.min_length;
      j["minimalWord"] = word_to_string(r.minimal.letters);
      j["primitive"] = r.min_length == 1;
      Json trace = Json::array();
      for (const auto& t : r.trace) trace.push_back(t.describe());
      j["automorphisms"] = trace;
      j["summary"] = summary_lines({std::string(r.min_length == 1 ? "primitive" : "not primitive") +
                                    ", minimal length " + std::to_string(r.min_length)});
      emit(j, json_path);
      return 0;
    }
    if (*c_corank) {
      Instance inst = load_instance(input, "presentation");
      int L = c_corank->count("--max-length") ? max_length : inst.max_length;
      long long tried = 0;
      auto w = bounded_corank_search(*inst.presentation, inst.target_rank, L, &tried);
      Json j;
      j["formatVersion"] = kFormatVersion;
      j["targetRank"] = inst.target_rank;
      j["maxLength"] = L;
      j["tuplesTried"] = tried;
      if (w) {
        Json images = Json::array();
        for (const Letters& im : w->images) images.push_back(word_to_string(im));
        j["witness"] = images;
        j["summary"] = summary_lines({"witness found"});
      } else {
        j["witness"] = nullptr;
        j["summary"] = summary_lines({"none up to length " + std::to_string(L) +
                                      " (not a proof of smaller corank)"});
      }
      emit(j, json_path);
      return 0;
    }
    if (*c_gen) {
      for (int i = 0; i < count; ++i) {
        Gos x = gen_random_gos(seed + i);
        Instance inst;
        inst.kind = "raw-gos";
        inst.seed = seed + i;
        inst.gos = x;
        emit(instance_to_json(inst), count == 1 ? json_path : "");
      }
      return 0;
    }
    if (*c_oracle) {
      return run_oracle_suite(module, inject_fault);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 3;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition failure: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::string what = e.what();
    // precondition-style failures from the library surface as exit 2
    std::cerr << "error: " << what << "\n";
    bool internal = what.find("internal") != std::string::npos ||
                    what.find("cap exceeded") != std::string::npos;
    return internal ? 1 : 2;
  }
  return 0;
}
