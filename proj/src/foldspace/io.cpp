#include "foldspace/io.hpp"

#include <algorithm>

namespace foldspace {

Json graph_to_json(const Graph& g) {
  Json j;
  j["vertices"] = Json::array();
  for (int v = 0; v < g.nv; ++v) j["vertices"].push_back(v);
  j["edges"] = Json::array();
  for (int e = 0; e < g.ne(); ++e) {
    j["edges"].push_back({{"id", e}, {"from", g.iota(2 * e)}, {"to", g.tau(2 * e)}});
  }
  return j;
}

Graph graph_from_json(const Json& j) {
  Graph g;
  g.nv = static_cast<int>(j.at("vertices").size());
  for (const Json& e : j.at("edges")) {
    int from = e.at("from").get<int>(), to = e.at("to").get<int>();
    if (from < 0 || from >= g.nv || to < 0 || to >= g.nv)
      throw Error("graph json: edge endpoint out of range");
    g.add_edge(from, to);
  }
  return g;
}

Json labeled_graph_to_json(const LabeledGraph& g) {
  Json j = graph_to_json(g.g);
  j["alphabetRank"] = g.alphabet.rank;
  for (int e = 0; e < g.g.ne(); ++e) {
    int lab = g.label[2 * e];
    j["edges"][e]["label"] = word_to_string({lab > 0 ? lab : -lab});
    if (lab < 0) {
      // store positively by flipping the printed direction
      j["edges"][e]["from"] = g.g.tau(2 * e);
      j["edges"][e]["to"] = g.g.iota(2 * e);
    }
  }
  return j;
}

Json gos_to_json(const Gos& x) {
  Json j;
  j["formatVersion"] = kFormatVersion;
  j["underlying"] = graph_to_json(x.u);
  j["vertexGraphs"] = Json::object();
  for (int v = 0; v < x.u.nv; ++v) j["vertexGraphs"][std::to_string(v)] = graph_to_json(x.vg[v]);
  j["edgeGraphs"] = Json::object();
  for (int e = 0; e < x.u.ne(); ++e) j["edgeGraphs"][std::to_string(e)] = graph_to_json(x.eg[e]);
  j["incidences"] = Json::object();
  auto put = [&](int o, const char* suffix) {
    Json m;
    m["vertexMap"] = x.inc[o].vmap;
    Json emap = Json::array();
    for (int k = 0; k < x.eg[o / 2].ne(); ++k) {
      int d = x.inc[o].emap[2 * k];
      emap.push_back(d % 2 == 0 ? (d / 2 + 1) : -(d / 2 + 1));
    }
    m["edgeMap"] = emap;
    j["incidences"][std::to_string(o / 2) + suffix] = m;
  };
  for (int e = 0; e < x.u.ne(); ++e) {
    put(2 * e, "+");
    put(2 * e + 1, "-");
  }
  return j;
}

Gos gos_from_json(const Json& j) {
  Gos x;
  x.u = graph_from_json(j.at("underlying"));
  x.vg.resize(x.u.nv);
  for (int v = 0; v < x.u.nv; ++v)
    x.vg[v] = graph_from_json(j.at("vertexGraphs").at(std::to_string(v)));
  x.eg.resize(x.u.ne());
  for (int e = 0; e < x.u.ne(); ++e)
    x.eg[e] = graph_from_json(j.at("edgeGraphs").at(std::to_string(e)));
  x.inc.resize(x.u.noriented());
  for (int e = 0; e < x.u.ne(); ++e) {
    for (int s = 0; s < 2; ++s) {
      const Json& m = j.at("incidences").at(std::to_string(e) + (s == 0 ? "+" : "-"));
      GraphMap gm;
      gm.vmap = m.at("vertexMap").get<std::vector<int>>();
      gm.emap.assign(x.eg[e].noriented(), -1);
      const Json& em = m.at("edgeMap");
      for (int k = 0; k < static_cast<int>(em.size()); ++k) {
        int signedid = em[k].get<int>();
        int d = signedid > 0 ? 2 * (signedid - 1) : 2 * (-signedid - 1) + 1;
        gm.emap[2 * k] = d;
        gm.emap[2 * k + 1] = d ^ 1;
      }
      x.inc[2 * e + s] = std::move(gm);
    }
  }
  return x;
}

Json uot_to_json(const UnionOfTrees& z) {
  Json j;
  j["formatVersion"] = kFormatVersion;
  j["trees"] = Json::array();
  for (const UotTree& t : z.trees) {
    // parent array via BFS from vertex 0
    std::vector<int> parent(t.g.nv, -1);
    std::vector<int> order{0};
    std::vector<bool> seen(t.g.nv, false);
    seen[0] = true;
    for (size_t i = 0; i < order.size(); ++i) {
      int v = order[i];
      for (int o = 0; o < t.g.noriented(); ++o) {
        if (t.g.iota(o) == v && !seen[t.g.tau(o)]) {
          seen[t.g.tau(o)] = true;
          parent[t.g.tau(o)] = v;
          order.push_back(t.g.tau(o));
        }
      }
    }
    j["trees"].push_back({{"parents", parent}, {"boundary", t.boundary}, {"y", t.y_marks}});
  }
  j["rectangles"] = Json::array();
  for (const UotRect& r : z.rects) {
    j["rectangles"].push_back(
        {{"sides", Json::array({Json{{"tree", r.side0.tree}, {"path", r.side0.vertices}},
                                Json{{"tree", r.side1.tree}, {"path", r.side1.vertices}}})}});
  }
  return j;
}

UnionOfTrees uot_from_json(const Json& j) {
  UnionOfTrees z;
  for (const Json& t : j.at("trees")) {
    UotTree tree;
    std::vector<int> parents = t.at("parents").get<std::vector<int>>();
    tree.g.nv = static_cast<int>(parents.size());
    for (int v = 0; v < tree.g.nv; ++v) {
      if (parents[v] >= 0) tree.g.add_edge(parents[v], v);
    }
    tree.boundary = t.at("boundary").get<std::vector<int>>();
    if (t.contains("y")) tree.y_marks = t.at("y").get<std::vector<int>>();
    z.trees.push_back(std::move(tree));
  }
  if (j.contains("rectangles")) {
    for (const Json& r : j.at("rectangles")) {
      UotRect rect;
      rect.side0.tree = r.at("sides")[0].at("tree").get<int>();
      rect.side0.vertices = r.at("sides")[0].at("path").get<std::vector<int>>();
      rect.side1.tree = r.at("sides")[1].at("tree").get<int>();
      rect.side1.vertices = r.at("sides")[1].at("path").get<std::vector<int>>();
      z.rects.push_back(std::move(rect));
    }
  }
  return z;
}

Instance instance_from_json(const Json& j) {
  Instance inst;
  inst.kind = j.at("kind").get<std::string>();
  if (j.contains("seed")) inst.seed = j.at("seed").get<uint64_t>();
  if (inst.kind == "raw-gos") {
    inst.gos = gos_from_json(j.at("gos"));
  } else if (inst.kind == "adjoin-root") {
    AdjoinRootData a;
    a.base_rank = j.at("alphabetRank").get<int>();
    Alphabet base(a.base_rank);
    for (const Json& r : j.at("roots"))
      a.roots.push_back({parse_letters(r.at("gamma").get<std::string>(), base),
                         r.at("k").get<int>()});
    inst.adjoin = a;
    const Json& hom = j.at("hom");
    for (const Json& w : hom.at("base"))
      inst.base_images.push_back(parse_letters(w.get<std::string>(), base));
    for (const Json& w : hom.at("roots"))
      inst.root_images.push_back(parse_letters(w.get<std::string>(), base));
  } else if (inst.kind == "hnn-conjugacy") {
    GraphOfFreeGroupsData d;
    d.alphabet_rank = j.at("alphabetRank").get<int>();
    Alphabet target(d.alphabet_rank);
    for (const Json& v : j.at("vertices")) d.ranks.push_back(v.at("rank").get<int>());
    const Json& hom = j.at("hom");
    int vi = 0;
    for (const Json& imgs : hom.at("vertexImages")) {
      std::vector<Letters> ws;
      for (const Json& w : imgs) ws.push_back(parse_letters(w.get<std::string>(), target));
      if (static_cast<int>(ws.size()) != d.ranks[vi])
        throw Error("instance: vertex image count mismatch");
      d.vertex_images.push_back(std::move(ws));
      ++vi;
    }
    for (const Json& e : j.at("edges")) {
      GofgEdge ge;
      std::string type = e.at("type").get<std::string>();
      ge.kind = type == "hnn" ? GofgEdge::Kind::Hnn : GofgEdge::Kind::Amalgam;
      ge.v0 = e.at("at")[0].get<int>();
      ge.v1 = e.at("at")[1].get<int>();
      Alphabet a0(d.ranks[ge.v0]), a1(d.ranks[ge.v1]);
      ge.w0 = parse_letters(e.at("words")[0].get<std::string>(), a0);
      ge.w1 = parse_letters(e.at("words")[1].get<std::string>(), a1);
      if (ge.kind == GofgEdge::Kind::Hnn)
        ge.stable_image = parse_letters(e.at("stable").get<std::string>(), target);
      d.edges.push_back(std::move(ge));
    }
    inst.gofg = std::move(d);
  } else if (inst.kind == "union-of-trees") {
    inst.uot = uot_from_json(j);
  } else if (inst.kind == "presentation") {
    Presentation p;
    p.generators = j.at("generators").get<int>();
    Alphabet gens(p.generators);
    for (const Json& r : j.at("relators"))
      p.relators.push_back(parse_letters(r.get<std::string>(), gens));
    inst.presentation = p;
    if (j.contains("targetRank")) inst.target_rank = j.at("targetRank").get<int>();
    if (j.contains("maxLength")) inst.max_length = j.at("maxLength").get<int>();
  } else {
    throw Error("instance: unknown kind '" + inst.kind + "'");
  }
  return inst;
}

Json instance_to_json(const Instance& inst) {
  Json j;
  j["formatVersion"] = kFormatVersion;
  j["kind"] = inst.kind;
  if (inst.seed) j["seed"] = *inst.seed;
  if (inst.kind == "raw-gos" && inst.gos) j["gos"] = gos_to_json(*inst.gos);
  if (inst.kind == "union-of-trees" && inst.uot) {
    Json u = uot_to_json(*inst.uot);
    j["trees"] = u["trees"];
    j["rectangles"] = u["rectangles"];
  }
  return j;
}

Json complexity_to_json(const Complexity& c) {
  Json j;
  j["minusBetti"] = c.minus_betti;
  j["k"] = c.k;
  j["m"] = c.m;
  j["m2red"] = c.m2_red;
  j["m2deg"] = c.m2_deg;
  j["tuple"] = c.str();
  return j;
}

Json move_to_json(const Move& m) {
  Json j;
  j["kind"] = m.kind;
  if (m.vertex >= 0) j["vertex"] = m.vertex;
  if (!m.J.empty()) j["J"] = m.J;
  if (m.oriented_edge >= 0) j["orientedEdge"] = m.oriented_edge;
  if (!m.note.empty()) j["note"] = m.note;
  return j;
}

Json cylinder_report(const Gos& x, const CylinderSet& cs) {
  Json j;
  j["formatVersion"] = kFormatVersion;
  j["squares"] = cs.annuli.total_squares;
  int egedges = 0;
  for (const Graph& e : x.eg) egedges += e.ne();
  j["edgeGraphEdges"] = egedges;
  j["annuli"] = Json::array();
  for (size_t a = 0; a < cs.annuli.annuli.size(); ++a) {
    const AnnulusTrace& tr = cs.annuli.annuli[a];
    Json ja;
    ja["squares"] = tr.nsquares;
    ja["moebius"] = tr.moebius;
    Json b = Json::array();
    for (size_t s = 0; s < tr.circuits.size(); ++s) {
      b.push_back({{"length", tr.circuits[s].size()},
                   {"circle", cs.circuit_circle[a][s]},
                   {"winding", cs.circuit_winding[a][s]}});
    }
    ja["boundary"] = b;
    j["annuli"].push_back(ja);
  }
  j["circles"] = Json::array();
  for (const SCircle& c : cs.circles) {
    j["circles"].push_back({{"length", c.root.size()},
                            {"essentialAmbient", c.essential_full},
                            {"essential", c.essential_irr}});
  }
  j["cylinders"] = Json::array();
  for (size_t c = 0; c < cs.cylinders.size(); ++c) {
    const Cylinder& cyl = cs.cylinders[c];
    CylinderClassification cls = classify_cylinder(cs, static_cast<int>(c));
    Json jc;
    jc["circles"] = cyl.circles;
    jc["annuli"] = cyl.annuli;
    jc["mappingTorus"] = cyl.mapping_torus;
    if (!cyl.mapping_torus) jc["failure"] = cyl.failure;
    jc["verdict"] = cls.verdict == CylinderVerdict::Good ? "good" : "bad";
    jc["minEssentialMeet"] = cls.min_essential_meet;
    jc["verdictAmbient"] = cls.verdict_ambient == CylinderVerdict::Good ? "good" : "bad";
    jc["minAmbientMeet"] = cls.min_ambient_meet;
    j["cylinders"].push_back(jc);
  }
  return j;
}

Json theorem_report_to_json(const TheoremReport& r) {
  Json j;
  j["formatVersion"] = kFormatVersion;
  j["ok"] = r.ok;
  if (!r.error.empty()) j["error"] = r.error;
  j["builtEdgeSpacesTrees"] = r.built_edge_spaces_trees;
  j["minimizedEdgeSpacesTrees"] = r.minimized_edge_spaces_trees;
  j["locatedRoot"] = r.located_root;
  j["factor"] = {{"generator", r.factor.factor_generator.empty()
                                   ? ""
                                   : word_to_string(r.factor.factor_generator)},
                 {"primitiveConfirmed", r.factor.primitive_confirmed}};
  Json comp = Json::array();
  for (const Letters& w : r.factor.complement) comp.push_back(word_to_string(w));
  j["factor"]["complement"] = comp;
  j["inputGammaPrimitive"] = r.input_gamma_primitive;
  j["log"] = r.log;
  j["verification"] = {{"factorBasisCertificate", "stallings fold of factor plus complement"},
                       {"primitivity", "whitehead minimization"}};
  return j;
}

Json corollary_report_to_json(const CorollaryReport& r) {
  Json j;
  j["formatVersion"] = kFormatVersion;
  j["ok"] = r.ok;
  if (!r.error.empty()) j["error"] = r.error;
  j["splitsPerformed"] = r.splits_performed;
  j["components"] = r.components;
  j["factor"] = {{"generator", r.factor.factor_generator.empty()
                                   ? ""
                                   : word_to_string(r.factor.factor_generator)},
                 {"primitiveConfirmed", r.factor.primitive_confirmed}};
  Json comp = Json::array();
  for (const Letters& w : r.factor.complement) comp.push_back(word_to_string(w));
  j["factor"]["complement"] = comp;
  Json placement = Json::array();
  for (int p : r.gamma_placement)
    placement.push_back(p == 0 ? "Z" : (p == 1 ? "F1" : "unplaced"));
  j["gammaPlacement"] = placement;
  j["allPlaced"] = r.all_placed;
  j["f1ContainsSomeGamma"] = r.f1_contains_some_gamma;
  j["log"] = r.log;
  j["verification"] = {{"placement", "cyclic-word conjugacy and circuit lifting"},
                       {"primitivity", "whitehead minimization"}};
  return j;
}

std::string dump_sorted(const Json& j) { return j.dump(2); }

}  // namespace foldspace
