#include "foldspace/construct.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace foldspace {

int corank_bound(const GraphOfFreeGroupsData& d) {
  int s = 0;
  for (int r : d.ranks) s += r;
  return s - static_cast<int>(d.ranks.size()) + 1;
}

GraphOfFreeGroupsData adjoin_root_data_to_gofg(const AdjoinRootData& a,
                                               const std::vector<Letters>& base_images,
                                               const std::vector<Letters>& root_images) {
  Alphabet base(a.base_rank);
  std::vector<Word> classes;
  for (const auto& [g, k] : a.roots) {
    if (k < 2) throw Error("adjoin_root: exponent must be at least 2");
    Word w{base, free_reduce(g)};
    CyclicWord c = cyclic_canonical(w);  // throws on trivial gamma
    if (root(c).second != 1) throw Error("adjoin_root: gamma is not indivisible");
    classes.push_back(w);
  }
  if (!are_distinct_classes(classes))
    throw Error("adjoin_root: classes coincide or contain an inverse pair");
  GraphOfFreeGroupsData d;
  d.alphabet_rank = a.base_rank;  // maximal corank target
  d.ranks.push_back(a.base_rank);
  d.vertex_images.push_back(base_images);
  for (size_t i = 0; i < a.roots.size(); ++i) {
    d.ranks.push_back(1);
    d.vertex_images.push_back({root_images[i]});
    GofgEdge e;
    e.kind = GofgEdge::Kind::Amalgam;
    e.v0 = 0;
    e.v1 = static_cast<int>(i) + 1;
    e.w0 = a.roots[i].first;
    e.w1.assign(a.roots[i].second, 1);  // r^k in the rank-one group
    d.edges.push_back(std::move(e));
  }
  return d;
}

BuiltGos assemble_tracks(const LabeledGraph& H, const std::vector<AnnulusSpec>& annuli) {
  const int nHv = H.g.nv;
  const int nHe = H.g.ne();
  // tracks: one per annulus position, joining the iota-corners of the
  // bottom and top rails
  struct Track {
    int bottom_corner, top_corner;  // H-vertices
  };
  std::vector<Track> tracks;
  std::vector<std::vector<int>> track_of;  // per annulus: position -> track id
  for (const AnnulusSpec& a : annuli) {
    if (a.bottom.size() != a.top.size() || a.bottom.empty())
      throw Error("assemble_tracks: annulus sides must be matching nonempty circuits");
    int L = static_cast<int>(a.bottom.size());
    std::vector<int> ids;
    for (int m = 0; m < L; ++m) {
      if (H.label[a.bottom[m]] != H.label[a.top[m]])
        throw Error("assemble_tracks: annulus labels do not match");
      ids.push_back(static_cast<int>(tracks.size()));
      tracks.push_back({H.g.iota(a.bottom[m]), H.g.iota(a.top[m])});
    }
    track_of.push_back(std::move(ids));
  }

  // vertex spaces: components of (H vertices, tracks)
  std::vector<int> vpar(nHv);
  std::iota(vpar.begin(), vpar.end(), 0);
  std::function<int(int)> vfind = [&](int a) { return vpar[a] == a ? a : vpar[a] = vfind(vpar[a]); };
  for (const Track& t : tracks) {
    int a = vfind(t.bottom_corner), b = vfind(t.top_corner);
    if (a != b) vpar[std::max(a, b)] = std::min(a, b);
  }
  std::map<int, int> ucomp;
  for (int v = 0; v < nHv; ++v) {
    int r = vfind(v);
    ucomp.try_emplace(r, static_cast<int>(ucomp.size()));
  }
  BuiltGos out;
  Gos& x = out.gos;
  x.u.nv = static_cast<int>(ucomp.size());
  x.vg.resize(x.u.nv);
  out.uvertex_of_Hvertex.resize(nHv);
  out.vglocal_of_Hvertex.assign(nHv, -1);
  for (int v = 0; v < nHv; ++v) {
    int uc = ucomp.at(vfind(v));
    out.uvertex_of_Hvertex[v] = uc;
    out.vglocal_of_Hvertex[v] = x.vg[uc].add_vertex();
  }
  std::vector<std::pair<int, int>> track_edge(tracks.size());  // (u-vertex, local vg edge)
  for (size_t t = 0; t < tracks.size(); ++t) {
    int uc = out.uvertex_of_Hvertex[tracks[t].bottom_corner];
    int id = x.vg[uc].add_edge(out.vglocal_of_Hvertex[tracks[t].bottom_corner],
                               out.vglocal_of_Hvertex[tracks[t].top_corner]);
    track_edge[t] = {uc, id};
  }

  // squares: one per annulus position
  struct Sq {
    int annulus, pos;
  };
  std::vector<std::vector<Sq>> squares_on_edge(nHe);  // per H unoriented edge... on letters
  // edge spaces: per letter, components of (H-edges of that letter, squares)
  std::vector<int> epar(nHe);
  std::iota(epar.begin(), epar.end(), 0);
  std::function<int(int)> efind = [&](int a) { return epar[a] == a ? a : epar[a] = efind(epar[a]); };
  std::vector<std::tuple<int, int, int, int>> squares;  // (annulus, pos, bottomHe, topHe)
  for (size_t a = 0; a < annuli.size(); ++a) {
    int L = static_cast<int>(annuli[a].bottom.size());
    for (int m = 0; m < L; ++m) {
      int hb = annuli[a].bottom[m] / 2, ht = annuli[a].top[m] / 2;
      squares.push_back({static_cast<int>(a), m, hb, ht});
      int p = efind(hb), q = efind(ht);
      if (p != q) epar[std::max(p, q)] = std::min(p, q);
    }
  }
  // letters separate components automatically (labels match within a square)
  std::map<int, int> uedge;
  for (int e = 0; e < nHe; ++e) {
    int r = efind(e);
    uedge.try_emplace(r, static_cast<int>(uedge.size()));
  }
  int nue = static_cast<int>(uedge.size());
  out.uedge_of_Hedge.resize(nHe);
  out.eglocal_of_Hedge.assign(nHe, -1);
  x.eg.resize(nue);
  std::vector<int> head_uv(nue, -1), tail_uv(nue, -1);
  for (int e = 0; e < nHe; ++e) {
    int ue = uedge.at(efind(e));
    out.uedge_of_Hedge[e] = ue;
    out.eglocal_of_Hedge[e] = x.eg[ue].add_vertex();
    int pos = 2 * e;  // positively labeled orientation
    if (H.label[pos] < 0) pos ^= 1;
    head_uv[ue] = out.uvertex_of_Hvertex[H.g.tau(pos)];
    tail_uv[ue] = out.uvertex_of_Hvertex[H.g.iota(pos)];
  }
  x.u.etarget.assign(2 * nue, -1);
  for (int ue = 0; ue < nue; ++ue) {
    x.u.etarget[2 * ue] = head_uv[ue];
    x.u.etarget[2 * ue + 1] = tail_uv[ue];
  }
  x.inc.resize(2 * nue);
  for (int ue = 0; ue < nue; ++ue) {
    x.inc[2 * ue].vmap.assign(x.eg[ue].nv, -1);
    x.inc[2 * ue + 1].vmap.assign(x.eg[ue].nv, -1);
  }
  for (int e = 0; e < nHe; ++e) {
    int ue = out.uedge_of_Hedge[e];
    int pos = 2 * e;
    if (H.label[pos] < 0) pos ^= 1;
    x.inc[2 * ue].vmap[out.eglocal_of_Hedge[e]] = out.vglocal_of_Hvertex[H.g.tau(pos)];
    x.inc[2 * ue + 1].vmap[out.eglocal_of_Hedge[e]] = out.vglocal_of_Hvertex[H.g.iota(pos)];
  }
  // square edges of the edge graphs, with head/tail track images
  for (auto [a, m, hb, ht] : squares) {
    int ue = out.uedge_of_Hedge[hb];
    int L = static_cast<int>(annuli[a].bottom.size());
    int bo = annuli[a].bottom[m];
    bool forward = H.label[bo] > 0;  // bottom traverses the letter forward
    // head corner sits at position m+1 when forward, at m otherwise
    int thead = track_of[a][forward ? (m + 1) % L : m];
    int ttail = track_of[a][forward ? m : (m + 1) % L];
    int id = x.eg[ue].add_edge(out.eglocal_of_Hedge[hb], out.eglocal_of_Hedge[ht]);
    // oriented 2*id runs bottom -> top; the track edges run bottom -> top
    GraphMap& mt = x.inc[2 * ue];
    GraphMap& mi = x.inc[2 * ue + 1];
    mt.emap.resize(2 * id + 2, -1);
    mi.emap.resize(2 * id + 2, -1);
    mt.emap[2 * id] = 2 * track_edge[thead].second;
    mt.emap[2 * id + 1] = 2 * track_edge[thead].second + 1;
    mi.emap[2 * id] = 2 * track_edge[ttail].second;
    mi.emap[2 * id + 1] = 2 * track_edge[ttail].second + 1;
  }
  for (int ue = 0; ue < nue; ++ue) {
    x.inc[2 * ue].emap.resize(x.eg[ue].noriented(), -1);
    x.inc[2 * ue + 1].emap.resize(x.eg[ue].noriented(), -1);
  }
  return out;
}

namespace {

Letters substitute(const std::vector<Letters>& images, const Letters& w) {
  Letters out;
  for (int x : w) {
    const Letters& img = images[std::abs(x) - 1];
    if (x > 0) out.insert(out.end(), img.begin(), img.end());
    else {
      Letters inv = inverse_letters(img);
      out.insert(out.end(), inv.begin(), inv.end());
    }
  }
  return free_reduce(out);
}

}  // namespace

BuildResult build_gos(const GraphOfFreeGroupsData& d) {
  Alphabet target(d.alphabet_rank);
  if (d.ranks.size() != d.vertex_images.size())
    throw Error("build_gos: image table does not match the vertex groups");
  BuildResult res;

  // embed checks and cores
  for (size_t i = 0; i < d.ranks.size(); ++i) {
    if (static_cast<int>(d.vertex_images[i].size()) != d.ranks[i])
      throw Error("build_gos: generator images missing for a vertex group");
    FoldedSubgroup core = stallings_fold(target, d.vertex_images[i]);
    Pi1Data p = pi1_data(core.core.g);
    int betti = 0;
    for (int b : p.betti) betti += b;
    if (p.components != 1 || betti != d.ranks[i])
      throw Error("build_gos: phi does not embed vertex group " + std::to_string(i));
    res.cores.push_back(core);
    res.bases.push_back(schreier_basis(res.cores.back()));
  }
  // relation checks
  for (const GofgEdge& e : d.edges) {
    Letters a = substitute(d.vertex_images[e.v0], e.w0);
    Letters b = substitute(d.vertex_images[e.v1], e.w1);
    if (free_reduce(a).empty() || free_reduce(b).empty())
      throw Error("build_gos: trivial edge word image");
    if (e.kind == GofgEdge::Kind::Amalgam) {
      if (a != b) throw Error("build_gos: amalgam identification fails under phi");
    } else {
      Letters t = e.stable_image;
      Letters lhs = t;
      lhs.insert(lhs.end(), a.begin(), a.end());
      Letters ti = inverse_letters(t);
      lhs.insert(lhs.end(), ti.begin(), ti.end());
      if (free_reduce(lhs) != free_reduce(b))
        throw Error("build_gos: HNN relation fails under phi");
    }
  }
  // surjectivity
  {
    std::vector<Letters> gens;
    for (const auto& imgs : d.vertex_images)
      for (const auto& w : imgs) gens.push_back(w);
    for (const GofgEdge& e : d.edges)
      if (e.kind == GofgEdge::Kind::Hnn) gens.push_back(e.stable_image);
    if (!subgroup_is_whole(stallings_fold(target, gens)))
      throw Error("build_gos: phi is not surjective onto the target free group");
  }

  // disjoint union H of the cores
  LabeledGraph& H = res.H;
  H.alphabet = target;
  for (size_t i = 0; i < res.cores.size(); ++i) {
    const LabeledGraph& c = res.cores[i].core;
    res.core_vertex_offset.push_back(H.g.nv);
    res.core_edge_offset.push_back(H.g.ne());
    int off = H.g.nv;
    H.g.nv += c.g.nv;
    for (int e = 0; e < c.g.ne(); ++e) {
      H.g.add_edge(c.g.iota(2 * e) + off, c.g.tau(2 * e) + off);
      H.label.push_back(c.label[2 * e]);
      H.label.push_back(c.label[2 * e + 1]);
    }
    for (int v = 0; v < c.g.nv; ++v) res.H_comp_of_vertex.push_back(static_cast<int>(i));
  }
  auto globalize = [&](int comp, const Circuit& c) {
    std::vector<int> out;
    for (int o : c.oedges) out.push_back(o + 2 * res.core_edge_offset[comp]);
    return out;
  };

  // circuits and annuli
  std::vector<AnnulusSpec> annuli;
  for (const GofgEdge& e : d.edges) {
    Letters img0 = substitute(d.vertex_images[e.v0], e.w0);
    Letters img1 = substitute(d.vertex_images[e.v1], e.w1);
    auto c0 = trace_circuit(res.cores[e.v0], img0);
    auto c1 = trace_circuit(res.cores[e.v1], img1);
    if (!c0 || !c1) throw Error("build_gos: edge word has no circuit lift");
    std::vector<int> bottom = globalize(e.v0, *c0);
    std::vector<int> top = globalize(e.v1, *c1);
    if (bottom.size() != top.size())
      throw Error("build_gos: edge word images have different cyclic lengths");
    // align so the signed label sequences agree: try both orientations of
    // the top circuit, smallest rotation first
    int L = static_cast<int>(bottom.size());
    auto labels = [&](const std::vector<int>& c) {
      Letters out;
      for (int o : c) out.push_back(H.label[o]);
      return out;
    };
    Letters lb = labels(bottom);
    std::optional<std::vector<int>> aligned;
    for (int orient = 0; orient < 2 && !aligned; ++orient) {
      std::vector<int> cand = top;
      if (orient == 1) {
        std::reverse(cand.begin(), cand.end());
        for (int& o : cand) o ^= 1;
      }
      for (int r = 0; r < L && !aligned; ++r) {
        std::vector<int> rot(cand.begin() + r, cand.end());
        rot.insert(rot.end(), cand.begin(), cand.begin() + r);
        if (labels(rot) == lb) aligned = rot;
      }
    }
    if (!aligned)
      throw Error("build_gos: edge word images are not conjugate in the target group");
    annuli.push_back({bottom, *aligned});
    res.edge_circuits.push_back({bottom, *aligned});
  }

  res.built = assemble_tracks(H, annuli);
  require_valid(res.built.gos, "build_gos");
  // maximal corank forces chi equality
  if (d.alphabet_rank == corank_bound(d)) {
    auto [cg, cu] = chi_pair(res.built.gos);
    if (cg != cu)
      throw Error("build_gos: chi equality failed for a maximal-corank homomorphism");
  }
  return res;
}

std::optional<CorankWitness> bounded_corank_search(const Presentation& p, int n, int max_len,
                                                   long long* tuples_tried) {
  Alphabet target(n);
  // all reduced words of length <= max_len, by (length, canonical order)
  std::vector<Letters> words;
  words.push_back({});
  {
    std::vector<Letters> frontier = {{}};
    for (int len = 1; len <= max_len; ++len) {
      std::vector<Letters> next;
      for (const Letters& w : frontier) {
        for (int k = 0; k < 2 * n; ++k) {
          int x = (k % 2 == 0) ? (k / 2 + 1) : -(k / 2 + 1);  // 1,-1,2,-2,...
          if (!w.empty() && w.back() == -x) continue;
          Letters nw = w;
          nw.push_back(x);
          next.push_back(nw);
        }
      }
      for (const auto& w : next) words.push_back(w);
      frontier = std::move(next);
    }
  }
  int r = p.generators;
  std::vector<int> idx(r, 0);
  long long tried = 0;
  // total length ascending, then lexicographic over the index tuple
  std::vector<std::vector<int>> by_len(max_len + 1);
  for (size_t i = 0; i < words.size(); ++i) by_len[words[i].size()].push_back(static_cast<int>(i));
  std::vector<Letters> images(r);
  std::optional<CorankWitness> found;
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (found) return;
    if (pos == r) {
      if (remaining != 0) return;
      ++tried;
      for (const Letters& rel : p.relators) {
        if (!substitute(images, rel).empty()) return;
      }
      std::vector<Letters> gens(images.begin(), images.end());
      if (!subgroup_is_whole(stallings_fold(target, gens))) return;
      found = CorankWitness{images};
      return;
    }
    for (int len = 0; len <= std::min(remaining, max_len); ++len) {
      if (found) return;
      // leave enough room: remaining - len must be reachable by r-pos-1 words
      if (remaining - len > (r - pos - 1) * max_len) continue;
      for (int wi : by_len[len]) {
        images[pos] = words[wi];
        rec(pos + 1, remaining - len);
        if (found) return;
      }
    }
  };
  for (int total = 0; total <= r * max_len && !found; ++total) rec(0, total);
  if (tuples_tried) *tuples_tried = tried;
  return found;
}

namespace {

// factor a primitive cyclic word into a basis split of F(B) using the
// Whitehead trace: returns (z', complement) with z' conjugate to z
std::optional<FactorClaim> primitive_factorization(const Alphabet& alpha, const Letters& z) {
  CyclicWord c = cyclic_canonical(Word{alpha, free_reduce(z)});
  WhiteheadResult wr = whitehead_minimize(c);
  if (wr.min_length != 1) return std::nullopt;
  // target letter: the image of the reduction
  int target = wr.minimal.letters[0];
  // run the trace backward on basis letters: if sigma_k...sigma_1(z) ~ x_t
  // then z ~ sigma_1^-1...sigma_k^-1(x_t), and the images of the other
  // letters complete a basis
  FactorClaim fc;
  for (int k = 1; k <= alpha.rank; ++k) {
    Letters img{k};
    for (auto it = wr.trace.rbegin(); it != wr.trace.rend(); ++it)
      img = it->inverse().apply_letters(img);
    if (k == std::abs(target)) {
      fc.factor_generator = target > 0 ? img : inverse_letters(img);
    } else {
      fc.complement.push_back(img);
    }
  }
  // certificate: the factor generator with the complement is a basis
  std::vector<Letters> all = fc.complement;
  all.push_back(fc.factor_generator);
  if (!subgroup_is_whole(stallings_fold(alpha, all)))
    throw Error("primitive_factorization: inverse Whitehead trace did not give a basis");
  fc.primitive_confirmed = true;
  return fc;
}

// circuit (oriented h-edges of the CURRENT space) -> word over the Schreier
// basis of the core component it lands in; component index returned
std::pair<int, Letters> circuit_to_core_word(const BuildResult& br, const GammaTracker& t,
                                             const Gos& cur, const std::vector<int>& circuit,
                                             const Horizontal& hcur) {
  std::vector<int> base_path = t.circuit_to_base(cur, circuit, hcur);
  // base h-edges correspond to H-edges via the assembly maps
  std::vector<int> core_path;
  int comp = -1;
  for (int signedh : base_path) {
    int bh = std::abs(signedh) - 1;
    bool fwd = signedh > 0;
    // base h-edge bh = (ue, p): p is the eg-local id of an H-edge
    auto [ue, p] = t.base.eof[bh];
    int He = -1;
    for (int e = 0; e < static_cast<int>(br.built.uedge_of_Hedge.size()); ++e) {
      if (br.built.uedge_of_Hedge[e] == ue && br.built.eglocal_of_Hedge[e] == p) {
        He = e;
        break;
      }
    }
    if (He < 0) throw Error("circuit_to_core_word: horizontal edge has no H preimage");
    int c = br.H_comp_of_vertex[br.H.g.tau(2 * He)];
    if (comp == -1) comp = c;
    if (comp != c) throw Error("circuit_to_core_word: circuit crosses core components");
    int local = He - br.core_edge_offset[c];
    // orientation: the base h-edge runs iota-side -> tau-side, which is the
    // positively-labeled orientation of the H-edge
    int core_oriented = 2 * local;
    if (br.H.label[2 * He] < 0) core_oriented ^= 1;
    core_path.push_back(fwd ? core_oriented : (core_oriented ^ 1));
  }
  if (comp < 0) throw Error("circuit_to_core_word: empty circuit");
  // rewrite the closed path over the Schreier basis; close it up through
  // the tree if it is based away from the basepoint
  const SchreierBasis& sb = br.bases[comp];
  Letters w = sb.rewrite_path(core_path);
  return {comp, w};
}

}  // namespace

TheoremReport theorem_report(const AdjoinRootData& a, const std::vector<Letters>& base_images,
                             const std::vector<Letters>& root_images) {
  TheoremReport rep;
  try {
    GraphOfFreeGroupsData d = adjoin_root_data_to_gofg(a, base_images, root_images);
    BuildResult br = build_gos(d);
    rep.built_edge_spaces_trees = transverse_tree_check(br.built.gos);
    rep.log.push_back("built space valid; edge graphs trees: " +
                      std::to_string(rep.built_edge_spaces_trees));
    GammaTracker t = GammaTracker::start(br.built.gos);
    MinimizeResult m = minimize(br.built.gos, &t);
    rep.minimized_edge_spaces_trees = transverse_tree_check(m.gos);
    SeparabilityResult sep = separability(m.gos);
    if (!sep.separable && !is_cylinder_space(m.gos))
      throw Error("minimized space is not separable: " + sep.reason);
    // locate an essential circle crossing some Gamma_inf edge exactly once
    CylinderSet cs = build_cylinders(m.gos);
    Horizontal h = horizontal(m.gos);
    // crossing counts per oriented h-edge (unoriented tally)
    std::map<int, std::map<int, int>> crossings;  // h-edge -> circle -> count
    for (size_t ci = 0; ci < cs.circles.size(); ++ci) {
      for (int tok : cs.circles[ci].root) crossings[tok / 2][static_cast<int>(ci)]++;
    }
    int chosen_hedge = -1, chosen_circle = -1;
    for (int e = 0; e < h.g.ne() && chosen_hedge < 0; ++e) {
      if (h.circle[h.comp[h.g.tau(2 * e)]]) continue;  // need Gamma_inf
      auto it = crossings.find(e);
      if (it == crossings.end()) continue;
      if (it->second.size() != 1) continue;
      auto [circle, count] = *it->second.begin();
      if (count != 1) continue;
      if (!cs.circles[circle].essential_full) continue;
      chosen_hedge = e;
      chosen_circle = circle;
    }
    if (chosen_hedge < 0) throw Error("no edge of Gamma_inf crossed exactly once by a root class");
    // the circle's class in F-coordinates
    auto [comp, z] = circuit_to_core_word(br, t, m.gos, cs.circles[chosen_circle].root, h);
    if (comp != 0) throw Error("the located circle does not lie in the base factor");
    rep.log.push_back("located circle word over the base Schreier basis: " + word_to_string(z));
    // identify which root it is: compare conjugacy classes of phi-images
    Alphabet target(d.alphabet_rank);
    Alphabet basis_alpha(br.bases[0].rank());
    for (size_t i = 0; i < a.roots.size(); ++i) {
      Letters img = substitute(d.vertex_images[0], a.roots[i].first);
      Letters img_b = br.bases[0].rewrite(img);
      if (is_conjugate(Word{basis_alpha, img_b}, Word{basis_alpha, z}) ||
          is_conjugate(Word{basis_alpha, inverse_letters(img_b)}, Word{basis_alpha, z})) {
        rep.located_root = static_cast<int>(i);
        break;
      }
    }
    if (rep.located_root < 0) throw Error("located circle matches no root class");
    auto fc = primitive_factorization(basis_alpha, z);
    if (!fc) throw Error("located root class is not primitive in F");
    rep.factor = *fc;
    rep.input_gamma_primitive = is_primitive(cyclic_canonical(
        Word{Alphabet(a.base_rank), free_reduce(a.roots[rep.located_root].first)}));
    rep.ok = true;
  } catch (const Error& e) {
    rep.error = e.what();
  }
  return rep;
}

CorollaryReport corollary_report(const GraphOfFreeGroupsData& d) {
  CorollaryReport rep;
  try {
    if (d.ranks.size() != 1) throw Error("corollary: expected a single vertex group");
    Alphabet base(d.ranks[0]);
    // maximal cyclic classes of the edge words and the ~ relation
    std::vector<Letters> roots_of_words;
    auto class_key = [&](const Letters& w) {
      CyclicWord c = cyclic_canonical(Word{base, free_reduce(w)});
      return root(c).first.letters;
    };
    std::map<Letters, int> class_of;
    std::vector<int> par;
    auto cfind = [&](int a) {
      while (par[a] != a) a = par[a] = par[par[a]];
      return a;
    };
    std::vector<std::pair<int, int>> edge_classes;
    for (const GofgEdge& e : d.edges) {
      if (e.kind != GofgEdge::Kind::Hnn) throw Error("corollary: expected HNN edges");
      int c0, c1;
      {
        auto k = class_key(e.w0);
        auto [it, fresh] = class_of.try_emplace(k, static_cast<int>(par.size()));
        if (fresh) par.push_back(it->second);
        c0 = it->second;
      }
      {
        auto k = class_key(e.w1);
        auto [it, fresh] = class_of.try_emplace(k, static_cast<int>(par.size()));
        if (fresh) par.push_back(it->second);
        c1 = it->second;
      }
      edge_classes.push_back({c0, c1});
      int a = cfind(c0), b = cfind(c1);
      if (a != b) par[std::max(a, b)] = std::min(a, b);
    }
    std::map<int, int> class_size;
    for (int c = 0; c < static_cast<int>(par.size()); ++c) class_size[cfind(c)]++;
    for (auto [root_, size] : class_size) {
      if (size == 1) throw Error("corollary: the relation has a singleton equivalence class");
    }

    BuildResult br = build_gos(d);
    GammaTracker t = GammaTracker::start(br.built.gos);
    MinimizeResult m = minimize(br.built.gos, &t);
    SplitToBadResult sb = split_to_bad(m.gos, &t);
    rep.splits_performed = sb.splits_performed;
    rep.components = static_cast<int>(sb.components.size());
    // choose the first bad cylinder and an inessential boundary circle
    Alphabet basis_alpha(br.bases[0].rank());
    std::optional<Letters> zword;
    for (size_t c = 0; c < sb.components.size() && !zword; ++c) {
      CylinderSet cs = build_cylinders(sb.components[c]);
      Horizontal h = horizontal(sb.components[c]);
      for (size_t cy = 0; cy < cs.cylinders.size() && !zword; ++cy) {
        if (classify_cylinder(cs, static_cast<int>(cy)).verdict != CylinderVerdict::Bad) continue;
        // inessential circles of the bad cylinder
        std::vector<Letters> cands;
        for (int ci : cs.cylinders[cy].circles) {
          if (cs.circles[ci].essential_irr) continue;
          auto [comp, w] = circuit_to_core_word(br, sb.trackers[c], sb.components[c],
                                                cs.circles[ci].root, h);
          if (comp != 0) continue;
          if (free_reduce(w).empty()) continue;
          cands.push_back(free_reduce(w));
        }
        std::sort(cands.begin(), cands.end());
        if (!cands.empty()) zword = cands[0];
      }
    }
    if (!zword) throw Error("corollary: no bad cylinder with an inessential boundary circle");
    rep.log.push_back("Z generator over the Schreier basis: " + word_to_string(*zword));
    auto fc = primitive_factorization(basis_alpha, *zword);
    if (!fc) throw Error("corollary: the boundary class is not primitive in F");
    rep.factor = *fc;
    // conjugacy placement of every edge word
    FoldedSubgroup f1 = stallings_fold(basis_alpha, rep.factor.complement);
    CyclicWord zc = cyclic_canonical(Word{basis_alpha, rep.factor.factor_generator});
    int placed_in_f1 = 0;
    for (const GofgEdge& e : d.edges) {
      for (const Letters* w : {&e.w0, &e.w1}) {
        Letters img = substitute(d.vertex_images[0], *w);
        Letters wb = br.bases[0].rewrite(img);
        CyclicWord c = cyclic_canonical(Word{basis_alpha, wb});
        auto [rt, k] = root(c);
        (void)k;
        if (rt == zc) {
          rep.gamma_placement.push_back(0);
          continue;
        }
        if (!circle_immersion(c, f1.core).empty()) {
          rep.gamma_placement.push_back(1);
          placed_in_f1++;
          continue;
        }
        rep.gamma_placement.push_back(-1);
        rep.all_placed = false;
      }
    }
    rep.f1_contains_some_gamma = placed_in_f1 > 0;
    rep.ok = rep.all_placed;
    if (!rep.all_placed) rep.error = "an edge word is conjugate into neither factor";
  } catch (const Error& e) {
    rep.error = e.what();
  }
  return rep;
}

}  // namespace foldspace
