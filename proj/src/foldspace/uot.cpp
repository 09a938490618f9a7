#include "foldspace/uot.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace foldspace {

namespace {

bool is_y(const UotTree& t, int v) {
  return std::find(t.y_marks.begin(), t.y_marks.end(), v) != t.y_marks.end();
}

bool is_boundary(const UotTree& t, int v) {
  return std::find(t.boundary.begin(), t.boundary.end(), v) != t.boundary.end();
}

int edge_between(const Graph& g, int u, int v) {
  for (int e = 0; e < g.ne(); ++e) {
    if ((g.iota(2 * e) == u && g.tau(2 * e) == v) || (g.iota(2 * e) == v && g.tau(2 * e) == u))
      return e;
  }
  return -1;
}

}  // namespace

UotValidation validate_uot(const UnionOfTrees& z) {
  UotValidation r;
  for (size_t i = 0; i < z.trees.size(); ++i) {
    const UotTree& t = z.trees[i];
    if (!t.g.is_tree()) r.issues.push_back("tree " + std::to_string(i) + " is not a tree");
    auto deg = t.g.degrees();
    for (int b : t.boundary) {
      if (b < 0 || b >= t.g.nv || (t.g.nv > 1 && deg[b] != 1))
        r.issues.push_back("boundary vertex of tree " + std::to_string(i) + " is not a leaf");
    }
  }
  for (size_t j = 0; j < z.rects.size(); ++j) {
    for (const UotPath* s : {&z.rects[j].side0, &z.rects[j].side1}) {
      if (s->tree < 0 || s->tree >= static_cast<int>(z.trees.size())) {
        r.issues.push_back("rectangle " + std::to_string(j) + " names a missing tree");
        continue;
      }
      const UotTree& t = z.trees[s->tree];
      if (s->vertices.empty()) {
        r.issues.push_back("rectangle " + std::to_string(j) + " has an empty side");
        continue;
      }
      if (!is_boundary(t, s->vertices.front()) || !is_boundary(t, s->vertices.back()))
        r.issues.push_back("rectangle " + std::to_string(j) + " endpoint is not boundary");
      for (size_t k = 0; k + 1 < s->vertices.size(); ++k) {
        if (edge_between(t.g, s->vertices[k], s->vertices[k + 1]) < 0)
          r.issues.push_back("rectangle " + std::to_string(j) + " path is not an edge path");
      }
      for (size_t k = 1; k + 1 < s->vertices.size(); ++k) {
        if (s->vertices[k - 1] == s->vertices[k + 1] && !is_y(t, s->vertices[k]))
          r.issues.push_back("rectangle " + std::to_string(j) +
                             " path backtracks off a Y vertex");
      }
    }
    // a rectangle folded onto a single path wraps an annulus or Moebius
    // band, which cannot arise from cutting annuli along S(X)
    const UotRect& rect = z.rects[j];
    if (rect.side0.tree == rect.side1.tree &&
        (rect.side0.vertices == rect.side1.vertices ||
         rect.side0.vertices == std::vector<int>(rect.side1.vertices.rbegin(),
                                                 rect.side1.vertices.rend())))
      r.issues.push_back("rectangle " + std::to_string(j) + " has equal attaching maps");
  }
  r.ok = r.issues.empty();
  return r;
}

namespace {

// boundary complex of a subset of rectangles: nodes are (tree, leaf),
// arcs the vertical rectangle sides
struct BoundaryComplex {
  int components = 0;
  int betti = 0;
};

BoundaryComplex boundary_complex(const UnionOfTrees& z, const std::vector<int>& rects) {
  std::map<std::pair<int, int>, int> node;
  for (size_t i = 0; i < z.trees.size(); ++i)
    for (int b : z.trees[i].boundary)
      node.try_emplace({static_cast<int>(i), b}, static_cast<int>(node.size()));
  int n = static_cast<int>(node.size());
  std::vector<int> par(n);
  std::iota(par.begin(), par.end(), 0);
  std::function<int(int)> find = [&](int a) { return par[a] == a ? a : par[a] = find(par[a]); };
  int arcs = 0, merges = 0;
  for (int j : rects) {
    const UotRect& r = z.rects[j];
    for (int endp : {0, 1}) {
      int a = node.at({r.side0.tree, endp ? r.side0.vertices.back() : r.side0.vertices.front()});
      int b = node.at({r.side1.tree, endp ? r.side1.vertices.back() : r.side1.vertices.front()});
      ++arcs;
      int ra = find(a), rb = find(b);
      if (ra != rb) {
        par[std::max(ra, rb)] = std::min(ra, rb);
        ++merges;
      }
    }
  }
  BoundaryComplex out;
  out.components = n - merges;
  out.betti = arcs - merges;
  return out;
}

// incidence graph G(Z) and a maximal tree by BFS from `start`
std::vector<int> maximal_tree(const UnionOfTrees& z, int start) {
  int n = static_cast<int>(z.trees.size());
  std::vector<bool> seen(n, false);
  std::vector<int> tree_rects;
  std::vector<int> frontier{start % std::max(n, 1)};
  seen[frontier[0]] = true;
  bool grew = true;
  while (grew) {
    grew = false;
    for (size_t j = 0; j < z.rects.size(); ++j) {
      int a = z.rects[j].side0.tree, b = z.rects[j].side1.tree;
      if (seen[a] && !seen[b]) {
        seen[b] = true;
        tree_rects.push_back(static_cast<int>(j));
        grew = true;
      } else if (seen[b] && !seen[a]) {
        seen[a] = true;
        tree_rects.push_back(static_cast<int>(j));
        grew = true;
      }
    }
  }
  for (bool s : seen)
    if (!s) throw Error("union of trees is disconnected");
  return tree_rects;
}

Deltas deltas_with_tree(const UnionOfTrees& z, const std::vector<int>& T) {
  Deltas d;
  int ny = 0;
  for (const UotTree& t : z.trees) ny += static_cast<int>(t.y_marks.size());
  BoundaryComplex bt = boundary_complex(z, T);
  std::vector<int> all(z.rects.size());
  std::iota(all.begin(), all.end(), 0);
  BoundaryComplex ba = boundary_complex(z, all);
  d.boundary_components_T = bt.components;
  d.boundary_components_all = ba.components;
  d.boundary_betti_T = bt.betti;
  d.q_minus2 = bt.components - ba.components;
  if (ny > 0) {
    d.cls = ZClass::Z3;
    d.q_plus2 = bt.betti;
    d.p_minus = ny - 1;
    d.p_plus = 0;
  } else if (d.q_minus2 == 0) {
    d.cls = ZClass::Z1;
  } else {
    d.cls = ZClass::Z2;
    d.p_plus = 1;
  }
  return d;
}

}  // namespace

Deltas deltas(const UnionOfTrees& z) {
  Deltas d = deltas_with_tree(z, maximal_tree(z, 0));
  // sample alternative maximal trees; the Delta values should not depend on
  // the choice
  for (int s = 1; s < static_cast<int>(z.trees.size()); ++s) {
    Deltas d2 = deltas_with_tree(z, maximal_tree(z, s));
    if (d2.q_minus2 != d.q_minus2 || d2.q_plus2 != d.q_plus2) d.tree_independent = false;
  }
  return d;
}

int kappa2_tree(const UotTree& s) { return static_cast<int>(s.boundary.size()) - 2; }

int kappa2_graph(const Graph& g, int boundary_count) {
  Pi1Data p = pi1_data(g);
  return -2 * p.total_chi + boundary_count;
}

KappaBalance kappa_balance(const UnionOfTrees& z) {
  Deltas d = deltas(z);
  KappaBalance kb;
  int sum = 0;
  for (const UotTree& t : z.trees) sum += kappa2_tree(t);
  kb.lhs2 = (d.boundary_components_all - 2) - sum;
  kb.rhs2 = d.q_plus2 - d.q_minus2;
  kb.holds = kb.lhs2 == kb.rhs2;
  if (d.cls == ZClass::Z3) kb.z3_inequality_holds = d.p_minus >= d.q_plus2;
  return kb;
}

bool is_treelike(const UnionOfTrees& z) {
  Deltas d = deltas(z);
  if (d.q_minus2 != 0) return false;
  if (d.cls == ZClass::Z3 && d.q_plus2 != 0) return false;
  return true;
}

namespace {

std::vector<int> reversed_vertices(const std::vector<int>& v) {
  return std::vector<int>(v.rbegin(), v.rend());
}

struct SideKey {
  int tree;
  std::vector<int> vertices;  // canonical: min(seq, reversed)
  bool flipped;               // canonical differs from the given order
  bool operator<(const SideKey& o) const {
    return std::tie(tree, vertices) < std::tie(o.tree, o.vertices);
  }
  bool operator==(const SideKey& o) const {
    return tree == o.tree && vertices == o.vertices;
  }
};

SideKey canonical_side(const UotPath& p) {
  SideKey k;
  k.tree = p.tree;
  std::vector<int> rev = reversed_vertices(p.vertices);
  if (rev < p.vertices) {
    k.vertices = rev;
    k.flipped = true;
  } else {
    k.vertices = p.vertices;
    k.flipped = false;
  }
  return k;
}

}  // namespace

ProductDecomposition product_decomposition(const UnionOfTrees& z) {
  ProductDecomposition out;
  if (!is_treelike(z)) {
    out.error = "union of trees is not treelike";
    return out;
  }
  // classes of rectangles sharing a side map; track orientation parity
  int m = static_cast<int>(z.rects.size());
  std::vector<int> par(m), parity(m, 0);
  std::iota(par.begin(), par.end(), 0);
  std::function<int(int)> find = [&](int a) {
    if (par[a] == a) return a;
    int r = find(par[a]);
    parity[a] ^= parity[par[a]];
    return par[a] = r;
  };
  auto unite = [&](int a, int b, int p) -> bool {
    int ra = find(a), rb = find(b);
    if (ra == rb) return (parity[a] ^ parity[b]) == p;
    par[ra] = rb;
    parity[ra] = parity[a] ^ parity[b] ^ p;
    return true;
  };
  std::map<SideKey, std::vector<std::pair<int, int>>> by_side;  // -> (rect, side parity)
  for (int j = 0; j < m; ++j) {
    for (int s = 0; s < 2; ++s) {
      const UotPath& p = s ? z.rects[j].side1 : z.rects[j].side0;
      SideKey k = canonical_side(p);
      by_side[k].push_back({j, k.flipped ? 1 : 0});
    }
  }
  for (auto& [key, users] : by_side) {
    for (size_t i = 1; i < users.size(); ++i) {
      // same canonical side: rect orientations must align with the side
      if (!unite(users[0].first, users[i].first, users[0].second ^ users[i].second)) {
        out.error = "rectangle orientations around a shared side are incoherent";
        return out;
      }
    }
  }
  // assemble bands
  std::map<int, int> band_of;
  for (int j = 0; j < m; ++j) {
    int r = find(j);
    auto [it, fresh] = band_of.try_emplace(r, static_cast<int>(out.bands.size()));
    if (fresh) out.bands.push_back({});
    out.bands[it->second].rects.push_back(j);
  }
  for (auto& band : out.bands) {
    std::set<SideKey> seen;
    for (int j : band.rects) {
      find(j);
      for (int s = 0; s < 2; ++s) {
        const UotPath& p = s ? z.rects[j].side1 : z.rects[j].side0;
        SideKey k = canonical_side(p);
        if (seen.insert(k).second) {
          // present the side in the band's coherent orientation
          UotPath oriented = p;
          if (parity[j] == 1) oriented.vertices = reversed_vertices(oriented.vertices);
          band.sides.push_back(oriented);
        }
      }
    }
  }
  // band/tree incidence graph must be a tree
  std::map<std::pair<int, int>, int> nodes;  // (0, band) / (1, tree)
  int nn = 0;
  for (size_t b = 0; b < out.bands.size(); ++b) nodes[{0, static_cast<int>(b)}] = nn++;
  for (size_t t = 0; t < z.trees.size(); ++t) nodes[{1, static_cast<int>(t)}] = nn++;
  std::vector<int> p2(nn);
  std::iota(p2.begin(), p2.end(), 0);
  std::function<int(int)> f2 = [&](int a) { return p2[a] == a ? a : p2[a] = f2(p2[a]); };
  int edges = 0, merges = 0;
  for (size_t b = 0; b < out.bands.size(); ++b) {
    std::set<SideKey> seen;
    for (int j : out.bands[b].rects) {
      for (int s = 0; s < 2; ++s) {
        const UotPath& p = s ? z.rects[j].side1 : z.rects[j].side0;
        SideKey k = canonical_side(p);
        if (!seen.insert(k).second) continue;
        ++edges;
        int a = f2(nodes.at({0, static_cast<int>(b)}));
        int c = f2(nodes.at({1, k.tree}));
        if (a != c) {
          p2[std::max(a, c)] = std::min(a, c);
          ++merges;
        }
      }
    }
  }
  out.incidence_tree = (edges == merges) && (merges == nn - 1);
  out.ok = true;
  return out;
}

LeafSpace leaf_space(const UnionOfTrees& z) {
  if (!is_treelike(z)) throw Error("leaf_space: union of trees is not treelike");
  ProductDecomposition pd = product_decomposition(z);
  if (!pd.ok) throw Error("leaf_space: " + pd.error);
  LeafSpace out;
  // global vertex numbering
  std::vector<int> voff(z.trees.size() + 1, 0);
  for (size_t i = 0; i < z.trees.size(); ++i) voff[i + 1] = voff[i] + z.trees[i].g.nv;
  int nv = voff.back();
  std::vector<int> vpar(nv);
  std::iota(vpar.begin(), vpar.end(), 0);
  std::function<int(int)> vfind = [&](int a) { return vpar[a] == a ? a : vpar[a] = vfind(vpar[a]); };
  // edge classes keyed by (tree, unoriented edge)
  std::vector<int> eoff(z.trees.size() + 1, 0);
  for (size_t i = 0; i < z.trees.size(); ++i) eoff[i + 1] = eoff[i] + z.trees[i].g.ne();
  int ne = eoff.back();
  std::vector<int> epar(ne);
  std::iota(epar.begin(), epar.end(), 0);
  std::function<int(int)> efind = [&](int a) { return epar[a] == a ? a : epar[a] = efind(epar[a]); };

  // record the identification edges for the fiber connectivity check
  std::vector<std::pair<int, int>> ident;
  for (const Band& band : pd.bands) {
    if (band.sides.empty()) continue;
    const UotPath& root = band.sides[0];
    for (size_t s = 1; s < band.sides.size(); ++s) {
      const UotPath& side = band.sides[s];
      if (side.vertices.size() != root.vertices.size())
        throw Error("leaf_space: band sides have different lengths");
      for (size_t k = 0; k < root.vertices.size(); ++k) {
        int a = voff[root.tree] + root.vertices[k];
        int b = voff[side.tree] + side.vertices[k];
        ident.push_back({a, b});
        int ra = vfind(a), rb = vfind(b);
        if (ra != rb) vpar[std::max(ra, rb)] = std::min(ra, rb);
      }
      for (size_t k = 0; k + 1 < root.vertices.size(); ++k) {
        int ea = eoff[root.tree] +
                 edge_between(z.trees[root.tree].g, root.vertices[k], root.vertices[k + 1]);
        int eb = eoff[side.tree] +
                 edge_between(z.trees[side.tree].g, side.vertices[k], side.vertices[k + 1]);
        int ra = efind(ea), rb = efind(eb);
        if (ra != rb) epar[std::max(ra, rb)] = std::min(ra, rb);
      }
    }
  }
  // quotient graph
  std::map<int, int> vid;
  out.vertex_class.resize(z.trees.size());
  for (size_t i = 0; i < z.trees.size(); ++i) out.vertex_class[i].resize(z.trees[i].g.nv);
  for (int g = 0; g < nv; ++g) {
    int r = vfind(g);
    auto [it, fresh] = vid.try_emplace(r, out.tree.nv);
    if (fresh) out.tree.add_vertex();
    int tr = static_cast<int>(std::upper_bound(voff.begin(), voff.end(), g) - voff.begin()) - 1;
    out.vertex_class[tr][g - voff[tr]] = it->second;
  }
  std::map<int, int> eid;
  for (size_t i = 0; i < z.trees.size(); ++i) {
    for (int e = 0; e < z.trees[i].g.ne(); ++e) {
      int r = efind(eoff[i] + e);
      if (eid.count(r)) continue;
      int a = out.vertex_class[i][z.trees[i].g.iota(2 * e)];
      int b = out.vertex_class[i][z.trees[i].g.tau(2 * e)];
      eid[r] = out.tree.add_edge(a, b);
    }
  }
  if (!out.tree.is_tree()) throw Error("leaf_space: quotient is not a tree");

  // trees embed, pairwise intersections are intervals
  for (size_t i = 0; i < z.trees.size(); ++i) {
    std::set<int> img(out.vertex_class[i].begin(), out.vertex_class[i].end());
    if (img.size() != out.vertex_class[i].size()) out.trees_embed = false;
  }
  for (size_t i = 0; i < z.trees.size() && out.pairwise_intervals; ++i) {
    for (size_t j = i + 1; j < z.trees.size(); ++j) {
      std::set<int> a(out.vertex_class[i].begin(), out.vertex_class[i].end());
      std::vector<int> shared;
      for (int v : out.vertex_class[j])
        if (a.count(v)) shared.push_back(v);
      if (shared.size() <= 1) continue;
      // the shared set must span a path in the quotient tree
      std::set<int> sv(shared.begin(), shared.end());
      int branch = 0, ends = 0;
      for (int v : sv) {
        int deg = 0;
        for (int e = 0; e < out.tree.ne(); ++e) {
          int x = out.tree.iota(2 * e), y = out.tree.tau(2 * e);
          if ((x == v && sv.count(y)) || (y == v && sv.count(x))) deg++;
        }
        if (deg > 2) branch++;
        if (deg <= 1) ends++;
      }
      if (branch > 0 || ends > 2) out.pairwise_intervals = false;
    }
  }

  // boundary components map to distinct valence-one vertices
  auto deg = out.tree.degrees();
  int leaves = 0;
  for (int v = 0; v < out.tree.nv; ++v)
    if (deg[v] <= 1) leaves++;
  // component -> image vertex
  std::map<std::pair<int, int>, int> leafnode;
  for (size_t i = 0; i < z.trees.size(); ++i)
    for (int b : z.trees[i].boundary)
      leafnode.try_emplace({static_cast<int>(i), b}, static_cast<int>(leafnode.size()));
  std::vector<int> bpar(leafnode.size());
  std::iota(bpar.begin(), bpar.end(), 0);
  std::function<int(int)> bfind = [&](int a) { return bpar[a] == a ? a : bpar[a] = bfind(bpar[a]); };
  for (const UotRect& r : z.rects) {
    for (int endp : {0, 1}) {
      int a = leafnode.at({r.side0.tree, endp ? r.side0.vertices.back() : r.side0.vertices.front()});
      int b = leafnode.at({r.side1.tree, endp ? r.side1.vertices.back() : r.side1.vertices.front()});
      int ra = bfind(a), rb = bfind(b);
      if (ra != rb) bpar[std::max(ra, rb)] = std::min(ra, rb);
    }
  }
  std::map<int, std::set<int>> comp_images;
  for (auto& [key, id] : leafnode) {
    int img = out.vertex_class[key.first][key.second];
    comp_images[bfind(id)].insert(img);
  }
  std::set<int> images;
  for (auto& [comp, imgs] : comp_images) {
    if (imgs.size() != 1) out.boundary_bijection = false;
    for (int v : imgs) {
      if (deg[v] > 1) out.boundary_bijection = false;
      images.insert(v);
    }
  }
  if (static_cast<int>(comp_images.size()) != leaves ||
      static_cast<int>(images.size()) != static_cast<int>(comp_images.size()))
    out.boundary_bijection = false;
  out.boundary_count = static_cast<int>(comp_images.size());

  // kappa equality (Z treelike, hence contractible: kappa(Z) = #bd/2 - 1)
  out.kappa_equal =
      kappa2_graph(out.tree, leaves) == (static_cast<int>(comp_images.size()) - 2);

  // fiber connectivity: members of each class plus identification edges
  {
    std::map<int, std::vector<int>> members;
    for (int g = 0; g < nv; ++g) members[vfind(g)].push_back(g);
    for (auto& [root, mem] : members) {
      if (mem.size() <= 1) continue;
      std::map<int, int> local;
      for (size_t i = 0; i < mem.size(); ++i) local[mem[i]] = static_cast<int>(i);
      std::vector<int> fp(mem.size());
      std::iota(fp.begin(), fp.end(), 0);
      std::function<int(int)> ff = [&](int a) { return fp[a] == a ? a : fp[a] = ff(fp[a]); };
      for (auto [a, b] : ident) {
        if (local.count(a) && local.count(b)) {
          int ra = ff(local[a]), rb = ff(local[b]);
          if (ra != rb) fp[std::max(ra, rb)] = std::min(ra, rb);
        }
      }
      std::set<int> roots;
      for (size_t i = 0; i < mem.size(); ++i) roots.insert(ff(static_cast<int>(i)));
      if (roots.size() != 1) out.fibers_connected = false;
    }
  }
  return out;
}

UnionOfTrees random_uot(uint64_t seed) {
  std::mt19937_64 rng(seed * 2654435761u + 17);
  auto pick = [&](int n) { return static_cast<int>(rng() % std::max(n, 1)); };
  UnionOfTrees z;
  int ntrees = 1 + pick(4);
  for (int i = 0; i < ntrees; ++i) {
    UotTree t;
    int nv = 1 + pick(6);
    t.g.add_vertex();
    for (int v = 1; v < nv; ++v) {
      int parent = pick(v);
      t.g.add_vertex();
      t.g.add_edge(parent, v);
    }
    auto deg = t.g.degrees();
    for (int v = 0; v < nv; ++v)
      if (nv == 1 || deg[v] == 1) t.boundary.push_back(v);
    if (pick(3) == 0) t.y_marks.push_back(pick(nv));
    z.trees.push_back(std::move(t));
  }
  // candidate sides per tree: straight leaf-to-leaf paths plus Y detours
  std::vector<std::vector<UotPath>> sides(ntrees);
  for (int i = 0; i < ntrees; ++i) {
    const UotTree& t = z.trees[i];
    auto path_between = [&](int a, int b) {
      // unique tree path by BFS
      std::vector<int> prev(t.g.nv, -1);
      std::vector<int> stack{a};
      prev[a] = a;
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int o = 0; o < t.g.noriented(); ++o) {
          if (t.g.iota(o) == v && prev[t.g.tau(o)] == -1) {
            prev[t.g.tau(o)] = v;
            stack.push_back(t.g.tau(o));
          }
        }
      }
      std::vector<int> out{b};
      while (out.back() != a) out.push_back(prev[out.back()]);
      std::reverse(out.begin(), out.end());
      return out;
    };
    for (int a : t.boundary) {
      for (int b : t.boundary) {
        if (a < b) sides[i].push_back({i, path_between(a, b)});
      }
      for (int y : t.y_marks) {
        if (y == a) continue;
        std::vector<int> half = path_between(a, y);
        std::vector<int> whole = half;
        for (auto it = half.rbegin() + 1; it != half.rend(); ++it) whole.push_back(*it);
        sides[i].push_back({i, whole});  // a -> y -> a through the Y vertex
      }
    }
  }
  int nrects = pick(6);
  for (int j = 0; j < nrects; ++j) {
    // choose a pair of sides with equal lengths (possibly in different trees)
    std::vector<std::pair<UotPath, UotPath>> cands;
    for (int i1 = 0; i1 < ntrees; ++i1)
      for (const UotPath& p1 : sides[i1])
        for (int i2 = 0; i2 < ntrees; ++i2)
          for (const UotPath& p2 : sides[i2]) {
            if (p1.vertices.size() != p2.vertices.size()) continue;
            if (i1 == i2 && (p1.vertices == p2.vertices ||
                             p1.vertices == std::vector<int>(p2.vertices.rbegin(),
                                                             p2.vertices.rend())))
              continue;
            cands.push_back({p1, p2});
          }
    if (cands.empty()) break;
    auto [s0, s1] = cands[pick(static_cast<int>(cands.size()))];
    z.rects.push_back({s0, s1});
  }
  // connectivity: drop unreachable trees (keep the instance connected)
  try {
    maximal_tree(z, 0);
  } catch (const Error&) {
    // restrict to the component of tree 0
    std::vector<bool> seen(ntrees, false);
    seen[0] = true;
    bool grew = true;
    while (grew) {
      grew = false;
      for (const UotRect& r : z.rects) {
        if (seen[r.side0.tree] != seen[r.side1.tree]) {
          seen[r.side0.tree] = seen[r.side1.tree] = true;
          grew = true;
        }
      }
    }
    UnionOfTrees w;
    std::vector<int> remap(ntrees, -1);
    for (int i = 0; i < ntrees; ++i) {
      if (seen[i]) {
        remap[i] = static_cast<int>(w.trees.size());
        w.trees.push_back(z.trees[i]);
      }
    }
    for (const UotRect& r : z.rects) {
      if (seen[r.side0.tree] && seen[r.side1.tree]) {
        UotRect r2 = r;
        r2.side0.tree = remap[r.side0.tree];
        r2.side1.tree = remap[r.side1.tree];
        w.rects.push_back(r2);
      }
    }
    z = std::move(w);
  }
  return z;
}

}  // namespace foldspace
