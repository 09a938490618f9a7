#include "foldspace/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

namespace foldspace {

std::vector<std::vector<int>> Graph::incidence() const {
  std::vector<std::vector<int>> inc(nv);
  for (int o = 0; o < noriented(); ++o) inc[etarget[o]].push_back(o);
  return inc;
}

std::vector<int> Graph::degrees() const {
  std::vector<int> d(nv, 0);
  for (int o = 0; o < noriented(); ++o) d[etarget[o]]++;
  return d;
}

std::vector<int> Graph::components(int* count) const {
  std::vector<int> comp(nv, -1);
  int c = 0;
  for (int s = 0; s < nv; ++s) {
    if (comp[s] != -1) continue;
    comp[s] = c;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int o = 0; o < noriented(); ++o) {
        if (etarget[o] == v) {
          int u = iota(o);
          if (comp[u] == -1) {
            comp[u] = c;
            q.push(u);
          }
        }
      }
    }
    ++c;
  }
  if (count) *count = c;
  return comp;
}

bool Graph::connected() const {
  if (nv == 0) return true;
  int c = 0;
  components(&c);
  return c <= 1;
}

bool Graph::is_circle() const {
  if (nv == 0 || ne() == 0 || !connected()) return false;
  for (int d : degrees())
    if (d != 2) return false;
  return ne() == nv;
}

bool Graph::is_tree() const {
  return nv > 0 && connected() && ne() == nv - 1;
}

Pi1Data pi1_data(const Graph& g) {
  Pi1Data out;
  std::vector<int> comp = g.components(&out.components);
  out.chi.assign(out.components, 0);
  for (int v = 0; v < g.nv; ++v) out.chi[comp[v]] += 1;
  for (int e = 0; e < g.ne(); ++e) out.chi[comp[g.tau(2 * e)]] -= 1;
  for (int c : out.chi) {
    out.betti.push_back(1 - c);
    out.total_chi += c;
  }
  return out;
}

bool GraphMap::valid(const Graph& dom, const Graph& cod) const {
  if (static_cast<int>(vmap.size()) != dom.nv) return false;
  if (static_cast<int>(emap.size()) != dom.noriented()) return false;
  for (int v : vmap)
    if (v < 0 || v >= cod.nv) return false;
  for (int o = 0; o < dom.noriented(); ++o) {
    int f = emap[o];
    if (f < 0 || f >= cod.noriented()) return false;
    if (emap[o ^ 1] != (f ^ 1)) return false;
    if (vmap[dom.tau(o)] != cod.tau(f)) return false;
  }
  return true;
}

bool GraphMap::is_immersion(const Graph& dom, const Graph& cod) const {
  auto inc = dom.incidence();
  for (int v = 0; v < dom.nv; ++v) {
    std::set<int> seen;
    for (int o : inc[v]) {
      if (!seen.insert(emap[o]).second) return false;
    }
  }
  return true;
}

bool GraphMap::is_embedding(const Graph& dom, const Graph& cod) const {
  std::set<int> vs(vmap.begin(), vmap.end());
  if (static_cast<int>(vs.size()) != dom.nv) return false;
  std::set<int> es;
  for (int e = 0; e < dom.ne(); ++e) es.insert(emap[2 * e] / 2);
  return static_cast<int>(es.size()) == dom.ne();
}

bool GraphMap::is_isomorphism(const Graph& dom, const Graph& cod) const {
  return dom.nv == cod.nv && dom.ne() == cod.ne() && is_embedding(dom, cod);
}

GraphMap identity_map(const Graph& g) {
  GraphMap m;
  m.vmap.resize(g.nv);
  std::iota(m.vmap.begin(), m.vmap.end(), 0);
  m.emap.resize(g.noriented());
  std::iota(m.emap.begin(), m.emap.end(), 0);
  return m;
}

GraphMap compose(const GraphMap& f, const GraphMap& g) {
  GraphMap m;
  m.vmap.reserve(f.vmap.size());
  for (int v : f.vmap) m.vmap.push_back(g.vmap[v]);
  m.emap.reserve(f.emap.size());
  for (int e : f.emap) m.emap.push_back(g.emap[e]);
  return m;
}

bool LabeledGraph::label_ok() const {
  if (static_cast<int>(label.size()) != g.noriented()) return false;
  for (int o = 0; o < g.noriented(); ++o) {
    if (!alphabet.contains(label[o])) return false;
    if (label[o ^ 1] != -label[o]) return false;
  }
  return true;
}

bool LabeledGraph::is_immersed() const {
  // label-injective on the star of each vertex, reading edges leaving v
  std::set<std::pair<int, int>> seen;
  for (int o = 0; o < g.noriented(); ++o) {
    int v = g.iota(o);
    if (!seen.insert({v, label[o]}).second) return false;
  }
  return true;
}

int LabeledGraph::step(int v, int letter) const {
  for (int o = 0; o < g.noriented(); ++o) {
    if (g.iota(o) == v && label[o] == letter) return o;
  }
  return -1;
}

LabeledGraph rose(const Alphabet& a) {
  LabeledGraph r;
  r.alphabet = a;
  r.g.add_vertex();
  for (int k = 1; k <= a.rank; ++k) {
    r.g.add_edge(0, 0);
    r.label.push_back(k);
    r.label.push_back(-k);
  }
  return r;
}

namespace {

struct Dsu {
  std::vector<int> p;
  explicit Dsu(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);  // keep the smaller id as representative
    p[b] = a;
    return true;
  }
};

}  // namespace

LabeledGraph fold_labeled(const LabeledGraph& in, int base, int* base_out) {
  // Identify same-label edge pairs sharing an endpoint until immersed.
  int n = in.g.nv;
  Dsu vdsu(n);
  struct E {
    int from, to, label;
    bool dead = false;
  };
  std::vector<E> edges;
  for (int e = 0; e < in.g.ne(); ++e) {
    int o = 2 * e;
    int lab = in.label[o];
    int from = in.g.iota(o), to = in.g.tau(o);
    if (lab < 0) {
      lab = -lab;
      std::swap(from, to);
    }
    edges.push_back({from, to, lab});
  }
  bool changed = true;
  while (changed) {
    changed = false;
    // smallest-id-first pair of equal-label edges at a shared vertex
    std::map<std::pair<int, int>, int> leaving, arriving;
    for (size_t i = 0; i < edges.size() && !changed; ++i) {
      if (edges[i].dead) continue;
      int f = vdsu.find(edges[i].from), t = vdsu.find(edges[i].to);
      auto [itl, newl] = leaving.try_emplace({f, edges[i].label}, static_cast<int>(i));
      if (!newl) {
        E& other = edges[itl->second];
        vdsu.unite(vdsu.find(other.to), t);
        edges[i].dead = true;
        changed = true;
        break;
      }
      auto [ita, newa] = arriving.try_emplace({t, edges[i].label}, static_cast<int>(i));
      if (!newa) {
        E& other = edges[ita->second];
        vdsu.unite(vdsu.find(other.from), f);
        edges[i].dead = true;
        changed = true;
        break;
      }
    }
  }
  // compact vertices reachable-from-anything (keep all for now)
  std::vector<int> vid(n, -1);
  int nv = 0;
  for (int v = 0; v < n; ++v) {
    if (vdsu.find(v) == v) vid[v] = nv++;
  }
  LabeledGraph out;
  out.alphabet = in.alphabet;
  out.g.nv = nv;
  std::set<std::tuple<int, int, int>> dedup;
  for (auto& e : edges) {
    if (e.dead) continue;
    int f = vid[vdsu.find(e.from)], t = vid[vdsu.find(e.to)];
    if (!dedup.insert({f, t, e.label}).second) continue;
    out.g.add_edge(f, t);
    out.label.push_back(e.label);
    out.label.push_back(-e.label);
  }
  if (base_out) *base_out = vid[vdsu.find(base)];
  return out;
}

static LabeledGraph trim_core(const LabeledGraph& in, int base, int* base_out) {
  // repeatedly drop valence-1 / valence-0 vertices other than base
  int n = in.g.nv;
  std::vector<bool> alive_v(n, true);
  std::vector<bool> alive_e(in.g.ne(), true);
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<int> deg(n, 0);
    for (int e = 0; e < in.g.ne(); ++e) {
      if (!alive_e[e]) continue;
      deg[in.g.tau(2 * e)]++;
      deg[in.g.iota(2 * e)]++;
    }
    for (int v = 0; v < n; ++v) {
      if (!alive_v[v] || v == base) continue;
      if (deg[v] == 0) {
        alive_v[v] = false;
        changed = true;
      } else if (deg[v] == 1) {
        alive_v[v] = false;
        for (int e = 0; e < in.g.ne(); ++e) {
          if (alive_e[e] && (in.g.tau(2 * e) == v || in.g.iota(2 * e) == v)) alive_e[e] = false;
        }
        changed = true;
      }
    }
  }
  std::vector<int> vid(n, -1);
  int nv = 0;
  for (int v = 0; v < n; ++v)
    if (alive_v[v]) vid[v] = nv++;
  LabeledGraph out;
  out.alphabet = in.alphabet;
  out.g.nv = nv;
  for (int e = 0; e < in.g.ne(); ++e) {
    if (!alive_e[e]) continue;
    out.g.add_edge(vid[in.g.iota(2 * e)], vid[in.g.tau(2 * e)]);
    out.label.push_back(in.label[2 * e]);
    out.label.push_back(-in.label[2 * e]);
  }
  if (base_out) *base_out = vid[base];
  return out;
}

FoldedSubgroup stallings_fold(const Alphabet& a, const std::vector<Letters>& generators) {
  LabeledGraph wedge;
  wedge.alphabet = a;
  int base = wedge.g.add_vertex();
  for (const auto& w : generators) {
    Letters r = free_reduce(w);
    if (r.empty()) continue;
    int prev = base;
    for (size_t i = 0; i < r.size(); ++i) {
      int next = (i + 1 == r.size()) ? base : wedge.g.add_vertex();
      int lab = r[i];
      if (lab > 0) {
        wedge.g.add_edge(prev, next);
        wedge.label.push_back(lab);
        wedge.label.push_back(-lab);
      } else {
        wedge.g.add_edge(next, prev);
        wedge.label.push_back(-lab);
        wedge.label.push_back(lab);
      }
      prev = next;
    }
  }
  int b1 = 0;
  LabeledGraph folded = fold_labeled(wedge, base, &b1);
  FoldedSubgroup out;
  out.core = trim_core(folded, b1, &out.base);
  return out;
}

bool member(const FoldedSubgroup& h, const Letters& w) {
  Letters r = free_reduce(w);
  int v = h.base;
  for (int x : r) {
    int o = h.core.step(v, x);
    if (o < 0) return false;
    v = h.core.g.tau(o);
  }
  return v == h.base;
}

bool subgroup_is_whole(const FoldedSubgroup& h) {
  if (h.core.g.nv != 1) return false;
  if (h.core.g.ne() != h.core.alphabet.rank) return false;
  std::set<int> labs;
  for (int e = 0; e < h.core.g.ne(); ++e) labs.insert(std::abs(h.core.label[2 * e]));
  return static_cast<int>(labs.size()) == h.core.alphabet.rank;
}

std::vector<Circuit> circle_immersion(const CyclicWord& c, const LabeledGraph& target) {
  std::vector<Circuit> out;
  std::set<std::vector<int>> seen;  // canonical form up to rotation and reversal
  auto rotmin = [](std::vector<int> e) {
    std::vector<int> best = e;
    for (size_t i = 1; i < e.size(); ++i) {
      std::rotate(e.begin(), e.begin() + 1, e.end());
      if (e < best) best = e;
    }
    return best;
  };
  auto canon = [&](const std::vector<int>& e) {
    std::vector<int> rev(e.rbegin(), e.rend());
    for (int& o : rev) o ^= 1;
    std::vector<int> a = rotmin(e), b = rotmin(rev);
    return std::min(a, b);
  };
  int L = c.size();
  for (int orient = 0; orient < 2; ++orient) {
    Letters w = orient ? inverse_letters(c.letters) : c.letters;
    for (int v = 0; v < target.g.nv; ++v) {
      for (int r = 0; r < L; ++r) {
        std::vector<int> path;
        int cur = v;
        bool ok = true;
        for (int i = 0; i < L && ok; ++i) {
          int o = target.step(cur, w[(r + i) % L]);
          if (o < 0) ok = false;
          else {
            path.push_back(o);
            cur = target.g.tau(o);
          }
        }
        if (ok && cur == v) {
          auto key = canon(path);
          if (seen.insert(key).second) out.push_back(Circuit{key});
        }
      }
    }
  }
  return out;
}

std::optional<Circuit> trace_circuit(const FoldedSubgroup& h, const Letters& w) {
  Letters r = free_reduce(w);
  if (r.empty()) return std::nullopt;
  // walk the non-cyclic prefix; the cyclic part traces the circuit
  Letters cyc = cyclic_reduce(r);
  if (cyc.empty()) return std::nullopt;
  // conjugator: r = u cyc u^-1
  Letters u;
  {
    Letters tmp = r;
    while (tmp.size() >= 2 && tmp.front() == -tmp.back()) {
      u.push_back(tmp.front());
      tmp.erase(tmp.begin());
      tmp.pop_back();
    }
  }
  int v = h.base;
  for (int x : u) {
    int o = h.core.step(v, x);
    if (o < 0) return std::nullopt;
    v = h.core.g.tau(o);
  }
  Circuit c;
  int cur = v;
  for (int x : cyc) {
    int o = h.core.step(cur, x);
    if (o < 0) return std::nullopt;
    c.oedges.push_back(o);
    cur = h.core.g.tau(o);
  }
  if (cur != v) return std::nullopt;
  return c;
}

SchreierBasis schreier_basis(const FoldedSubgroup& h) {
  SchreierBasis sb;
  sb.graph = h;
  const Graph& g = h.core.g;
  sb.tree_parent_edge.assign(g.nv, -2);
  sb.tree_parent_edge[h.base] = -1;
  std::queue<int> q;
  q.push(h.base);
  std::vector<bool> tree_edge(g.ne(), false);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int o = 0; o < g.noriented(); ++o) {
      if (g.iota(o) != v) continue;
      int u = g.tau(o);
      if (sb.tree_parent_edge[u] == -2) {
        sb.tree_parent_edge[u] = o ^ 1;  // edge from u back toward v
        tree_edge[o / 2] = true;
        q.push(u);
      }
    }
  }
  sb.basis_of_edge.assign(g.ne(), -1);
  for (int e = 0; e < g.ne(); ++e) {
    if (tree_edge[e]) continue;
    sb.basis_of_edge[e] = static_cast<int>(sb.basis_edge.size());
    sb.basis_edge.push_back(2 * e);
  }
  return sb;
}

static Letters tree_word_to_base(const SchreierBasis& sb, int v) {
  // word read along the tree path from v to base
  Letters out;
  const LabeledGraph& lg = sb.graph.core;
  while (sb.tree_parent_edge[v] != -1) {
    int o = sb.tree_parent_edge[v];
    out.push_back(lg.label[o]);
    v = lg.g.tau(o);
  }
  return out;
}

Letters SchreierBasis::basis_word(int i) const {
  int o = basis_edge[i];
  const LabeledGraph& lg = graph.core;
  Letters head = inverse_letters(tree_word_to_base(*this, lg.g.iota(o)));
  head.push_back(lg.label[o]);
  Letters tail = tree_word_to_base(*this, lg.g.tau(o));
  head.insert(head.end(), tail.begin(), tail.end());
  return free_reduce(head);
}

Letters SchreierBasis::rewrite(const Letters& w) const {
  Letters r = free_reduce(w);
  const LabeledGraph& lg = graph.core;
  std::vector<int> path;
  int v = graph.base;
  for (int x : r) {
    int o = lg.step(v, x);
    if (o < 0) throw Error("word is not in the subgroup (no lift)");
    path.push_back(o);
    v = lg.g.tau(o);
  }
  if (v != graph.base) throw Error("word is not in the subgroup (open lift)");
  return rewrite_path(path);
}

Letters SchreierBasis::rewrite_path(const std::vector<int>& oedges) const {
  Letters out;
  for (int o : oedges) {
    int e = o / 2;
    int b = basis_of_edge[e];
    if (b < 0) continue;
    bool forward = (basis_edge[b] == o);
    out.push_back(forward ? (b + 1) : -(b + 1));
  }
  return free_reduce(out);
}

std::string graph_to_dot(const Graph& g, const std::string& name) {
  std::ostringstream os;
  os << "graph " << name << " {\n";
  for (int v = 0; v < g.nv; ++v) os << "  v" << v << ";\n";
  for (int e = 0; e < g.ne(); ++e)
    os << "  v" << g.iota(2 * e) << " -- v" << g.tau(2 * e) << " [label=e" << e << "];\n";
  os << "}\n";
  return os.str();
}

std::string labeled_to_dot(const LabeledGraph& lg, const std::string& name) {
  std::ostringstream os;
  os << "digraph " << name << " {\n";
  for (int v = 0; v < lg.g.nv; ++v) os << "  v" << v << ";\n";
  for (int e = 0; e < lg.g.ne(); ++e) {
    int o = 2 * e;
    int lab = lg.label[o];
    int from = lg.g.iota(o), to = lg.g.tau(o);
    if (lab < 0) {
      lab = -lab;
      std::swap(from, to);
    }
    os << "  v" << from << " -> v" << to << " [label=" << word_to_string({lab}) << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace foldspace
