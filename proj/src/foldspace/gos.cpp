#include "foldspace/gos.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

namespace foldspace {

ValidationReport validate(const Gos& x) {
  ValidationReport r;
  const Graph& u = x.u;
  if (static_cast<int>(x.vg.size()) != u.nv) {
    r.fail("vertex graph count != underlying vertex count");
    return r;
  }
  if (static_cast<int>(x.eg.size()) != u.ne()) {
    r.fail("edge graph count != underlying edge count");
    return r;
  }
  if (static_cast<int>(x.inc.size()) != u.noriented()) {
    r.fail("incidence count != oriented edge count");
    return r;
  }
  for (int v = 0; v < u.nv; ++v) {
    if (x.vg[v].nv == 0) r.fail("vertex graph " + std::to_string(v) + " is empty");
    else if (!x.vg[v].connected()) r.fail("vertex graph " + std::to_string(v) + " is disconnected");
  }
  for (int e = 0; e < u.ne(); ++e) {
    if (x.eg[e].nv == 0) r.fail("edge graph " + std::to_string(e) + " is empty");
    else if (!x.eg[e].connected()) r.fail("edge graph " + std::to_string(e) + " is disconnected");
  }
  if (!r.ok) return r;
  for (int o = 0; o < u.noriented(); ++o) {
    const GraphMap& m = x.inc[o];
    if (!m.valid(x.eg[o / 2], x.vg[u.tau(o)])) {
      r.fail("incidence of oriented edge " + std::to_string(o) + " is not a graph map");
      continue;
    }
    if (!m.is_immersion(x.eg[o / 2], x.vg[u.tau(o)]))
      r.fail("incidence of oriented edge " + std::to_string(o) + " is not an immersion");
  }
  if (!r.ok) return r;
  auto inc = u.incidence();
  for (int v = 0; v < u.nv; ++v) {
    std::vector<int> cover(x.vg[v].ne(), 0);
    for (int o : inc[v]) {
      const GraphMap& m = x.inc[o];
      for (int k = 0; k < x.eg[o / 2].ne(); ++k) cover[m.emap[2 * k] / 2]++;
    }
    for (int f = 0; f < x.vg[v].ne(); ++f) {
      if (cover[f] != 2)
        r.fail("vertex " + std::to_string(v) + " edge " + std::to_string(f) + " covered " +
               std::to_string(cover[f]) + " times (want 2)");
    }
  }
  return r;
}

void require_valid(const Gos& x, const char* where) {
  ValidationReport r = validate(x);
  if (!r.ok) {
    std::string msg = std::string(where) + ": invalid graph of spaces";
    for (const auto& s : r.issues) msg += "\n  " + s;
    throw Error(msg);
  }
}

Horizontal horizontal(const Gos& x) {
  Horizontal h;
  h.vindex.resize(x.u.nv);
  for (int v = 0; v < x.u.nv; ++v) {
    h.vindex[v].resize(x.vg[v].nv);
    for (int p = 0; p < x.vg[v].nv; ++p) {
      h.vindex[v][p] = h.g.add_vertex();
      h.vof.push_back({v, p});
    }
  }
  h.eindex.resize(x.u.ne());
  for (int e = 0; e < x.u.ne(); ++e) {
    int ot = 2 * e, oi = 2 * e + 1;
    h.eindex[e].resize(x.eg[e].nv);
    for (int p = 0; p < x.eg[e].nv; ++p) {
      int a = h.vindex[x.u.tau(oi)][x.inc[oi].vmap[p]];  // iota side
      int b = h.vindex[x.u.tau(ot)][x.inc[ot].vmap[p]];  // tau side
      h.eindex[e][p] = h.g.add_edge(a, b);
      h.eof.push_back({e, p});
    }
  }
  h.comp = h.g.components(&h.ncomp);
  h.circle.assign(h.ncomp, false);
  std::vector<int> cv(h.ncomp, 0), ce(h.ncomp, 0);
  std::vector<bool> val_ok(h.ncomp, true);
  auto deg = h.g.degrees();
  for (int v = 0; v < h.g.nv; ++v) {
    cv[h.comp[v]]++;
    if (deg[v] != 2) val_ok[h.comp[v]] = false;
  }
  for (int e = 0; e < h.g.ne(); ++e) ce[h.comp[h.g.tau(2 * e)]]++;
  for (int c = 0; c < h.ncomp; ++c) h.circle[c] = val_ok[c] && ce[c] == cv[c] && ce[c] > 0;
  return h;
}

std::pair<int, int> chi_pair(const Gos& x) {
  Horizontal h = horizontal(x);
  int chi_g = h.g.nv - h.g.ne();
  int chi_u = x.u.nv - x.u.ne();
  return {chi_g, chi_u};
}

std::vector<int> reduce_signed_path(std::vector<int> p) {
  std::vector<int> out;
  for (int s : p) {
    if (!out.empty() && out.back() == -s) out.pop_back();
    else out.push_back(s);
  }
  return out;
}

GammaTracker GammaTracker::start(const Gos& x) {
  GammaTracker t;
  t.base = horizontal(x);
  t.vbase.resize(x.u.nv);
  for (int v = 0; v < x.u.nv; ++v) {
    t.vbase[v].resize(x.vg[v].nv);
    for (int p = 0; p < x.vg[v].nv; ++p) t.vbase[v][p] = t.base.vindex[v][p];
  }
  t.hpath.resize(x.u.ne());
  for (int e = 0; e < x.u.ne(); ++e) {
    t.hpath[e].resize(x.eg[e].nv);
    for (int p = 0; p < x.eg[e].nv; ++p) t.hpath[e][p] = {t.base.eindex[e][p] + 1};
  }
  return t;
}

std::vector<int> GammaTracker::circuit_to_base(const Gos& x, const std::vector<int>& ohedges,
                                               const Horizontal& h) const {
  std::vector<int> out;
  for (int oh : ohedges) {
    auto [ue, p] = h.eof[oh / 2];
    std::vector<int> seg = hpath[ue][p];
    if (oh % 2 == 1) {
      std::reverse(seg.begin(), seg.end());
      for (int& s : seg) s = -s;
    }
    out.insert(out.end(), seg.begin(), seg.end());
  }
  return reduce_signed_path(std::move(out));
}

namespace {

std::vector<int> reversed_path(std::vector<int> p) {
  std::reverse(p.begin(), p.end());
  for (int& s : p) s = -s;
  return p;
}

}  // namespace

CollapseResult collapse(const Gos& x, int o, GammaTracker* t) {
  const Graph& u = x.u;
  int vt = u.tau(o), vi = u.iota(o);
  int ue0 = o / 2;
  if (vt == vi) throw Error("collapse: loop edge");
  const GraphMap& mt = x.inc[o];
  const GraphMap& mi = x.inc[o ^ 1];
  const Graph& E = x.eg[ue0];
  const Graph& Vi = x.vg[vi];
  const Graph& Vt = x.vg[vt];
  if (!mt.is_embedding(E, Vt)) throw Error("collapse: tau-side incidence is not an embedding");

  // merged graph M = Vi u (Vt \ mt(E)), identifications mt(z) ~ mi(z)
  std::vector<int> t2m(Vt.nv, -1);
  for (int p = 0; p < E.nv; ++p) t2m[mt.vmap[p]] = mi.vmap[p];
  Graph M;
  M.nv = Vi.nv;
  M.etarget = Vi.etarget;
  for (int w = 0; w < Vt.nv; ++w) {
    if (t2m[w] == -1) t2m[w] = M.add_vertex();
  }
  std::vector<int> tOri(Vt.noriented(), -1);
  for (int d = 0; d < E.noriented(); ++d) tOri[mt.emap[d]] = mi.emap[d];
  for (int k = 0; k < Vt.ne(); ++k) {
    if (tOri[2 * k] == -1) {
      int id = M.add_edge(t2m[Vt.iota(2 * k)], t2m[Vt.tau(2 * k)]);
      tOri[2 * k] = 2 * id;
      tOri[2 * k + 1] = 2 * id + 1;
    }
  }

  CollapseResult res;
  res.uvmap.assign(u.nv, -1);
  int nv = 0;
  for (int v = 0; v < u.nv; ++v) {
    if (v == vt) continue;
    res.uvmap[v] = nv++;
  }
  res.uvmap[vt] = res.uvmap[vi];
  res.uemap.assign(u.ne(), -1);
  int ne = 0;
  for (int e = 0; e < u.ne(); ++e) {
    if (e == ue0) continue;
    res.uemap[e] = ne++;
  }

  Gos& y = res.gos;
  y.u.nv = nv;
  y.vg.resize(nv);
  for (int v = 0; v < u.nv; ++v) {
    if (v == vt) continue;
    y.vg[res.uvmap[v]] = (v == vi) ? M : x.vg[v];
  }
  y.u.etarget.assign(2 * ne, -1);
  y.eg.resize(ne);
  y.inc.resize(2 * ne);
  for (int e = 0; e < u.ne(); ++e) {
    if (e == ue0) continue;
    int e2 = res.uemap[e];
    y.eg[e2] = x.eg[e];
    for (int side = 0; side < 2; ++side) {
      int q = 2 * e + side;
      int q2 = 2 * e2 + side;
      int tv = u.tau(q);
      y.u.etarget[q2] = res.uvmap[tv];
      GraphMap m = x.inc[q];
      if (tv == vt) {
        for (int& w : m.vmap) w = t2m[w];
        for (int& d : m.emap) d = tOri[d];
      }
      y.inc[q2] = std::move(m);
    }
  }

  if (t) {
    // adjust[old (uv, local)] = base path from the old vertex to its class root
    // roots: Vi vertices keep their base; merged Vt vertices route through
    // the crushed h-edge of their E-preimage.
    std::vector<std::vector<int>> adjust_t(Vt.nv);
    std::vector<bool> merged(Vt.nv, false);
    for (int p = 0; p < E.nv; ++p) {
      // crushed h-edge (ue0, p) runs iota-side -> tau-side, i.e. (vi,mi(p)) -> (vt,mt(p))
      adjust_t[mt.vmap[p]] = reversed_path(t->hpath[ue0][p]);
      merged[mt.vmap[p]] = true;
    }
    std::vector<std::vector<int>> nvbase(nv);
    for (int v = 0; v < u.nv; ++v) {
      if (v == vt) continue;
      if (v != vi) {
        nvbase[res.uvmap[v]] = t->vbase[v];
      }
    }
    std::vector<int>& mb = nvbase[res.uvmap[vi]];
    mb.assign(M.nv, -1);
    for (int p = 0; p < Vi.nv; ++p) mb[p] = t->vbase[vi][p];
    for (int w = 0; w < Vt.nv; ++w) {
      if (!merged[w]) mb[t2m[w]] = t->vbase[vt][w];
    }
    auto adjust_of = [&](int uv, int local) -> std::vector<int> {
      if (uv == vt && merged[local]) return adjust_t[local];
      return {};
    };
    std::vector<std::vector<std::vector<int>>> nhpath(ne);
    for (int e = 0; e < u.ne(); ++e) {
      if (e == ue0) continue;
      int e2 = res.uemap[e];
      nhpath[e2].resize(x.eg[e].nv);
      for (int p = 0; p < x.eg[e].nv; ++p) {
        int vI = u.tau(2 * e + 1), lI = x.inc[2 * e + 1].vmap[p];
        int vT = u.tau(2 * e), lT = x.inc[2 * e].vmap[p];
        std::vector<int> path = reversed_path(adjust_of(vI, lI));
        const std::vector<int>& mid = t->hpath[e][p];
        path.insert(path.end(), mid.begin(), mid.end());
        std::vector<int> tail = adjust_of(vT, lT);
        path.insert(path.end(), tail.begin(), tail.end());
        nhpath[e2][p] = reduce_signed_path(std::move(path));
      }
    }
    t->vbase = std::move(nvbase);
    t->hpath = std::move(nhpath);
  }
  return res;
}

namespace {

struct Dsu {
  std::vector<int> p;
  explicit Dsu(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int a) { return p[a] == a ? a : p[a] = find(p[a]); }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    p[b] = a;
  }
};

}  // namespace

CollapseResult collapse_set(const Gos& x, const std::vector<int>& edges, GammaTracker* t) {
  const Graph& u = x.u;
  std::vector<bool> crushed(u.ne(), false);
  std::vector<int> side(u.ne(), -1);  // oriented edge whose incidence embeds (the tau side)
  for (int e : edges) {
    if (crushed[e]) throw Error("collapse_set: duplicate edge");
    crushed[e] = true;
    if (x.inc[2 * e].is_embedding(x.eg[e], x.vg[u.tau(2 * e)])) side[e] = 2 * e;
    else if (x.inc[2 * e + 1].is_embedding(x.eg[e], x.vg[u.tau(2 * e + 1)])) side[e] = 2 * e + 1;
    else throw Error("collapse_set: neither incidence is an embedding");
  }
  // merge underlying vertices
  Dsu udsu(u.nv);
  for (int e : edges) udsu.unite(u.tau(2 * e), u.tau(2 * e + 1));

  // global indices for vertex-graph vertices and oriented edges
  std::vector<int> voff(u.nv + 1, 0), eoff(u.nv + 1, 0);
  for (int v = 0; v < u.nv; ++v) {
    voff[v + 1] = voff[v] + x.vg[v].nv;
    eoff[v + 1] = eoff[v] + x.vg[v].noriented();
  }
  Dsu vdsu(voff[u.nv]);
  Dsu odsu(eoff[u.nv]);
  auto gv = [&](int uv, int p) { return voff[uv] + p; };
  auto go = [&](int uv, int d) { return eoff[uv] + d; };
  for (int e : edges) {
    int ot = side[e], oi = side[e] ^ 1;
    int vt = u.tau(ot), vi = u.tau(oi);
    const GraphMap& mt = x.inc[ot];
    const GraphMap& mi = x.inc[oi];
    for (int p = 0; p < x.eg[e].nv; ++p) vdsu.unite(gv(vt, mt.vmap[p]), gv(vi, mi.vmap[p]));
    for (int d = 0; d < x.eg[e].noriented(); ++d)
      odsu.unite(go(vt, mt.emap[d]), go(vi, mi.emap[d]));
  }

  CollapseResult res;
  res.uvmap.assign(u.nv, -1);
  int nv = 0;
  for (int v = 0; v < u.nv; ++v) {
    if (udsu.find(v) == v) res.uvmap[v] = nv++;
  }
  for (int v = 0; v < u.nv; ++v) res.uvmap[v] = res.uvmap[udsu.find(v)];
  res.uemap.assign(u.ne(), -1);
  int ne = 0;
  for (int e = 0; e < u.ne(); ++e) {
    if (!crushed[e]) res.uemap[e] = ne++;
  }

  // quotient vertex graphs: one per u-class
  std::vector<int> qv(voff[u.nv], -1);       // global vg-vertex -> local id in its quotient
  std::vector<int> qo(eoff[u.nv], -1);       // global oriented vg-edge -> local oriented id
  std::vector<Graph> quot(nv);
  for (int v = 0; v < u.nv; ++v) {
    int target = res.uvmap[v];
    for (int p = 0; p < x.vg[v].nv; ++p) {
      int r = vdsu.find(gv(v, p));
      if (qv[r] == -1) qv[r] = quot[target].add_vertex();
      qv[gv(v, p)] = qv[r];
    }
  }
  for (int v = 0; v < u.nv; ++v) {
    int target = res.uvmap[v];
    for (int k = 0; k < x.vg[v].ne(); ++k) {
      int r = odsu.find(go(v, 2 * k));
      if (qo[r] == -1) {
        int rb = odsu.find(go(v, 2 * k + 1));
        if (qo[rb] != -1) {  // bar class already materialized
          qo[r] = qo[rb] ^ 1;
        } else {
          int id = quot[target].add_edge(qv[vdsu.find(gv(v, x.vg[v].iota(2 * k)))],
                                         qv[vdsu.find(gv(v, x.vg[v].tau(2 * k)))]);
          qo[r] = 2 * id;
          qo[rb] = 2 * id + 1;
        }
      }
      qo[go(v, 2 * k)] = qo[r];
      qo[go(v, 2 * k + 1)] = qo[odsu.find(go(v, 2 * k + 1))];
    }
  }

  Gos& y = res.gos;
  y.u.nv = nv;
  y.vg = std::move(quot);
  y.u.etarget.assign(2 * ne, -1);
  y.eg.resize(ne);
  y.inc.resize(2 * ne);
  for (int e = 0; e < u.ne(); ++e) {
    if (crushed[e]) continue;
    int e2 = res.uemap[e];
    y.eg[e2] = x.eg[e];
    for (int s = 0; s < 2; ++s) {
      int q = 2 * e + s;
      int tv = u.tau(q);
      y.u.etarget[2 * e2 + s] = res.uvmap[tv];
      GraphMap m = x.inc[q];
      for (int& w : m.vmap) w = qv[vdsu.find(gv(tv, w))];
      for (int& d : m.emap) d = qo[go(tv, d)];
      y.inc[2 * e2 + s] = std::move(m);
    }
  }

  if (t) {
    // forest of crushed h-edges over the global vg-vertices
    struct Arc {
      int to;
      std::vector<int> path;  // base path from this node to `to`
    };
    std::vector<std::vector<Arc>> adj(voff[u.nv]);
    for (int e : edges) {
      int ot = 2 * e, oi = 2 * e + 1;
      int vt = u.tau(ot), vi = u.tau(oi);
      for (int p = 0; p < x.eg[e].nv; ++p) {
        int a = gv(vi, x.inc[oi].vmap[p]);  // iota side
        int b = gv(vt, x.inc[ot].vmap[p]);  // tau side
        // stored path runs iota -> tau
        adj[a].push_back({b, t->hpath[e][p]});
        adj[b].push_back({a, reversed_path(t->hpath[e][p])});
      }
    }
    std::vector<std::vector<int>> to_root(voff[u.nv]);
    std::vector<int> root_of(voff[u.nv], -1);
    for (int g = 0; g < voff[u.nv]; ++g) {
      int r = vdsu.find(g);
      if (root_of[r] != -1) continue;
      // BFS from the representative
      root_of[r] = r;
      to_root[r] = {};
      std::queue<int> q;
      q.push(r);
      int seen = 1;
      while (!q.empty()) {
        int a = q.front();
        q.pop();
        for (const Arc& arc : adj[a]) {
          if (root_of[arc.to] != -1) continue;
          root_of[arc.to] = r;
          // path(to -> root) = path(to -> a) + path(a -> root)
          std::vector<int> pth = reversed_path(arc.path);
          pth.insert(pth.end(), to_root[a].begin(), to_root[a].end());
          to_root[arc.to] = reduce_signed_path(std::move(pth));
          q.push(arc.to);
          ++seen;
        }
      }
      (void)seen;
    }
    // sanity: every member of a class must reach the representative
    for (int g = 0; g < voff[u.nv]; ++g) {
      if (root_of[g] != vdsu.find(g))
        throw Error("collapse_set: crushed horizontal edges do not span the identifications");
    }
    std::vector<std::vector<int>> nvbase(nv);
    for (int v = 0; v < nv; ++v) nvbase[v].assign(y.vg[v].nv, -1);
    for (int v = 0; v < u.nv; ++v) {
      for (int p = 0; p < x.vg[v].nv; ++p) {
        int g = gv(v, p);
        if (vdsu.find(g) == g) nvbase[res.uvmap[v]][qv[g]] = t->vbase[v][p];
      }
    }
    auto old_vbase_of_global = [&](int g) {
      int v = static_cast<int>(std::upper_bound(voff.begin(), voff.end(), g) - voff.begin()) - 1;
      return t->vbase[v][g - voff[v]];
    };
    (void)old_vbase_of_global;
    std::vector<std::vector<std::vector<int>>> nhpath(ne);
    for (int e = 0; e < u.ne(); ++e) {
      if (crushed[e]) continue;
      int e2 = res.uemap[e];
      nhpath[e2].resize(x.eg[e].nv);
      for (int p = 0; p < x.eg[e].nv; ++p) {
        int vI = u.tau(2 * e + 1), vT = u.tau(2 * e);
        int a = gv(vI, x.inc[2 * e + 1].vmap[p]);
        int b = gv(vT, x.inc[2 * e].vmap[p]);
        // new path: root(a) -> a -> b -> root(b)
        std::vector<int> pth = reversed_path(to_root[a]);
        const std::vector<int>& mid = t->hpath[e][p];
        pth.insert(pth.end(), mid.begin(), mid.end());
        pth.insert(pth.end(), to_root[b].begin(), to_root[b].end());
        nhpath[e2][p] = reduce_signed_path(std::move(pth));
      }
    }
    t->vbase = std::move(nvbase);
    t->hpath = std::move(nhpath);
  }
  return res;
}

namespace {

struct SubgraphComps {
  std::vector<int> vcomp;       // per V-vertex: component id or -1
  int ncomp = 0;
  std::vector<int> order;       // component ids sorted by smallest member
};

SubgraphComps subgraph_components(const Graph& V, const std::vector<bool>& vin,
                                  const std::vector<bool>& ein) {
  SubgraphComps sc;
  sc.vcomp.assign(V.nv, -1);
  std::vector<int> parent(V.nv);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
  for (int k = 0; k < V.ne(); ++k) {
    if (!ein[k]) continue;
    int a = find(V.iota(2 * k)), b = find(V.tau(2 * k));
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::map<int, int> ids;
  for (int p = 0; p < V.nv; ++p) {
    if (!vin[p]) continue;
    int r = find(p);
    auto [it, fresh] = ids.try_emplace(r, sc.ncomp);
    if (fresh) sc.ncomp++;
    sc.vcomp[p] = it->second;
  }
  return sc;
}

}  // namespace

FoldResult fold(const Gos& x, int v, const std::vector<int>& J, GammaTracker* t) {
  const Graph& u = x.u;
  const Graph& V = x.vg[v];
  std::vector<int> I;
  for (int o = 0; o < u.noriented(); ++o)
    if (u.tau(o) == v) I.push_back(o);
  std::set<int> jset(J.begin(), J.end());
  if (jset.empty() || jset.size() != J.size()) throw Error("fold: bad J");
  if (jset.size() >= I.size()) throw Error("fold: J must be a proper subset of the incident edges");
  for (int o : J) {
    if (u.tau(o) != v) throw Error("fold: edge not incident to the vertex");
  }

  std::vector<bool> jv(V.nv, false), je(V.ne(), false), cv(V.nv, false), ce(V.ne(), false);
  for (int o : I) {
    bool inj = jset.count(o) > 0;
    const GraphMap& m = x.inc[o];
    const Graph& E = x.eg[o / 2];
    for (int p = 0; p < E.nv; ++p) (inj ? jv : cv)[m.vmap[p]] = true;
    for (int k = 0; k < E.ne(); ++k) (inj ? je : ce)[m.emap[2 * k] / 2] = true;
  }
  for (int p = 0; p < V.nv; ++p) {
    if (!jv[p] && !cv[p]) throw Error("fold: internal: vertex-graph vertex not covered");
  }

  SubgraphComps scJ = subgraph_components(V, jv, je);
  SubgraphComps scC = subgraph_components(V, cv, ce);
  std::vector<bool> iv(V.nv), ie(V.ne());
  for (int p = 0; p < V.nv; ++p) iv[p] = jv[p] && cv[p];
  for (int k = 0; k < V.ne(); ++k) ie[k] = je[k] && ce[k];
  SubgraphComps scI = subgraph_components(V, iv, ie);

  // build the component graphs with local reindexing
  struct Piece {
    Graph g;
    std::vector<int> vloc;  // V-vertex -> local or -1
    std::vector<int> eori;  // V-oriented -> local oriented or -1
  };
  auto build_pieces = [&](const SubgraphComps& sc, const std::vector<bool>& vin,
                          const std::vector<bool>& ein) {
    std::vector<Piece> out(sc.ncomp);
    for (auto& pc : out) {
      pc.vloc.assign(V.nv, -1);
      pc.eori.assign(V.noriented(), -1);
    }
    for (int p = 0; p < V.nv; ++p) {
      if (vin[p]) out[sc.vcomp[p]].vloc[p] = out[sc.vcomp[p]].g.add_vertex();
    }
    for (int k = 0; k < V.ne(); ++k) {
      if (!ein[k]) continue;
      int c = sc.vcomp[V.tau(2 * k)];
      Piece& pc = out[c];
      int id = pc.g.add_edge(pc.vloc[V.iota(2 * k)], pc.vloc[V.tau(2 * k)]);
      pc.eori[2 * k] = 2 * id;
      pc.eori[2 * k + 1] = 2 * id + 1;
    }
    return out;
  };
  std::vector<Piece> pj = build_pieces(scJ, jv, je);
  std::vector<Piece> pc = build_pieces(scC, cv, ce);
  std::vector<Piece> pi = build_pieces(scI, iv, ie);

  FoldResult res;
  res.uvmap_other.assign(u.nv, -1);
  int nv = 0;
  for (int w = 0; w < u.nv; ++w) {
    if (w == v) continue;
    res.uvmap_other[w] = nv++;
  }
  std::vector<int> jid(scJ.ncomp), cid(scC.ncomp);
  for (int c = 0; c < scJ.ncomp; ++c) {
    jid[c] = nv++;
    res.j_side_vertices.push_back(jid[c]);
  }
  for (int c = 0; c < scC.ncomp; ++c) {
    cid[c] = nv++;
    res.other_side_vertices.push_back(cid[c]);
  }

  Gos& y = res.gos;
  y.u.nv = nv;
  y.vg.resize(nv);
  for (int w = 0; w < u.nv; ++w) {
    if (w == v) continue;
    y.vg[res.uvmap_other[w]] = x.vg[w];
  }
  for (int c = 0; c < scJ.ncomp; ++c) y.vg[jid[c]] = pj[c].g;
  for (int c = 0; c < scC.ncomp; ++c) y.vg[cid[c]] = pc[c].g;

  res.uemap.assign(u.ne(), -1);
  for (int e = 0; e < u.ne(); ++e) res.uemap[e] = e;
  y.eg = x.eg;
  y.u.etarget.assign(u.noriented(), -1);
  y.inc.resize(u.noriented());
  for (int q = 0; q < u.noriented(); ++q) {
    int tv = u.tau(q);
    GraphMap m = x.inc[q];
    if (tv != v) {
      y.u.etarget[q] = res.uvmap_other[tv];
      y.inc[q] = std::move(m);
      continue;
    }
    bool inj = jset.count(q) > 0;
    const SubgraphComps& sc = inj ? scJ : scC;
    const std::vector<Piece>& pp = inj ? pj : pc;
    int c = sc.vcomp[m.vmap[0]];
    const Piece& piece = pp[c];
    for (int& w : m.vmap) w = piece.vloc[w];
    for (int& d : m.emap) d = piece.eori[d];
    y.u.etarget[q] = (inj ? jid : cid)[c];
    y.inc[q] = std::move(m);
  }
  // new edges e_{J,r}: tau side into the J component, iota side into the complement
  for (int r = 0; r < scI.ncomp; ++r) {
    const Piece& pr = pi[r];
    int anchor = -1;
    for (int p = 0; p < V.nv; ++p) {
      if (iv[p] && scI.vcomp[p] == r) {
        anchor = p;
        break;
      }
    }
    int cJ = scJ.vcomp[anchor], cC = scC.vcomp[anchor];
    int id = y.u.add_edge(cid[cC], jid[cJ]);
    res.new_edges.push_back(id);
    y.eg.push_back(pr.g);
    GraphMap mT, mI;
    mT.vmap.resize(pr.g.nv);
    mI.vmap.resize(pr.g.nv);
    mT.emap.resize(pr.g.noriented());
    mI.emap.resize(pr.g.noriented());
    for (int p = 0; p < V.nv; ++p) {
      if (iv[p] && scI.vcomp[p] == r) {
        mT.vmap[pr.vloc[p]] = pj[cJ].vloc[p];
        mI.vmap[pr.vloc[p]] = pc[cC].vloc[p];
      }
    }
    for (int k = 0; k < V.ne(); ++k) {
      if (!(ie[k] && scI.vcomp[V.tau(2 * k)] == r)) continue;
      for (int side = 0; side < 2; ++side) {
        mT.emap[pr.eori[2 * k + side]] = pj[cJ].eori[2 * k + side];
        mI.emap[pr.eori[2 * k + side]] = pc[cC].eori[2 * k + side];
      }
    }
    y.inc.push_back(std::move(mT));
    y.inc.push_back(std::move(mI));
  }

  if (t) {
    std::vector<std::vector<int>> nvbase(nv);
    for (int w = 0; w < u.nv; ++w) {
      if (w == v) continue;
      nvbase[res.uvmap_other[w]] = t->vbase[w];
    }
    for (int c = 0; c < scJ.ncomp; ++c) {
      nvbase[jid[c]].resize(pj[c].g.nv);
      for (int p = 0; p < V.nv; ++p)
        if (jv[p] && scJ.vcomp[p] == c) nvbase[jid[c]][pj[c].vloc[p]] = t->vbase[v][p];
    }
    for (int c = 0; c < scC.ncomp; ++c) {
      nvbase[cid[c]].resize(pc[c].g.nv);
      for (int p = 0; p < V.nv; ++p)
        if (cv[p] && scC.vcomp[p] == c) nvbase[cid[c]][pc[c].vloc[p]] = t->vbase[v][p];
    }
    t->vbase = std::move(nvbase);
    for (int r = 0; r < scI.ncomp; ++r) {
      t->hpath.push_back(std::vector<std::vector<int>>(pi[r].g.nv));
    }
  }
  return res;
}

bool find_reduce_move(const Gos& x, ReduceStep* out) {
  auto inc = x.u.incidence();
  for (int v = 0; v < x.u.nv; ++v) {
    if (inc[v].size() == 1) {
      int o = inc[v][0];
      if (x.vg[v].ne() == 0 && x.u.iota(o) != v) {
        if (out) *out = {ReduceStep::Kind::TrimLeaf, o};
        return true;
      }
    }
    if (inc[v].size() == 2) {
      int o1 = inc[v][0], o2 = inc[v][1];
      bool iso1 = x.inc[o1].is_isomorphism(x.eg[o1 / 2], x.vg[v]);
      bool iso2 = x.inc[o2].is_isomorphism(x.eg[o2 / 2], x.vg[v]);
      if (iso1 && iso2) {
        if (x.u.iota(o1) != v) {
          if (out) *out = {ReduceStep::Kind::Unsubdivide, o1};
          return true;
        }
        if (x.u.iota(o2) != v) {
          if (out) *out = {ReduceStep::Kind::Unsubdivide, o2};
          return true;
        }
        // a single loop with isomorphic incidences cannot be collapsed
      }
    }
  }
  return false;
}

ReduceResult reduce(const Gos& x, GammaTracker* t) {
  ReduceResult res;
  res.gos = x;
  ReduceStep step{ReduceStep::Kind::TrimLeaf, -1};
  while (find_reduce_move(res.gos, &step)) {
    res.steps.push_back(step);
    res.gos = collapse(res.gos, step.oriented_edge, t).gos;
  }
  return res;
}

bool is_reduced(const Gos& x) { return !find_reduce_move(x, nullptr); }

namespace {

// "V_S is the disjoint union of the E_s": every incidence in S embeds and
// the images are pairwise vertex-disjoint.
bool disjoint_union_condition(const Gos& x, int v, const std::vector<int>& S) {
  std::vector<char> used(x.vg[v].nv, 0);
  for (int o : S) {
    const Graph& E = x.eg[o / 2];
    if (!x.inc[o].is_embedding(E, x.vg[v])) return false;
    for (int p = 0; p < E.nv; ++p) {
      if (used[x.inc[o].vmap[p]]) return false;
      used[x.inc[o].vmap[p]] = 1;
    }
  }
  return true;
}

}  // namespace

VertexClass classify_vertex(const Gos& x, int v) {
  VertexClass out;
  std::vector<int> I;
  for (int o = 0; o < x.u.noriented(); ++o)
    if (x.u.tau(o) == v) I.push_back(o);
  int n = static_cast<int>(I.size());
  auto complement = [&](const std::vector<int>& J) {
    std::set<int> js(J.begin(), J.end());
    std::vector<int> c;
    for (int o : I)
      if (!js.count(o)) c.push_back(o);
    return c;
  };
  for (int a = 0; a < n; ++a) {
    std::vector<int> J{I[a]};
    if (n > 1 && !disjoint_union_condition(x, v, J) &&
        !disjoint_union_condition(x, v, complement(J))) {
      out.kind = VertexClass::Kind::Foldable;
      out.witness_J = J;
      return out;
    }
    for (int b = a + 1; b < n; ++b) {
      std::vector<int> J2{I[a], I[b]};
      if (n > 2 && !disjoint_union_condition(x, v, J2) &&
          !disjoint_union_condition(x, v, complement(J2))) {
        out.kind = VertexClass::Kind::Foldable;
        out.witness_J = J2;
        return out;
      }
    }
  }
  // unfoldable: classify
  std::vector<int> nonemb;
  for (int o : I)
    if (!x.inc[o].is_embedding(x.eg[o / 2], x.vg[v])) nonemb.push_back(o);
  if (nonemb.size() == 1) {
    std::vector<int> rest;
    for (int o : I)
      if (o != nonemb[0]) rest.push_back(o);
    if (disjoint_union_condition(x, v, rest)) {
      out.kind = VertexClass::Kind::UnfoldableDegenerate;
      out.distinguished_edge = nonemb[0];
      return out;
    }
    out.kind = VertexClass::Kind::Other;
    return out;
  }
  if (!nonemb.empty()) {
    out.kind = VertexClass::Kind::Other;
    return out;
  }
  if (n == 2) {
    bool iso1 = x.inc[I[0]].is_isomorphism(x.eg[I[0] / 2], x.vg[v]);
    bool iso2 = x.inc[I[1]].is_isomorphism(x.eg[I[1] / 2], x.vg[v]);
    if (iso1 && iso2) {
      out.kind = VertexClass::Kind::ReducibleCircle;
      return out;
    }
  }
  if (n == 3) {
    std::vector<char> in_all(x.vg[v].nv, 1);
    for (int o : I) {
      std::vector<char> hit(x.vg[v].nv, 0);
      for (int p = 0; p < x.eg[o / 2].nv; ++p) hit[x.inc[o].vmap[p]] = 1;
      for (int p = 0; p < x.vg[v].nv; ++p) in_all[p] &= hit[p];
    }
    if (std::count(in_all.begin(), in_all.end(), 1) >= 1) {
      out.kind = VertexClass::Kind::UnfoldableNondegenerate;
      return out;
    }
  }
  out.kind = VertexClass::Kind::Other;
  return out;
}

std::vector<long long> Complexity::key() const {
  std::vector<long long> k2{minus_betti, k};
  for (int v : m) k2.push_back(v);
  k2.push_back(m2_red);
  k2.push_back(-m2_deg);
  return k2;
}

std::string Complexity::str() const {
  std::ostringstream os;
  os << "(" << minus_betti << ", " << k;
  for (int v : m) os << ", " << v;
  os << ", " << m2_red << ", " << -m2_deg << ")";
  return os.str();
}

Complexity complexity(const Gos& x) {
  if (!is_reduced(x)) throw Error("complexity: space is not reduced");
  Complexity c;
  Pi1Data p = pi1_data(x.u);
  int betti = 0;
  for (int b : p.betti) betti += b;
  c.minus_betti = -betti;
  std::vector<int> deg(x.u.nv, 0);
  for (int o = 0; o < x.u.noriented(); ++o) deg[x.u.tau(o)]++;
  c.k = 2;
  for (int d : deg) c.k = std::max(c.k, d);
  if (c.k >= 3) c.m.assign(c.k - 2, 0);
  for (int v = 0; v < x.u.nv; ++v) {
    if (deg[v] >= 3) c.m[c.k - deg[v]]++;
    if (deg[v] == 2) {
      VertexClass vc = classify_vertex(x, v);
      if (vc.kind == VertexClass::Kind::ReducibleCircle) c.m2_red++;
      if (vc.kind == VertexClass::Kind::UnfoldableDegenerate) c.m2_deg++;
    }
  }
  return c;
}

MinimizeResult minimize(const Gos& x, GammaTracker* t) {
  require_valid(x, "minimize");
  MinimizeResult res;
  {
    ReduceResult r = reduce(x, t);
    res.gos = std::move(r.gos);
    for (const auto& s : r.steps)
      res.trace.push_back({s.kind == ReduceStep::Kind::TrimLeaf ? "trim" : "unsubdivide",
                           -1,
                           {},
                           s.oriented_edge,
                           ""});
  }
  long long total_edges = res.gos.u.ne();
  for (const auto& g : res.gos.eg) total_edges += g.ne();
  for (const auto& g : res.gos.vg) total_edges += g.ne();
  long long cap = 10 * total_edges * total_edges + 64;
  long long iter = 0;
  while (true) {
    if (++iter > cap) throw Error("minimize: iteration cap exceeded (complexity not decreasing)");
    Complexity c = complexity(res.gos);
    bool found = false;
    for (int v = 0; v < res.gos.u.nv && !found; ++v) {
      std::vector<int> I;
      for (int o = 0; o < res.gos.u.noriented(); ++o)
        if (res.gos.u.tau(o) == v) I.push_back(o);
      int n = static_cast<int>(I.size());
      std::vector<std::vector<int>> cands;
      if (n >= 2)
        for (int a = 0; a < n; ++a) cands.push_back({I[a]});
      if (n >= 3)
        for (int a = 0; a < n; ++a)
          for (int b = a + 1; b < n; ++b) cands.push_back({I[a], I[b]});
      for (const auto& J : cands) {
        GammaTracker tc;
        GammaTracker* tp = nullptr;
        if (t) {
          tc = *t;
          tp = &tc;
        }
        FoldResult f = fold(res.gos, v, J, tp);
        ReduceResult r = reduce(f.gos, tp);
        Complexity c2 = complexity(r.gos);
        if (c2 < c) {
          res.trace.push_back({"fold", v, J, -1, "c " + c.str() + " -> " + c2.str()});
          for (const auto& s : r.steps)
            res.trace.push_back({s.kind == ReduceStep::Kind::TrimLeaf ? "trim" : "unsubdivide",
                                 -1,
                                 {},
                                 s.oriented_edge,
                                 ""});
          res.gos = std::move(r.gos);
          if (t) *t = std::move(tc);
          found = true;
          break;
        }
      }
    }
    if (!found) break;
  }
  for (int v = 0; v < res.gos.u.nv; ++v) {
    if (classify_vertex(res.gos, v).kind == VertexClass::Kind::Foldable)
      throw Error("minimize: foldable vertex survived with no complexity-decreasing fold");
  }
  return res;
}

SeparabilityResult separability(const Gos& x) {
  SeparabilityResult out;
  auto [cg, cu] = chi_pair(x);
  if (cg != cu) {
    out.separable = false;
    out.reason = "chi(Gamma) = " + std::to_string(cg) + " != chi(Gamma_U) = " + std::to_string(cu);
    return out;
  }
  if (!is_reduced(x)) throw Error("separability: space is not reduced");
  out.separable = true;
  out.vertices.resize(x.u.nv);
  auto inc = x.u.incidence();
  for (int v = 0; v < x.u.nv; ++v) {
    SeparableVertex& sv = out.vertices[v];
    const std::vector<int>& I = inc[v];
    if (I.empty() && x.vg[v].nv == 1) {
      sv.kind = SeparableVertex::Kind::Trivial;
      sv.triple_point = 0;
      continue;
    }
    if (I.size() != 3)
      throw Error("separability: vertex " + std::to_string(v) + " has valence " +
                  std::to_string(I.size()) + " under chi equality");
    const Graph& V = x.vg[v];
    std::vector<std::vector<char>> hitv(3, std::vector<char>(V.nv, 0));
    std::vector<std::vector<char>> hite(3, std::vector<char>(V.ne(), 0));
    for (int i = 0; i < 3; ++i) {
      int o = I[i];
      if (!x.inc[o].is_embedding(x.eg[o / 2], V))
        throw Error("separability: non-embedded incidence at vertex " + std::to_string(v));
      for (int p = 0; p < x.eg[o / 2].nv; ++p) hitv[i][x.inc[o].vmap[p]] = 1;
      for (int k = 0; k < x.eg[o / 2].ne(); ++k) hite[i][x.inc[o].emap[2 * k] / 2] = 1;
    }
    std::vector<int> triple;
    for (int p = 0; p < V.nv; ++p)
      if (hitv[0][p] && hitv[1][p] && hitv[2][p]) triple.push_back(p);
    if (triple.size() != 1)
      throw Error("separability: vertex " + std::to_string(v) + " has " +
                  std::to_string(triple.size()) + " triple intersection points (want 1)");
    sv.triple_point = triple[0];
    int w = triple[0];
    int npoints = 0;
    for (int i = 0; i < 3; ++i)
      if (x.eg[I[i] / 2].ne() == 0) npoints++;
    if (npoints == 3 || npoints == 2) {
      // two point edges force the third to cover everything twice, which
      // only a point does; npoints == 2 implies V is a point as well
      sv.kind = SeparableVertex::Kind::Trivial;
      continue;
    }
    if (npoints == 1) {
      sv.kind = SeparableVertex::Kind::Trivial;
      continue;
    }
    // parts: edge k covered by the pair {i, j}, belongs to the part opposite
    // the remaining index
    std::vector<std::vector<char>> part(3, std::vector<char>(V.ne(), 0));
    for (int k = 0; k < V.ne(); ++k) {
      std::vector<int> covers;
      for (int i = 0; i < 3; ++i)
        if (hite[i][k]) covers.push_back(i);
      if (covers.size() != 2)
        throw Error("separability: edge covered by " + std::to_string(covers.size()) +
                    " incident images at vertex " + std::to_string(v));
      int other = 3 - covers[0] - covers[1];
      part[other][k] = 1;
    }
    int point_parts = 0, point_idx = -1;
    for (int i = 0; i < 3; ++i) {
      if (std::count(part[i].begin(), part[i].end(), 1) == 0) {
        point_parts++;
        point_idx = i;
      }
    }
    if (point_parts == 0) {
      sv.kind = SeparableVertex::Kind::Unsplittable;
    } else if (point_parts == 1) {
      sv.kind = SeparableVertex::Kind::Splittable;
      sv.outgoing_edge = I[point_idx];
      int n = 0;
      for (int i = 0; i < 3; ++i)
        if (i != point_idx) sv.incoming[n++] = I[i];
    } else {
      throw Error("separability: two empty wedge parts at a nontrivial vertex");
    }
  }
  return out;
}

bool is_cylinder_space(const Gos& x) {
  if (!x.u.is_circle()) return false;
  for (int o = 0; o < x.u.noriented(); ++o) {
    if (!x.inc[o].is_isomorphism(x.eg[o / 2], x.vg[x.u.tau(o)])) return false;
  }
  return true;
}

std::string gos_to_dot_underlying(const Gos& x) { return graph_to_dot(x.u, "underlying"); }

std::string gos_to_dot_horizontal(const Gos& x) {
  Horizontal h = horizontal(x);
  std::ostringstream os;
  os << "graph horizontal {\n";
  for (int v = 0; v < h.g.nv; ++v) {
    auto [uv, p] = h.vof[v];
    os << "  v" << v << " [label=\"" << uv << ":" << p << "\"];\n";
  }
  for (int e = 0; e < h.g.ne(); ++e) {
    auto [ue, p] = h.eof[e];
    os << "  v" << h.g.iota(2 * e) << " -- v" << h.g.tau(2 * e) << " [label=\"e" << ue << ":" << p
       << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

std::string gos_to_dot_vertex_graph(const Gos& x, int v) {
  std::ostringstream os;
  os << "graph vertexspace" << v << " {\n";
  const Graph& V = x.vg[v];
  for (int p = 0; p < V.nv; ++p) os << "  v" << p << ";\n";
  // color edges by which incident edge images cover them
  std::vector<int> I;
  for (int o = 0; o < x.u.noriented(); ++o)
    if (x.u.tau(o) == v) I.push_back(o);
  static const char* palette[] = {"red", "blue", "green", "orange", "purple", "brown"};
  for (int k = 0; k < V.ne(); ++k) {
    std::string colors;
    for (size_t i = 0; i < I.size(); ++i) {
      for (int kk = 0; kk < x.eg[I[i] / 2].ne(); ++kk) {
        if (x.inc[I[i]].emap[2 * kk] / 2 == k) {
          if (!colors.empty()) colors += ":";
          colors += palette[i % 6];
        }
      }
    }
    os << "  v" << V.iota(2 * k) << " -- v" << V.tau(2 * k) << " [color=\"" << colors << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

Gos disjoint_union(const std::vector<Gos>& parts) {
  Gos out;
  for (const Gos& p : parts) {
    int vbase = out.u.nv;
    out.u.nv += p.u.nv;
    for (int o = 0; o < p.u.noriented(); ++o) out.u.etarget.push_back(p.u.etarget[o] + vbase);
    for (const auto& g : p.vg) out.vg.push_back(g);
    for (const auto& g : p.eg) out.eg.push_back(g);
    for (const auto& m : p.inc) out.inc.push_back(m);
  }
  return out;
}

}  // namespace foldspace
