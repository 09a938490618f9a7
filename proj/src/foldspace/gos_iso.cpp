#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "foldspace/gos.hpp"

namespace foldspace {

namespace {

struct IsoSearchLimit : Error {
  IsoSearchLimit() : Error("isomorphism search limit exceeded") {}
};

// Joint color refinement over both spaces: colors for underlying vertices
// and edges, vertex-graph vertices and edges, edge-graph vertices and
// edges, refined through the incidence maps until stable.  Computed on the
// disjoint union so equal colors mean "locally alike across both spaces".
struct Colors {
  std::vector<std::vector<int>> vgv, vge;  // per u-vertex: local colors
  std::vector<std::vector<int>> egv, ege;  // per u-edge: local colors
  std::vector<int> uv, ue;
};

std::pair<Colors, Colors> refine(const Gos& a, const Gos& b) {
  auto sizes = [](const Gos& x) {
    int vgv = 0, vge = 0, egv = 0, ege = 0;
    for (const Graph& g : x.vg) {
      vgv += g.nv;
      vge += g.ne();
    }
    for (const Graph& g : x.eg) {
      egv += g.nv;
      ege += g.ne();
    }
    return std::array<int, 4>{vgv, vge, egv, ege};
  };
  (void)sizes;
  struct Side {
    const Gos* x;
    Colors c;
  };
  Side sides[2] = {{&a, {}}, {&b, {}}};
  for (Side& s : sides) {
    const Gos& x = *s.x;
    s.c.uv.assign(x.u.nv, 0);
    s.c.ue.assign(x.u.ne(), 0);
    s.c.vgv.resize(x.u.nv);
    s.c.vge.resize(x.u.nv);
    for (int v = 0; v < x.u.nv; ++v) {
      s.c.vgv[v].assign(x.vg[v].nv, 0);
      s.c.vge[v].assign(x.vg[v].ne(), 0);
    }
    s.c.egv.resize(x.u.ne());
    s.c.ege.resize(x.u.ne());
    for (int e = 0; e < x.u.ne(); ++e) {
      s.c.egv[e].assign(x.eg[e].nv, 0);
      s.c.ege[e].assign(x.eg[e].ne(), 0);
    }
  }
  for (int round = 0; round < 8; ++round) {
    // signatures -> new colors; ids are assigned by sorted rank over the
    // union of both sides' signatures so they are labeling-independent
    std::vector<std::string> pending;
    std::map<std::string, int> dict;
    bool assigning = false;
    auto code = [&](const std::string& s) {
      if (!assigning) {
        pending.push_back(s);
        return 0;
      }
      return dict.at(s);
    };
    bool changed = false;
    for (int pass = 0; pass < 2; ++pass) {
      if (pass == 1) {
        std::sort(pending.begin(), pending.end());
        pending.erase(std::unique(pending.begin(), pending.end()), pending.end());
        for (size_t i = 0; i < pending.size(); ++i) dict[pending[i]] = static_cast<int>(i);
        assigning = true;
      }
    for (Side& s : sides) {
      const Gos& x = *s.x;
      Colors next = s.c;
      // vertex-graph vertices: own color, degree, sorted incident edge colors
      for (int v = 0; v < x.u.nv; ++v) {
        for (int p = 0; p < x.vg[v].nv; ++p) {
          std::ostringstream os;
          os << "vv " << s.c.uv[v] << " " << s.c.vgv[v][p] << " [";
          std::vector<int> around;
          for (int o = 0; o < x.vg[v].noriented(); ++o)
            if (x.vg[v].tau(o) == p) around.push_back(s.c.vge[v][o / 2]);
          std::sort(around.begin(), around.end());
          for (int cc : around) os << cc << ",";
          os << "]";
          next.vgv[v][p] = code(os.str());
        }
      }
      // vertex-graph edges: endpoints' colors plus the coverage profile
      for (int v = 0; v < x.u.nv; ++v) {
        std::vector<std::vector<std::string>> cover(x.vg[v].ne());
        for (int o = 0; o < x.u.noriented(); ++o) {
          if (x.u.tau(o) != v) continue;
          for (int k = 0; k < x.eg[o / 2].ne(); ++k) {
            std::ostringstream os;
            os << s.c.ue[o / 2] << ":" << (o % 2) << ":" << s.c.ege[o / 2][k];
            cover[x.inc[o].emap[2 * k] / 2].push_back(os.str());
          }
        }
        for (int f = 0; f < x.vg[v].ne(); ++f) {
          std::sort(cover[f].begin(), cover[f].end());
          std::vector<int> ends = {s.c.vgv[v][x.vg[v].iota(2 * f)],
                                   s.c.vgv[v][x.vg[v].tau(2 * f)]};
          std::sort(ends.begin(), ends.end());
          std::ostringstream os;
          os << "ve " << s.c.vge[v][f] << " " << ends[0] << " " << ends[1] << " {";
          for (auto& t : cover[f]) os << t << ";";
          os << "}";
          next.vge[v][f] = code(os.str());
        }
      }
      // edge-graph vertices and edges: own color plus both image colors
      for (int e = 0; e < x.u.ne(); ++e) {
        for (int p = 0; p < x.eg[e].nv; ++p) {
          std::ostringstream os;
          os << "ev " << s.c.egv[e][p] << " " << s.c.vgv[x.u.tau(2 * e)][x.inc[2 * e].vmap[p]]
             << " " << s.c.vgv[x.u.tau(2 * e + 1)][x.inc[2 * e + 1].vmap[p]];
          std::vector<int> around;
          for (int o = 0; o < x.eg[e].noriented(); ++o)
            if (x.eg[e].tau(o) == p) around.push_back(s.c.ege[e][o / 2]);
          std::sort(around.begin(), around.end());
          os << " [";
          for (int cc : around) os << cc << ",";
          os << "]";
          next.egv[e][p] = code(os.str());
        }
        for (int k = 0; k < x.eg[e].ne(); ++k) {
          std::ostringstream os;
          std::vector<int> ends = {s.c.egv[e][x.eg[e].iota(2 * k)],
                                   s.c.egv[e][x.eg[e].tau(2 * k)]};
          std::sort(ends.begin(), ends.end());
          os << "ee " << s.c.ege[e][k] << " " << ends[0] << " " << ends[1] << " "
             << s.c.vge[x.u.tau(2 * e)][x.inc[2 * e].emap[2 * k] / 2] << " "
             << s.c.vge[x.u.tau(2 * e + 1)][x.inc[2 * e + 1].emap[2 * k] / 2];
          next.ege[e][k] = code(os.str());
        }
      }
      // underlying colors from the previous round's space colors
      for (int v = 0; v < x.u.nv; ++v) {
        std::vector<int> vs = s.c.vgv[v];
        std::sort(vs.begin(), vs.end());
        std::vector<int> es = s.c.vge[v];
        std::sort(es.begin(), es.end());
        std::vector<int> around;
        for (int o = 0; o < x.u.noriented(); ++o)
          if (x.u.tau(o) == v) around.push_back(s.c.ue[o / 2]);
        std::sort(around.begin(), around.end());
        std::ostringstream os;
        os << "uv " << s.c.uv[v] << " V";
        for (int cc : vs) os << cc << ",";
        os << " E";
        for (int cc : es) os << cc << ",";
        os << " A";
        for (int cc : around) os << cc << ",";
        next.uv[v] = code(os.str());
      }
      for (int e = 0; e < x.u.ne(); ++e) {
        std::vector<int> vs = s.c.egv[e];
        std::sort(vs.begin(), vs.end());
        std::vector<int> es = s.c.ege[e];
        std::sort(es.begin(), es.end());
        std::vector<int> ends = {s.c.uv[x.u.tau(2 * e)], s.c.uv[x.u.tau(2 * e + 1)]};
        std::sort(ends.begin(), ends.end());
        std::ostringstream os;
        os << "ue " << s.c.ue[e] << " " << ends[0] << " " << ends[1] << " V";
        for (int cc : vs) os << cc << ",";
        os << " E";
        for (int cc : es) os << cc << ",";
        next.ue[e] = code(os.str());
      }
      if (pass == 1) {
        if (next.uv != s.c.uv || next.ue != s.c.ue || next.vgv != s.c.vgv ||
            next.vge != s.c.vge || next.egv != s.c.egv || next.ege != s.c.ege)
          changed = true;
        s.c = std::move(next);
      }
    }
    }
    if (!changed) break;
  }
  return {sides[0].c, sides[1].c};
}

std::string color_summary(const Gos& x, const Colors& c) {
  std::vector<std::string> parts;
  for (int v = 0; v < x.u.nv; ++v) parts.push_back("v" + std::to_string(c.uv[v]));
  for (int e = 0; e < x.u.ne(); ++e) parts.push_back("e" + std::to_string(c.ue[e]));
  std::sort(parts.begin(), parts.end());
  std::ostringstream os;
  for (auto& p : parts) os << p << " ";
  return os.str();
}

// Enumerate isomorphisms a -> b respecting given vertex/edge colors; cb
// returns true to stop.  The budget is shared across the whole search.
bool for_each_graph_iso(const Graph& a, const Graph& b, const std::vector<int>& vca,
                        const std::vector<int>& vcb, const std::vector<int>& eca,
                        const std::vector<int>& ecb,
                        const std::function<bool(const GraphMap&)>& cb, long long* budget) {
  if (a.nv != b.nv || a.ne() != b.ne()) return false;
  {
    auto sa = vca, sb = vcb;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return false;
    auto ea = eca, eb = ecb;
    std::sort(ea.begin(), ea.end());
    std::sort(eb.begin(), eb.end());
    if (ea != eb) return false;
  }
  auto da = a.degrees(), db = b.degrees();
  std::vector<int> vmap(a.nv, -1);
  std::vector<bool> used(b.nv, false);
  std::vector<int> emap(a.noriented(), -1);
  std::vector<bool> eused(b.ne(), false);

  std::function<bool(int)> place_edges = [&](int k) -> bool {
    if (--(*budget) < 0) throw IsoSearchLimit();
    if (k == a.ne()) {
      GraphMap m;
      m.vmap = vmap;
      m.emap = emap;
      return cb(m);
    }
    int ia = a.iota(2 * k), ta = a.tau(2 * k);
    for (int f = 0; f < b.ne(); ++f) {
      if (eused[f] || eca[k] != ecb[f]) continue;
      for (int side = 0; side < 2; ++side) {
        int d = 2 * f + side;
        if (b.iota(d) == vmap[ia] && b.tau(d) == vmap[ta]) {
          eused[f] = true;
          emap[2 * k] = d;
          emap[2 * k + 1] = d ^ 1;
          if (place_edges(k + 1)) return true;
          eused[f] = false;
          emap[2 * k] = emap[2 * k + 1] = -1;
          if (b.iota(d) == b.tau(d)) continue;
          break;
        }
      }
    }
    return false;
  };

  std::function<bool(int)> place_vertices = [&](int v) -> bool {
    if (--(*budget) < 0) throw IsoSearchLimit();
    if (v == a.nv) return place_edges(0);
    for (int w = 0; w < b.nv; ++w) {
      if (used[w] || db[w] != da[v] || vca[v] != vcb[w]) continue;
      used[w] = true;
      vmap[v] = w;
      if (place_vertices(v + 1)) return true;
      used[w] = false;
      vmap[v] = -1;
    }
    return false;
  };
  return place_vertices(0);
}

struct GosIsoCtx {
  const Gos& a;
  const Gos& b;
  const Colors& ca;
  const Colors& cb;
  std::vector<int> sigma_v;
  std::vector<bool> used_v;
  std::vector<int> sigma_o;
  std::vector<bool> used_e;
  std::vector<GraphMap> psi;
  long long budget = 0;

  bool edge_compatible(int e) {
    int oa_t = 2 * e, oa_i = 2 * e + 1;
    int ob_t = sigma_o[oa_t], ob_i = sigma_o[oa_i];
    const Graph& Ea = a.eg[e];
    const Graph& Eb = b.eg[ob_t / 2];
    const GraphMap& at = a.inc[oa_t];
    const GraphMap& ai = a.inc[oa_i];
    const GraphMap& bt = b.inc[ob_t];
    const GraphMap& bi = b.inc[ob_i];
    const GraphMap& psi_t = psi[a.u.tau(oa_t)];
    const GraphMap& psi_i = psi[a.u.tau(oa_i)];
    return for_each_graph_iso(
        Ea, Eb, ca.egv[e], cb.egv[ob_t / 2], ca.ege[e], cb.ege[ob_t / 2],
        [&](const GraphMap& phi) {
          for (int p = 0; p < Ea.nv; ++p) {
            if (bt.vmap[phi.vmap[p]] != psi_t.vmap[at.vmap[p]]) return false;
            if (bi.vmap[phi.vmap[p]] != psi_i.vmap[ai.vmap[p]]) return false;
          }
          for (int d = 0; d < Ea.noriented(); ++d) {
            if (bt.emap[phi.emap[d]] != psi_t.emap[at.emap[d]]) return false;
            if (bi.emap[phi.emap[d]] != psi_i.emap[ai.emap[d]]) return false;
          }
          return true;
        },
        &budget);
  }

  bool place_psi(int v) {
    if (--budget < 0) throw IsoSearchLimit();
    if (v == a.u.nv) return true;
    bool any = false;
    for_each_graph_iso(
        a.vg[v], b.vg[sigma_v[v]], ca.vgv[v], cb.vgv[sigma_v[v]], ca.vge[v], cb.vge[sigma_v[v]],
        [&](const GraphMap& m) {
          psi[v] = m;
          for (int e = 0; e < a.u.ne(); ++e) {
            int x1 = a.u.tau(2 * e), x2 = a.u.tau(2 * e + 1);
            if (std::max(x1, x2) != v) continue;
            if (!edge_compatible(e)) return false;
          }
          if (place_psi(v + 1)) {
            any = true;
            return true;
          }
          return false;
        },
        &budget);
    return any;
  }

  bool place_edges(int e) {
    if (--budget < 0) throw IsoSearchLimit();
    if (e == a.u.ne()) {
      psi.assign(a.u.nv, {});
      return place_psi(0);
    }
    for (int f = 0; f < b.u.ne(); ++f) {
      if (used_e[f] || ca.ue[e] != cb.ue[f]) continue;
      for (int side = 0; side < 2; ++side) {
        int d = 2 * f + side;
        if (b.u.tau(d) != sigma_v[a.u.tau(2 * e)]) continue;
        if (b.u.tau(d ^ 1) != sigma_v[a.u.tau(2 * e + 1)]) continue;
        used_e[f] = true;
        sigma_o[2 * e] = d;
        sigma_o[2 * e + 1] = d ^ 1;
        if (place_edges(e + 1)) return true;
        used_e[f] = false;
        sigma_o[2 * e] = sigma_o[2 * e + 1] = -1;
        if (b.u.tau(d) == b.u.tau(d ^ 1)) continue;
        break;
      }
    }
    return false;
  }

  bool place_vertices(int v) {
    if (--budget < 0) throw IsoSearchLimit();
    if (v == a.u.nv) return place_edges(0);
    for (int w = 0; w < b.u.nv; ++w) {
      if (used_v[w] || ca.uv[v] != cb.uv[w]) continue;
      used_v[w] = true;
      sigma_v[v] = w;
      if (place_vertices(v + 1)) return true;
      used_v[w] = false;
      sigma_v[v] = -1;
    }
    return false;
  }
};

}  // namespace

std::string gos_invariant_key(const Gos& x) {
  auto [ca, cbb] = refine(x, x);
  (void)cbb;
  std::ostringstream os;
  os << "V" << x.u.nv << "E" << x.u.ne() << "|" << color_summary(x, ca);
  return os.str();
}

bool gos_isomorphic(const Gos& a, const Gos& b) {
  if (a.u.nv != b.u.nv || a.u.ne() != b.u.ne()) return false;
  auto [ca, cb] = refine(a, b);
  if (color_summary(a, ca) != color_summary(b, cb)) return false;
  GosIsoCtx ctx{a, b, ca, cb};
  ctx.sigma_v.assign(a.u.nv, -1);
  ctx.used_v.assign(b.u.nv, false);
  ctx.sigma_o.assign(a.u.noriented(), -1);
  ctx.used_e.assign(b.u.ne(), false);
  ctx.budget = 200'000'000;
  return ctx.place_vertices(0);
}

}  // namespace foldspace
