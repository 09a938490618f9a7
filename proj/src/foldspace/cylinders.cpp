#include "foldspace/cylinders.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace foldspace {

namespace {

// slot = one end of one square: (ue, eg-edge k, side in {0,1})
int slot_id(const Gos& x, int ue, int k, int side) {
  (void)x;
  return (ue << 17) | (k << 1) | side;
}

struct SlotMatching {
  // per (u-vertex, vg unoriented edge): the two covering slots
  std::map<std::pair<int, int>, std::vector<std::tuple<int, int, int>>> cover;
};

SlotMatching build_matching(const Gos& x) {
  SlotMatching m;
  for (int ue = 0; ue < x.u.ne(); ++ue) {
    for (int side = 0; side < 2; ++side) {
      int o = 2 * ue + side;
      int v = x.u.tau(o);
      for (int k = 0; k < x.eg[ue].ne(); ++k) {
        int f = x.inc[o].emap[2 * k] / 2;
        m.cover[{v, f}].push_back({ue, k, side});
      }
    }
  }
  for (auto& [key, slots] : m.cover) {
    if (slots.size() != 2)
      throw Error("trace_annuli: vertex-graph edge covered " + std::to_string(slots.size()) +
                  " times");
  }
  return m;
}

}  // namespace

AnnulusSet trace_annuli(const Gos& x) {
  AnnulusSet out;
  out.h = horizontal(x);
  SlotMatching matching = build_matching(x);
  std::set<std::pair<int, int>> visited;  // (ue, eg-edge) squares consumed
  for (int ue0 = 0; ue0 < x.u.ne(); ++ue0) {
    for (int k0 = 0; k0 < x.eg[ue0].ne(); ++k0) {
      if (visited.count({ue0, k0})) continue;
      AnnulusTrace tr;
      // start: square (ue0, k0), orientation 2*k0, exit through the tau side
      int ue = ue0, eo = 2 * k0, exit_side = 0;
      while (true) {
        AnnulusTrace::Step step{ue, eo, 2 * ue + exit_side};
        tr.walk.push_back(step);
        visited.insert({ue, eo / 2});
        int o = step.exit_oriented;
        int g = x.inc[o].emap[eo];           // oriented vg-edge, the shared end
        int v = x.u.tau(o);
        auto& slots = matching.cover.at({v, g / 2});
        // partner slot: the one that is not (ue, eo/2, exit_side)
        auto self = std::make_tuple(ue, eo / 2, exit_side);
        auto other = (slots[0] == self) ? slots[1] : slots[0];
        if (slots[0] != self && slots[1] != self)
          throw Error("trace_annuli: slot bookkeeping failure");
        auto [ue2, k2, side2] = other;
        // entering orientation: the oriented eg-edge mapping onto g
        int o2 = 2 * ue2 + side2;
        int eo2;
        if (x.inc[o2].emap[2 * k2] == g) eo2 = 2 * k2;
        else if (x.inc[o2].emap[2 * k2 + 1] == g) eo2 = 2 * k2 + 1;
        else throw Error("trace_annuli: matched slot does not cover the end");
        ue = ue2;
        eo = eo2;
        exit_side = 1 - side2;
        if (ue == ue0 && eo == 2 * k0 && exit_side == 0) break;
        if (ue == ue0 && eo == 2 * k0 + 1) {
          // passed through the start square with reversed orientation
          // keep walking; a Moebius band closes after the second pass
          tr.moebius = true;
        }
      }
      std::set<std::pair<int, int>> sq;
      for (auto& s : tr.walk) sq.insert({s.ue, s.eg_oedge / 2});
      tr.nsquares = static_cast<int>(sq.size());
      if (tr.moebius && static_cast<int>(tr.walk.size()) != 2 * tr.nsquares)
        throw Error("trace_annuli: inconsistent Moebius walk");
      if (!tr.moebius && static_cast<int>(tr.walk.size()) != tr.nsquares)
        throw Error("trace_annuli: inconsistent annulus walk");

      // boundary circuits: left rails, and for annuli the right rails
      auto rail = [&](const AnnulusTrace::Step& s, bool left) {
        int p = left ? x.eg[s.ue].iota(s.eg_oedge) : x.eg[s.ue].tau(s.eg_oedge);
        int hid = out.h.eindex[s.ue][p];
        bool forward = (s.exit_oriented % 2 == 0);  // exits through the tau side
        return 2 * hid + (forward ? 0 : 1);
      };
      std::vector<int> left, right;
      for (auto& s : tr.walk) left.push_back(rail(s, true));
      tr.circuits.push_back(left);
      if (!tr.moebius) {
        for (auto& s : tr.walk) right.push_back(rail(s, false));
        tr.circuits.push_back(right);
      }
      // circuits must be closed reduced edge paths
      for (auto& c : tr.circuits) {
        int L = static_cast<int>(c.size());
        for (int i = 0; i < L; ++i) {
          int a = c[i], b = c[(i + 1) % L];
          if (out.h.g.tau(a) != out.h.g.iota(b))
            throw Error("trace_annuli: boundary circuit is not closed");
          if (L > 1 && b == (a ^ 1)) throw Error("trace_annuli: boundary circuit backtracks");
        }
      }
      out.total_squares += tr.nsquares;
      out.annuli.push_back(std::move(tr));
    }
  }
  return out;
}

namespace {

std::vector<int> reverse_circuit(const std::vector<int>& c) {
  std::vector<int> r(c.rbegin(), c.rend());
  for (int& o : r) o ^= 1;
  return r;
}

std::vector<int> rotmin(std::vector<int> c) {
  std::vector<int> best = c;
  for (size_t i = 1; i < c.size(); ++i) {
    std::rotate(c.begin(), c.begin() + 1, c.end());
    if (c < best) best = c;
  }
  return best;
}

int circuit_period(const std::vector<int>& c) {
  int n = static_cast<int>(c.size());
  for (int p = 1; p <= n; ++p) {
    if (n % p != 0) continue;
    bool ok = true;
    for (int i = 0; i + p < n && ok; ++i)
      if (c[i] != c[i + p]) ok = false;
    if (ok) return p;
  }
  return n;
}

std::vector<int> canonical_root(const std::vector<int>& circuit) {
  int p = circuit_period(circuit);
  std::vector<int> root(circuit.begin(), circuit.begin() + p);
  return std::min(rotmin(root), rotmin(reverse_circuit(root)));
}

// Alignment of a circuit with its canonical root: per rail index the circle
// edge it lies over, and per corner index the circle position.
struct Alignment {
  std::vector<int> rail_edge;     // circuit index -> circle edge index
  std::vector<int> rail_dir;      // +1 forward, -1 backward
  std::vector<int> corner_pos;    // circuit corner index -> circle position
};

Alignment align_to_root(const std::vector<int>& circuit, const std::vector<int>& root) {
  int L = static_cast<int>(circuit.size());
  int p = static_cast<int>(root.size());
  Alignment a;
  for (int dir : {+1, -1}) {
    for (int off = 0; off < p; ++off) {
      bool ok = true;
      for (int i = 0; i < L && ok; ++i) {
        int idx = ((off + dir * i) % p + p) % p;
        int want = dir == +1 ? root[idx] : (root[idx] ^ 1);
        if (circuit[i] != want) ok = false;
      }
      if (!ok) continue;
      a.rail_edge.resize(L);
      a.rail_dir.resize(L);
      a.corner_pos.resize(L);
      for (int i = 0; i < L; ++i) {
        int idx = ((off + dir * i) % p + p) % p;
        a.rail_edge[i] = idx;
        a.rail_dir[i] = dir;
        // corner i = start point of rail i
        a.corner_pos[i] = dir == +1 ? idx : (idx + 1) % p;
      }
      return a;
    }
  }
  throw Error("align_to_root: circuit does not lift to its root");
}

}  // namespace

IrreducibleComponents irreducible_components(const Gos& x) {
  IrreducibleComponents out;
  std::vector<bool> keep_e(x.u.ne());
  for (int e = 0; e < x.u.ne(); ++e) keep_e[e] = x.eg[e].ne() > 0;
  // vertices with no surviving incident edge are leftover points
  std::vector<bool> keep_v(x.u.nv, false);
  for (int e = 0; e < x.u.ne(); ++e) {
    if (keep_e[e]) {
      keep_v[x.u.tau(2 * e)] = true;
      keep_v[x.u.tau(2 * e + 1)] = true;
    }
  }
  // components of the kept subgraph
  out.x_vertex_comp.assign(x.u.nv, -1);
  out.x_edge_comp.assign(x.u.ne(), -1);
  int nc = 0;
  for (int s = 0; s < x.u.nv; ++s) {
    if (!keep_v[s] || out.x_vertex_comp[s] != -1) continue;
    std::vector<int> stack{s};
    out.x_vertex_comp[s] = nc;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int e = 0; e < x.u.ne(); ++e) {
        if (!keep_e[e]) continue;
        for (int o : {2 * e, 2 * e + 1}) {
          if (x.u.tau(o) == v) {
            int w = x.u.iota(o);
            if (out.x_vertex_comp[w] == -1) {
              out.x_vertex_comp[w] = nc;
              stack.push_back(w);
            }
          }
        }
      }
    }
    ++nc;
  }
  for (int e = 0; e < x.u.ne(); ++e)
    if (keep_e[e]) out.x_edge_comp[e] = out.x_vertex_comp[x.u.tau(2 * e)];
  out.components.resize(nc);
  out.vmap_to_x.resize(nc);
  out.emap_to_x.resize(nc);
  std::vector<int> vloc(x.u.nv, -1), eloc(x.u.ne(), -1);
  for (int v = 0; v < x.u.nv; ++v) {
    int c = out.x_vertex_comp[v];
    if (c < 0) continue;
    vloc[v] = out.components[c].u.add_vertex();
    out.components[c].vg.push_back(x.vg[v]);
    out.vmap_to_x[c].push_back(v);
  }
  for (int e = 0; e < x.u.ne(); ++e) {
    int c = out.x_edge_comp[e];
    if (c < 0) continue;
    Gos& g = out.components[c];
    eloc[e] = g.u.add_edge(vloc[x.u.tau(2 * e + 1)], vloc[x.u.tau(2 * e)]);
    g.eg.push_back(x.eg[e]);
    g.inc.push_back(x.inc[2 * e]);
    g.inc.push_back(x.inc[2 * e + 1]);
    out.emap_to_x[c].push_back(e);
  }
  return out;
}

CylinderSet build_cylinders(const Gos& x) {
  CylinderSet cs;
  cs.annuli = trace_annuli(x);
  cs.h = horizontal(x);
  const Horizontal& h = cs.h;

  // essentiality after dropping weight-0 edges: recompute components of the
  // pruned horizontal graph
  std::vector<int> pruned_comp(h.g.nv, -1);
  std::vector<bool> pruned_circle;
  {
    Graph pg;
    pg.nv = h.g.nv;
    std::vector<int> hkeep;
    for (int e = 0; e < h.g.ne(); ++e) {
      if (x.eg[h.eof[e].first].ne() > 0) {
        pg.add_edge(h.g.iota(2 * e), h.g.tau(2 * e));
        hkeep.push_back(e);
      }
    }
    int nc = 0;
    pruned_comp = pg.components(&nc);
    pruned_circle.assign(nc, false);
    auto deg = pg.degrees();
    std::vector<int> cv(nc, 0), ce(nc, 0);
    std::vector<bool> ok(nc, true);
    for (int v = 0; v < pg.nv; ++v) {
      cv[pruned_comp[v]]++;
      if (deg[v] != 2) ok[pruned_comp[v]] = false;
    }
    for (int e = 0; e < pg.ne(); ++e) ce[pruned_comp[pg.tau(2 * e)]]++;
    for (int c = 0; c < nc; ++c) pruned_circle[c] = ok[c] && ce[c] == cv[c] && ce[c] > 0;
  }

  // collect circles
  std::map<std::vector<int>, int> circle_of_root;
  cs.circuit_circle.resize(cs.annuli.annuli.size());
  cs.circuit_winding.resize(cs.annuli.annuli.size());
  for (size_t a = 0; a < cs.annuli.annuli.size(); ++a) {
    for (const auto& circuit : cs.annuli.annuli[a].circuits) {
      std::vector<int> root = canonical_root(circuit);
      auto [it, fresh] = circle_of_root.try_emplace(root, static_cast<int>(cs.circles.size()));
      if (fresh) {
        SCircle s;
        s.root = root;
        s.gamma_component = h.comp[h.g.iota(root[0])];
        s.essential_full = !h.circle[s.gamma_component];
        int pc = pruned_comp[h.g.iota(root[0])];
        s.essential_irr = pc >= 0 && !pruned_circle[pc];
        for (int j = 0; j < static_cast<int>(root.size()); ++j)
          s.pos_vertex.push_back(h.g.iota(root[j]));
        cs.circles.push_back(std::move(s));
      }
      cs.circuit_circle[a].push_back(it->second);
      cs.circuit_winding[a].push_back(static_cast<int>(circuit.size() / root.size()));
    }
  }

  // components: union annuli with their circles
  int nitems = static_cast<int>(cs.circles.size() + cs.annuli.annuli.size());
  std::vector<int> parent(nitems);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  int coff = static_cast<int>(cs.circles.size());
  for (size_t a = 0; a < cs.annuli.annuli.size(); ++a)
    for (int c : cs.circuit_circle[a]) unite(c, coff + static_cast<int>(a));

  std::map<int, int> comp_of_root;
  std::vector<std::vector<int>> comp_circles, comp_annuli;
  for (size_t a = 0; a < cs.annuli.annuli.size(); ++a) {
    int r = find(coff + static_cast<int>(a));
    auto [it, fresh] = comp_of_root.try_emplace(r, static_cast<int>(comp_circles.size()));
    if (fresh) {
      comp_circles.push_back({});
      comp_annuli.push_back({});
    }
    comp_annuli[it->second].push_back(static_cast<int>(a));
  }
  for (size_t c = 0; c < cs.circles.size(); ++c) {
    int r = find(static_cast<int>(c));
    auto it = comp_of_root.find(r);
    if (it != comp_of_root.end()) comp_circles[it->second].push_back(static_cast<int>(c));
  }

  // assemble each cylinder
  for (size_t ci = 0; ci < comp_annuli.size(); ++ci) {
    Cylinder cyl;
    cyl.circles = comp_circles[ci];
    cyl.annuli = comp_annuli[ci];
    std::map<int, int> local_circle;  // global -> local
    for (size_t i = 0; i < cyl.circles.size(); ++i) local_circle[cyl.circles[i]] = static_cast<int>(i);

    // nodes: (local circle, position) for vertex fibers, (local circle,
    // edge) for edge fibers
    struct VCopy {  // vertex-graph edge copy
      int uv, vg_edge;
      int end_pos[2] = {-1, -1};  // node key over (circle,position): iota end, tau end
    };
    struct SCopy {  // square copy
      int ue, eg_edge;
      int rail[2] = {-1, -1};     // node key over (circle,edge): two rails (unordered)
      int nrails = 0;
      int tau_gluing = -1, iota_gluing = -1;  // VCopy ids adjacent at each side
    };
    auto poskey = [&](int lc, int idx) { return (lc << 20) | idx; };
    std::map<int, VCopy> gluings;  // key: canonical slot pair id
    std::map<std::pair<int, int>, SCopy> squares;

    for (int a : cyl.annuli) {
      const AnnulusTrace& tr = cs.annuli.annuli[a];
      int L = static_cast<int>(tr.walk.size());
      // alignments of the circuits
      std::vector<Alignment> al;
      std::vector<int> lc;
      for (size_t s = 0; s < tr.circuits.size(); ++s) {
        int gc = cs.circuit_circle[a][s];
        al.push_back(align_to_root(tr.circuits[s], cs.circles[gc].root));
        lc.push_back(local_circle.at(gc));
      }
      for (int i = 0; i < L; ++i) {
        const auto& st = tr.walk[i];
        const auto& nx = tr.walk[(i + 1) % L];
        int o = st.exit_oriented;
        int g = x.inc[o].emap[st.eg_oedge];
        int uv = x.u.tau(o);
        // gluing key: the unordered pair of slots
        int s1 = slot_id(x, st.ue, st.eg_oedge / 2, o % 2);
        int s2 = slot_id(x, nx.ue, nx.eg_oedge / 2, 1 - (nx.exit_oriented % 2));
        int key = std::min(s1, s2) * 2'000'003 + std::max(s1, s2);
        VCopy& vc = gluings.try_emplace(key, VCopy{uv, g / 2, {-1, -1}, }).first->second;
        // left corner after step i carries iota(g); for annuli the right
        // corner carries tau(g)
        int corner = (i + 1) % L;
        int pos_left = poskey(lc[0], al[0].corner_pos[corner]);
        // slot bookkeeping uses the canonical orientation 2*(g/2) of the
        // shared vertex-graph edge
        int gcan = 2 * (g / 2);
        int left_im = x.inc[o].vmap[x.eg[st.ue].iota(st.eg_oedge)];
        bool left_is_iota = (left_im == x.vg[uv].iota(gcan));
        if (!left_is_iota && left_im != x.vg[uv].tau(gcan))
          throw Error("build_cylinders: corner image mismatch");
        if (tr.moebius) {
          int slotidx = left_is_iota ? 0 : 1;
          // a loop image leaves the slot assignment free
          if (vc.end_pos[slotidx] != -1 && x.vg[uv].iota(gcan) == x.vg[uv].tau(gcan))
            slotidx = 1 - slotidx;
          if (vc.end_pos[slotidx] != -1 && vc.end_pos[slotidx] != pos_left)
            throw Error("build_cylinders: moebius corner conflict");
          vc.end_pos[slotidx] = pos_left;
        } else {
          int pos_right = poskey(lc[1], al[1].corner_pos[corner]);
          vc.end_pos[left_is_iota ? 0 : 1] = pos_left;
          vc.end_pos[left_is_iota ? 1 : 0] = pos_right;
        }
        // square rails
        SCopy& sc = squares.try_emplace({st.ue, st.eg_oedge / 2}, SCopy{st.ue, st.eg_oedge / 2})
                        .first->second;
        int left_rail = poskey(lc[0], al[0].rail_edge[i]);
        if (tr.moebius) {
          // two visits, one rail each
          if (sc.nrails >= 2) throw Error("build_cylinders: square visited more than twice");
          sc.rail[sc.nrails++] = left_rail;
        } else {
          int right_rail = poskey(lc[1], al[1].rail_edge[i]);
          sc.rail[0] = left_rail;
          sc.rail[1] = right_rail;
          sc.nrails = 2;
        }
        // record which gluing sits at which side of the two squares
        auto set_side = [&](SCopy& s, int side, int vkey) {
          int* slot = (side == 0) ? &s.tau_gluing : &s.iota_gluing;
          if (*slot != -1 && *slot != vkey)
            throw Error("build_cylinders: square side conflict");
          *slot = vkey;
        };
        SCopy& sc2 =
            squares.try_emplace({nx.ue, nx.eg_oedge / 2}, SCopy{nx.ue, nx.eg_oedge / 2})
                .first->second;
        set_side(sc, o % 2, key);
        set_side(sc2, 1 - (nx.exit_oriented % 2), key);
      }
    }

    // build fibers: group nodes by over-vertex / over-edge, then split into
    // connected components
    // vertex nodes: all (circle, position); edge nodes: all (circle, edge)
    std::map<int, int> vnode_id, enode_id;  // poskey -> dense id
    std::vector<std::pair<int, int>> vnodes, enodes;
    for (size_t i = 0; i < cyl.circles.size(); ++i) {
      const SCircle& s = cs.circles[cyl.circles[i]];
      int p = static_cast<int>(s.root.size());
      for (int j = 0; j < p; ++j) {
        vnode_id[poskey(static_cast<int>(i), j)] = static_cast<int>(vnodes.size());
        vnodes.push_back({static_cast<int>(i), j});
        enode_id[poskey(static_cast<int>(i), j)] = static_cast<int>(enodes.size());
        enodes.push_back({static_cast<int>(i), j});
      }
    }
    // DSU over vertex nodes via gluings, and over edge nodes via squares
    std::vector<int> vpar(vnodes.size()), epar(enodes.size());
    std::iota(vpar.begin(), vpar.end(), 0);
    std::iota(epar.begin(), epar.end(), 0);
    std::function<int(std::vector<int>&, int)> f2 = [&](std::vector<int>& p, int a) {
      return p[a] == a ? a : p[a] = f2(p, p[a]);
    };
    for (auto& [key, vc] : gluings) {
      if (vc.end_pos[0] == -1 || vc.end_pos[1] == -1)
        throw Error("build_cylinders: gluing with missing end");
      int a = f2(vpar, vnode_id.at(vc.end_pos[0]));
      int b = f2(vpar, vnode_id.at(vc.end_pos[1]));
      if (a != b) vpar[std::max(a, b)] = std::min(a, b);
    }
    for (auto& [key, sc] : squares) {
      if (sc.nrails != 2) throw Error("build_cylinders: square with missing rail");
      int a = f2(epar, enode_id.at(sc.rail[0]));
      int b = f2(epar, enode_id.at(sc.rail[1]));
      if (a != b) epar[std::max(a, b)] = std::min(a, b);
    }
    // fiber per DSU class
    std::map<int, int> vfiber_of, efiber_of;
    auto vertex_of_pos = [&](int i, int j) {
      const SCircle& s = cs.circles[cyl.circles[i]];
      return h.vof[s.pos_vertex[j]];
    };
    auto hedge_of_circle_edge = [&](int i, int j) {
      const SCircle& s = cs.circles[cyl.circles[i]];
      return h.eof[s.root[j] / 2];
    };
    for (size_t n = 0; n < vnodes.size(); ++n) {
      int r = f2(vpar, static_cast<int>(n));
      if (vfiber_of.count(r)) continue;
      int id = static_cast<int>(vfiber_of.size());
      vfiber_of[r] = id;
    }
    for (size_t n = 0; n < enodes.size(); ++n) {
      int r = f2(epar, static_cast<int>(n));
      if (efiber_of.count(r)) continue;
      efiber_of[r] = static_cast<int>(efiber_of.size());
    }
    cyl.n_vertex_fibers = static_cast<int>(vfiber_of.size());
    cyl.fibers.resize(vfiber_of.size() + efiber_of.size());
    std::vector<int> vnode_local(vnodes.size(), -1), enode_local(enodes.size(), -1);
    for (size_t n = 0; n < vnodes.size(); ++n) {
      int fi = vfiber_of.at(f2(vpar, static_cast<int>(n)));
      CylinderFiber& f = cyl.fibers[fi];
      auto [uv, lp] = vertex_of_pos(vnodes[n].first, vnodes[n].second);
      if (f.node.empty()) {
        f.over_vertex = true;
        f.over = uv;
      } else if (f.over != uv) {
        throw Error("build_cylinders: vertex fiber spans two vertex spaces");
      }
      vnode_local[n] = f.g.add_vertex();
      f.node.push_back(vnodes[n]);
      f.node_image.push_back(lp);
    }
    for (size_t n = 0; n < enodes.size(); ++n) {
      int fi = cyl.n_vertex_fibers + efiber_of.at(f2(epar, static_cast<int>(n)));
      CylinderFiber& f = cyl.fibers[fi];
      auto [ue, p] = hedge_of_circle_edge(enodes[n].first, enodes[n].second);
      if (f.node.empty()) {
        f.over_vertex = false;
        f.over = ue;
      } else if (f.over != ue) {
        throw Error("build_cylinders: edge fiber spans two edge spaces");
      }
      enode_local[n] = f.g.add_vertex();
      f.node.push_back(enodes[n]);
      f.node_image.push_back(p);
    }
    // fiber edges
    std::map<int, std::pair<int, int>> gluing_edge;  // gluing key -> (fiber, unoriented id)
    for (auto& [key, vc] : gluings) {
      int n0 = vnode_id.at(vc.end_pos[0]);
      int fi = vfiber_of.at(f2(vpar, n0));
      CylinderFiber& f = cyl.fibers[fi];
      int a = vnode_local[vnode_id.at(vc.end_pos[0])];  // iota end
      int b = vnode_local[vnode_id.at(vc.end_pos[1])];  // tau end
      int id = f.g.add_edge(a, b);
      f.edge_image.push_back(vc.vg_edge);
      gluing_edge[key] = {fi, id};
    }
    std::map<std::pair<int, int>, std::pair<int, int>> square_edge;
    for (auto& [key, sc] : squares) {
      int n0 = enode_id.at(sc.rail[0]);
      int fi = cyl.n_vertex_fibers + efiber_of.at(f2(epar, n0));
      CylinderFiber& f = cyl.fibers[fi];
      int a = enode_local[enode_id.at(sc.rail[0])];
      int b = enode_local[enode_id.at(sc.rail[1])];
      int id = f.g.add_edge(a, b);
      f.edge_image.push_back(sc.eg_edge);
      square_edge[key] = {fi, id};
    }

    // incidence maps per edge fiber, and the mapping-torus verification
    cyl.emaps.resize(efiber_of.size());
    bool torus = true;
    std::string why;
    // node-level: circle edge (i,j) has tau-side position and iota-side
    // position depending on the direction of root[j]
    auto circle_edge_side_pos = [&](int i, int j, bool tau_side) {
      const SCircle& s = cs.circles[cyl.circles[i]];
      int tok = s.root[j];
      bool fwd = (tok % 2 == 0);
      int p = static_cast<int>(s.root.size());
      // forward rail: iota side = position j, tau side = position j+1
      if (fwd) return tau_side ? (j + 1) % p : j;
      return tau_side ? j : (j + 1) % p;
    };
    for (int ef = 0; ef < static_cast<int>(efiber_of.size()); ++ef) {
      CylinderFiber& F = cyl.fibers[cyl.n_vertex_fibers + ef];
      CylinderEdgeMaps& em = cyl.emaps[ef];
      em.tau.vmap.assign(F.g.nv, -1);
      em.iota.vmap.assign(F.g.nv, -1);
      em.tau.emap.assign(F.g.noriented(), -1);
      em.iota.emap.assign(F.g.noriented(), -1);
      for (int n = 0; n < F.g.nv; ++n) {
        auto [i, j] = F.node[n];
        for (int side = 0; side < 2; ++side) {
          int pos = circle_edge_side_pos(i, j, side == 0);
          int nid = vnode_id.at(poskey(i, pos));
          int fi = vfiber_of.at(f2(vpar, nid));
          GraphMap& m = side == 0 ? em.tau : em.iota;
          int& fslot = side == 0 ? em.tau_fiber : em.iota_fiber;
          if (fslot == -1) fslot = fi;
          else if (fslot != fi) {
            torus = false;
            why = "edge fiber incidence spans two vertex fibers";
          }
          m.vmap[n] = vnode_local[nid];
        }
      }
      (void)em;
    }
    for (auto& [key, sc] : squares) {
      auto [fi, id] = square_edge.at({sc.ue, sc.eg_edge});
      int ef = fi - cyl.n_vertex_fibers;
      CylinderEdgeMaps& em = cyl.emaps[ef];
      for (int side = 0; side < 2; ++side) {
        int gk = side == 0 ? sc.tau_gluing : sc.iota_gluing;
        if (gk == -1) throw Error("build_cylinders: square missing side gluing");
        auto [vfi, vid] = gluing_edge.at(gk);
        GraphMap& m = side == 0 ? em.tau : em.iota;
        int& fslot = side == 0 ? em.tau_fiber : em.iota_fiber;
        if (fslot != vfi) {
          torus = false;
          why = "square gluing lands outside the incident vertex fiber";
          continue;
        }
        // orientation: align endpoints
        const CylinderFiber& F = cyl.fibers[fi];
        const CylinderFiber& VF = cyl.fibers[vfi];
        int d = -1;
        for (int cand : {2 * vid, 2 * vid + 1}) {
          if (VF.g.iota(cand) == m.vmap[F.g.iota(2 * id)] &&
              VF.g.tau(cand) == m.vmap[F.g.tau(2 * id)]) {
            d = cand;
            break;
          }
        }
        if (d == -1) {
          torus = false;
          why = "square gluing endpoints mismatch";
          continue;
        }
        m.emap[2 * id] = d;
        m.emap[2 * id + 1] = d ^ 1;
      }
    }
    // verify incidences are isomorphisms and the underlying graph is a circle
    if (torus) {
      for (int ef = 0; ef < static_cast<int>(efiber_of.size()) && torus; ++ef) {
        const CylinderFiber& F = cyl.fibers[cyl.n_vertex_fibers + ef];
        const CylinderEdgeMaps& em = cyl.emaps[ef];
        for (const GraphMap* m : {&em.tau, &em.iota}) {
          int vfi = (m == &em.tau) ? em.tau_fiber : em.iota_fiber;
          if (vfi < 0 || !m->valid(F.g, cyl.fibers[vfi].g) ||
              !m->is_isomorphism(F.g, cyl.fibers[vfi].g)) {
            torus = false;
            why = "edge fiber incidence is not an isomorphism";
            break;
          }
        }
      }
    }
    if (torus) {
      // degree of each vertex fiber in the fiber cycle must be 2
      std::vector<int> deg(cyl.n_vertex_fibers, 0);
      for (auto& em : cyl.emaps) {
        deg[em.tau_fiber]++;
        deg[em.iota_fiber]++;
      }
      for (int d : deg)
        if (d != 2) {
          torus = false;
          why = "underlying graph of the component is not a circle";
        }
      if (torus && cyl.emaps.size() != static_cast<size_t>(cyl.n_vertex_fibers)) {
        torus = false;
        why = "underlying graph of the component is not a circle";
      }
    }
    if (torus) {
      // walk the cycle
      int start = cyl.n_vertex_fibers;  // first edge fiber
      cyl.cycle.clear();
      cyl.cycle_side.clear();
      int ef = 0, enter_tau = 1;
      std::set<int> used;
      while (true) {
        cyl.cycle.push_back(cyl.n_vertex_fibers + ef);
        cyl.cycle_side.push_back(enter_tau ? 0 : 1);
        used.insert(ef);
        const CylinderEdgeMaps& em = cyl.emaps[ef];
        int vf = enter_tau ? em.tau_fiber : em.iota_fiber;
        cyl.cycle.push_back(vf);
        // find the other edge fiber attached to vf
        int nxt = -1, ntau = -1;
        for (int e2 = 0; e2 < static_cast<int>(cyl.emaps.size()); ++e2) {
          for (int side = 0; side < 2; ++side) {
            int vv = side == 0 ? cyl.emaps[e2].tau_fiber : cyl.emaps[e2].iota_fiber;
            if (vv != vf) continue;
            if (e2 == ef && ((side == 0) == (enter_tau == 1))) continue;
            nxt = e2;
            ntau = side == 0 ? 0 : 1;  // we enter e2 through this side; exit the other
          }
        }
        if (nxt == -1) {
          torus = false;
          why = "cycle walk failed";
          break;
        }
        ef = nxt;
        enter_tau = ntau;  // entered via ntau side; exit through the other
        if (cyl.n_vertex_fibers + ef == start && enter_tau == 1) break;
        if (cyl.cycle.size() > 4 * cyl.fibers.size() + 8) {
          torus = false;
          why = "cycle walk did not close";
          break;
        }
      }
      if (torus && used.size() != cyl.emaps.size()) {
        torus = false;
        why = "underlying graph is disconnected";
      }
      if (!torus) {
        cyl.cycle.clear();
        cyl.cycle_side.clear();
      }
    }
    cyl.mapping_torus = torus;
    cyl.failure = torus ? "" : why;
    cs.cylinders.push_back(std::move(cyl));
  }
  return cs;
}

CylinderClassification classify_cylinder(const CylinderSet& cs, int ci) {
  const Cylinder& cyl = cs.cylinders[ci];
  CylinderClassification out;
  int best = -1, best_full = -1;
  for (const CylinderFiber& f : cyl.fibers) {
    int count = 0, count_full = 0;
    for (auto [i, j] : f.node) {
      (void)j;
      if (cs.circles[cyl.circles[i]].essential_irr) count++;
      if (cs.circles[cyl.circles[i]].essential_full) count_full++;
    }
    if (best < 0 || count < best) best = count;
    if (best_full < 0 || count_full < best_full) best_full = count_full;
  }
  out.min_essential_meet = std::max(best, 0);
  out.verdict = out.min_essential_meet > 1 ? CylinderVerdict::Good : CylinderVerdict::Bad;
  out.min_ambient_meet = std::max(best_full, 0);
  out.verdict_ambient = out.min_ambient_meet > 1 ? CylinderVerdict::Good : CylinderVerdict::Bad;
  return out;
}

bool transverse_tree_check(const Gos& x) {
  for (const Graph& e : x.eg)
    if (!e.is_tree()) return false;
  return true;
}

void check_separating_subgraphs(const Gos& x, const CylinderSet& cs) {
  // psi_C embeds every transverse fiber: node and edge images are distinct
  for (const Cylinder& cyl : cs.cylinders) {
    for (const CylinderFiber& f : cyl.fibers) {
      std::set<int> vs(f.node_image.begin(), f.node_image.end());
      if (vs.size() != f.node_image.size())
        throw Error("separating subgraphs: fiber vertices do not embed");
      std::set<int> es(f.edge_image.begin(), f.edge_image.end());
      if (es.size() != f.edge_image.size())
        throw Error("separating subgraphs: fiber edges do not embed");
    }
  }
  // coverage: nonzero-weight spaces are unions of fiber images
  std::vector<std::set<int>> vcov(x.u.nv), ecov(x.u.ne());
  for (const Cylinder& cyl : cs.cylinders) {
    for (const CylinderFiber& f : cyl.fibers) {
      auto& cov = f.over_vertex ? vcov[f.over] : ecov[f.over];
      for (int p : f.node_image) cov.insert(p);
    }
  }
  for (int v = 0; v < x.u.nv; ++v) {
    if (x.vg[v].ne() == 0) continue;
    if (static_cast<int>(vcov[v].size()) != x.vg[v].nv)
      throw Error("separating subgraphs: vertex space not covered by fibers");
  }
  for (int e = 0; e < x.u.ne(); ++e) {
    if (x.eg[e].ne() == 0) continue;
    if (static_cast<int>(ecov[e].size()) != x.eg[e].nv)
      throw Error("separating subgraphs: edge space not covered by fibers");
  }
}

std::string squares_to_dot(const Gos& x, const AnnulusSet& as) {
  std::ostringstream os;
  os << "graph squares {\n";
  for (size_t a = 0; a < as.annuli.size(); ++a) {
    const AnnulusTrace& tr = as.annuli[a];
    int L = static_cast<int>(tr.walk.size());
    for (int i = 0; i < L; ++i) {
      const auto& s = tr.walk[i];
      const auto& n = tr.walk[(i + 1) % L];
      os << "  \"a" << a << "s" << s.ue << "." << s.eg_oedge / 2 << "\" -- \"a" << a << "s"
         << n.ue << "." << n.eg_oedge / 2 << "\";\n";
    }
    (void)x;
  }
  os << "}\n";
  return os.str();
}

}  // namespace foldspace
