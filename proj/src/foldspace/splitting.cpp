#include "foldspace/splitting.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace foldspace {

namespace {

// lookup: which fibers of which cylinders lie over an edge space
struct FiberIndex {
  // per unoriented u-edge: (cylinder, fiber index)
  std::vector<std::vector<std::pair<int, int>>> over_edge;
};

FiberIndex index_fibers(const Gos& x, const CylinderSet& cs) {
  FiberIndex idx;
  idx.over_edge.resize(x.u.ne());
  for (size_t c = 0; c < cs.cylinders.size(); ++c) {
    const Cylinder& cyl = cs.cylinders[c];
    for (size_t f = 0; f < cyl.fibers.size(); ++f) {
      if (!cyl.fibers[f].over_vertex)
        idx.over_edge[cyl.fibers[f].over].push_back({static_cast<int>(c), static_cast<int>(f)});
    }
  }
  return idx;
}

}  // namespace

std::vector<PeripheralElement> peripheral_elements(const Gos& x, const CylinderSet& cs, int ue) {
  std::vector<PeripheralElement> out;
  FiberIndex idx = index_fibers(x, cs);
  const Horizontal& h = cs.h;
  const Graph& E = x.eg[ue];
  for (int w = 0; w < E.nv; ++w) {
    int hedge = h.eindex[ue][w];
    int comp = h.comp[h.g.tau(2 * hedge)];
    if (h.circle[comp]) continue;  // w must lie in Gamma_inf(X)
    // members of F(E) containing w
    std::vector<std::pair<std::pair<int, int>, int>> hits;  // ((cyl, fiber), node)
    for (auto [c, f] : idx.over_edge[ue]) {
      const CylinderFiber& F = cs.cylinders[c].fibers[f];
      for (int n = 0; n < static_cast<int>(F.node_image.size()); ++n) {
        if (F.node_image[n] == w) hits.push_back({{c, f}, n});
      }
    }
    std::set<std::pair<int, int>> members;
    for (auto& hit : hits) members.insert(hit.first);
    if (members.size() == 1 && hits.size() == 1) {
      PeripheralElement p;
      p.cylinder = hits[0].first.first;
      p.fiber = hits[0].first.second;
      p.node = hits[0].second;
      p.edge_space = ue;
      p.w = w;
      out.push_back(p);
    }
  }
  return out;
}

namespace {

// inverse of a bijective vmap
std::vector<int> invert_vmap(const std::vector<int>& m, int codomain) {
  std::vector<int> inv(codomain, -1);
  for (int i = 0; i < static_cast<int>(m.size()); ++i) inv[m[i]] = i;
  return inv;
}

struct Walker {
  const Gos& x;
  const CylinderSet& cs;
  int cyl;
  int pos;   // index into cycle: even = edge fiber slot
  int node;  // node of the current edge fiber

  const Cylinder& C() const { return cs.cylinders[cyl]; }
  int efiber() const { return C().cycle[pos]; }
  int cycle_len() const { return static_cast<int>(C().cycle.size()); }

  // step across the vertex fiber that follows (forward) or precedes
  // (backward) the current edge fiber in the cycle; returns the vertex
  // fiber index and the transported vertex-fiber node on the way
  void step(bool forward, int* vfiber_out, int* vnode_out) {
    const Cylinder& c = C();
    int n = cycle_len();
    int ef_slot = pos;
    int ef = c.cycle[ef_slot] - c.n_vertex_fibers;
    const CylinderEdgeMaps& em = c.emaps[ef];
    int side = c.cycle_side[ef_slot / 2];
    if (!forward) side = 1 - side;
    const GraphMap& m = side == 0 ? em.tau : em.iota;
    int vnode = m.vmap[node];
    int vf = side == 0 ? em.tau_fiber : em.iota_fiber;
    if (vfiber_out) *vfiber_out = vf;
    if (vnode_out) *vnode_out = vnode;
    // next edge fiber slot
    int next_slot = forward ? (ef_slot + 2) % n : (ef_slot - 2 + n) % n;
    int ef2 = c.cycle[next_slot] - c.n_vertex_fibers;
    const CylinderEdgeMaps& em2 = c.emaps[ef2];
    // entering em2 through the side that touches vf in the cycle order
    int side2 = forward ? (1 - c.cycle_side[next_slot / 2]) : c.cycle_side[next_slot / 2];
    const GraphMap& m2 = side2 == 0 ? em2.tau : em2.iota;
    std::vector<int> inv = invert_vmap(m2.vmap, c.fibers[vf].g.nv);
    node = inv[vnode];
    if (node < 0) throw Error("push: rotation step failed (not an isomorphism)");
    pos = next_slot;
  }
};

int cycle_slot_of_fiber(const Cylinder& c, int fiber) {
  for (size_t i = 0; i < c.cycle.size(); i += 2)
    if (c.cycle[i] == fiber) return static_cast<int>(i);
  return -1;
}

}  // namespace

PushTrace push(const Gos& x, const CylinderSet& cs, const PeripheralElement& start, int steps,
               bool forward) {
  const Cylinder& c = cs.cylinders[start.cylinder];
  if (!c.mapping_torus) throw Error("push: component is not a mapping torus");
  PushTrace tr;
  int slot = cycle_slot_of_fiber(c, start.fiber);
  if (slot < 0) throw Error("push: fiber not on the cylinder cycle");
  Walker w{x, cs, start.cylinder, slot, start.node};
  for (int i = 0; i < steps; ++i) {
    int ue = c.fibers[w.efiber()].over;
    tr.path.push_back(2 * ue);
    int vf = -1, vn = -1;
    w.step(forward, &vf, &vn);
    tr.vertex_space = c.fibers[vf].over;
    tr.vertex_node = vn;
    tr.vg_vertex = c.fibers[vf].node_image[vn];
  }
  tr.fiber = w.efiber();
  tr.node = w.node;
  return tr;
}

long long relative_weight(const Gos& x, int v) {
  long long s = 0;
  for (int u = 0; u < x.u.nv; ++u)
    if (u != v) s += x.vg[u].ne();
  return s;
}

SplittingSearch find_splitting_vertex(const Gos& x) {
  SplittingSearch out;
  for (int e = 0; e < x.u.ne(); ++e) {
    if (x.eg[e].ne() == 0) {
      out.error = "space is not irreducible (weight-0 edge present)";
      return out;
    }
  }
  auto [cg, cu] = chi_pair(x);
  (void)cg;
  if (cu >= 0) {
    out.error = "chi(Gamma_U) = " + std::to_string(cu) + " is not negative";
    return out;
  }
  SeparabilityResult sep = separability(x);
  if (!sep.separable) {
    out.error = "space is not separable: " + sep.reason;
    return out;
  }
  CylinderSet cs = build_cylinders(x);
  for (size_t c = 0; c < cs.cylinders.size(); ++c) {
    if (!cs.cylinders[c].mapping_torus) {
      out.error = "component of the annulus space is not a cylinder: " + cs.cylinders[c].failure;
      return out;
    }
    if (classify_cylinder(cs, static_cast<int>(c)).verdict == CylinderVerdict::Bad) {
      out.error = "a cylinder is bad";
      return out;
    }
  }

  // Push every peripheral element around its cylinder in both directions;
  // accept the shortest hit (first in enumeration order on ties).
  std::optional<SplittingVertex> best;
  for (int ue = 0; ue < x.u.ne(); ++ue) {
    for (const PeripheralElement& p : peripheral_elements(x, cs, ue)) {
      const Cylinder& c = cs.cylinders[p.cylinder];
      int n = static_cast<int>(c.cycle.size()) / 2;
      for (bool fwd : {true, false}) {
        int slot = cycle_slot_of_fiber(c, p.fiber);
        Walker w{x, cs, p.cylinder, slot, p.node};
        for (int dist = 1; dist <= n; ++dist) {
          int cur_slot = w.pos;
          int cur_ue = c.fibers[c.cycle[cur_slot]].over;
          int side = c.cycle_side[cur_slot / 2];
          if (!fwd) side = 1 - side;
          int vf = -1, vn = -1;
          w.step(fwd, &vf, &vn);
          int v = c.fibers[vf].over;
          int image = c.fibers[vf].node_image[vn];
          const SeparableVertex& sv = sep.vertices[v];
          if (sv.kind != SeparableVertex::Kind::Splittable) continue;
          if (image != sv.triple_point) continue;
          int incoming = 2 * cur_ue + side;  // oriented edge crossed into v
          if (x.u.tau(incoming) != v)
            throw Error("find_splitting_vertex: push landed on an unexpected vertex");
          if (incoming == sv.outgoing_edge) continue;
          SplittingVertex cand;
          cand.v = v;
          cand.outgoing = sv.outgoing_edge;
          cand.primary_incoming = incoming;
          cand.witness = p;
          cand.push_steps = dist;
          if (!best || cand.push_steps < best->push_steps) best = cand;
          break;
        }
      }
    }
  }
  if (best) out.found = best;
  else out.error = "no splitting vertex found by pushing peripheral elements";
  return out;
}

SplitResult split(const Gos& x, const SplittingVertex& sv, GammaTracker* t) {
  SplitResult res;
  res.old_relative_weight = relative_weight(x, sv.v);
  int v = sv.v;
  int vprime = x.u.iota(sv.outgoing);
  if (vprime == v) throw Error("split: outgoing edge is a loop");
  // collapse the outgoing edge; the merged vertex inherits V'
  std::vector<int> e_v, e_vprime;  // oriented, tau = v / v'
  for (int o = 0; o < x.u.noriented(); ++o) {
    if (o == sv.outgoing || o == (sv.outgoing ^ 1)) continue;
    if (x.u.tau(o) == v) e_v.push_back(o);
    if (x.u.tau(o) == vprime) e_vprime.push_back(o);
  }
  if (e_v.size() != 2 || e_vprime.size() != 2)
    throw Error("split: splitting vertex ends do not have valence three");
  // keep the primary incoming edge first
  if (e_v[0] != sv.primary_incoming) std::swap(e_v[0], e_v[1]);

  GammaTracker tbar;
  GammaTracker* tb = nullptr;
  if (t) {
    tbar = *t;
    tb = &tbar;
  }
  CollapseResult bar = collapse(x, sv.outgoing, tb);
  int vbar = bar.uvmap[v];
  auto remap_o = [&](int o) { return 2 * bar.uemap[o / 2] + (o % 2); };

  std::array<std::pair<int, int>, 4> cands = {{{e_v[0], e_vprime[0]},
                                               {e_v[0], e_vprime[1]},
                                               {e_v[1], e_vprime[0]},
                                               {e_v[1], e_vprime[1]}}};
  for (int ci = 0; ci < 4; ++ci) {
    std::vector<int> J = {remap_o(cands[ci].first), remap_o(cands[ci].second)};
    GammaTracker tc;
    GammaTracker* tp = nullptr;
    if (tb) {
      tc = *tb;
      tp = &tc;
    }
    FoldResult f = fold(bar.gos, vbar, J, tp);
    ReduceResult r = reduce(f.gos, tp);
    // nontrivial: the reduced fold differs from the collapsed space
    if (gos_isomorphic(r.gos, bar.gos)) continue;
    bool weight0 = false;
    for (int e = 0; e < r.gos.u.ne(); ++e)
      if (r.gos.eg[e].ne() == 0) weight0 = true;
    long long new_rel = -1;
    if (!weight0) {
      try {
        SeparabilityResult sep2 = separability(r.gos);
        if (sep2.separable) {
          for (int w = 0; w < r.gos.u.nv; ++w) {
            if (sep2.vertices[w].kind == SeparableVertex::Kind::Splittable) {
              long long rw = relative_weight(r.gos, w);
              if (new_rel < 0 || rw < new_rel) new_rel = rw;
            }
          }
        }
      } catch (const Error&) {
        new_rel = -1;
      }
      if (new_rel < 0 || new_rel >= res.old_relative_weight) continue;
    }
    res.gos = std::move(r.gos);
    res.chosen_j = ci;
    res.made_weight0 = weight0;
    res.new_relative_weight = new_rel;
    if (t) *t = std::move(tc);
    return res;
  }
  throw Error("split: no candidate fold satisfies the splitting postcondition");
}

SplitToBadResult split_to_bad(const Gos& x, const GammaTracker* t0) {
  SplitToBadResult out;
  GammaTracker t = t0 ? *t0 : GammaTracker::start(x);
  // queue of (component, tracker)
  std::vector<std::pair<Gos, GammaTracker>> queue;
  queue.push_back({x, t});
  long long cap = 64;
  for (const Graph& g : x.vg) cap += 4LL * g.ne() * g.ne() + 8;
  for (const Graph& g : x.eg) cap += 4LL * g.ne() * g.ne() + 8;
  cap += 16LL * x.u.ne() * x.u.ne();
  long long iter = 0;
  while (!queue.empty()) {
    if (++iter > cap) throw Error("split_to_bad: iteration cap exceeded");
    auto [y0, ty] = std::move(queue.back());
    queue.pop_back();
    MinimizeResult m = minimize(y0, &ty);
    Gos y = std::move(m.gos);
    for (auto& mv : m.trace) out.trace.push_back(mv);
    if (is_cylinder_space(y)) {
      // a lone mapping torus: a single automatically-bad cylinder
      out.trace.push_back({"cylinder-component", -1, {}, -1, "lone cylinder, bad"});
      out.components.push_back(std::move(y));
      out.trackers.push_back(std::move(ty));
      continue;
    }
    SeparabilityResult sep = separability(y);
    if (!sep.separable) throw Error("split_to_bad: component lost separability: " + sep.reason);
    IrreducibleComponents ic = irreducible_components(y);
    if (ic.components.size() != 1 || ic.components[0].u.ne() != y.u.ne() ||
        ic.components[0].u.nv != y.u.nv) {
      // restrict the tracker to each component and recurse
      for (size_t c = 0; c < ic.components.size(); ++c) {
        GammaTracker tc;
        tc.base = ty.base;
        for (int v : ic.vmap_to_x[c]) tc.vbase.push_back(ty.vbase[v]);
        for (int e : ic.emap_to_x[c]) tc.hpath.push_back(ty.hpath[e]);
        queue.push_back({ic.components[c], tc});
        out.trace.push_back({"component", -1, {}, -1,
                             "irreducible component with " +
                                 std::to_string(ic.components[c].u.ne()) + " edges"});
      }
      continue;
    }
    auto [cg, cu] = chi_pair(y);
    (void)cg;
    CylinderSet cs = build_cylinders(y);
    bool allgood = true;
    for (size_t c = 0; c < cs.cylinders.size(); ++c) {
      if (!cs.cylinders[c].mapping_torus)
        throw Error("split_to_bad: component is not a cylinder: " + cs.cylinders[c].failure);
      if (classify_cylinder(cs, static_cast<int>(c)).verdict == CylinderVerdict::Bad)
        allgood = false;
    }
    if (!allgood || cu >= 0) {
      if (cu >= 0 && allgood) {
        // chi(Gamma_U) = 0 components must already contain a bad cylinder
        throw Error("split_to_bad: chi = 0 component with all cylinders good");
      }
      out.components.push_back(std::move(y));
      out.trackers.push_back(std::move(ty));
      continue;
    }
    SplittingSearch ss = find_splitting_vertex(y);
    if (!ss.found) throw Error("split_to_bad: " + ss.error);
    long long before = relative_weight(y, ss.found->v);
    SplitResult sr = split(y, *ss.found, &ty);
    if (!sr.made_weight0 && sr.new_relative_weight >= before)
      throw Error("split_to_bad: split did not decrease the relative weight");
    out.trace.push_back({"split", ss.found->v, {sr.chosen_j}, ss.found->outgoing,
                         sr.made_weight0
                             ? "weight-0 edge"
                             : "relative weight " + std::to_string(before) + " -> " +
                                   std::to_string(sr.new_relative_weight)});
    out.splits_performed++;
    queue.push_back({std::move(sr.gos), std::move(ty)});
  }
  return out;
}

}  // namespace foldspace
