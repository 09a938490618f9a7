#pragma once

// Hand-built graph-of-spaces instances shared across the test suites.

#include "foldspace/gos.hpp"

namespace foldspace::instances {

inline Graph point_graph() {
  Graph g;
  g.add_vertex();
  return g;
}

inline Graph loop_graph() {  // R1: one vertex, one loop
  Graph g;
  g.add_vertex();
  g.add_edge(0, 0);
  return g;
}

inline Graph circle_graph(int n) {  // n vertices, n edges
  Graph g;
  for (int i = 0; i < n; ++i) g.add_vertex();
  for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  return g;
}

inline Graph path_graph(int edges) {
  Graph g;
  for (int i = 0; i <= edges; ++i) g.add_vertex();
  for (int i = 0; i < edges; ++i) g.add_edge(i, i + 1);
  return g;
}

// Mapping torus of a graph automorphism: underlying = single loop,
// V = E = f's domain, tau side identity, iota side f.
inline Gos mapping_torus(const Graph& fiber, const GraphMap& f) {
  Gos x;
  x.u.add_vertex();
  x.u.add_edge(0, 0);
  x.vg = {fiber};
  x.eg = {fiber};
  x.inc = {identity_map(fiber), f};
  return x;
}

inline Gos identity_torus() { return mapping_torus(loop_graph(), identity_map(loop_graph())); }

// Subdivided identity torus: underlying circle with n vertices, all spaces
// R1, all incidences the identity.
inline Gos subdivided_identity_torus(int n) {
  Gos x;
  x.u = circle_graph(n);
  Graph r1 = loop_graph();
  for (int i = 0; i < n; ++i) x.vg.push_back(r1);
  for (int i = 0; i < n; ++i) {
    x.eg.push_back(r1);
    x.inc.push_back(identity_map(r1));
    x.inc.push_back(identity_map(r1));
  }
  return x;
}

// Point circle: underlying circle, V = E = point.
inline Gos point_circle(int n) {
  Gos x;
  x.u = circle_graph(n);
  Graph pt = point_graph();
  for (int i = 0; i < n; ++i) x.vg.push_back(pt);
  for (int i = 0; i < n; ++i) {
    x.eg.push_back(pt);
    GraphMap m;
    m.vmap = {0};
    x.inc.push_back(m);
    x.inc.push_back(m);
  }
  return x;
}

// Mapping torus of the midpoint reflection of the 2-vertex circle: the
// flip automorphism a -> a^-1.  One Moebius band.
inline Gos flip_torus() {
  Graph c2 = circle_graph(2);
  GraphMap f;
  f.vmap = {1, 0};
  f.emap = {1, 0, 3, 2};
  return mapping_torus(c2, f);
}

// Mapping torus of the rotation of the 2-vertex circle.
inline Gos rotation_torus() {
  Graph c2 = circle_graph(2);
  GraphMap f;
  f.vmap = {1, 0};
  f.emap = {2, 3, 0, 1};
  return mapping_torus(c2, f);
}

// Theta-shaped underlying graph with both vertex graphs equal to `fiber`
// and symmetric incidences given per edge.
inline Gos theta_double(const Graph& fiber, const std::vector<Graph>& egs,
                        const std::vector<GraphMap>& maps) {
  Gos x;
  x.u.add_vertex();
  x.u.add_vertex();
  x.vg = {fiber, fiber};
  for (size_t i = 0; i < egs.size(); ++i) {
    x.u.add_edge(0, 1);
    x.eg.push_back(egs[i]);
    x.inc.push_back(maps[i]);
    x.inc.push_back(maps[i]);
  }
  return x;
}

// All vertex/edge graphs points over a theta underlying graph; the basic
// trivial separable space.
inline Gos theta_points() {
  Graph pt = point_graph();
  GraphMap m;
  m.vmap = {0};
  return theta_double(pt, {pt, pt, pt}, {m, m, m});
}

// Splittable pattern: V = L v_w R (path a-w-b), E1 = L, E2 = R, E3 = V.
inline Gos theta_splittable() {
  Graph v = path_graph(2);  // vertices 0(w=1)2, edges 0:0-1, 1:1-2
  Graph seg = path_graph(1);
  GraphMap mL;  // seg -> edge 0
  mL.vmap = {0, 1};
  mL.emap = {0, 1};
  GraphMap mR;  // seg -> edge 1
  mR.vmap = {1, 2};
  mR.emap = {2, 3};
  GraphMap mV = identity_map(v);
  return theta_double(v, {seg, seg, v}, {mL, mR, mV});
}

// Unsplittable tripod pattern: V = tripod with center w, E_i = the union
// of two of the three legs.
inline Gos theta_tripod() {
  Graph v;  // center 0, leaves 1,2,3; edge i-1 = 0 - i
  v.add_vertex();
  for (int i = 1; i <= 3; ++i) {
    v.add_vertex();
    v.add_edge(0, i);
  }
  Graph e = path_graph(2);  // legs j, k through the center
  auto leg_pair = [&](int j, int k) {
    GraphMap m;
    m.vmap = {j + 1, 0, k + 1};  // path vertices: leaf_j, center, leaf_k
    m.emap.assign(4, -1);
    // path edge 0 (0-1) -> leg j reversed (leaf->center); edge 1 (1-2) -> leg k
    m.emap[0] = 2 * j + 1;
    m.emap[1] = 2 * j;
    m.emap[2] = 2 * k;
    m.emap[3] = 2 * k + 1;
    return m;
  };
  return theta_double(v, {e, e, e}, {leg_pair(1, 2), leg_pair(2, 0), leg_pair(0, 1)});
}

// The valence-four space that minimization folds to a theta: one
// underlying vertex with two loops; V a 2-edge path u0-r-u1, E_a a 2-edge
// path, E_b a point at u0.
inline Gos valence_four_space() {
  Gos x;
  x.u.add_vertex();
  x.u.add_edge(0, 0);  // edge 0: "a"
  x.u.add_edge(0, 0);  // edge 1: "b"
  Graph v = path_graph(2);  // 0=u0, 1=r, 2=u1; edges t0=0-1, t1=1-2
  Graph ea = path_graph(2);  // 0=h0, 1=s, 2=h1... vertices h0, sigma, h1
  Graph pt = point_graph();
  x.vg = {v};
  x.eg = {ea, pt};
  GraphMap tau_a;  // h0->u1, sigma->r, h1->u0 ; s0 -> t1, s1 -> t0
  tau_a.vmap = {2, 1, 0};
  tau_a.emap = {3, 2, 1, 0};
  GraphMap iota_a;  // h0->u0, sigma->r, h1->u1 ; s0 -> t0, s1 -> t1
  iota_a.vmap = {0, 1, 2};
  iota_a.emap = {0, 1, 2, 3};
  GraphMap mb;
  mb.vmap = {0};
  x.inc = {tau_a, iota_a, mb, mb};
  return x;
}

}  // namespace foldspace::instances
