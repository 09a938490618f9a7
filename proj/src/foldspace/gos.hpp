#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "foldspace/graph.hpp"

namespace foldspace {

// 2-covered graph of spaces: underlying graph, connected vertex graphs,
// connected edge graphs (one per unoriented edge, so E_ebar = E_e by
// construction), and an immersion per oriented edge into the target
// vertex graph.  Every vertex-graph edge is covered by exactly two
// edge-graph edges across the incident immersions.
struct Gos {
  Graph u;
  std::vector<Graph> vg;       // per u-vertex
  std::vector<Graph> eg;       // per unoriented u-edge
  std::vector<GraphMap> inc;   // per oriented u-edge o: eg[o/2] -> vg[u.tau(o)]

  int weight(int ue) const { return eg[ue].ne(); }
  std::vector<std::vector<int>> u_incidence() const { return u.incidence(); }
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> issues;
  void fail(std::string s) {
    ok = false;
    issues.push_back(std::move(s));
  }
};
ValidationReport validate(const Gos& x);
void require_valid(const Gos& x, const char* where);

// Horizontal subgraph Gamma(X): one vertex per vertex-graph vertex, one
// edge per (unoriented u-edge, edge-graph vertex), joining the two
// incidence images.  Oriented 2k runs from the iota-side image to the
// tau-side image.
struct Horizontal {
  Graph g;
  std::vector<std::pair<int, int>> vof;   // global h-vertex -> (u-vertex, local)
  std::vector<std::vector<int>> vindex;   // [u-vertex][local] -> global
  std::vector<std::pair<int, int>> eof;   // h-edge -> (u-edge, eg-vertex)
  std::vector<std::vector<int>> eindex;   // [u-edge][eg-vertex] -> h-edge
  std::vector<int> comp;                  // per h-vertex component id
  int ncomp = 0;
  std::vector<bool> circle;               // per component: homeomorphic to S^1
};
Horizontal horizontal(const Gos& x);

std::pair<int, int> chi_pair(const Gos& x);  // (chi(Gamma), chi(Gamma_U))

// Tracks the identification of the current horizontal graph with the
// horizontal graph of the space the move sequence started from.  Folds
// and collapses are homotopy equivalences on Gamma; the tracker records,
// for each current h-vertex, a base vertex, and for each current h-edge,
// a base edge path (signed h-edge ids of the base graph; +(k+1) traverses
// base edge k from its iota side to its tau side).
struct GammaTracker {
  Horizontal base;
  std::vector<std::vector<int>> vbase;              // [u-vertex][local] -> base h-vertex
  std::vector<std::vector<std::vector<int>>> hpath; // [u-edge][eg-vertex] -> base path

  static GammaTracker start(const Gos& x);
  // Base path of a closed circuit of oriented current h-edges.
  std::vector<int> circuit_to_base(const Gos& x, const std::vector<int>& oriented_hedges,
                                   const Horizontal& h) const;
};

std::vector<int> reduce_signed_path(std::vector<int> p);

// Moves.  Each returns the new space and updates the tracker when given.
struct CollapseResult {
  Gos gos;
  std::vector<int> uvmap;  // old u-vertex -> new
  std::vector<int> uemap;  // old unoriented u-edge -> new (-1 for the collapsed edge)
};
CollapseResult collapse(const Gos& x, int oriented_edge, GammaTracker* t);

// Collapse a set of edges simultaneously (the joint quotient).  Each edge
// must have at least one embedded incidence; the crushed horizontal edges
// must form a forest (as they do for the edges introduced by a fold).
CollapseResult collapse_set(const Gos& x, const std::vector<int>& unoriented_edges,
                            GammaTracker* t);

struct FoldResult {
  Gos gos;
  std::vector<int> uvmap_other;   // old u-vertex != v -> new id
  std::vector<int> uemap;         // old unoriented edge -> new id
  std::vector<int> new_edges;     // ids of the e_{J,r}
  std::vector<int> j_side_vertices;      // new ids of the V_J components
  std::vector<int> other_side_vertices;  // new ids of the V_{I\J} components
};
FoldResult fold(const Gos& x, int v, const std::vector<int>& J, GammaTracker* t);

struct ReduceStep {
  enum class Kind { TrimLeaf, Unsubdivide } kind;
  int oriented_edge;
};
struct ReduceResult {
  Gos gos;
  std::vector<ReduceStep> steps;
};
bool find_reduce_move(const Gos& x, ReduceStep* out);
ReduceResult reduce(const Gos& x, GammaTracker* t);
bool is_reduced(const Gos& x);

// Vertex classification per the structure of unfoldable vertices.
struct VertexClass {
  enum class Kind {
    Foldable,
    UnfoldableDegenerate,
    UnfoldableNondegenerate,
    ReducibleCircle,  // valence two, both incidences isomorphisms
    Other,
  } kind = Kind::Other;
  int distinguished_edge = -1;  // oriented, for the degenerate case
  std::optional<std::vector<int>> witness_J;  // for Foldable: a violating J (size <= 2)
};
VertexClass classify_vertex(const Gos& x, int v);

// Lexicographic complexity (-betti(U), k, m_k..m_3, m_2^red, -m_2^deg).
struct Complexity {
  int minus_betti = 0;
  int k = 0;
  std::vector<int> m;  // m_k .. m_3 (empty when k == 2)
  int m2_red = 0;
  int m2_deg = 0;

  std::vector<long long> key() const;
  bool operator<(const Complexity& o) const { return key() < o.key(); }
  bool operator==(const Complexity& o) const { return key() == o.key(); }
  std::string str() const;
};
Complexity complexity(const Gos& x);  // throws if not reduced

struct Move {
  std::string kind;  // "collapse" | "fold" | ...
  int vertex = -1;
  std::vector<int> J;
  int oriented_edge = -1;
  std::string note;
};
struct MinimizeResult {
  Gos gos;
  std::vector<Move> trace;
};
MinimizeResult minimize(const Gos& x, GammaTracker* t);

// Separability: requires a minimized space with chi equality.
struct SeparableVertex {
  enum class Kind { Trivial, Splittable, Unsplittable } kind;
  int triple_point = -1;          // local vertex of vg[v]
  int outgoing_edge = -1;         // oriented, for splittable vertices
  std::array<int, 2> incoming{-1, -1};
};
struct SeparabilityResult {
  bool separable = false;
  std::string reason;  // when not separable
  std::vector<SeparableVertex> vertices;
};
SeparabilityResult separability(const Gos& x);

// A space that is itself a cylinder: connected circle underlying graph with
// every incidence an isomorphism (a mapping torus).
bool is_cylinder_space(const Gos& x);

// Exact isomorphism of graphs of spaces, and an isomorphism-invariant
// canonical key (refined invariants; equal keys are certified by an
// explicit isomorphism search).
bool gos_isomorphic(const Gos& a, const Gos& b);
std::string gos_invariant_key(const Gos& x);

std::string gos_to_dot_underlying(const Gos& x);
std::string gos_to_dot_horizontal(const Gos& x);
std::string gos_to_dot_vertex_graph(const Gos& x, int v);

Gos disjoint_union(const std::vector<Gos>& parts);

}  // namespace foldspace
