#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "foldspace/gos.hpp"

namespace foldspace {

// A square of a graph of spaces is an edge-graph edge over an underlying
// edge; its two ends are the incidence images, and each vertex-graph edge
// is the end of exactly two squares.  Annuli are the closed chains of
// squares glued along shared ends; a chain that closes up with reversed
// orientation is a Moebius band.
struct AnnulusTrace {
  struct Step {
    int ue;             // underlying unoriented edge
    int eg_oedge;       // oriented edge-graph edge (the traversal orientation)
    int exit_oriented;  // 2*ue (tau side) or 2*ue+1 (iota side)
  };
  std::vector<Step> walk;  // length = squares for an annulus, 2x for a Moebius band
  bool moebius = false;
  int nsquares = 0;
  // boundary circuits as cyclic sequences of oriented horizontal edges
  // (2*h or 2*h+1 in the horizontal graph); two for an annulus, one for a
  // Moebius band (left rails first, then for annuli the right rails)
  std::vector<std::vector<int>> circuits;
};

struct AnnulusSet {
  Horizontal h;
  std::vector<AnnulusTrace> annuli;
  int total_squares = 0;
};
AnnulusSet trace_annuli(const Gos& x);

// Elements of S(X): canonical indivisible unoriented circuits in Gamma(X).
struct SCircle {
  std::vector<int> root;  // oriented h-edges, canonical form, length = period
  int gamma_component = -1;
  bool essential_full = false;  // component of Gamma(X) is not a circle
  bool essential_irr = false;   // still essential after dropping weight-0 edges
  std::vector<int> pos_vertex;  // per position: global h-vertex (start of root[j])
};

// A transverse fiber of a cylinder: over a u-vertex its nodes are circle
// positions, over a u-edge its nodes are circle edges.
struct CylinderFiber {
  bool over_vertex = true;
  int over = -1;  // u-vertex id or unoriented u-edge id
  Graph g;
  std::vector<std::pair<int, int>> node;  // (local circle index, position/edge index)
  std::vector<int> node_image;            // vg-vertex or eg-vertex id in X
  std::vector<int> edge_image;            // per unoriented fiber edge: vg/eg edge id in X
};

struct CylinderEdgeMaps {
  int tau_fiber = -1, iota_fiber = -1;  // indices into Cylinder::fibers
  GraphMap tau, iota;                   // fiber graph -> vertex fiber graph
};

struct Cylinder {
  std::vector<int> circles;  // global circle ids (ordered)
  std::vector<int> annuli;
  std::vector<CylinderFiber> fibers;      // vertex fibers first, then edge fibers
  int n_vertex_fibers = 0;
  std::vector<CylinderEdgeMaps> emaps;    // per edge fiber (fibers[n_vertex_fibers + i])
  bool mapping_torus = false;             // underlying graph is a circle, isos everywhere
  std::vector<int> cycle;                 // when mapping_torus: alternating fiber indices
                                          // e0 v0 e1 v1 ... around the circle
  std::vector<int> cycle_side;            // per cycle edge fiber: the em side (0 tau, 1 iota)
                                          // leading to the vertex fiber that follows it
  std::string failure;                    // why mapping_torus is false
};

struct CylinderSet {
  Horizontal h;
  AnnulusSet annuli;
  std::vector<SCircle> circles;
  std::vector<std::vector<int>> circuit_circle;   // [annulus][side] -> circle id
  std::vector<std::vector<int>> circuit_winding;  // [annulus][side] -> winding number
  std::vector<Cylinder> cylinders;
};
CylinderSet build_cylinders(const Gos& x);

struct IrreducibleComponents {
  std::vector<Gos> components;
  std::vector<std::vector<int>> vmap_to_x;  // per comp: comp u-vertex -> x u-vertex
  std::vector<std::vector<int>> emap_to_x;  // per comp: comp u-edge -> x u-edge
  std::vector<int> x_vertex_comp;           // -1 for dropped point vertices
  std::vector<int> x_edge_comp;             // -1 for weight-0 edges
};
IrreducibleComponents irreducible_components(const Gos& x);

enum class CylinderVerdict { Good, Bad };
struct CylinderClassification {
  CylinderVerdict verdict;         // per the essential boundary of the
                                   // irreducible component (drives the pipeline)
  int min_essential_meet = 0;      // min over transverse fibers of |F cap ess boundary|
  CylinderVerdict verdict_ambient; // against the boundary essential in the ambient space
  int min_ambient_meet = 0;
};
CylinderClassification classify_cylinder(const CylinderSet& cs, int cyl);

bool transverse_tree_check(const Gos& x);

// Lemma-level checks for irreducible separable spaces: every transverse
// fiber embeds under psi_C, and nonzero-weight spaces are unions of fiber
// images.  Throws on violation.
void check_separating_subgraphs(const Gos& x, const CylinderSet& cs);

std::string squares_to_dot(const Gos& x, const AnnulusSet& as);

}  // namespace foldspace
