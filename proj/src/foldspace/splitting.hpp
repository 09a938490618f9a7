#pragma once

#include <optional>
#include <string>
#include <vector>

#include "foldspace/cylinders.hpp"
#include "foldspace/gos.hpp"

namespace foldspace {

// A peripheral element of an edge space E: a cylinder edge fiber whose
// image lies in E together with a boundary vertex w in Gamma_inf(X) cap E
// contained in no other member of F(E).
struct PeripheralElement {
  int cylinder = -1;
  int fiber = -1;      // index into cylinders[cylinder].fibers (an edge fiber)
  int node = -1;       // fiber node mapping to w
  int edge_space = -1; // unoriented u-edge
  int w = -1;          // eg-vertex of the edge space
};
std::vector<PeripheralElement> peripheral_elements(const Gos& x, const CylinderSet& cs, int ue);

// Horizontal transport of a transverse fiber along the underlying circle
// of its cylinder, realized by the rotation action.
struct PushTrace {
  std::vector<int> path;   // oriented u-edges traversed in Gamma_U(X)
  int fiber = -1;          // final edge fiber (cycle position)
  int node = -1;           // transported node
  int vertex_space = -1;   // when the push ends on a vertex fiber
  int vertex_node = -1;
  int vg_vertex = -1;      // image of the transported point
};
PushTrace push(const Gos& x, const CylinderSet& cs, const PeripheralElement& start, int steps,
               bool forward);

struct SplittingVertex {
  int v = -1;                // the splittable vertex
  int outgoing = -1;         // oriented edge with tau = v and E iso V
  int primary_incoming = -1; // oriented edge with tau = v carrying the witness
  PeripheralElement witness;
  int push_steps = 0;
};

struct SplittingSearch {
  std::optional<SplittingVertex> found;
  std::string error;  // set when a precondition fails
};
SplittingSearch find_splitting_vertex(const Gos& x);

long long relative_weight(const Gos& x, int v);  // sum of other vertex weights

struct SplitResult {
  Gos gos;            // the chosen nontrivial fold of the collapse
  int chosen_j = -1;  // which candidate pair was used (0..3)
  bool made_weight0 = false;
  long long old_relative_weight = 0;
  long long new_relative_weight = -1;  // of the new splitting vertex, when present
};
SplitResult split(const Gos& x, const SplittingVertex& sv, GammaTracker* t);

struct SplitToBadResult {
  std::vector<Gos> components;           // final irreducible components
  std::vector<GammaTracker> trackers;    // tracker per component (based at the input)
  std::vector<Move> trace;
  int splits_performed = 0;
};
SplitToBadResult split_to_bad(const Gos& x, const GammaTracker* t0);

}  // namespace foldspace
