#pragma once

#include <optional>
#include <string>
#include <vector>

#include "foldspace/words.hpp"

namespace foldspace {

// A graph is a vertex set plus oriented edges closed under the bar
// involution.  Oriented edge o pairs with o^1; unoriented edge k carries
// the orientations 2k and 2k+1.  tau(o) is stored, iota(o) = tau(o^1).
struct Graph {
  int nv = 0;
  std::vector<int> etarget;  // size 2 * edge count

  int ne() const { return static_cast<int>(etarget.size()) / 2; }
  int noriented() const { return static_cast<int>(etarget.size()); }
  static int bar(int o) { return o ^ 1; }
  int tau(int o) const { return etarget[o]; }
  int iota(int o) const { return etarget[o ^ 1]; }
  int add_vertex() { return nv++; }
  int add_edge(int from, int to) {  // returns unoriented id
    etarget.push_back(to);
    etarget.push_back(from);
    return ne() - 1;
  }
  bool operator==(const Graph&) const = default;

  std::vector<std::vector<int>> incidence() const;  // per vertex: oriented o with tau(o)=v
  std::vector<int> degrees() const;
  std::vector<int> components(int* count = nullptr) const;  // per-vertex component id
  bool connected() const;
  bool is_circle() const;  // nonempty, connected, every vertex valence 2
  bool is_tree() const;
};

// chi = #V - #unoriented edges per component; betti = 1 - chi.
struct Pi1Data {
  int components = 0;
  std::vector<int> chi;
  std::vector<int> betti;
  int total_chi = 0;
};
Pi1Data pi1_data(const Graph& g);

// Combinatorial map of graphs: vertices to vertices, oriented edges to
// oriented edges, equivariant under bar and compatible with tau.
struct GraphMap {
  std::vector<int> vmap;
  std::vector<int> emap;  // oriented -> oriented

  bool valid(const Graph& dom, const Graph& cod) const;
  bool is_immersion(const Graph& dom, const Graph& cod) const;
  bool is_embedding(const Graph& dom, const Graph& cod) const;
  bool is_isomorphism(const Graph& dom, const Graph& cod) const;
};

GraphMap identity_map(const Graph& g);
GraphMap compose(const GraphMap& f, const GraphMap& g);  // apply f then g

// Graph with letter labels on oriented edges, label(bar e) = -label(e).
struct LabeledGraph {
  Graph g;
  Alphabet alphabet;
  std::vector<int> label;  // per oriented edge

  bool label_ok() const;
  bool is_immersed() const;  // no two equal labels leaving one vertex
  // at most one oriented edge with tau-side... lookup: oriented edge o with
  // iota(o) = v and label(o) = letter, or -1
  int step(int v, int letter) const;
};

LabeledGraph rose(const Alphabet& a);

// Stallings fold of the wedge of subdivided word loops; returns the based
// core immersion for the subgroup generated by the given words.
struct FoldedSubgroup {
  LabeledGraph core;
  int base = 0;
};
FoldedSubgroup stallings_fold(const Alphabet& a, const std::vector<Letters>& generators);
LabeledGraph fold_labeled(const LabeledGraph& in, int base, int* base_out);

bool member(const FoldedSubgroup& h, const Letters& w);
bool subgroup_is_whole(const FoldedSubgroup& h);

// All closed immersed circuits in an immersed labeled graph spelling the
// cyclic word, up to rotation (each orientation reported separately unless
// it coincides with a rotation of the other).
struct Circuit {
  std::vector<int> oedges;  // oriented edge ids, cyclic
};
std::vector<Circuit> circle_immersion(const CyclicWord& c, const LabeledGraph& target);

// Immersed circuit through based path-tracing of a subgroup element:
// the unique lift of the cyclic reduction of w starting anywhere on the
// based lift path.  Returns the circuit spelling cyc(w) in the core.
std::optional<Circuit> trace_circuit(const FoldedSubgroup& h, const Letters& w);

// Schreier basis data for a folded based core: spanning tree, one basis
// element per non-tree unoriented edge, rewriting of subgroup words.
struct SchreierBasis {
  FoldedSubgroup graph;
  std::vector<int> tree_parent_edge;  // per vertex: oriented edge toward parent (-1 at base)
  std::vector<int> basis_of_edge;     // per unoriented edge: basis index or -1 (tree edge)
  std::vector<int> basis_edge;        // per basis index: oriented edge id (canonical direction)
  int rank() const { return static_cast<int>(basis_edge.size()); }

  // Letters of the basis word (in F_n) for basis index i.
  Letters basis_word(int i) const;
  // Rewrite a subgroup element (word in F_n) over the basis; throws if the
  // word does not lie in the subgroup.
  Letters rewrite(const Letters& w) const;
  // Rewrite a closed edge path given by oriented edges based anywhere.
  Letters rewrite_path(const std::vector<int>& oedges) const;
};
SchreierBasis schreier_basis(const FoldedSubgroup& h);

std::string graph_to_dot(const Graph& g, const std::string& name);
std::string labeled_to_dot(const LabeledGraph& g, const std::string& name);

}  // namespace foldspace
