#pragma once

#include <optional>
#include <string>
#include <vector>

#include "foldspace/cylinders.hpp"
#include "foldspace/gos.hpp"
#include "foldspace/graph.hpp"
#include "foldspace/splitting.hpp"
#include "foldspace/words.hpp"

namespace foldspace {

// Graph of free groups over cyclic subgroups with a homomorphism to F_n.
struct GofgEdge {
  enum class Kind { Amalgam, Hnn } kind = Kind::Amalgam;
  int v0 = 0, v1 = 0;  // endpoint vertex groups (equal for HNN edges)
  Letters w0, w1;      // edge words in the endpoint groups' generators
  Letters stable_image;  // phi(t) for HNN edges (empty allowed for amalgams)
};

struct GraphOfFreeGroupsData {
  int alphabet_rank = 1;
  std::vector<int> ranks;
  std::vector<std::vector<Letters>> vertex_images;  // phi of each generator
  std::vector<GofgEdge> edges;
};

int corank_bound(const GraphOfFreeGroupsData& d);

struct AdjoinRootData {
  int base_rank = 2;
  std::vector<std::pair<Letters, int>> roots;  // (gamma_i, k_i >= 2)
};
// phi images: base generators and one word per root (phi of the root).
GraphOfFreeGroupsData adjoin_root_data_to_gofg(const AdjoinRootData& a,
                                               const std::vector<Letters>& base_images,
                                               const std::vector<Letters>& root_images);

// Vertical-annulus assembly over a disjoint union of labeled cores: the
// vertex spaces are the components of (vertices, tracks), the edge spaces
// the components of (edges of one letter, squares).
struct AnnulusSpec {
  std::vector<int> bottom, top;  // oriented H-edges, label(bottom[m]) == label(top[m])
};
struct BuiltGos {
  Gos gos;
  // identifications with the assembly input
  std::vector<int> uvertex_of_Hvertex;        // H-vertex -> u-vertex
  std::vector<int> vglocal_of_Hvertex;        // H-vertex -> local vg vertex
  std::vector<int> uedge_of_Hedge;            // H unoriented edge -> u-edge
  std::vector<int> eglocal_of_Hedge;          // H unoriented edge -> local eg vertex
};
BuiltGos assemble_tracks(const LabeledGraph& H, const std::vector<AnnulusSpec>& annuli);

struct BuildResult {
  BuiltGos built;
  LabeledGraph H;                        // disjoint union of the cores
  std::vector<int> H_comp_of_vertex;     // H-vertex -> vertex group index
  std::vector<FoldedSubgroup> cores;     // per vertex group (own numbering)
  std::vector<SchreierBasis> bases;
  std::vector<int> core_vertex_offset;   // into the H numbering
  std::vector<int> core_edge_offset;
  std::vector<std::pair<std::vector<int>, std::vector<int>>> edge_circuits;  // global, aligned
};
BuildResult build_gos(const GraphOfFreeGroupsData& d);

// Bounded brute-force witness search for corank >= n.
struct Presentation {
  int generators = 0;
  std::vector<Letters> relators;  // words over generators 1..generators
};
struct CorankWitness {
  std::vector<Letters> images;  // per generator, words in F_n
};
std::optional<CorankWitness> bounded_corank_search(const Presentation& p, int n, int max_len,
                                                   long long* tuples_tried = nullptr);

// Reports.  Claims carry the verification method used.
struct FactorClaim {
  Letters factor_generator;          // in the Schreier-basis coordinates of F
  std::vector<Letters> complement;   // basis of the complementary factor
  bool primitive_confirmed = false;  // Whitehead oracle
};

struct TheoremReport {
  bool ok = false;
  std::string error;
  bool built_edge_spaces_trees = false;
  bool minimized_edge_spaces_trees = false;
  int located_root = -1;            // which gamma_i crosses an edge once
  FactorClaim factor;
  bool input_gamma_primitive = false;  // direct Whitehead check on gamma_i
  std::vector<std::string> log;
};
TheoremReport theorem_report(const AdjoinRootData& a, const std::vector<Letters>& base_images,
                             const std::vector<Letters>& root_images);

struct CorollaryReport {
  bool ok = false;
  std::string error;
  int splits_performed = 0;
  int components = 0;
  FactorClaim factor;                 // F = F1 * <z>
  std::vector<int> gamma_placement;   // per edge word: 0 = factor Z, 1 = F1
  bool all_placed = true;
  bool f1_contains_some_gamma = false;
  std::vector<std::string> log;
};
CorollaryReport corollary_report(const GraphOfFreeGroupsData& d);

}  // namespace foldspace
