#pragma once

#include <optional>
#include <string>
#include <vector>

#include "foldspace/graph.hpp"

namespace foldspace {

// Union of trees: tree vertex spaces with distinguished boundary leaves and
// rectangles attached along reduced boundary-to-boundary edge paths.  Paths
// may turn back only at Y-marked vertices (the stand-ins for attached
// aspherical pieces).  Half-integer quantities are returned doubled.
struct UotTree {
  Graph g;
  std::vector<int> boundary;  // boundary leaves
  std::vector<int> y_marks;   // Y-marked vertices
};

struct UotPath {
  int tree = 0;
  std::vector<int> vertices;  // length = edge count + 1
};

struct UotRect {
  UotPath side0, side1;  // corners pair front-front and back-back
};

struct UnionOfTrees {
  std::vector<UotTree> trees;
  std::vector<UotRect> rects;
};

struct UotValidation {
  bool ok = true;
  std::vector<std::string> issues;
};
UotValidation validate_uot(const UnionOfTrees& z);

enum class ZClass { Z1, Z2, Z3 };

struct Deltas {
  ZClass cls = ZClass::Z1;
  int q_minus2 = 0;  // 2 * Delta_q^-
  int q_plus2 = 0;   // 2 * Delta_q^+
  int p_minus = 0;
  int p_plus = 0;
  int boundary_components_T = 0;     // of Z_T
  int boundary_components_all = 0;   // of Z (collars crushed)
  int boundary_betti_T = 0;
  bool tree_independent = true;      // sampled over alternative maximal trees
};
Deltas deltas(const UnionOfTrees& z);

int kappa2_tree(const UotTree& s);                        // #boundary - 2
int kappa2_graph(const Graph& g, int boundary_count);     // -2 chi + #boundary

struct KappaBalance {
  int lhs2 = 0;  // kappa(Zbar) - sum kappa(S), doubled
  int rhs2 = 0;  // Delta_q^+ - Delta_q^-, doubled
  bool holds = false;
  bool z3_inequality_holds = true;  // Delta_p^- >= 2 Delta_q^+ when Z3
};
KappaBalance kappa_balance(const UnionOfTrees& z);

bool is_treelike(const UnionOfTrees& z);

struct Band {
  // distinct side keys of the class (tree, vertex sequence), oriented
  // coherently with the first one
  std::vector<UotPath> sides;
  std::vector<int> rects;
};
struct ProductDecomposition {
  bool ok = false;
  std::string error;
  std::vector<Band> bands;
  bool incidence_tree = false;  // the band/tree graph is a tree
};
ProductDecomposition product_decomposition(const UnionOfTrees& z);

struct LeafSpace {
  Graph tree;                      // the quotient Gamma_Z
  std::vector<std::vector<int>> vertex_class;  // per (tree, vertex): Gamma_Z vertex
  int boundary_count = 0;          // valence-one vertices
  bool trees_embed = true;
  bool pairwise_intervals = true;
  bool boundary_bijection = true;
  bool kappa_equal = true;
  bool fibers_connected = true;
};
LeafSpace leaf_space(const UnionOfTrees& z);

// Deterministic random instance, valid by construction; rectangles have
// equal-length sides so the product structure is combinatorial.
UnionOfTrees random_uot(uint64_t seed);

}  // namespace foldspace
