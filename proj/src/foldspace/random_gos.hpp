#pragma once

#include <cstdint>

#include "foldspace/construct.hpp"
#include "foldspace/gos.hpp"

namespace foldspace {

struct RandomGosParams {
  int max_underlying_edges = 8;
  int max_vertex_graph_edges = 12;
};

// Deterministic valid-by-construction random 2-covered graph of spaces:
// random folded cores as the horizontal graph, random immersed circuits
// paired into vertical annuli, assembled by the track construction.
Gos gen_random_gos(uint64_t seed, const RandomGosParams& params = {});

// Adjoin-root data with a primitive-orbit gamma: a random automorphic image
// of the first basis letter, exponent k, and the maximal-corank witness
// homomorphism (a -> a_1^k twist composed with the inverse automorphism).
struct PrimitiveAdjoinRoot {
  AdjoinRootData data;
  std::vector<Letters> base_images;
  std::vector<Letters> root_images;
};
PrimitiveAdjoinRoot random_primitive_adjoin_root(uint64_t seed, int rank, int k);

}  // namespace foldspace
