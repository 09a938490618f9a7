#pragma once

#include <optional>
#include <string>

#include "foldspace/construct.hpp"
#include "foldspace/gos.hpp"
#include "foldspace/uot.hpp"

// vendored single-header nlohmann/json
#include <json.hpp>

namespace foldspace {

using Json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

Json graph_to_json(const Graph& g);
Graph graph_from_json(const Json& j);

Json labeled_graph_to_json(const LabeledGraph& g);

Json gos_to_json(const Gos& x);
Gos gos_from_json(const Json& j);

Json uot_to_json(const UnionOfTrees& z);
UnionOfTrees uot_from_json(const Json& j);

// Instance files.
struct Instance {
  std::string kind;  // adjoin-root | hnn-conjugacy | raw-gos | union-of-trees | presentation
  std::optional<uint64_t> seed;
  // adjoin-root
  std::optional<AdjoinRootData> adjoin;
  std::vector<Letters> base_images, root_images;
  // hnn-conjugacy (general graph of free groups)
  std::optional<GraphOfFreeGroupsData> gofg;
  // raw-gos
  std::optional<Gos> gos;
  // union-of-trees
  std::optional<UnionOfTrees> uot;
  // presentation
  std::optional<Presentation> presentation;
  int target_rank = 2;
  int max_length = 3;
};
Instance instance_from_json(const Json& j);
Json instance_to_json(const Instance& inst);

Json complexity_to_json(const Complexity& c);
Json move_to_json(const Move& m);
Json cylinder_report(const Gos& x, const CylinderSet& cs);
Json theorem_report_to_json(const TheoremReport& r);
Json corollary_report_to_json(const CorollaryReport& r);

std::string dump_sorted(const Json& j);

}  // namespace foldspace
