#pragma once

// Canonical JSON forms. Field order is fixed and every number is an integer,
// so equal values always serialize to identical bytes.
//
//   set          {"m":4,"r":[0,2],"add":[3],"del":[8]}
//   map          {"pieces":[{"a":..,"d":..,"b":..,"e":..}],"table":[[n,v],..]}
//   box          [{"a":set,"b":set},..]
//   certificate  [m0, m1, ..]   (-1 marks a constraint outside every coarser part)
//   tree         {"levels":L,"nodes":[{"level":..,"parent":..,"c":set,"d":set}]}

#include <json.hpp>

#include "fspace/choquet.hpp"
#include "fspace/compact_open.hpp"
#include "fspace/periodic_set.hpp"
#include "fspace/progression_map.hpp"
#include "fspace/schemes.hpp"

namespace fspace {

using Json = nlohmann::ordered_json;

Json to_json(const PeriodicSet& s);
Json to_json(const ProgressionMap& f);
Json to_json(std::span<const SubbasicBox> constraints);
inline Json to_json(const BasicBox& box) { return to_json(box.constraints); }
Json to_json(const RefinementCert& cert);
Json to_json(const SchemeTree& tree);
Json to_json(const GameState& state);
Json to_json(const MoveRecord& move);
Json to_json(const Suggestion& s);

/// Inverse readers. Each also accepts the corresponding text expression as a
/// JSON string. Malformed input raises Errc::invalid_argument.
PeriodicSet set_from_json(const Json& j);
ProgressionMap map_from_json(const Json& j);
std::vector<SubbasicBox> box_from_json(const Json& j);
SchemeTree tree_from_json(const Json& j);

}  // namespace fspace
