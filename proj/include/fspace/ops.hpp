#pragma once
// One entry point per workbench operation, shared by the CLI and the HTTP
// service. Arguments and results are canonical JSON; sets, maps and boxes may
// also be given as text expressions.
//
//   pofin.eval      {expr}                -> set
//   pofin.canon     {set}                 -> {text}
//   pofin.rel       {a, b}                -> {subset, superset, equal, disjoint}
//   map.apply       {map, n}              -> {value}
//   map.image       {map, set}            -> set
//   map.compose     {f, g}                -> map  (f after g)
//   map.classify    {map}                 -> {injective, finite_to_one}
//   box.normal      {box}                 -> box
//   box.empty       {box}                 -> {empty, offending | witness}
//   box.member      {map, box}            -> {member}
//   box.refine      {box, extra}          -> {box, cert}
//   scheme.validate {tree}                -> {violations}
//   scheme.repair   {tree}                -> tree
//   scheme.build    {tree, horizon?}      -> {prefix}
//   scheme.verify   {tree, prefix?, horizon?} -> {ok}
//   game.replay     {log}                 -> {state, witness}
//   demo            {}                    -> report

#include <string>
#include <vector>

#include "fspace/choquet.hpp"
#include "fspace/json.hpp"

namespace fspace::ops {

/// Throws fspace::Error on domain errors and Errc::not_found for unknown ops.
Json run(const std::string& op, const Json& args);

/// Every op name accepted by run.
const std::vector<std::string>& names();

/// Plain-text rendering of a result of `op`.
std::string render_text(const std::string& op, const Json& result);

// --- session logs ----------------------------------------------------------
// One JSON object per move: {"op":"new","mode":..}, {"op":"E","extra":box,
// "point":map?}, {"op":"NE"}, {"op":"abandon"}.

GameState replay(const std::vector<Json>& log);
/// Applies one log entry to a state (ignored for "new").
GameState apply_entry(const GameState& state, const Json& entry);
std::vector<Json> read_log(const std::string& jsonl);

/// Log entries for one move request: {extra, point?, reply?} is E's move
/// followed by NE's reply unless reply is false; {"player":"NE"} is NE alone;
/// {"abandon":true} ends play. Boxes and maps are stored in canonical JSON.
std::vector<Json> move_entries(const Json& body);

Json demo_report();

}  // namespace fspace::ops
