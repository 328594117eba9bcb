#pragma once

// Text front ends for sets, boxes and maps. All parsers throw SyntaxError
// carrying the byte offset of the first bad token.
//
//   set  := term (('+' | '-') term)*          union, difference
//   term := unary ('&' unary)*                intersection
//   unary:= '~' unary | atom                  complement
//   atom := r '%' m | '{' n, ... '}' | omega | empty | '(' set ')'
//
//   box  := '[' set '->' set ']' ('&' '[' set '->' set ']')*
//
//   map  := id | double | shift(c) | const(c) | item ([','] item)*
//   item := piece([set ';'] a, d -> b, e) | table{n:v, ...}

#include <string_view>
#include <vector>

#include "fspace/compact_open.hpp"
#include "fspace/periodic_set.hpp"
#include "fspace/progression_map.hpp"

namespace fspace {

PeriodicSet parse_set(std::string_view text);
std::vector<SubbasicBox> parse_box(std::string_view text);
ProgressionMap parse_map(std::string_view text);

}  // namespace fspace
