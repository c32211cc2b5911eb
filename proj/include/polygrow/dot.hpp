#pragma once

#include <string>

#include "polygrow/forest.hpp"
#include "polygrow/pebble.hpp"
#include "polygrow/skeleton.hpp"

namespace polygrow {

/// DOT digraphs with node ids n0, n1, ... in storage order.
std::string tree_dot(const FactorizationTree& t, const Alphabet& sigma);
/// Elided sibling gaps are dotted edges between the retained neighbours.
std::string skeleton_dot(const Skeleton& s, const Alphabet& sigma);
/// Configurations hang below a virtual root r.
std::string config_tree_dot(const PebbleMachine& m, const RunTrace& trace);

}  // namespace polygrow
