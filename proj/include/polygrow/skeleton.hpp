#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polygrow/forest.hpp"

namespace polygrow {

struct SkeletonNode {
  int tree_node = -1;  // id in the original tree; not part of the key
  int parent = -1;
  bool leaf = false;
  Letter letter = 0;
  Element label = 0;
  bool is_leftmost = false;
  bool is_rightmost = false;
  std::vector<int> children;  // retained children, in order
  /// linked[k]: children[k] and children[k + 1] were consecutive siblings.
  std::vector<char> linked;
  VarMask vars = 0;           // variables pointing at this leaf
};

/// The closure of the distinguished leaves (plus the root) under parents,
/// leftmost siblings and rightmost siblings. Nodes are stored in preorder,
/// so node 0 is the root.
struct Skeleton {
  std::vector<SkeletonNode> nodes;
  std::vector<std::string> variables;
  /// distinguished[v]: node index of the leaf variable v points to.
  std::vector<int> distinguished;
  int tree_height = 0;

  /// Preorder serialization of labels, flags, linkage and variable placement.
  std::string key() const;
  std::vector<int> captured(int node) const;
};

Skeleton skeleton(const FactorizationTree& t, const Assignment& positions, const std::vector<std::string>& variables = {});
Skeleton skeleton(const Recognizer& r, const Word& w, const Assignment& positions);

/// Profile reconstructed from the skeleton alone.
Profile skeleton_profile(const Recognizer& r, const Skeleton& s);
bool eval_via_skeleton(const Recognizer& r, const Skeleton& s);

struct Segment {
  int parent = -1;
  std::vector<int> interval;  // retained siblings forming the movable interval
  std::vector<int> members;   // interval plus retained descendants, sorted
  Element idempotent = 0;
  bool uniform_label = true;  // every interval node carries `idempotent`
  VarMask captured = 0;
};

struct SegmentAnalysis {
  std::vector<Segment> all;
  std::vector<int> minimal;  // indices into `all`
};

SegmentAnalysis segments(const Skeleton& s);
/// Variable indices, one per minimal segment (the smallest captured one), sorted.
std::vector<int> seed(const Skeleton& s);
std::vector<int> seed(const Skeleton& s, const SegmentAnalysis& seg);

/// Instruction path proving that a variable is determined by the seed.
struct SpanStep {
  enum class Move { Parent, PrevLinked, NextLinked, LeftmostChild, RightmostChild };
  Move move;
  int node = -1;  // node reached
};
std::string to_string(SpanStep::Move m);

struct SpanPath {
  int variable = -1;
  int source_variable = -1;  // -1 when the path starts at the root
  std::vector<SpanStep> steps;
};

struct SpanCertificate {
  std::vector<SpanPath> paths;  // one per non-seed variable that is reachable
  std::vector<int> unreached;   // non-seed variables without a path
  bool complete() const { return unreached.empty(); }
};
SpanCertificate span_certificate(const Skeleton& s, const std::vector<int>& seed_vars);

/// Completes a partial assignment (0 = unassigned) to the unique full
/// assignment that is accepted and whose skeleton has the given key.
/// More than one completion raises SeedUniquenessViolation.
std::optional<Assignment> seed_extension(const Recognizer& r, const Word& w, const FactorizationTree& t,
                                         const std::string& key, const Assignment& partial);
std::optional<Assignment> seed_extension(const Recognizer& r, const Word& w, const std::string& key,
                                         const Assignment& partial);

struct DependencyGraph {
  std::vector<std::vector<int>> edges;  // adjacency, node -> successors
  std::vector<int> component;           // SCC id per node
  int num_components = 0;
  std::vector<int> minimal;             // SCC ids without incoming edges from other SCCs
  /// Smallest variable in each minimal SCC, sorted; SCCs without variables contribute nothing.
  std::vector<int> seed;
};
DependencyGraph dependency_graph(const Skeleton& s);

}  // namespace polygrow
