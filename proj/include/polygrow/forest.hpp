#pragma once

#include <string>
#include <vector>

#include "polygrow/semigroup.hpp"

namespace polygrow {

struct FftNode {
  bool leaf = false;
  Letter letter = 0;   // leaves only
  Element value = 0;   // h of the subtree's yield; the label of inner nodes
  int parent = -1;
  int index_in_parent = 0;
  std::vector<int> children;
  int first = 0;       // 1-based yield positions covered by the subtree
  int last = 0;
  int height = 0;
};

/// Sibling-ordered tree whose leaves spell a nonempty word. Nodes are added
/// bottom-up (children before parents) and the last added node is the root.
class FactorizationTree {
 public:
  int add_leaf(Letter letter, Element value);
  int add_inner(Element label, std::vector<int> children);

  int root() const noexcept { return static_cast<int>(nodes_.size()) - 1; }
  int size() const noexcept { return static_cast<int>(nodes_.size()); }
  const FftNode& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  const std::vector<FftNode>& nodes() const noexcept { return nodes_; }
  int height() const { return node(root()).height; }
  int length() const { return node(root()).last; }
  Word yield() const;
  /// Leaf node at a 1-based position.
  int leaf_at(int position) const { return leaves_.at(static_cast<std::size_t>(position - 1)); }

  bool is_leftmost(int id) const { return node(id).parent < 0 || node(id).index_in_parent == 0; }
  bool is_rightmost(int id) const;

  /// Overwrites a label without touching anything else (fault injection).
  void relabel(int id, Element value) { nodes_.at(static_cast<std::size_t>(id)).value = value; }

  /// Deterministic preorder text form.
  std::string serialize() const;

 private:
  std::vector<FftNode> nodes_;
  std::vector<int> leaves_;
};

/// Minimum-height factorization tree, built by dynamic programming over
/// intervals. The height never exceeds 3|S| - 1. Ties are broken
/// deterministically: wide idempotent nodes are preferred, their children are
/// the leftmost-shortest pieces, and binary splits are leftmost.
FactorizationTree build_fft(const Recognizer& r, const Word& w);

struct FftViolation {
  enum class Rule { YieldMismatch, LabelMismatch, Arity, NonIdempotentWide, WideChildMismatch, HeightOverflow };
  int node = -1;
  Rule rule;
  std::string message;
};
std::string to_string(FftViolation::Rule rule);

int height_bound(const Recognizer& r);

std::vector<FftViolation> validate_fft(const Recognizer& r, const Word& w, const FactorizationTree& t);

/// h of yield[i..j] (1-based, inclusive), read off the tree.
Element infix_value(const Recognizer& r, const FactorizationTree& t, int i, int j);

}  // namespace polygrow
